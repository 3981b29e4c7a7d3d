"""Exact incremental Gaussian elimination on sparse vectors.

Vectors are dicts mapping basis indices (any sortable keys) to nonzero
scalars of a fixed :class:`~skewgin.fields.Field`.  The solver keeps an
echelon basis and, for each stored row, the combination of input labels
that produced it, so membership tests double as certificate extraction.
Insertion order is part of the contract: pivots are deterministic.
"""

from __future__ import annotations


class LinSolver:
    """Echelon span of labelled sparse vectors over an exact field."""

    def __init__(self, field):
        self.field = field
        # pivot key -> (normalised row dict, combo dict label -> scalar)
        self.rows = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec, combo, sign):
        """Eliminate vec against stored rows; mutates and returns (vec, combo).

        Stored rows satisfy row = sum(row_combo[l] * original_l).  With
        sign=-1 the invariant vec = sum(combo * originals) is maintained
        (insertion); with sign=+1 it is residual = target - sum(combo *
        originals) (expression).
        """
        f = self.field
        while vec:
            pivot = min(vec)
            hit = self.rows.get(pivot)
            if hit is None:
                return vec, combo, pivot
            row, row_combo = hit
            factor = vec[pivot]
            signed = factor if sign > 0 else f.neg(factor)
            for k, v in row.items():
                nv = f.sub(vec.get(k, f.zero()), f.mul(factor, v))
                if nv == f.zero():
                    vec.pop(k, None)
                else:
                    vec[k] = nv
            for k, v in row_combo.items():
                nv = f.add(combo.get(k, f.zero()), f.mul(signed, v))
                if nv == f.zero():
                    combo.pop(k, None)
                else:
                    combo[k] = nv
        return vec, combo, None

    def add(self, vec: dict, label=None) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        f = self.field
        vec = {k: v for k, v in vec.items() if v != f.zero()}
        combo = {} if label is None else {label: f.one()}
        vec, combo, pivot = self._reduce(vec, combo, sign=-1)
        if pivot is None:
            return False
        scale = f.inv(vec[pivot])
        vec = {k: f.mul(scale, v) for k, v in vec.items()}
        combo = {k: f.mul(scale, v) for k, v in combo.items()}
        self.rows[pivot] = (vec, combo)
        return True

    def contains(self, vec: dict) -> bool:
        residual, _, pivot = self._reduce(dict(vec), {}, sign=1)
        return pivot is None

    def residual(self, vec: dict) -> dict:
        """The fully reduced form of vec; empty iff vec lies in the span."""
        out = {}
        work = dict(vec)
        f = self.field
        while work:
            pivot = min(work)
            hit = self.rows.get(pivot)
            if hit is None:
                out[pivot] = work.pop(pivot)
                continue
            row, _ = hit
            factor = work[pivot]
            for k, v in row.items():
                nv = f.sub(work.get(k, f.zero()), f.mul(factor, v))
                if nv == f.zero():
                    work.pop(k, None)
                else:
                    work[k] = nv
        return out

    def express(self, vec: dict):
        """Write vec as a combination of previously added labelled vectors.

        Returns a dict label -> coefficient, or None if vec is outside the
        span.  Only reliable when every vector that enlarged the span
        carried a label.
        """
        residual, combo, pivot = self._reduce(dict(vec), {}, sign=1)
        if pivot is not None:
            return None
        return combo


def span_rank(field, vectors) -> int:
    solver = LinSolver(field)
    for v in vectors:
        solver.add(v)
    return solver.rank


def express_incremental(solver, labelled_vectors, target, check_every=24):
    """Feed labelled vectors into the solver until the target is expressible.

    Tries the target periodically so large generating sets stop early; the
    stopping rule is deterministic.  Returns the combination or None.
    """
    combo = solver.express(target)
    if combo is not None:
        return combo
    since_check = 0
    for vec, label in labelled_vectors:
        if solver.add(vec, label):
            since_check += 1
            if since_check >= check_every:
                since_check = 0
                combo = solver.express(target)
                if combo is not None:
                    return combo
    return solver.express(target)


def invert_matrix(field, mat):
    """Inverse of a square matrix given as a list of rows; None if singular."""
    n = len(mat)
    f = field
    aug = [list(row) + [f.one() if i == j else f.zero() for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != f.zero()), None)
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        scale = f.inv(aug[col][col])
        aug[col] = [f.mul(scale, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != f.zero():
                factor = aug[r][col]
                aug[r] = [f.sub(v, f.mul(factor, w)) for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
