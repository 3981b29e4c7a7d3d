"""Graded quivers, paths, and exact path-algebra arithmetic.

Composition convention, fixed system-wide: ``p * q`` means "first traverse
p, then q", paths are written left to right.  ``e_i * a = a`` exactly when
a starts at i.  All linear algebra on path algebras happens on bounded-
length components, so every enumeration takes an explicit length bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import FieldMismatch, QuiverMismatch, UnknownArrow


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str
    deg: int = 0


class Path(NamedTuple):
    """A composable arrow-name sequence; arrows == () is the trivial path.

    Length means len(p.arrows); the source vertex disambiguates trivial paths.
    """

    source: str
    arrows: tuple


class GradedQuiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        self.arrow_by_name = {}
        for a in self.arrows:
            if a.name in self.arrow_by_name:
                raise ValueError(f"duplicate arrow name {a.name!r}")
            if a.src not in self.vertices or a.tgt not in self.vertices:
                raise ValueError(f"arrow {a.name!r} references unknown vertex")
            self.arrow_by_name[a.name] = a
        self.arrows_from = {v: [] for v in self.vertices}
        self.arrows_to = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.arrows_from[a.src].append(a)
            self.arrows_to[a.tgt].append(a)

    def __eq__(self, other):
        return (isinstance(other, GradedQuiver)
                and self.vertices == other.vertices and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"GradedQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_by_name[name]
        except KeyError:
            raise UnknownArrow(f"no arrow named {name!r}") from None

    # -- paths --

    def trivial_path(self, vertex: str) -> Path:
        if vertex not in self.vertices:
            raise ValueError(f"unknown vertex {vertex!r}")
        return Path(vertex, ())

    def path(self, arrow_names) -> Path:
        """Path from a nonempty composable arrow-name list."""
        names = tuple(arrow_names)
        if not names:
            raise ValueError("empty arrow list; use trivial_path")
        first = self.arrow(names[0])
        p = Path(first.src, names)
        if not self.is_composable(p):
            raise ValueError(f"arrows do not compose: {names}")
        return p

    def is_composable(self, p: Path) -> bool:
        at = p.source
        for name in p.arrows:
            a = self.arrow(name)
            if a.src != at:
                return False
            at = a.tgt
        return True

    def path_target(self, p: Path) -> str:
        return self.arrow(p.arrows[-1]).tgt if p.arrows else p.source

    def path_degree(self, p: Path) -> int:
        return sum(self.arrow(n).deg for n in p.arrows)

    def is_cycle(self, p: Path) -> bool:
        return self.path_target(p) == p.source

    def compose(self, p: Path, q: Path):
        """Concatenation p then q, or None when endpoints mismatch."""
        if self.path_target(p) != q.source:
            return None
        if not p.arrows:
            return q
        return Path(p.source, p.arrows + q.arrows)


def path_sort_key(p: Path):
    """Global term order: by length, then arrow names, then base vertex."""
    return (len(p.arrows), p.arrows, p.source)


def basis_up_to(quiver: GradedQuiver, bound: int):
    """All paths of length <= bound in the deterministic global order."""
    if bound < 0:
        raise ValueError("length bound must be >= 0")
    out = [quiver.trivial_path(v) for v in sorted(quiver.vertices)]
    layer = list(out)
    for _ in range(bound):
        nxt = []
        for p in layer:
            end = quiver.path_target(p)
            for a in quiver.arrows_from[end]:
                nxt.append(Path(p.source, p.arrows + (a.name,)))
        layer = nxt
        out.extend(layer)
    out.sort(key=path_sort_key)
    return out


class AlgElement:
    """Finite scalar combination of paths of one quiver over one field."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver, field, terms=None):
        self.quiver = quiver
        self.field = field
        self.terms = {}
        if terms:
            z = field.zero()
            for p, c in (terms.items() if isinstance(terms, dict) else terms):
                if c == z:
                    continue
                acc = field.add(self.terms.get(p, z), c)
                if acc == z:
                    self.terms.pop(p, None)
                else:
                    self.terms[p] = acc

    # -- constructors --

    @classmethod
    def zero(cls, quiver, field):
        return cls(quiver, field)

    @classmethod
    def from_path(cls, quiver, field, path, coeff=None):
        return cls(quiver, field, {path: field.one() if coeff is None else coeff})

    @classmethod
    def from_arrow(cls, quiver, field, name, coeff=None):
        a = quiver.arrow(name)
        return cls.from_path(quiver, field, Path(a.src, (name,)), coeff)

    @classmethod
    def unit(cls, quiver, field):
        one = field.one()
        return cls(quiver, field, {quiver.trivial_path(v): one for v in quiver.vertices})

    # -- structure --

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.quiver != other.quiver:
            raise QuiverMismatch("elements live on different quivers")
        if self.field != other.field:
            raise FieldMismatch("elements live over different fields")

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return (self.quiver == other.quiver and self.field == other.field
                and self.terms == other.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        f = self.field
        for p, c in other.terms.items():
            acc = f.add(out.get(p, f.zero()), c)
            if acc == f.zero():
                out.pop(p, None)
            else:
                out[p] = acc
        res = AlgElement(self.quiver, self.field)
        res.terms = out
        return res

    def __neg__(self):
        f = self.field
        res = AlgElement(self.quiver, self.field)
        res.terms = {p: f.neg(c) for p, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        f = self.field
        res = AlgElement(self.quiver, self.field)
        if coeff != f.zero():
            res.terms = {p: f.mul(coeff, c) for p, c in self.terms.items()}
        return res

    def __mul__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        self._check(other)
        f, q = self.field, self.quiver
        acc = {}
        z = f.zero()
        for p, cp in self.terms.items():
            for r, cr in other.terms.items():
                pq = q.compose(p, r)
                if pq is None:
                    continue
                c = f.add(acc.get(pq, z), f.mul(cp, cr))
                if c == z:
                    acc.pop(pq, None)
                else:
                    acc[pq] = c
        res = AlgElement(q, f)
        res.terms = acc
        return res

    def degree(self):
        """Common degree of all terms, or None if inhomogeneous/zero."""
        degs = {self.quiver.path_degree(p) for p in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: path_sort_key(kv[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p, c in self.sorted_terms():
            word = "".join(p.arrows) if p.arrows else f"e_{p.source}"
            bits.append(f"{self.field.format(c)}*{word}")
        return " + ".join(bits)
