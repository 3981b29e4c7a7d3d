"""Potentials: cyclic-equivalence classes of cycles, and cyclic derivatives.

Rotating a cycle a.v (one arrow a followed by the rest v) to v.a carries
the Koszul sign (-1)^(deg a * deg v).  The canonical representative of an
orbit is the rotation with the least path word; a cycle whose orbit meets
itself with opposite signs is 2-torsion and canonicalises to zero.
"""

from __future__ import annotations

from .errors import NotACycle, UnknownArrow
from .quiver import AlgElement, Path, path_sort_key


def _rotations(quiver, cycle: Path):
    """All rotations of a cycle with the accumulated sign exponent (mod 2).

    Yields (word, sign_exponent) for each basepoint, starting with the
    cycle itself at exponent 0.  The final wrap-around exponent is also
    returned so callers can detect self-annihilating orbits.
    """
    names = cycle.arrows
    n = len(names)
    total_deg = quiver.path_degree(cycle)
    out = []
    exp = 0
    word = names
    src = cycle.source
    for _ in range(n):
        out.append((Path(src, word), exp))
        lead = quiver.arrow(word[0])
        exp = (exp + lead.deg * (total_deg - lead.deg)) % 2
        src = lead.tgt
        word = word[1:] + (word[0],)
    return out, exp


class Potential:
    """Canonical form of a linear combination of cycles up to rotation."""

    __slots__ = ("quiver", "field", "terms")

    def __init__(self, quiver, field, canonical_terms=None):
        self.quiver = quiver
        self.field = field
        self.terms = dict(canonical_terms or {})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (self.quiver == other.quiver and self.field == other.field
                and self.terms == other.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: path_sort_key(kv[0]))

    def as_element(self) -> AlgElement:
        return AlgElement(self.quiver, self.field, self.terms)

    def scale(self, coeff):
        if coeff == self.field.zero():
            return Potential(self.quiver, self.field)
        f = self.field
        return Potential(self.quiver, f, {p: f.mul(coeff, c) for p, c in self.terms.items()})

    def __add__(self, other):
        assert self.quiver == other.quiver and self.field == other.field
        combined = list(self.terms.items()) + list(other.terms.items())
        return canonicalize(self.quiver, self.field, [(c, p) for p, c in combined])

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{self.field.format(c)}*{''.join(p.arrows)}"
                          for p, c in self.sorted_terms())


def canonicalize(quiver, field, raw_terms) -> Potential:
    """Fold (coeff, cycle) pairs into the canonical potential.

    raw_terms iterates pairs (scalar, Path); every path must be a cycle.
    """
    acc = {}
    z = field.zero()
    for coeff, cycle in raw_terms:
        if not quiver.is_composable(cycle):
            raise NotACycle(f"path {cycle} is not composable")
        if not quiver.is_cycle(cycle):
            raise NotACycle(f"path {cycle} is not a cycle")
        if coeff == z:
            continue
        if not cycle.arrows:
            raise NotACycle("trivial paths are not potential cycles")
        rots, wrap_exp = _rotations(quiver, cycle)
        # a word revisited with opposite sign kills the whole orbit
        seen = {}
        dead = wrap_exp == 1
        for word, exp in rots:
            if word in seen and seen[word] != exp:
                dead = True
            seen[word] = exp
        if dead and field.characteristic() != 2:
            continue
        best, best_exp = min(rots, key=lambda we: path_sort_key(we[0]))
        signed = coeff if best_exp == 0 else field.neg(coeff)
        cur = field.add(acc.get(best, z), signed)
        if cur == z:
            acc.pop(best, None)
        else:
            acc[best] = cur
    return Potential(quiver, field, acc)


def rotations_of(quiver, cycle: Path):
    """Public view of the signed rotation orbit (word, sign exponent)."""
    rots, _ = _rotations(quiver, cycle)
    return rots


def cyclic_derivative(potential: Potential, arrow_name: str) -> AlgElement:
    """Derivative with respect to one arrow.

    Each rotation of each cycle that starts with the arrow contributes the
    rotation's sign times the remaining word.  With all arrow degrees zero
    this is exactly "sum over decompositions p = p1.a.p2 of p2.p1".
    """
    quiver, field = potential.quiver, potential.field
    quiver.arrow(arrow_name)
    out = AlgElement.zero(quiver, field)
    for cycle, coeff in potential.terms.items():
        rots, _ = _rotations(quiver, cycle)
        for word, exp in rots:
            if word.arrows[0] != arrow_name:
                continue
            c = coeff if exp == 0 else field.neg(coeff)
            rest = word.arrows[1:]
            lead = quiver.arrow(arrow_name)
            tail = Path(lead.tgt, rest) if rest else quiver.trivial_path(lead.tgt)
            out = out + AlgElement.from_path(quiver, field, tail, c)
    return out


def cyclic_derivative_along(potential: Potential, direction: AlgElement) -> AlgElement:
    """Linear extension of the derivative to a combination of arrows."""
    out = AlgElement.zero(potential.quiver, potential.field)
    for p, c in direction.terms.items():
        if len(p.arrows) != 1:
            raise UnknownArrow("derivative direction must be an arrow combination")
        out = out + cyclic_derivative(potential, p.arrows[0]).scale(c)
    return out


def degree_of(potential: Potential):
    """Common degree of all cycles; 0 for the empty potential; None if mixed."""
    if potential.is_zero():
        return 0
    degs = {potential.quiver.path_degree(p) for p in potential.terms}
    return degs.pop() if len(degs) == 1 else None


def cycle_length_of(potential: Potential):
    """Common arrow count of all cycles, or None if mixed; 0 when empty."""
    if potential.is_zero():
        return 0
    lens = {len(p.arrows) for p in potential.terms}
    return lens.pop() if len(lens) == 1 else None
