"""The skew group algebra of a path algebra: arithmetic, length components,
commutator subspaces, and corner-representative solving.

Elements are supported on (path, group element) pairs; the product rule is
(p.g)(q.h) = p.(g acting on q).(gh), so group elements slide right while
twisting what they pass.  A term's length is the length of its path part.
All class computations happen inside a single length component, which
commutators and length-zero idempotents preserve.
"""

from __future__ import annotations

from .errors import FieldMismatch, NoSolution, NotLengthHomogeneous, QuiverMismatch
from .linalg import LinSolver, express_incremental
from .quiver import AlgElement, basis_up_to, path_sort_key


class CrossedElement:
    """Finite scalar combination of (path, group element) pairs."""

    __slots__ = ("action", "terms")

    def __init__(self, action, terms=None):
        self.action = action
        self.terms = {}
        if terms:
            f = action.field
            z = f.zero()
            for key, c in (terms.items() if isinstance(terms, dict) else terms):
                if c == z:
                    continue
                acc = f.add(self.terms.get(key, z), c)
                if acc == z:
                    self.terms.pop(key, None)
                else:
                    self.terms[key] = acc

    # -- constructors --

    @classmethod
    def zero(cls, action):
        return cls(action)

    @classmethod
    def from_pair(cls, action, path, g: int, coeff=None):
        coeff = action.field.one() if coeff is None else coeff
        return cls(action, {(path, g): coeff})

    @classmethod
    def from_alg(cls, action, x: AlgElement, g: int | None = None):
        """Embed a path-algebra element, tensored with one group element."""
        if x.quiver != action.quiver:
            raise QuiverMismatch("element lives on a different quiver")
        if x.field != action.field:
            raise FieldMismatch("element lives over a different field")
        g = action.group.identity if g is None else g
        return cls(action, {(p, g): c for p, c in x.terms.items()})

    @classmethod
    def one(cls, action):
        ident = action.group.identity
        one = action.field.one()
        return cls(action, {(action.quiver.trivial_path(v), ident): one
                            for v in action.quiver.vertices})

    @classmethod
    def from_group_algebra(cls, action, vertex: str, coeffs: dict):
        """Group-algebra element sitting at one vertex: sum c_g (e_vertex, g)."""
        path = action.quiver.trivial_path(vertex)
        return cls(action, {(path, g): c for g, c in coeffs.items()})

    # -- structure --

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.action is not other.action:
            if (self.action.quiver != other.action.quiver
                    or self.action.field != other.action.field):
                raise QuiverMismatch("elements belong to different crossed products")

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        self._check(other)
        f = self.action.field
        out = dict(self.terms)
        z = f.zero()
        for key, c in other.terms.items():
            acc = f.add(out.get(key, z), c)
            if acc == z:
                out.pop(key, None)
            else:
                out[key] = acc
        res = CrossedElement(self.action)
        res.terms = out
        return res

    def __neg__(self):
        f = self.action.field
        res = CrossedElement(self.action)
        res.terms = {k: f.neg(c) for k, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        f = self.action.field
        res = CrossedElement(self.action)
        if coeff != f.zero():
            res.terms = {k: f.mul(coeff, c) for k, c in self.terms.items()}
        return res

    def __mul__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        self._check(other)
        action = self.action
        f, G, quiver = action.field, action.group, action.quiver
        z = f.zero()
        acc = {}
        for (p, g), cp in self.terms.items():
            for (q, h), cq in other.terms.items():
                moved = action.act_path(g, q)
                gh = G.mul(g, h)
                c0 = f.mul(cp, cq)
                for r, cr in moved.terms.items():
                    pr = quiver.compose(p, r)
                    if pr is None:
                        continue
                    key = (pr, gh)
                    acc2 = f.add(acc.get(key, z), f.mul(c0, cr))
                    if acc2 == z:
                        acc.pop(key, None)
                    else:
                        acc[key] = acc2
        res = CrossedElement(action)
        res.terms = acc
        return res

    def lengths(self):
        return {len(p.arrows) for (p, _) in self.terms}

    def pure_length(self):
        ls = self.lengths()
        if len(ls) != 1:
            raise NotLengthHomogeneous(f"element mixes path lengths {sorted(ls)}")
        return ls.pop()

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (path_sort_key(kv[0][0]), kv[0][1]))

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.action.group.names
        f = self.action.field
        bits = []
        for (p, g), c in self.sorted_terms():
            word = "".join(p.arrows) if p.arrows else f"e_{p.source}"
            bits.append(f"{f.format(c)}*{word}.{names[g]}")
        return " + ".join(bits)


def crossed_multiply(x: CrossedElement, y: CrossedElement) -> CrossedElement:
    return x * y


def crossed_basis(action, length: int):
    """Ordered (path, group element) pairs of one length component."""
    paths = [p for p in basis_up_to(action.quiver, length) if len(p.arrows) == length]
    return [(p, g) for p in paths for g in action.group.elements()]


def basis_index(action, length: int):
    return {key: i for i, key in enumerate(crossed_basis(action, length))}


def vectorize(x: CrossedElement, index: dict) -> dict:
    return {index[key]: c for key, c in x.terms.items()}


class CommutatorTerm:
    """One spanning commutator [u, v] = uv - vu of a length component."""

    __slots__ = ("u", "v", "element")

    def __init__(self, u, v, element):
        self.u = u
        self.v = v
        self.element = element


def commutator_basis(action, length: int):
    """Spanning set of the commutator subspace of one length component.

    Iterates basis pairs u = (p, g), v = (q, h) with len(p) + len(q) equal
    to the requested length, keeping each unordered pair once and dropping
    zero commutators.
    """
    out = []
    for s in range(length // 2 + 1):
        t = length - s
        left = crossed_basis(action, s)
        right = crossed_basis(action, t)
        for i, u in enumerate(left):
            start = i + 1 if s == t else 0
            for v in right[start:]:
                eu = CrossedElement.from_pair(action, *u)
                ev = CrossedElement.from_pair(action, *v)
                elem = eu * ev - ev * eu
                if not elem.is_zero():
                    out.append(CommutatorTerm(u, v, elem))
    return out


def expand_certificate(action, certificate) -> CrossedElement:
    """Re-expand a list of ((u, v), coeff) commutator entries exactly."""
    total = CrossedElement.zero(action)
    for (u, v), coeff in certificate:
        eu = CrossedElement.from_pair(action, *u)
        ev = CrossedElement.from_pair(action, *v)
        total = total + (eu * ev - ev * eu).scale(coeff)
    return total


def merge_certificate(field, entries):
    """Accumulate coefficients on repeated pairs and drop zeros."""
    acc = {}
    z = field.zero()
    for pair, coeff in entries:
        cur = field.add(acc.get(pair, z), coeff)
        if cur == z:
            acc.pop(pair, None)
        else:
            acc[pair] = cur
    return list(acc.items())


class CyclicClass:
    """A length component element up to commutators, with exact equality."""

    def __init__(self, representative: CrossedElement):
        self.representative = representative
        self.length = representative.pure_length() if not representative.is_zero() else 0
        self.action = representative.action
        self._solver = LinSolver(self.action.field)
        self._index = basis_index(self.action, self.length)
        for term in commutator_basis(self.action, self.length):
            self._solver.add(vectorize(term.element, self._index))

    def __eq__(self, other):
        if not isinstance(other, CyclicClass):
            return NotImplemented
        diff = self.representative - other.representative
        if diff.is_zero():
            return True
        if diff.pure_length() != self.length:
            return False
        return self._solver.contains(vectorize(diff, self._index))


def idempotent_corner(e: CrossedElement, x: CrossedElement) -> CrossedElement:
    return e * x * e


def hc0_reduce(x: CrossedElement, e: CrossedElement):
    """Rewrite x as a corner element plus an exact combination of commutators.

    Returns (w, certificate) with w in e.L.e, x - w = sum of coeff * [u, v]
    over the certificate entries ((u, v), coeff), re-verified by expansion.
    Raises NoSolution when the class has no corner representative.
    """
    action = x.action
    if (e * e) != e:
        raise ValueError("corner element is not idempotent")
    if x.is_zero():
        return CrossedElement.zero(action), []
    length = x.pure_length()
    index = basis_index(action, length)
    solver = LinSolver(action.field)
    # corner span first so representatives prefer pure corner solutions
    for key in crossed_basis(action, length):
        b = CrossedElement.from_pair(action, *key)
        cornered = idempotent_corner(e, b)
        if not cornered.is_zero():
            solver.add(vectorize(cornered, index), label=("corner", key))
    commutators = commutator_basis(action, length)
    target = vectorize(x, index)
    combo = solver.express(target)
    if combo is None:
        combo = express_incremental(
            solver,
            ((vectorize(term.element, index), ("comm", k))
             for k, term in enumerate(commutators)),
            target)
    if combo is None:
        raise NoSolution("no corner representative modulo commutators at this length")
    f = action.field
    w = CrossedElement.zero(action)
    certificate = []
    for label, coeff in combo.items():
        kind, payload = label
        if kind == "corner":
            b = CrossedElement.from_pair(action, *payload)
            w = w + idempotent_corner(e, b).scale(coeff)
        else:
            term = commutators[payload]
            certificate.append(((term.u, term.v), coeff))
    # self-verify: the certificate must re-expand exactly to x - w
    if expand_certificate(action, certificate) != x - w:
        raise NoSolution("certificate failed re-expansion")
    return w, certificate
