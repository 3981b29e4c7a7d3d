"""Finite groups by multiplication table, group algebras, and primitive
idempotent sets.

Groups stay small (tables are validated exhaustively), elements are plain
indices into the name list.  Idempotent sets are built automatically for
abelian groups via characters; anything else must be supplied and is gated
by :func:`validate_idempotent_set`.
"""

from __future__ import annotations

from math import gcd

from .errors import (BadCharacteristic, NoIdentity, NotAbelian,
                     NotAssociative, NotLatinSquare)
from .fields import Field, primitive_root_of_unity
from .linalg import LinSolver


class FiniteGroup:
    """Element names plus a validated multiplication table of indices."""

    def __init__(self, names, table, identity, inverses):
        self.names = tuple(names)
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        self.inverses = tuple(inverses)

    @property
    def size(self) -> int:
        return len(self.names)

    def elements(self):
        return range(self.size)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, h: int, g: int) -> int:
        """h g h^-1."""
        return self.mul(self.mul(h, g), self.inv(h))

    def order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def exponent(self) -> int:
        e = 1
        for a in self.elements():
            o = self.order(a)
            e = e * o // gcd(e, o)
        return e

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in self.elements() for b in self.elements())

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def subgroup(self, member_indices):
        """The subgroup on the given ambient indices, as its own group.

        Returns (group, ambient) where ambient[i] is the ambient index of
        the i-th subgroup element.  The member set must be closed.
        """
        ambient = sorted(member_indices)
        pos = {g: i for i, g in enumerate(ambient)}
        table = []
        for a in ambient:
            row = []
            for b in ambient:
                prod = self.mul(a, b)
                if prod not in pos:
                    raise ValueError("subset is not closed under multiplication")
                row.append(pos[prod])
            table.append(row)
        sub = make_group([self.names[g] for g in ambient], table)
        return sub, ambient

    def __repr__(self):
        return f"FiniteGroup({list(self.names)})"


def make_group(names, table) -> FiniteGroup:
    """Validate a multiplication table and wrap it up."""
    n = len(names)
    if len(table) != n or any(len(row) != n for row in table):
        raise NotLatinSquare(f"table must be {n}x{n}")
    for row in table:
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise NotLatinSquare(f"table entry {v!r} out of range")
    for i, row in enumerate(table):
        if len(set(row)) != n:
            raise NotLatinSquare(f"row {i} repeats an entry")
    for j in range(n):
        if len({table[i][j] for i in range(n)}) != n:
            raise NotLatinSquare(f"column {j} repeats an entry")
    identity = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided identity element")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise NotAssociative(
                        f"({names[a]}*{names[b]})*{names[c]} != {names[a]}*({names[b]}*{names[c]})")
    inverses = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == identity and table[b][a] == identity:
                inverses[a] = b
                break
    if any(v is None for v in inverses):
        raise NoIdentity("an element has no inverse")
    return FiniteGroup(names, table, identity, inverses)


def cyclic_group(n: int) -> FiniteGroup:
    names = ["e"] + [f"g{'' if k == 1 else k}" for k in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return make_group(names, table)


class GroupAlgebra:
    """kG for a field k with char(k) not dividing |G|.

    Elements are dicts index -> nonzero scalar.
    """

    def __init__(self, group: FiniteGroup, field: Field):
        p = field.characteristic()
        if p and group.size % p == 0:
            raise BadCharacteristic(
                f"char {p} divides |G| = {group.size}; the group order must be invertible")
        self.group = group
        self.field = field

    def zero(self):
        return {}

    def one(self):
        return {self.group.identity: self.field.one()}

    def from_element(self, g: int, coeff=None):
        return {g: self.field.one() if coeff is None else coeff}

    def add(self, x: dict, y: dict) -> dict:
        f = self.field
        out = dict(x)
        for g, c in y.items():
            acc = f.add(out.get(g, f.zero()), c)
            if acc == f.zero():
                out.pop(g, None)
            else:
                out[g] = acc
        return out

    def scale(self, coeff, x: dict) -> dict:
        f = self.field
        if coeff == f.zero():
            return {}
        return {g: f.mul(coeff, c) for g, c in x.items()}

    def sub(self, x: dict, y: dict) -> dict:
        return self.add(x, self.scale(self.field.neg(self.field.one()), y))

    def mul(self, x: dict, y: dict) -> dict:
        f, G = self.field, self.group
        out = {}
        z = f.zero()
        for g, cg in x.items():
            for h, ch in y.items():
                k = G.mul(g, h)
                acc = f.add(out.get(k, z), f.mul(cg, ch))
                if acc == z:
                    out.pop(k, None)
                else:
                    out[k] = acc
        return out

    def conjugate(self, h: int, x: dict) -> dict:
        """h x h^-1 term by term."""
        return {self.group.conj(h, g): c for g, c in x.items()}

    def right_module_dimension(self, e: dict) -> int:
        """dim of e * kG as a subspace of kG."""
        solver = LinSolver(self.field)
        for g in self.group.elements():
            vec = self.mul(e, self.from_element(g))
            if vec:
                solver.add(vec)
        return solver.rank


class IdempotentSet:
    """Orthogonal idempotents with declared irreducible dimensions."""

    def __init__(self, algebra: GroupAlgebra, elements, dims):
        self.algebra = algebra
        self.elements = list(elements)
        self.dims = list(dims)


def characters(group: FiniteGroup, field: Field):
    """All homomorphisms G -> k^x for an abelian group, as value tuples.

    Requires a primitive root of unity of order exp(G); raises NoRootOfUnity
    otherwise.  Characters are returned sorted by their value tuples.
    """
    if not group.is_abelian():
        raise NotAbelian("character construction requires an abelian group")
    f = field
    exp = group.exponent()
    omega = primitive_root_of_unity(field, exp)
    # greedy generating sequence, largest order first
    generators = []
    generated = {group.identity}
    by_order = sorted(group.elements(), key=lambda g: (-group.order(g), g))
    for g in by_order:
        if g in generated:
            continue
        generators.append(g)
        frontier = set(generated) | {g}
        while True:
            new = {group.mul(a, b) for a in frontier for b in frontier}
            if new <= frontier:
                break
            frontier |= new
        generated = frontier
        if len(generated) == group.size:
            break

    def try_extend(gen_values):
        values = {group.identity: f.one()}
        queue = [group.identity]
        while queue:
            x = queue.pop()
            for g, val in gen_values:
                y = group.mul(x, g)
                v = f.mul(values[x], val)
                if y in values:
                    if values[y] != v:
                        return None
                else:
                    values[y] = v
                    queue.append(y)
        if len(values) != group.size:
            return None
        return tuple(values[g] for g in group.elements())

    found = set()
    def assign(idx, chosen):
        if idx == len(generators):
            vec = try_extend(chosen)
            if vec is not None:
                found.add(vec)
            return
        g = generators[idx]
        o = group.order(g)
        root = f.pow(omega, exp // o)
        for k in range(o):
            assign(idx + 1, chosen + [(g, f.pow(root, k))])

    assign(0, [])
    if len(found) != group.size:
        raise NotAbelian(f"character count {len(found)} != |G| = {group.size}")
    return sorted(found)


def abelian_idempotents(group: FiniteGroup, field: Field) -> IdempotentSet:
    """One primitive idempotent per character: e = (1/|G|) sum chi(g^-1) g."""
    algebra = GroupAlgebra(group, field)
    f = field
    inv_order = f.inv(f.from_int(group.size))
    elements = []
    for chi in characters(group, field):
        e = {}
        for g in group.elements():
            c = f.mul(inv_order, chi[group.inv(g)])
            if c != f.zero():
                e[g] = c
        elements.append(e)
    return IdempotentSet(algebra, elements, [1] * group.size)


def validate_idempotent_set(idem_set: IdempotentSet):
    """Exhaustive gate for a claimed complete set of primitive idempotents.

    Checks idempotency, pairwise orthogonality, the dimension count
    sum(dims^2) = |G|, the module dimension of each e_i kG against its
    declared dim, pairwise non-isomorphism (e_i kG e_j = 0 for i != j), and,
    when every dim is 1, completeness sum(e_i) = 1.  Returns a list of
    failure strings; empty means the set passed.
    """
    alg = idem_set.algebra
    G = alg.group
    report = []
    els = idem_set.elements
    dims = idem_set.dims
    if len(els) != len(dims):
        return [f"{len(els)} idempotents but {len(dims)} declared dimensions"]
    for i, e in enumerate(els):
        if alg.mul(e, e) != e:
            report.append(f"element {i} is not idempotent")
    for i in range(len(els)):
        for j in range(len(els)):
            if i != j and alg.mul(els[i], els[j]):
                report.append(f"elements {i} and {j} are not orthogonal")
    if sum(d * d for d in dims) != G.size:
        report.append(
            f"sum of squared dimensions {sum(d * d for d in dims)} != |G| = {G.size}")
    for i, (e, d) in enumerate(zip(els, dims)):
        got = alg.right_module_dimension(e)
        if got != d:
            report.append(f"element {i} spans a module of dimension {got}, declared {d}")
    for i in range(len(els)):
        for j in range(len(els)):
            if i == j:
                continue
            if any(alg.mul(alg.mul(els[i], alg.from_element(g)), els[j]) for g in G.elements()):
                report.append(f"elements {i} and {j} select isomorphic summands")
    if all(d == 1 for d in dims):
        total = {}
        for e in els:
            total = alg.add(total, e)
        if total != alg.one():
            report.append("idempotents do not sum to 1")
    return report
