"""Weyl algebras in normal-ordered form, the Koszul bimodule resolution of
the diagonal, its dual, symplectic-equivariance checking, and exactness of
bounded filtration pieces.

Monomials are kept normal ordered (all positions left of all derivations);
elements of the algebra, of its enveloping algebra, and of the resolution
terms are sparse dicts over monomial keys.  The total-degree (Bernstein)
filtration bounds every computation: the chain differential does not raise
it, so each filtration piece is a finite complex with exact ranks.
"""

from __future__ import annotations

from itertools import product as iproduct
from math import comb, factorial

from .errors import NotSymplectic, SizeGuard
from .fields import Field
from .linalg import LinSolver


def _compositions(total: int, parts: int):
    """All tuples of the given length of nonnegative ints summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


class WeylAlgebra:
    """Polynomial differential operators on n variables, exact coefficients.

    Elements are dicts (alpha, beta) -> scalar for multi-indices alpha
    (positions) and beta (derivations).
    """

    def __init__(self, n: int, field: Field):
        self.n = n
        self.field = field

    # -- elements --

    def zero(self):
        return {}

    def one(self):
        zero_idx = (0,) * self.n
        return {(zero_idx, zero_idx): self.field.one()}

    def x(self, i: int):
        alpha = tuple(1 if j == i else 0 for j in range(self.n))
        return {(alpha, (0,) * self.n): self.field.one()}

    def d(self, i: int):
        beta = tuple(1 if j == i else 0 for j in range(self.n))
        return {((0,) * self.n, beta): self.field.one()}

    def basis_vector(self, k: int):
        """V basis: x_1..x_n then d_1..d_n."""
        return self.x(k) if k < self.n else self.d(k - self.n)

    def add(self, u: dict, v: dict) -> dict:
        f = self.field
        out = dict(u)
        z = f.zero()
        for m, c in v.items():
            acc = f.add(out.get(m, z), c)
            if acc == z:
                out.pop(m, None)
            else:
                out[m] = acc
        return out

    def scale(self, coeff, u: dict) -> dict:
        f = self.field
        if coeff == f.zero():
            return {}
        return {m: f.mul(coeff, c) for m, c in u.items()}

    def sub(self, u: dict, v: dict) -> dict:
        return self.add(u, self.scale(self.field.neg(self.field.one()), v))

    def _mul_monomials(self, m1, m2):
        """Normal-ordered product of two monomials.

        Per variable, d^b x^c = sum_k C(b,k) C(c,k) k! x^(c-k) d^(b-k); the
        variables commute with each other, so the coefficient is a product.
        """
        (a1, b1), (a2, b2) = m1, m2
        f = self.field
        out = {}
        ranges = [range(min(b1[i], a2[i]) + 1) for i in range(self.n)]
        for k in iproduct(*ranges):
            coeff = 1
            for i in range(self.n):
                coeff *= comb(b1[i], k[i]) * comb(a2[i], k[i]) * factorial(k[i])
            alpha = tuple(a1[i] + a2[i] - k[i] for i in range(self.n))
            beta = tuple(b1[i] + b2[i] - k[i] for i in range(self.n))
            key = (alpha, beta)
            c = f.add(out.get(key, f.zero()), f.from_int(coeff))
            if c == f.zero():
                out.pop(key, None)
            else:
                out[key] = c
        return out

    def mul(self, u: dict, v: dict) -> dict:
        f = self.field
        out = {}
        z = f.zero()
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                for m, c in self._mul_monomials(m1, m2).items():
                    acc = f.add(out.get(m, z), f.mul(f.mul(c1, c2), c))
                    if acc == z:
                        out.pop(m, None)
                    else:
                        out[m] = acc
        return out

    def commutator(self, u: dict, v: dict) -> dict:
        return self.sub(self.mul(u, v), self.mul(v, u))

    def monomials_up_to(self, filt: int):
        out = []
        for total in range(filt + 1):
            for asum in range(total + 1):
                for alpha in _compositions(asum, self.n):
                    for beta in _compositions(total - asum, self.n):
                        out.append((alpha, beta))
        return out

    @staticmethod
    def monomial_filtration(m) -> int:
        alpha, beta = m
        return sum(alpha) + sum(beta)


def weyl_multiply(algebra: WeylAlgebra, u: dict, v: dict) -> dict:
    return algebra.mul(u, v)


class WeylEnvelope:
    """The enveloping algebra A (x) A^op: pairs multiply as
    (s (x) t)(s' (x) t') = s s' (x) t' t."""

    def __init__(self, algebra: WeylAlgebra):
        self.algebra = algebra
        self.field = algebra.field

    def one(self):
        [(m, _)] = self.algebra.one().items()
        return {(m, m): self.field.one()}

    def from_pair(self, s: dict, t: dict) -> dict:
        f = self.field
        out = {}
        z = f.zero()
        for m1, c1 in s.items():
            for m2, c2 in t.items():
                acc = f.add(out.get((m1, m2), z), f.mul(c1, c2))
                if acc == z:
                    out.pop((m1, m2), None)
                else:
                    out[(m1, m2)] = acc
        return out

    def add(self, u: dict, v: dict) -> dict:
        f = self.field
        out = dict(u)
        z = f.zero()
        for k, c in v.items():
            acc = f.add(out.get(k, z), c)
            if acc == z:
                out.pop(k, None)
            else:
                out[k] = acc
        return out

    def scale(self, coeff, u: dict) -> dict:
        f = self.field
        if coeff == f.zero():
            return {}
        return {k: f.mul(coeff, c) for k, c in u.items()}

    def left_difference(self, k: int, u: dict) -> dict:
        """(v (x) 1 - 1 (x) v).u for the k-th V basis vector v."""
        A, f = self.algebra, self.field
        v = A.basis_vector(k)
        out = {}
        z = f.zero()
        for (s, t), c in u.items():
            for m, cm in A._mul_monomials(next(iter(v)), s).items():
                acc = f.add(out.get((m, t), z), f.mul(c, cm))
                if acc == z:
                    out.pop((m, t), None)
                else:
                    out[(m, t)] = acc
            for m, cm in A._mul_monomials(t, next(iter(v))).items():
                acc = f.sub(out.get((s, m), z), f.mul(c, cm))
                if acc == z:
                    out.pop((s, m), None)
                else:
                    out[(s, m)] = acc
        return out

    def right_difference(self, k: int, u: dict) -> dict:
        """u.(v (x) 1 - 1 (x) v) for the k-th V basis vector v."""
        A, f = self.algebra, self.field
        v = A.basis_vector(k)
        out = {}
        z = f.zero()
        for (s, t), c in u.items():
            for m, cm in A._mul_monomials(s, next(iter(v))).items():
                acc = f.add(out.get((m, t), z), f.mul(c, cm))
                if acc == z:
                    out.pop((m, t), None)
                else:
                    out[(m, t)] = acc
            for m, cm in A._mul_monomials(next(iter(v)), t).items():
                acc = f.sub(out.get((s, m), z), f.mul(c, cm))
                if acc == z:
                    out.pop((s, m), None)
                else:
                    out[(s, m)] = acc
        return out

    def act_diagonal(self, images, u: dict) -> dict:
        """Apply an algebra automorphism factorwise: s (x) t -> g(s) (x) g(t)."""
        out = {}
        for (s, t), c in u.items():
            gs = apply_linear_automorphism(self.algebra, images, {s: self.field.one()})
            gt = apply_linear_automorphism(self.algebra, images, {t: self.field.one()})
            out = self.add(out, self.scale(c, self.from_pair(gs, gt)))
        return out

    @staticmethod
    def filtration(key) -> int:
        (s, t) = key
        return WeylAlgebra.monomial_filtration(s) + WeylAlgebra.monomial_filtration(t)

    def resolution_augmentation(self, u: dict) -> dict:
        """The map closing the resolution: s (x) t -> t s."""
        A = self.algebra
        out = A.zero()
        for (s, t), c in u.items():
            out = A.add(out, A.scale(c, A._mul_monomials(t, s)))
        return out

    def top_multiplication(self, u: dict) -> dict:
        """The map off the top of the dual complex: s (x) t -> s t."""
        A = self.algebra
        out = A.zero()
        for (s, t), c in u.items():
            out = A.add(out, A.scale(c, A._mul_monomials(s, t)))
        return out


def apply_linear_automorphism(algebra: WeylAlgebra, images, u: dict) -> dict:
    """Extend a linear substitution on V multiplicatively to normal-ordered
    elements.  images[k] is the element replacing the k-th V basis vector."""
    f = algebra.field
    out = algebra.zero()
    for (alpha, beta), c in u.items():
        acc = algebra.one()
        for i in range(algebra.n):
            for _ in range(alpha[i]):
                acc = algebra.mul(acc, images[i])
        for i in range(algebra.n):
            for _ in range(beta[i]):
                acc = algebra.mul(acc, images[algebra.n + i])
        out = algebra.add(out, algebra.scale(c, acc))
    return out


def matrix_images(algebra: WeylAlgebra, matrix):
    """Column k of the matrix gives the image of the k-th V basis vector."""
    f = algebra.field
    images = []
    for k in range(2 * algebra.n):
        el = algebra.zero()
        for i in range(2 * algebra.n):
            c = matrix[i][k]
            if c != f.zero():
                el = algebra.add(el, algebra.scale(c, algebra.basis_vector(i)))
        images.append(el)
    return images


def symplectic_form_matrix(algebra: WeylAlgebra):
    """Pairing of V basis vectors by their scalar commutators."""
    m = 2 * algebra.n
    f = algebra.field
    zero_mon = ((0,) * algebra.n, (0,) * algebra.n)
    form = [[f.zero()] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            comm = algebra.commutator(algebra.basis_vector(i), algebra.basis_vector(j))
            form[i][j] = comm.get(zero_mon, f.zero())
    return form


def is_symplectic(algebra: WeylAlgebra, matrix) -> bool:
    """Does the matrix preserve the commutator pairing on V?"""
    f = algebra.field
    images = matrix_images(algebra, matrix)
    zero_mon = ((0,) * algebra.n, (0,) * algebra.n)
    form = symplectic_form_matrix(algebra)
    m = 2 * algebra.n
    for i in range(m):
        for j in range(m):
            comm = algebra.commutator(images[i], images[j])
            if set(comm) - {zero_mon}:
                return False
            if comm.get(zero_mon, f.zero()) != form[i][j]:
                return False
    return True


# ---- the resolution ----
#
# Chain elements in homological position d are dicts
#   (wedge, (monomial, monomial)) -> scalar
# with wedge a strictly increasing tuple of V basis indices of length d.


def _remove_sign(wedge, position):
    """Sign for dropping the 1-based position i from a wedge of length m:
    (-1)^(m - i)."""
    m = len(wedge)
    return 1 if (m - (position + 1)) % 2 == 0 else -1


def koszul_differential(envelope: WeylEnvelope, element: dict) -> dict:
    """One step of the resolution differential.

    (v_1 ^ ... ^ v_m) (x) u goes to the alternating sum over i of
    (v_1 ^ ... v_i-hat ... ^ v_m) (x) (v_i (x) 1 - 1 (x) v_i) . u.
    """
    f = envelope.field
    out = {}
    for (wedge, pair), coeff in element.items():
        u = {pair: coeff}
        for pos, k in enumerate(wedge):
            moved = envelope.left_difference(k, u)
            sign = _remove_sign(wedge, pos)
            rest = wedge[:pos] + wedge[pos + 1:]
            for key, c in moved.items():
                c = c if sign > 0 else f.neg(c)
                acc = f.add(out.get((rest, key), f.zero()), c)
                if acc == f.zero():
                    out.pop((rest, key), None)
                else:
                    out[(rest, key)] = acc
    return out


def dual_differential(envelope: WeylEnvelope, element: dict) -> dict:
    """One step of the dual complex: u (x) w goes to the sum over j of
    u . (e_j (x) 1 - 1 (x) e_j) (x) (w ^ e_j*), with the sort sign."""
    f = envelope.field
    n2 = 2 * envelope.algebra.n
    out = {}
    for (wedge, pair), coeff in element.items():
        u = {pair: coeff}
        for j in range(n2):
            if j in wedge:
                continue
            moved = envelope.right_difference(j, u)
            greater = sum(1 for w in wedge if w > j)
            sign = 1 if greater % 2 == 0 else -1
            new_wedge = tuple(sorted(wedge + (j,)))
            for key, c in moved.items():
                c = c if sign > 0 else f.neg(c)
                acc = f.add(out.get((new_wedge, key), f.zero()), c)
                if acc == f.zero():
                    out.pop((new_wedge, key), None)
                else:
                    out[(new_wedge, key)] = acc
    return out


def wedge_action(algebra: WeylAlgebra, matrix, wedge):
    """Exterior power of the matrix on one wedge basis element."""
    f = algebra.field
    out = {(): f.one()} if not wedge else {}
    if not wedge:
        return out
    choices = []
    for k in wedge:
        col = [(i, matrix[i][k]) for i in range(2 * algebra.n)
               if matrix[i][k] != f.zero()]
        choices.append(col)
    for combo in iproduct(*choices):
        idxs = [i for i, _ in combo]
        if len(set(idxs)) != len(idxs):
            continue
        coeff = f.one()
        for _, c in combo:
            coeff = f.mul(coeff, c)
        # sort with sign
        perm = list(idxs)
        sign = 1
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    perm[a], perm[b] = perm[b], perm[a]
                    sign = -sign
        key = tuple(perm)
        c = coeff if sign > 0 else f.neg(coeff)
        acc = f.add(out.get(key, f.zero()), c)
        if acc == f.zero():
            out.pop(key, None)
        else:
            out[key] = acc
    return out


def chain_action(envelope: WeylEnvelope, matrix, element: dict) -> dict:
    """Diagonal action on wedge (x) enveloping-algebra elements."""
    f = envelope.field
    images = matrix_images(envelope.algebra, matrix)
    out = {}
    for (wedge, pair), coeff in element.items():
        moved_env = envelope.act_diagonal(images, {pair: coeff})
        for new_wedge, wc in wedge_action(envelope.algebra, matrix, wedge).items():
            for key, c in moved_env.items():
                total = f.mul(wc, c)
                acc = f.add(out.get((new_wedge, key), f.zero()), total)
                if acc == f.zero():
                    out.pop((new_wedge, key), None)
                else:
                    out[(new_wedge, key)] = acc
    return out


def _wedges(n2: int, size: int):
    from itertools import combinations
    return [tuple(c) for c in combinations(range(n2), size)]


def _position_basis(algebra: WeylAlgebra, d: int, env_filt: int):
    if env_filt < 0:
        return []
    mons = algebra.monomials_up_to(env_filt)
    pairs = [(s, t) for s in mons for t in mons
             if WeylAlgebra.monomial_filtration(s) + WeylAlgebra.monomial_filtration(t) <= env_filt]
    return [(w, p) for w in _wedges(2 * algebra.n, d) for p in pairs]


def check_sp_equivariance(n: int, matrices, field: Field, filt_bound: int = 2):
    """Symplectic membership plus differential equivariance.

    Raises NotSymplectic naming the first failing matrix; otherwise checks
    d(g . elem) = g . d(elem) over every chain basis element with
    enveloping filtration at most filt_bound and returns the failure list.
    """
    algebra = WeylAlgebra(n, field)
    envelope = WeylEnvelope(algebra)
    for idx, matrix in enumerate(matrices):
        if not is_symplectic(algebra, matrix):
            raise NotSymplectic(
                f"matrix {idx} does not preserve the commutator pairing", matrix_index=idx)
    report = []
    for idx, matrix in enumerate(matrices):
        for d in range(1, 2 * n + 1):
            for w, pair in _position_basis(algebra, d, filt_bound):
                elem = {(w, pair): field.one()}
                lhs = koszul_differential(envelope, chain_action(envelope, matrix, elem))
                rhs = chain_action(envelope, matrix, koszul_differential(envelope, elem))
                if lhs != rhs:
                    report.append(
                        f"matrix {idx}: differential not equivariant at position {d} "
                        f"on wedge {w}")
    return report


def _rank_of_map(field, basis, mapper, target_index):
    solver = LinSolver(field)
    for b in basis:
        image = mapper(b)
        vec = {}
        for key, c in image.items():
            vec[target_index[key]] = c
        if vec:
            solver.add(vec)
    return solver.rank


def bounded_exactness(n: int, filt: int, field: Field, cap: int = 200000):
    """Homology dimensions of the filtration piece of the resolution.

    Position d keeps enveloping filtration at most filt - d, which the
    differential respects.  Expected: zero homology at every positive
    position and an augmentation cokernel matching the dimension of the
    filtered Weyl algebra, which is also reported.
    """
    if n > 2:
        raise SizeGuard("resolution checks are guarded to n <= 2")
    algebra = WeylAlgebra(n, field)
    envelope = WeylEnvelope(algebra)
    positions = []
    for d in range(2 * n + 1):
        positions.append(_position_basis(algebra, d, filt - d))
    total = sum(len(b) for b in positions)
    if total > cap:
        raise SizeGuard(f"truncated complex has dimension {total} > cap {cap}")
    indexes = [{key: i for i, key in enumerate(basis)} for basis in positions]
    ranks = [0] * (2 * n + 2)  # ranks[d] = rank of the map out of position d
    for d in range(1, 2 * n + 1):
        if not positions[d]:
            continue
        ranks[d] = _rank_of_map(
            field, ({(w, p): field.one()} for (w, p) in positions[d]),
            lambda e: koszul_differential(envelope, e),
            indexes[d - 1])
    homology = {}
    for d in range(1, 2 * n + 1):
        homology[d] = len(positions[d]) - ranks[d] - ranks[d + 1]
    cokernel = len(positions[0]) - ranks[1]
    # sanity: the augmentation kills the image of the first differential
    for (w, p) in positions[1][: min(len(positions[1]), 200)]:
        image = koszul_differential(envelope, {(w, p): field.one()})
        collapsed = algebra.zero()
        for key, c in image.items():
            collapsed = algebra.add(collapsed,
                                    envelope.resolution_augmentation({key[1]: c}))
        if collapsed:
            raise AssertionError("augmentation does not annihilate the differential image")
    expected_cokernel = comb(filt + 2 * n, 2 * n)
    return {
        "dimensions": [len(b) for b in positions],
        "ranks": ranks[1:2 * n + 1],
        "homology": homology,
        "augmentation_cokernel": cokernel,
        "expected_cokernel": expected_cokernel,
    }


def dual_top_concentration(n: int, filt: int, field: Field, cap: int = 200000):
    """Homology of the filtered dual complex: expected concentrated at the
    top position, where the multiplication map induces the comparison."""
    if n > 2:
        raise SizeGuard("resolution checks are guarded to n <= 2")
    algebra = WeylAlgebra(n, field)
    envelope = WeylEnvelope(algebra)
    top = 2 * n
    positions = []
    for d in range(top + 1):
        positions.append(_position_basis(algebra, d, filt - (top - d)))
    total = sum(len(b) for b in positions)
    if total > cap:
        raise SizeGuard(f"truncated dual complex has dimension {total} > cap {cap}")
    indexes = [{key: i for i, key in enumerate(basis)} for basis in positions]
    ranks = [0] * (top + 1)  # ranks[d] = rank of the map from position d to d+1
    for d in range(top):
        if not positions[d]:
            continue
        ranks[d] = _rank_of_map(
            field, ({(w, p): field.one()} for (w, p) in positions[d]),
            lambda e: dual_differential(envelope, e),
            indexes[d + 1])
    homology = {}
    for d in range(top + 1):
        incoming = ranks[d - 1] if d > 0 else 0
        outgoing = ranks[d] if d < top else 0
        homology[d] = len(positions[d]) - incoming - outgoing
    # multiplication off the top must kill the incoming image
    if top >= 1:
        for (w, p) in positions[top - 1][: min(len(positions[top - 1]), 200)]:
            image = dual_differential(envelope, {(w, p): field.one()})
            collapsed = algebra.zero()
            for key, c in image.items():
                collapsed = algebra.add(collapsed,
                                        envelope.top_multiplication({key[1]: c}))
            if collapsed:
                raise AssertionError("top multiplication does not annihilate the image")
    expected_top = comb(filt + 2 * n, 2 * n)
    return {
        "dimensions": [len(b) for b in positions],
        "homology": homology,
        "top_homology": homology[top],
        "expected_top": expected_top,
    }
