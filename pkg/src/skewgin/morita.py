"""Morita reduction of a skew group algebra to a quiver presentation.

Pipeline: orbit data for the vertex action, one stabilizer idempotent set
per orbit representative, the arrow bimodule inside the crossed product,
its corner under the total idempotent, the reduced quiver spanned by a
deterministic corner basis, the multiplicative embedding of the reduced
path algebra, and (for the untwisted-grading case) transport of the
potential through the corner together with dimension comparisons.

Conventions: orbit representatives are the least vertex name per orbit;
kappa[v] is the least group element moving v onto its representative.  The
arrow bimodule for representatives (i, j) is spanned, over diagonal-orbit
representatives (i', j') of the vertex-pair orbits, by the products

    g1 . kappa[i'] . (arrows i' -> j') . kappa[j']^-1 . g2

with g1 in the stabilizer of i and g2 in the stabilizer of j.  The twist
placement is forced: kappa[i'] carries i' onto i so the left stabilizer
idempotent acts as the unit, and kappa[j']^-1 (not kappa[j']) keeps right
multiplication by the stabilizer algebra of j inside the space.  Our
least-pair representatives always have i' = i, making the left twist the
identity.
"""

from __future__ import annotations

from .action import QuiverAction, is_potential_invariant, validate_action
from .crossed import (CrossedElement, basis_index, commutator_basis,
                      crossed_basis, expand_certificate, merge_certificate,
                      vectorize)
from .errors import (BasisExpressFailure, DegreeMismatch, IncompleteIdempotents,
                     NoSolution, NotInvariantPotential)
from .ginzburg import jacobian_truncation
from .groups import GroupAlgebra, IdempotentSet, abelian_idempotents, validate_idempotent_set
from .linalg import LinSolver, express_incremental
from .potential import Potential, canonicalize, cyclic_derivative, cycle_length_of
from .quiver import AlgElement, Arrow, GradedQuiver, Path, basis_up_to, path_sort_key


def orbit_data(action: QuiverAction):
    """Representatives, the kappa map, and stabilizers of the vertex action.

    Returns (reps, kappa, stabilizers): reps sorted by name; kappa[v] the
    least group element with kappa[v].v a representative (identity on
    representatives); stabilizers[v] the sorted element list fixing v.
    """
    G = action.group
    vertices = sorted(action.quiver.vertices)
    orbit_of = {}
    for v in vertices:
        orbit = sorted({action.act_vertex(g, v) for g in G.elements()})
        orbit_of[v] = orbit[0]
    reps = sorted({orbit_of[v] for v in vertices})
    kappa = {}
    for v in vertices:
        if v in reps:
            kappa[v] = G.identity
        else:
            kappa[v] = min(g for g in G.elements()
                           if action.act_vertex(g, v) == orbit_of[v])
    stabilizers = {v: [g for g in G.elements() if action.act_vertex(g, v) == v]
                   for v in vertices}
    return reps, kappa, stabilizers


def _group_unit(action, g: int) -> CrossedElement:
    return CrossedElement.from_alg(action, AlgElement.unit(action.quiver, action.field), g)


def _diagonal_orbit_reps(action, orbit_a, orbit_b):
    """Least-pair representatives of the diagonal orbits on orbit_a x orbit_b."""
    G = action.group
    pairs = {(x, y) for x in orbit_a for y in orbit_b}
    reps = []
    while pairs:
        seed = min(pairs)
        orbit = {(action.act_vertex(g, seed[0]), action.act_vertex(g, seed[1]))
                 for g in G.elements()}
        reps.append(min(orbit))
        pairs -= orbit
    return sorted(reps)


class BimoduleEntry:
    __slots__ = ("src_rep", "tgt_rep", "degree", "element")

    def __init__(self, src_rep, tgt_rep, degree, element):
        self.src_rep = src_rep
        self.tgt_rep = tgt_rep
        self.degree = degree
        self.element = element


def build_bimodule(action: QuiverAction, reps, kappa, stabilizers, reverse=False):
    """Deterministic basis of the arrow bimodule inside the crossed product.

    Entries carry the representative pair and the common arrow degree of
    their terms; within each (pair, degree) slot the basis is the first
    linearly independent subset of the generating products.  With reverse
    the candidate products are scanned backwards, which changes the chosen
    basis but never the spanned subspace.
    """
    G, quiver, field = action.group, action.quiver, action.field
    orbit_rep = {v: min(action.act_vertex(g, v) for g in G.elements())
                 for v in quiver.vertices}
    index1 = basis_index(action, 1)
    entries = []
    for i in reps:
        orbit_i = sorted(v for v in quiver.vertices if orbit_rep[v] == i)
        for j in reps:
            orbit_j = sorted(v for v in quiver.vertices if orbit_rep[v] == j)
            slot_candidates = {}  # degree -> list of CrossedElement
            for (i2, j2) in _diagonal_orbit_reps(action, orbit_i, orbit_j):
                left_twist = _group_unit(action, kappa[i2])
                right_twist = _group_unit(action, G.inv(kappa[j2]))
                arrows = sorted(a.name for a in quiver.arrows
                                if a.src == i2 and a.tgt == j2)
                for g1 in stabilizers[i]:
                    u1 = _group_unit(action, g1)
                    for name in arrows:
                        mid = CrossedElement.from_alg(
                            action, AlgElement.from_arrow(quiver, field, name))
                        deg = quiver.arrow(name).deg
                        for g2 in stabilizers[j]:
                            z = u1 * left_twist * mid * right_twist * _group_unit(action, g2)
                            if not z.is_zero():
                                slot_candidates.setdefault(deg, []).append(z)
            for deg in sorted(slot_candidates):
                solver = LinSolver(field)
                picks = slot_candidates[deg]
                if reverse:
                    picks = list(reversed(picks))
                for z in picks:
                    if solver.add(vectorize(z, index1)):
                        entries.append(BimoduleEntry(i, j, deg, z))
    return entries


class MoritaData:
    """Everything the reduction produces, ready for embedding and transport."""

    def __init__(self, action, reps, kappa, stabilizers, stab_groups, idem_sets,
                 bimodule, qprime, vertex_info, vertex_idems, arrow_embed):
        self.action = action
        self.field = action.field
        self.reps = reps
        self.kappa = kappa
        self.stabilizers = stabilizers
        self.stab_groups = stab_groups      # rep -> (FiniteGroup, ambient indices)
        self.idem_sets = idem_sets          # rep -> IdempotentSet over the subgroup
        self.bimodule = bimodule
        self.qprime = qprime
        self.vertex_info = vertex_info      # qprime vertex -> (rep, idempotent idx)
        self.vertex_idems = vertex_idems    # qprime vertex -> CrossedElement
        self.arrow_embed = arrow_embed      # qprime arrow name -> CrossedElement

    def total_idempotent(self) -> CrossedElement:
        total = CrossedElement.zero(self.action)
        for v in self.qprime.vertices:
            total = total + self.vertex_idems[v]
        return total

    def choices(self):
        """Canonical record of every deterministic choice, for reports."""
        G = self.action.group
        return {
            "orbit_representatives": list(self.reps),
            "kappa": {v: G.names[g] for v, g in sorted(self.kappa.items())},
            "stabilizer_orders": {v: len(self.stabilizers[v]) for v in self.reps},
            "irreducible_dims": {v: list(self.idem_sets[v].dims) for v in self.reps},
        }


def _lift_idempotent(action, subgroup_ambient, coeffs: dict, rep: str) -> CrossedElement:
    lifted = {subgroup_ambient[k]: c for k, c in coeffs.items()}
    return CrossedElement.from_group_algebra(action, rep, lifted)


def build_morita(action: QuiverAction, idempotents_spec=None, reverse=False) -> MoritaData:
    """Run the reduction pipeline up to the reduced quiver and embedding.

    idempotents_spec optionally maps an orbit representative to a pair
    (vectors, dims): scalar coefficient rows over that stabilizer's
    elements (in ambient order) with declared irreducible dimensions.
    Stabilizers without a supplied set must be abelian.  reverse flips the
    deterministic basis scan; presentations change, dimension data must
    not.
    """
    problems = validate_action(action)
    if problems:
        raise ValueError("invalid action: " + "; ".join(problems))
    field = action.field
    group = action.group
    reps, kappa, stabilizers = orbit_data(action)

    stab_groups = {}
    idem_sets = {}
    for rep in reps:
        sub, ambient = group.subgroup(stabilizers[rep])
        stab_groups[rep] = (sub, ambient)
        supplied = (idempotents_spec or {}).get(rep)
        if supplied is not None:
            vectors, dims = supplied
            algebra = GroupAlgebra(sub, field)
            elements = []
            for vec in vectors:
                if len(vec) != sub.size:
                    raise IncompleteIdempotents(
                        f"idempotent vector for {rep} has {len(vec)} entries, "
                        f"stabilizer has {sub.size}")
                elements.append({k: c for k, c in enumerate(vec) if c != field.zero()})
            idem_set = IdempotentSet(algebra, elements, list(dims))
        else:
            try:
                idem_set = abelian_idempotents(sub, field)
            except Exception as exc:
                raise IncompleteIdempotents(
                    f"stabilizer of {rep} needs a supplied idempotent set: {exc}") from exc
        failures = validate_idempotent_set(idem_set)
        if failures:
            raise IncompleteIdempotents(
                f"idempotent set for {rep} failed validation: " + "; ".join(failures))
        idem_sets[rep] = idem_set

    bimodule = build_bimodule(action, reps, kappa, stabilizers, reverse=reverse)

    # reduced quiver: one vertex per (representative, idempotent); arrows are
    # a deterministic basis of each corner slot of the bimodule
    vertex_info = {}
    vertex_idems = {}
    vertex_names = []
    for rep in reps:
        _, ambient = stab_groups[rep]
        for j, coeffs in enumerate(idem_sets[rep].elements):
            name = f"{rep}:{j}"
            vertex_names.append(name)
            vertex_info[name] = (rep, j)
            vertex_idems[name] = _lift_idempotent(action, ambient, coeffs, rep)

    index1 = basis_index(action, 1)
    arrows = []
    arrow_embed = {}
    counter = 0
    for v1 in vertex_names:
        rep1 = vertex_info[v1][0]
        e1 = vertex_idems[v1]
        for v2 in vertex_names:
            rep2 = vertex_info[v2][0]
            e2 = vertex_idems[v2]
            degrees = sorted({entry.degree for entry in bimodule
                              if entry.src_rep == rep1 and entry.tgt_rep == rep2})
            for deg in degrees:
                solver = LinSolver(field)
                slot = [entry for entry in bimodule
                        if (entry.src_rep, entry.tgt_rep, entry.degree) == (rep1, rep2, deg)]
                if reverse:
                    slot = list(reversed(slot))
                for entry in slot:
                    cornered = e1 * entry.element * e2
                    if cornered.is_zero():
                        continue
                    if solver.add(vectorize(cornered, index1)):
                        name = f"m{counter}"
                        counter += 1
                        arrows.append(Arrow(name, v1, v2, deg))
                        arrow_embed[name] = cornered
    qprime = GradedQuiver(vertex_names, arrows)
    return MoritaData(action, reps, kappa, stabilizers, stab_groups, idem_sets,
                      bimodule, qprime, vertex_info, vertex_idems, arrow_embed)


def embed(md: MoritaData, x: AlgElement) -> CrossedElement:
    """Multiplicative embedding of a reduced path-algebra element."""
    out = CrossedElement.zero(md.action)
    for path, coeff in x.terms.items():
        acc = md.vertex_idems[path.source]
        for name in path.arrows:
            acc = acc * md.arrow_embed[name]
        out = out + acc.scale(coeff)
    return out


def check_embedding(md: MoritaData, bound: int):
    """Injectivity and multiplicativity of the embedding, length by length.

    Returns a report list; empty means every length component up to the
    bound embeds with full rank and products match.
    """
    report = []
    qprime, field = md.qprime, md.field
    paths = basis_up_to(qprime, bound)
    by_len = {}
    for p in paths:
        by_len.setdefault(len(p.arrows), []).append(p)
    embedded = {}
    for ell in range(bound + 1):
        layer = by_len.get(ell, [])
        if not layer:
            continue
        index = basis_index(md.action, ell)
        solver = LinSolver(field)
        for p in layer:
            el = embed(md, AlgElement.from_path(qprime, field, p))
            embedded[p] = el
            solver.add(vectorize(el, index))
        if solver.rank != len(layer):
            report.append(
                f"length {ell}: embedded rank {solver.rank} < {len(layer)} paths; "
                "the reduced path algebra does not inject")
    pair_bound = min(bound, 2)
    for p, ep in embedded.items():
        for q, eq in embedded.items():
            if len(p.arrows) + len(q.arrows) > pair_bound:
                continue
            pq = qprime.compose(p, q)
            if pq is None:
                rhs = CrossedElement.zero(md.action)
            elif pq in embedded:
                rhs = embedded[pq]
            else:
                rhs = embed(md, AlgElement.from_path(qprime, field, pq))
            if ep * eq != rhs:
                report.append(f"embedding is not multiplicative on {p} * {q}")
    return report


def check_fullness(md: MoritaData, bound: int):
    """Span test: the two-sided span of the total idempotent must exhaust
    every length component up to the bound."""
    report = []
    action, field = md.action, md.field
    e = md.total_idempotent()
    for ell in range(bound + 1):
        index = basis_index(action, ell)
        dim = len(index)
        if dim == 0:
            continue
        solver = LinSolver(field)
        done = False
        for s in range(ell + 1):
            for u in crossed_basis(action, s):
                eu = CrossedElement.from_pair(action, *u) * e
                if eu.is_zero():
                    continue
                for v in crossed_basis(action, ell - s):
                    w = eu * CrossedElement.from_pair(action, *v)
                    if not w.is_zero():
                        solver.add(vectorize(w, index))
                        if solver.rank == dim:
                            done = True
                            break
                if done:
                    break
            if done:
                break
        if solver.rank != dim:
            report.append(
                f"length {ell}: idempotent span has rank {solver.rank} < {dim}; "
                "the corner misses part of the algebra")
    return report


def transport_potential(w: Potential, md: MoritaData):
    """Move a potential through the corner onto the reduced quiver.

    Only for the untwisted grading (all arrow degrees 0).  Returns
    (reduced potential, certificate); the certificate lists commutator
    pairs with coefficients and re-expands exactly to the difference
    between the embedded result and the original element.
    """
    action, field = md.action, md.field
    quiver = action.quiver
    if any(a.deg != 0 for a in quiver.arrows):
        raise DegreeMismatch("potential transport requires all arrow degrees 0")
    if not is_potential_invariant(w, action):
        raise NotInvariantPotential("the potential is not fixed by the group action")
    if w.is_zero():
        return Potential(md.qprime, field), []
    ell = cycle_length_of(w)
    if ell is None:
        raise DegreeMismatch("potential transport requires one cycle length")

    x = CrossedElement.from_alg(action, w.as_element())
    index = basis_index(md.action, ell)
    qprime = md.qprime
    cycles = [p for p in basis_up_to(qprime, ell)
              if len(p.arrows) == ell and qprime.is_cycle(p)]
    solver = LinSolver(field)
    embedded_cycles = {}
    for p in cycles:
        el = embed(md, AlgElement.from_path(qprime, field, p))
        embedded_cycles[p] = el
        if not el.is_zero():
            solver.add(vectorize(el, index), label=("cycle", p))
    target = vectorize(x, index)
    combo = solver.express(target)
    commutators = None
    if combo is None:
        commutators = commutator_basis(action, ell)
        # feed commutators touching the unreduced part of the target first
        support = set(solver.residual(target))
        vectors = [vectorize(term.element, index) for term in commutators]
        order = sorted(range(len(commutators)),
                       key=lambda k: 0 if support & set(vectors[k]) else 1)
        combo = express_incremental(
            solver, ((vectors[k], ("comm", k)) for k in order), target)
    if combo is None:
        raise NoSolution(
            "the potential class has no representative in the reduced cycle span")

    # assemble the certificate for embed(reduced) - x directly: the solved
    # commutator part enters negated, and every canonical rotation u.v -> v.u
    # of a solved cycle contributes the commutator [embed(v), embed(u)],
    # expanded bilinearly over basis pairs (degrees are all zero, no signs)
    entries = []
    raw_terms = []
    for (kind, payload), coeff in combo.items():
        if kind == "comm":
            term = commutators[payload]
            entries.append(((term.u, term.v), field.neg(coeff)))
            continue
        cycle = payload
        raw_terms.append((coeff, cycle))
        rotations = [Path(qprime.arrow(cycle.arrows[j]).src,
                          cycle.arrows[j:] + cycle.arrows[:j])
                     for j in range(len(cycle.arrows))]
        best = min(range(len(rotations)), key=lambda j: path_sort_key(rotations[j]))
        if best != 0:
            head = Path(cycle.source, cycle.arrows[:best])
            tail = rotations[best]._replace(arrows=cycle.arrows[best:])
            e_tail = embed(md, AlgElement.from_path(qprime, field, tail))
            e_head = embed(md, AlgElement.from_path(qprime, field, head))
            for u_key, a in e_tail.terms.items():
                for v_key, b in e_head.terms.items():
                    entries.append(((u_key, v_key), field.mul(coeff, field.mul(a, b))))
    reduced = canonicalize(qprime, field, raw_terms)
    certificate = merge_certificate(field, entries)
    # the certificate is never trusted: re-expand and compare exactly
    difference = embed(md, reduced.as_element()) - x
    if expand_certificate(action, certificate) != difference:
        raise BasisExpressFailure("transport certificate failed re-expansion")
    return reduced, certificate


def certify_reduction(md: MoritaData, w: Potential, reduced: Potential,
                      commutators=None):
    """Certify that a reduced potential represents the original class.

    Solves embed(reduced) - (original tensor identity) as an exact
    combination of commutators, re-expands the certificate, and returns it.
    Raises BasisExpressFailure when the classes differ, which is how a
    perturbed reduced potential is caught.
    """
    action, field = md.action, md.field
    x = CrossedElement.from_alg(action, w.as_element())
    difference = embed(md, reduced.as_element()) - x
    if difference.is_zero():
        return []
    ell = difference.pure_length()
    index = basis_index(action, ell)
    if commutators is None:
        commutators = commutator_basis(action, ell)
    comm_solver = LinSolver(field)
    target = vectorize(difference, index)
    # feed commutators that touch the difference's support first: the
    # expression usually stops long before the full spanning set is in
    support = set(target)
    vectors = [vectorize(term.element, index) for term in commutators]
    order = sorted(range(len(commutators)),
                   key=lambda k: 0 if support & set(vectors[k]) else 1)
    expressed = express_incremental(
        comm_solver, ((vectors[k], k) for k in order), target)
    if expressed is None:
        raise BasisExpressFailure(
            "embedded reduced potential differs from the original by more "
            "than commutators")
    certificate = [((commutators[k].u, commutators[k].v), coeff)
                   for k, coeff in expressed.items()]
    if expand_certificate(action, certificate) != difference:
        raise BasisExpressFailure("certificate failed re-expansion")
    return certificate


def _relation_span_stable(w: Potential, action: QuiverAction) -> bool:
    """The derivative relations must be permuted (as a span) by the action."""
    quiver, field = action.quiver, action.field
    relations = [cyclic_derivative(w, a.name) for a in quiver.arrows]
    relations = [r for r in relations if not r.is_zero()]
    if not relations:
        return True
    solver = LinSolver(field)
    for r in relations:
        solver.add(dict(r.terms))
    for g in action.group.elements():
        for r in relations:
            if not solver.contains(dict(action.act(g, r).terms)):
                return False
    return True


def morita_dimension_check(md: MoritaData, w: Potential, reduced_w: Potential, bound: int):
    """Compare corner dimensions of the quotient crossed product against the
    reduced Jacobian dimensions, length by length.

    Returns (rows, ok): rows of (length, corner dim, reduced dim).  The
    left side quotients the path algebra by the derivative relations first
    and then crosses with the group, which is valid because the action
    permutes the relation span; that fact is asserted at runtime.
    """
    action, field = md.action, md.field
    quiver = action.quiver
    if not _relation_span_stable(w, action):
        raise NotInvariantPotential("derivative relations are not stable under the action")
    cyc_len = cycle_length_of(w)
    if cyc_len is None:
        raise DegreeMismatch("dimension check requires one cycle length")
    relations = [cyclic_derivative(w, a.name) for a in quiver.arrows]
    relations = [r for r in relations if not r.is_zero()]
    rel_len = cyc_len - 1

    paths = basis_up_to(quiver, bound)
    by_len = {}
    for p in paths:
        by_len.setdefault(len(p.arrows), []).append(p)

    e = md.total_idempotent()
    rows = []
    right = jacobian_truncation(md.qprime, reduced_w, bound)
    for ell in range(bound + 1):
        index = basis_index(action, ell)
        solver = LinSolver(field)
        if relations and ell >= rel_len:
            free = ell - rel_len
            for s in range(free + 1):
                for p in by_len.get(s, []):
                    left_el = AlgElement.from_path(quiver, field, p)
                    for rel in relations:
                        lr = left_el * rel
                        if lr.is_zero():
                            continue
                        for q in by_len.get(free - s, []):
                            vec = lr * AlgElement.from_path(quiver, field, q)
                            if vec.is_zero():
                                continue
                            for g in action.group.elements():
                                solver.add({index[(path, g)]: c
                                            for path, c in vec.terms.items()})
        rank_relations = solver.rank
        for key in crossed_basis(action, ell):
            b = CrossedElement.from_pair(action, *key)
            cornered = e * b * e
            if not cornered.is_zero():
                solver.add(vectorize(cornered, index))
        left_dim = solver.rank - rank_relations
        rows.append((ell, left_dim, right[ell]))
    ok = all(l == r for _, l, r in rows)
    return rows, ok
