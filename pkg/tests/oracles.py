"""Independent brute-force oracles for cross-checking the library.

Everything here is written from scratch on purpose: its own path
enumeration, its own dense row reduction, its own cyclic derivative for the
ungraded case.  Nothing imports skewgin's linear algebra.
"""

from fractions import Fraction


def dense_rank(rows, p=None):
    """Rank of a dense matrix by plain Gaussian elimination.

    Entries are Fractions/ints (p None) or ints reduced mod the prime p.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot = None
        for r in range(rank, len(rows)):
            v = rows[r][col] if p is None else rows[r][col] % p
            if v != 0:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r == rank:
                continue
            v = rows[r][col]
            if p is None:
                if v != 0:
                    f = Fraction(v, pv)
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
            else:
                v %= p
                if v != 0:
                    f = (v * pow(pv, p - 2, p)) % p
                    rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def enumerate_paths(arrows, length, vertices):
    """All (src, arrow-name tuple, tgt) triples of exactly the given length.

    arrows: dict name -> (src, tgt).
    """
    result = []
    for v in sorted(vertices):
        stack = [(v, ())]
        for _ in range(length):
            nxt = []
            for at, word in stack:
                for name, (s, t) in sorted(arrows.items()):
                    if s == at:
                        nxt.append((t, word + (name,)))
            stack = nxt
        result.extend((v, word, at) for at, word in stack)
    return result


def naive_cyclic_derivative(cycle, arrow):
    """All cuts of an ungraded cycle word at the given arrow: p1.a.p2 -> p2.p1."""
    out = []
    for i, name in enumerate(cycle):
        if name == arrow:
            out.append(cycle[i + 1:] + cycle[:i])
    return out


def brute_jacobian_dims(vertices, arrows, potential_terms, bound, p=None):
    """Length-graded dimensions of the path algebra modulo derivative relations.

    arrows: dict name -> (src, tgt); potential_terms: list of (int coeff,
    arrow-name tuple); all arrows ungraded and the potential terms all of
    one length.  Dense row reduction over Q or GF(p).
    """
    relations = []  # (start vertex, end vertex, dict word -> coeff)
    for a in sorted(arrows):
        rel = {}
        for coeff, cycle in potential_terms:
            for cut in naive_cyclic_derivative(cycle, a):
                rel[cut] = rel.get(cut, 0) + coeff
        rel = {w: c for w, c in rel.items() if (c % p != 0 if p else c != 0)}
        if rel:
            relations.append((arrows[a][1], arrows[a][0], rel))

    rel_len = None
    for _, _, rel in relations:
        rel_len = len(next(iter(rel)))

    dims = []
    for ell in range(bound + 1):
        layer = enumerate_paths(arrows, ell, vertices)
        index = {(s, w): i for i, (s, w, _) in enumerate(layer)}
        if not relations or ell < rel_len:
            dims.append(len(layer))
            continue
        rows = []
        free = ell - rel_len
        for s in range(free + 1):
            lefts = enumerate_paths(arrows, s, vertices)
            rights = enumerate_paths(arrows, free - s, vertices)
            for psrc, pword, ptgt in lefts:
                for rstart, rend, rel in relations:
                    if ptgt != rstart:
                        continue
                    for qsrc, qword, _ in rights:
                        if qsrc != rend:
                            continue
                        row = [0] * len(layer)
                        for w, c in rel.items():
                            row[index[(psrc, pword + w + qword)]] += c
                        if any(row):
                            rows.append(row)
        dims.append(len(layer) - dense_rank(rows, p))
    return dims
