"""Seeded random inputs shared by property and acceptance tests."""

import itertools


def random_poly(rng, ring, max_degree, coeff=10, terms=3):
    K = ring.field
    acc = ring.zero
    exps = [e for e in itertools.product(range(max_degree + 1), repeat=ring.nvars) if sum(e) <= max_degree]
    for _ in range(terms):
        e = rng.choice(exps)
        c = rng.randint(-coeff, coeff)
        acc = acc + ring.monomial(e, K.from_int(c))
    return acc


def random_regular_sequence(rng, ring, n, coeff=10):
    """f_i = c x_i^d + (terms of lower degree) over distinct variables x_i.

    The leading monomials are pure powers of distinct variables, so they are
    pairwise coprime and the sequence is regular by construction.
    """
    K = ring.field
    chosen = rng.sample(range(ring.nvars), n)
    seq = []
    for i in chosen:
        d = rng.randint(1, 3)
        c = 0
        while K.is_zero(K.from_int(c)):
            c = rng.randint(1, coeff)
        e = [0] * ring.nvars
        e[i] = d
        f = ring.monomial(tuple(e), K.from_int(c))
        if d > 1:
            f = f + random_poly(rng, ring, d - 1, coeff)
        else:
            f = f + ring.constant(K.from_int(rng.randint(-coeff, coeff)))
        seq.append(f)
    return seq


def random_unitriangular(rng, ring, k, max_degree=1):
    from cwcycles.komplex import PolyMatrix
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            if i == j:
                row.append(ring.one)
            elif j > i:
                row.append(random_poly(rng, ring, max_degree, coeff=3, terms=2))
            else:
                row.append(ring.zero)
        rows.append(row)
    return PolyMatrix(ring, rows, k)
