"""Independent oracles shared by the test modules."""

import itertools
from fractions import Fraction

import sympy

from thetapair import fpmod as fm
from thetapair.fpmod import FPModule
from thetapair.polyring import PolyRing

P3 = PolyRing(["x", "y", "z"])


def colength_sympy(gens, variables):
    """dim P/I from sympy's Groebner basis (independent implementation), for m-primary I."""
    X = sympy.symbols(variables)
    G = sympy.groebner([sympy.sympify(str(g).replace("^", "**")) for g in gens], *X, order="grevlex", domain="QQ")
    lead = [sympy.Poly(g, *X).monoms(order="grevlex")[0] for g in G.exprs]
    bound = max(sum(m) for m in lead) + 1
    count = 0
    for e in itertools.product(range(bound + 1), repeat=len(X)):
        if not any(all(p <= q for p, q in zip(m, e)) for m in lead):
            count += 1
    return count


def rank_over_q(rows):
    rows = [list(map(Fraction, r)) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col] / rows[rank][col]
                rows[i] = [u - c * v for u, v in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def dims_by_linear_algebra(m: FPModule, upto):
    """dim M_k = dim F_k - rank(span of monomial multiples of relations in degree k)."""
    ring = m.ring
    degs = m.degrees or (0,) * m.rank
    out = []
    for k in range(upto + 1):
        basis = [(c, e) for c in range(m.rank) for e in monos(ring.nvars, k - degs[c])]
        index = {t: i for i, t in enumerate(basis)}
        rows = []
        for col in m.relations_over_P():
            d = fm.column_degree(col, degs)
            if d is None or d > k:
                continue
            for e in monos(ring.nvars, k - d):
                row = [0] * len(basis)
                for c, p in enumerate(col):
                    for mono, coef in p.terms.items():
                        row[index[(c, tuple(u + v for u, v in zip(mono, e)))]] += coef
                rows.append(row)
        out.append(len(basis) - (rank_over_q(rows) if rows and basis else 0))
    return out


def monos(n, d):
    if d < 0:
        return []
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


def random_graded_module(rng):
    ring = P3
    r = rng.randint(1, 2)
    degs = tuple(rng.randint(0, 1) for _ in range(r))
    cols = []
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(max(degs) + 1, max(degs) + 2)
        col = []
        for c in range(r):
            p = ring.zero()
            for e in rng.sample(monos(3, d - degs[c]), 2):
                p = p + ring.monomial(e, rng.choice([1, -1, 2]))
            col.append(p if rng.random() < 0.8 else ring.zero())
        if any(col):
            cols.append(tuple(col))
    return FPModule(ring, r, tuple(cols), "P", None, degs)
