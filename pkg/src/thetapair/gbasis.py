"""Gröbner bases (Buchberger) and standard bases (Mora) for submodules of P^r.

Module elements are handled internally as dictionaries keyed by
``(component, exps)``; the public surface speaks in ``FreeVector`` tuples of
:class:`Polynomial`.  Module orders are position-over-term with e_0 largest.

Every basis element can carry its representation in the input generators, so
the same routine yields lifts and (Schreyer-style) syzygies: an S-vector whose
tracked reduction ends in zero gives a relation among the inputs.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Sequence

from .polyring import MonomialOrder, Polynomial, PolyRing

FreeVector = tuple  # tuple[Polynomial, ...]


class NotInSubmodule(ValueError):
    """Raised by :func:`lift` when the target has a nonzero normal form."""


# ---------- conversions ----------


def to_vec(v: Sequence[Polynomial]) -> dict:
    out = {}
    for i, p in enumerate(v):
        for e, c in p.terms.items():
            out[(i, e)] = c
    return out


def from_vec(d: dict, rank: int, ring: PolyRing) -> FreeVector:
    comps = [dict() for _ in range(rank)]
    for (i, e), c in d.items():
        comps[i][e] = c
    return tuple(Polynomial(ring, t) for t in comps)


def _poly_dict(p: Polynomial) -> dict:
    return {(0, e): c for e, c in p.terms.items()}


def _dict_poly(d: dict, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {e: c for (_, e), c in d.items()})


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _sub(a, b):
    return tuple(map(operator.sub, a, b))


# ---------- basis elements ----------


class _Elt:
    __slots__ = ("vec", "lt", "lc", "sugar", "ecart", "q", "a")

    def __init__(self, vec, lt, lc, sugar, ecart, q=None, a=None):
        self.vec = vec
        self.lt = lt
        self.lc = lc
        self.sugar = sugar
        self.ecart = ecart
        self.q = q
        self.a = a


def _maxdeg(h: dict, order: MonomialOrder) -> int:
    deg = order.degree
    return max(deg(e) for (_, e) in h)


def _lead(h: dict, order: MonomialOrder):
    tk = order.term_key
    return max(h, key=tk)


def _find_divisor(cands, t, local: bool, order):
    exps = t[1]
    best = None
    for g in cands:
        if _divides(g.lt[1], exps):
            if not local:
                return g
            if best is None or g.ecart < best.ecart:
                best = g
    return best


def _reduce(h: dict, a, q, by_comp: dict, order: MonomialOrder, F, full: bool):
    """Reduce h by the elements in ``by_comp``.

    Tracks ``h = a*v + q*F`` for the caller's choice of starting a and q.
    Global orders: ordinary division (full or top).  Local orders: Mora's
    normal form with ecart, which only guarantees the leading term is
    irreducible; ``a`` then picks up a unit factor.
    """
    local = order.is_local
    if local:
        by_comp = {c: list(v) for c, v in by_comp.items()}
    rem = {}
    while h:
        t = _lead(h, order)
        cands = by_comp.get(t[0])
        g = _find_divisor(cands, t, local, order) if cands else None
        if g is None:
            if full and not local:
                rem[t] = h.pop(t)
                continue
            break
        c = h[t]
        if local:
            eh = _maxdeg(h, order) - order.degree(t[1])
            if g.ecart > eh:
                cands.append(
                    _Elt(dict(h), t, c, 0, eh,
                         None if q is None else dict(q),
                         None if a is None else dict(a))
                )
        coef = F.div(c, g.lc)
        shift = _sub(t[1], g.lt[1])
        F.axpy(h, coef, shift, g.vec)
        if q is not None and g.q:
            F.axpy(q, coef, shift, g.q)
        if a is not None and g.a:
            F.axpy(a, coef, shift, g.a)
    rem.update(h)
    return rem, a, q


@dataclass
class SubmoduleBasis:
    """A Gröbner/standard basis of the span of ``generators`` in P^rank.

    ``elements`` are the basis vectors; when built with ``track=True`` each
    has its representation in the generators (including the f*e_i columns
    appended for a ring modulus) in ``representations``.
    """

    ring: PolyRing
    rank: int
    order: MonomialOrder
    generators: list
    elements: list
    ring_modulus: Polynomial | None = None
    is_standard: bool = True
    representations: list | None = None
    syzygy_vectors: list | None = field(default=None, repr=False)
    _elts: list = field(default_factory=list, repr=False)

    @property
    def n_all_generators(self) -> int:
        return len(self.generators) + (self.rank if self.ring_modulus is not None else 0)

    def leading_terms(self) -> list:
        return [e.lt for e in self._elts]

    def dump(self) -> list[str]:
        """Basis elements in the canonical text form."""
        return ["[" + ", ".join(str(p) for p in v) + "]" for v in self.elements]


def _all_gens(gens, rank, ring, modulus):
    vecs = [to_vec(g) for g in gens]
    if modulus is not None:
        for i in range(rank):
            vecs.append({(i, e): c for e, c in modulus.terms.items()})
    return vecs


def _pair_sugar(gi: _Elt, gj: _Elt, lcm, order):
    deg = order.degree
    return max(gi.sugar + deg(_sub(lcm, gi.lt[1])), gj.sugar + deg(_sub(lcm, gj.lt[1])))


def _update_pairs(pairs: list, elts: list, k: int, order) -> list:
    """Gebauer-Möller update without the product criterion (invalid for modules)."""
    gk = elts[k]
    comp, mk = gk.lt
    kept = []
    for p in pairs:
        i, j, lcm, comp_p = p[2], p[3], p[4], p[5]
        if (
            comp_p == comp
            and _divides(mk, lcm)
            and lcm != _lcm(elts[i].lt[1], mk)
            and lcm != _lcm(elts[j].lt[1], mk)
        ):
            continue
        kept.append(p)
    cands = {}
    for i in range(k):
        if elts[i].lt[0] == comp:
            cands[i] = _lcm(elts[i].lt[1], mk)
    lcms = list(cands.items())
    for i, L in lcms:
        # M: a strictly smaller lcm already covers this pair
        if any(L2 != L and _divides(L2, L) for _, L2 in lcms):
            continue
        # F: one pair per lcm, lowest index
        if any(L2 == L and i2 < i for i2, L2 in lcms):
            continue
        s = _pair_sugar(elts[i], gk, L, order)
        kept.append((s, order.degree(L), i, k, L, comp))
    return kept


def _spair(gi: _Elt, gj: _Elt, lcm, F, track: bool):
    ci = F.div(F.one, gi.lc)
    cj = F.div(F.one, gj.lc)
    si, sj = _sub(lcm, gi.lt[1]), _sub(lcm, gj.lt[1])
    h = {}
    F.axpy(h, F.neg(ci), si, gi.vec)
    F.axpy(h, cj, sj, gj.vec)
    q = None
    if track:
        q = {}
        if gi.q:
            F.axpy(q, F.neg(ci), si, gi.q)
        if gj.q:
            F.axpy(q, cj, sj, gj.q)
    return h, q


def _make_elt(h: dict, q, order, F, sugar) -> _Elt:
    t = _lead(h, order)
    lc = h[t]
    if lc != F.one:
        inv = F.inv(lc)
        zero = tuple(0 for _ in t[1])
        h2 = {}
        F.axpy(h2, F.neg(inv), zero, h)
        h = h2
        if q is not None:
            q2 = {}
            F.axpy(q2, F.neg(inv), zero, q)
            q = q2
    md = _maxdeg(h, order)
    return _Elt(h, t, F.one, max(sugar, md), md - order.degree(t[1]), q)


def _buchberger(vecs: list, order: MonomialOrder, F, nvars: int, track: bool):
    """Core completion loop; returns (elements, syzygies-in-generator-coordinates)."""
    zero = (0,) * nvars
    elts: list[_Elt] = []
    by_comp: dict = {}
    pairs: list = []
    syz: list = []

    def add(h, q, sugar):
        g = _make_elt(h, q, order, F, sugar)
        elts.append(g)
        by_comp.setdefault(g.lt[0], []).append(g)
        pairs[:] = _update_pairs(pairs, elts, len(elts) - 1, order)

    for idx, v in enumerate(vecs):
        q = {(idx, zero): F.one} if track else None
        if not v:
            if track:
                syz.append(q)
            continue
        h, _, q = _reduce(dict(v), None, q, by_comp, order, F, full=False)
        if not h:
            if track:
                syz.append(q)
            continue
        add(h, q, _maxdeg(v, order))
    while pairs:
        best = min(range(len(pairs)), key=lambda t: pairs[t][:4])
        s, _, i, j, lcm, _ = pairs.pop(best)
        h, q = _spair(elts[i], elts[j], lcm, F, track)
        h, _, q = _reduce(h, None, q, by_comp, order, F, full=False)
        if not h:
            if track and q:
                syz.append(q)
            continue
        add(h, q, s)
    return elts, syz


def standard_basis(
    gens: Sequence[FreeVector],
    order: MonomialOrder,
    ring_modulus: Polynomial | None = None,
    *,
    rank: int | None = None,
    ring: PolyRing | None = None,
    track: bool = False,
) -> SubmoduleBasis:
    """Buchberger for global orders, Mora's tangent-cone completion for local ones.

    With ``ring_modulus=f`` the computation is over P/(f): f*e_i is appended
    to the generators.
    """
    gens = [tuple(g) for g in gens]
    if rank is None:
        if not gens:
            raise ValueError("rank required for an empty generator list")
        rank = len(gens[0])
    if ring is None:
        ring = gens[0][0].ring if gens and rank else ring_modulus.ring
    if any(len(g) != rank for g in gens):
        raise ValueError("generators of different ranks")
    F = ring.field
    vecs = _all_gens(gens, rank, ring, ring_modulus)
    elts, syz = _buchberger(vecs, order, F, ring.nvars, track)
    b = SubmoduleBasis(
        ring=ring,
        rank=rank,
        order=order,
        generators=gens,
        elements=[from_vec(g.vec, rank, ring) for g in elts],
        ring_modulus=ring_modulus,
        representations=[from_vec(g.q or {}, len(vecs), ring) for g in elts] if track else None,
        syzygy_vectors=syz if track else None,
        _elts=elts,
    )
    return b


def normal_form(v: FreeVector, basis: SubmoduleBasis, full: bool = True):
    """Return ``(remainder, unit, quotients)`` with unit*v = sum q_i*g_i + remainder.

    ``g_i`` are ``basis.elements``.  For local orders the remainder is a weak
    normal form (its leading term is not divisible by any leading term).
    """
    ring = basis.ring
    F = ring.field
    zero = ring.zero_exps
    by_comp: dict = {}
    shadow = []
    for k, g in enumerate(basis._elts):
        # coordinates in the basis elements: element k is e_k
        e = _Elt(g.vec, g.lt, g.lc, g.sugar, g.ecart, {(k, zero): F.one}, None)
        shadow.append(e)
        by_comp.setdefault(g.lt[0], []).append(e)
    a = {(0, zero): F.one}
    h, a, q = _reduce(to_vec(v), a, {}, by_comp, basis.order, F, full=full)
    unit = _dict_poly(a, ring)
    comps = [dict() for _ in basis._elts]
    for (k, e), c in q.items():
        comps[k][e] = F.neg(c)
    quotients = [Polynomial(ring, t) for t in comps]
    return from_vec(h, basis.rank, ring), unit, quotients


def reduces_to_zero(v: FreeVector, basis: SubmoduleBasis) -> bool:
    h, _, _ = _reduce(to_vec(v), None, None, _by_comp(basis), basis.order, basis.ring.field, full=False)
    return not h


def _by_comp(basis: SubmoduleBasis) -> dict:
    d: dict = {}
    for g in basis._elts:
        d.setdefault(g.lt[0], []).append(g)
    return d


def contains(basis: SubmoduleBasis, v: FreeVector) -> bool:
    """Submodule membership; order-independent as a predicate."""
    return reduces_to_zero(v, basis)


def lift(target: FreeVector, basis: SubmoduleBasis):
    """Coefficients c (one per input generator) and a unit u with u*target = sum c_j*gen_j.

    Over P/(f) the f*e_i coordinates are dropped, so the identity holds modulo f.
    For global orders u = 1.  Raises NotInSubmodule when the remainder is nonzero.
    """
    if basis.representations is None:
        raise ValueError("lift needs a basis built with track=True")
    ring = basis.ring
    F = ring.field
    zero = ring.zero_exps
    a = {(0, zero): F.one}
    h, a, q = _reduce(to_vec(target), a, {}, _by_comp(basis), basis.order, F, full=False)
    if h:
        raise NotInSubmodule("target is not in the submodule")
    unit = _dict_poly(a, ring)
    ng = len(basis.generators)
    comps = [dict() for _ in range(ng)]
    for (k, e), c in q.items():
        if k < ng:
            comps[k][e] = F.neg(c)
    coeffs = [Polynomial(ring, t) for t in comps]
    if unit.is_constant():
        inv = F.inv(unit.constant_term())
        coeffs = [c.scale(inv) for c in coeffs]
        unit = ring.one()
    return coeffs, unit


def syzygies(
    m: Sequence[FreeVector],
    order: MonomialOrder,
    ring_modulus: Polynomial | None = None,
    *,
    rank: int | None = None,
    ring: PolyRing | None = None,
    check: bool = True,
) -> list[FreeVector]:
    """Generators of the relations among the vectors in ``m``.

    Built from the tracked S-vector reductions of a standard basis of m;
    over P/(f) the f*e_i coordinates are discarded.  Each returned s
    satisfies sum s_j*m_j = 0 (mod f).
    """
    m = [tuple(v) for v in m]
    if not m:
        return []
    if rank is None:
        rank = len(m[0])
    if ring is None:
        ring = _ring_of(m, ring_modulus)
    F = ring.field
    s = len(m)
    vecs = _all_gens(m, rank, ring, ring_modulus)
    _, syz = _buchberger(vecs, order, F, ring.nvars, track=True)
    out = []
    seen = set()
    for q in syz:
        qq = {k: c for k, c in q.items() if k[0] < s}
        if not qq:
            continue
        key = frozenset(qq.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(from_vec(qq, s, ring))
    if check:
        for sv in out:
            _check_syzygy(m, sv, rank, ring, ring_modulus)
    return out


def _ring_of(m, modulus):
    for v in m:
        for p in v:
            return p.ring
    return modulus.ring


def _check_syzygy(m, sv, rank, ring, modulus):
    for i in range(rank):
        tot = ring.zero()
        for j, c in enumerate(sv):
            if c:
                tot = tot + c * m[j][i]
        if tot and (modulus is None or not divisible(tot, modulus)):
            raise AssertionError("syzygy check failed")


def divide(p: Polynomial, g: Polynomial):
    """Multivariate division of p by a single g in the ambient global order: (quotient, remainder)."""
    ring = p.ring
    F = ring.field
    order = ring.order if not ring.order.is_local else ring.global_order()
    lt = g.leading_monomial(order)
    lc = g.terms[lt]
    h = dict(p.terms)
    quo: dict = {}
    rem: dict = {}
    gt = list(g.terms.items())
    while h:
        t = max(h, key=order.key)
        c = h[t]
        if _divides(lt, t):
            coef = F.div(c, lc)
            shift = _sub(t, lt)
            quo[shift] = coef
            for e, gc in gt:
                k = tuple(map(operator.add, e, shift))
                v = F.sub(h.get(k, F.zero), F.mul(coef, gc))
                if v:
                    h[k] = v
                else:
                    h.pop(k, None)
        else:
            rem[t] = h.pop(t)
    return Polynomial(ring, quo), Polynomial(ring, rem)


def divisible(p: Polynomial, g: Polynomial) -> bool:
    return divide(p, g)[1].is_zero()


def s_vectors_reduce_to_zero(basis: SubmoduleBasis) -> bool:
    """Buchberger criterion as a post-check on a finished basis."""
    F = basis.ring.field
    elts = basis._elts
    bc = _by_comp(basis)
    for i in range(len(elts)):
        for j in range(i + 1, len(elts)):
            if elts[i].lt[0] != elts[j].lt[0]:
                continue
            L = _lcm(elts[i].lt[1], elts[j].lt[1])
            h, _ = _spair(elts[i], elts[j], L, F, False)
            h, _, _ = _reduce(h, None, None, bc, basis.order, F, full=False)
            if h:
                return False
    return True
