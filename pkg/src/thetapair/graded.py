"""Graded side: rational Hilbert series, residues at t = 1, Serre intersection numbers
and the comparison between theta and the primitive-class pairing of cycles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fpmod as fm
from . import hypersurface as hs
from .fpmod import DEFAULT, ComputeConfig, FPModule, HilbertSeries
from .polyring import Polynomial, PolyRing, SingularityContext


class DivisionByZeroSeries(ZeroDivisionError):
    pass


class WrongPoleOrder(ValueError):
    pass


class NotIsolatedIntersection(ValueError):
    pass


# integer polynomials in t as coefficient lists, low degree first


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _one_minus(e: int):
    return [1] + [0] * (e - 1) + [-1]


def _pdiv_exact(a, b):
    """a / b over the integers, or None when it does not divide."""
    a, b = _trim(a), _trim(b)
    if not b:
        raise DivisionByZeroSeries("division by the zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        return None
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                r[i + j] -= c * y
    if any(r) or any(c.denominator != 1 for c in q):
        return None
    return _trim([int(c) for c in q])


def _eval(a, t):
    return sum(c * t ** i for i, c in enumerate(a))


@dataclass(frozen=True)
class RationalSeries:
    """numerator(t) / prod (1 - t^e) over e in ``denominator``."""

    numerator: tuple
    denominator: tuple

    @classmethod
    def make(cls, numerator, denominator) -> "RationalSeries":
        num = _trim(numerator)
        if not num:
            return cls((), ())
        den = sorted(denominator, reverse=True)
        kept = []
        for e in den:
            q = _pdiv_exact(num, _one_minus(e))
            if q is None:
                kept.append(e)
            else:
                num = q
        return cls(tuple(num), tuple(sorted(kept)))

    @classmethod
    def from_hilbert(cls, h: HilbertSeries) -> "RationalSeries":
        return cls.make([0] * h.shift + list(h.numerator), h.denominator)

    def pole_order(self) -> int:
        """Order of the pole at t = 1."""
        if not self.numerator:
            return 0
        num, m = list(self.numerator), 0
        while True:
            q = _pdiv_exact(num, [1, -1])
            if q is None:
                break
            num, m = q, m + 1
        return len(self.denominator) - m

    def expand(self, upto: int) -> list[int]:
        c = [0] * (upto + 1)
        for i, x in enumerate(self.numerator):
            if i <= upto:
                c[i] += x
        for e in self.denominator:
            for d in range(e, upto + 1):
                c[d] += c[d - e]
        return c

    def same_function(self, other: "RationalSeries") -> bool:
        lhs, rhs = list(self.numerator), list(other.numerator)
        for e in other.denominator:
            lhs = _pmul(lhs, _one_minus(e))
        for e in self.denominator:
            rhs = _pmul(rhs, _one_minus(e))
        return _trim(lhs) == _trim(rhs)

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "denominatorFactors": list(self.denominator)}

    def __str__(self):
        num = fm._fmt_tpoly(self.numerator)
        if not self.denominator:
            return num
        den = "*".join(f"(1-t^{e})" if e > 1 else "(1-t)" for e in self.denominator)
        return f"({num})/({den})"


def _split_one_minus(p):
    """Write p = c * prod (1 - t^e); returns (c, [e...]) or None."""
    p = _trim(p)
    factors = []
    while len(p) > 1:
        for e in range(len(p) - 1, 0, -1):
            q = _pdiv_exact(p, _one_minus(e))
            if q is not None:
                factors.append(e)
                p = q
                break
        else:
            return None
    return (p[0], factors) if p else None


def series_product_formula(hM, hN, hR) -> RationalSeries:
    """H(M) * H(N) / H(R) as an exact rational series."""
    sM = hM if isinstance(hM, RationalSeries) else RationalSeries.from_hilbert(hM)
    sN = hN if isinstance(hN, RationalSeries) else RationalSeries.from_hilbert(hN)
    sR = hR if isinstance(hR, RationalSeries) else RationalSeries.from_hilbert(hR)
    if not sR.numerator:
        raise DivisionByZeroSeries("H(R) is zero")
    num = _pmul(list(sM.numerator), list(sN.numerator))
    for e in sR.denominator:
        num = _pmul(num, _one_minus(e))
    den = list(sM.denominator) + list(sN.denominator)
    # restore cancelled (1 - t) factors until the numerator of H(R) splits
    rnum = list(sR.numerator)
    for _ in range(len(rnum) + 1):
        split = _split_one_minus(rnum)
        if split is not None:
            break
        rnum = _pmul(rnum, [1, -1])
        num = _pmul(num, [1, -1])
    else:
        q = _pdiv_exact(num, list(sR.numerator))
        if q is None:
            raise ValueError("H(R) numerator is not a product of (1 - t^e) factors")
        return RationalSeries.make(q, den)
    c, es = split
    scaled = [Fraction(x, c) for x in num]
    if any(x.denominator != 1 for x in scaled):
        raise ValueError("non-integral series quotient")
    return RationalSeries.make([int(x) for x in scaled], den + es)


def residue_at_one(s: RationalSeries) -> Fraction:
    """lim_{t->1} (1 - t) * s(t); the pole at t = 1 must be simple."""
    order = s.pole_order()
    if order != 1:
        raise WrongPoleOrder(f"pole order at t=1 is {order}, expected 1")
    num = list(s.numerator)
    while True:
        q = _pdiv_exact(num, [1, -1])
        if q is None:
            break
        num = q
    # each (1 - t^e) contributes (1 - t) * e at t = 1
    r = Fraction(_eval(num, 1))
    for e in s.denominator:
        r /= e
    return r


# ---------- Serre intersection numbers ----------


def free_resolution_over_P(gens: Sequence[Polynomial], cfg: ComputeConfig = DEFAULT) -> list:
    """Differentials (row-major) of a minimal free resolution of P/(gens) over the local ring."""
    ring = gens[0].ring
    cfg = ComputeConfig(mode="local", order=cfg.order, max_steps=cfg.max_steps, verify=cfg.verify)
    cols = [(g,) for g in gens if not g.is_zero()]
    keep = fm.minimal_generators(cols, 1, ring, cfg)
    cols = [cols[j] for j in keep]
    rank = 1
    diffs = []
    for _ in range(ring.nvars + 1):
        if not cols:
            return diffs
        diffs.append(hs.cols_to_rows(cols, rank))
        S = [tuple(s) for s in fm.syz(cols, rank, ring, cfg) if any(s)]
        if S:
            keep = fm.minimal_generators(S, len(cols), ring, cfg)
            S = [S[j] for j in keep]
        rank, cols = len(cols), S
    if cols:
        raise RuntimeError("resolution longer than the number of variables")
    return diffs


def serre_intersection(I: Sequence[Polynomial], J: Sequence[Polynomial], cfg: ComputeConfig = DEFAULT) -> int:
    """sum_i (-1)^i length Tor_i^P(P/I, P/J) at the origin."""
    ring = (list(I) + list(J))[0].ring
    cfg = ComputeConfig(mode="local", order=cfg.order, max_steps=cfg.max_steps, verify=cfg.verify)
    both = fm.module_from_ideal(list(I) + list(J), "P", ring=ring)
    if not fm.length(both, cfg=cfg).is_finite:
        raise NotIsolatedIntersection("V(I + J) is not just the origin")
    N = fm.minimal_presentation(fm.module_from_ideal(list(J), "P", ring=ring), cfg)
    diffs = free_resolution_over_P(list(I), cfg)
    ranks = [1] + [len(d[0]) for d in diffs]
    s = N.rank
    total = 0
    for i in range(len(ranks)):
        mid = hs.power_module(N, ranks[i])
        if mid.rank == 0:
            continue
        tgt = hs.power_module(N, ranks[i - 1]) if i else fm.zero_module(N)
        outc = hs.rows_to_cols(hs.tensor_matrix(diffs[i - 1], s, ring)) if i else []
        inc = hs.rows_to_cols(hs.tensor_matrix(diffs[i], s, ring)) if i < len(diffs) else []
        h = fm.homology_of(inc, outc, mid, tgt, cfg)
        rep = fm.length(h, cfg=cfg)
        if not rep.is_finite:
            raise NotIsolatedIntersection("Tor over P has infinite length")
        total += (-1) ** i * rep.length
    return total


# ---------- graded cycles ----------


def _graded_cfg(cfg: ComputeConfig) -> ComputeConfig:
    return ComputeConfig(mode="graded", order=cfg.order, max_steps=cfg.max_steps, verify=cfg.verify)


def proj_intersection_number(I, J, ctx: SingularityContext, cfg: ComputeConfig = DEFAULT) -> Fraction:
    """[Y].[Z] as the residue at t = 1 of H(P/(I + J + f)); 0 when there is no pole."""
    ring = ctx.ring
    both = fm.module_from_ideal(list(I) + list(J) + [ctx.f], "P", ring=ring)
    s = RationalSeries.from_hilbert(fm.hilbert_series(both, _graded_cfg(cfg)))
    if s.pole_order() == 0:
        return Fraction(0)
    return residue_at_one(s)


def cycle_degree(gens, ctx: SingularityContext, cfg: ComputeConfig = DEFAULT) -> int:
    """p_M(1) where H(P/I) = p_M(t) / (1 - t)^(codim in P); assumes standard weights."""
    h = fm.hilbert_series(fm.module_from_ideal(list(gens), "P", ring=ctx.ring), _graded_cfg(cfg))
    if any(e != 1 for e in h.denominator):
        raise ValueError("cycle degrees need unit weights")
    return h.numerator_at_one()


@dataclass(frozen=True)
class GradedCycleReport:
    deg_y: int
    deg_z: int
    d: int
    proj_intersection: Fraction
    primitive_pairing: Fraction
    theta_predicted: Fraction
    theta_computed: int
    residue_balance: bool

    @property
    def agrees(self) -> bool:
        return self.theta_predicted == self.theta_computed

    def to_json(self) -> dict:
        def q(x):
            x = Fraction(x)
            return [x.numerator, x.denominator]

        return {
            "degY": q(self.deg_y),
            "degZ": q(self.deg_z),
            "d": q(self.d),
            "projIntersection": q(self.proj_intersection),
            "primitivePairing": q(self.primitive_pairing),
            "thetaPredicted": q(self.theta_predicted),
            "thetaComputed": q(self.theta_computed),
            "residueBalance": self.residue_balance,
        }


def theorem_1_2_check(f: Polynomial, I, J, cfg: ComputeConfig = DEFAULT) -> GradedCycleReport:
    """Compare theta(O_Y, O_Z) with -(1/d)[[Y]].[[Z]] for transverse homogeneous cycles."""
    ring = f.ring
    if not f.is_homogeneous() or any(w != 1 for w in ring.weights):
        raise ValueError("f must be homogeneous for the standard grading")
    if ring.nvars % 2:
        raise ValueError("needs an even number of variables")
    ctx = SingularityContext(ring, f)
    d = f.degree()
    gcfg = _graded_cfg(cfg)
    deg_y = cycle_degree(I, ctx, cfg)
    deg_z = cycle_degree(J, ctx, cfg)
    yz = proj_intersection_number(I, J, ctx, cfg)
    M = fm.module_from_ideal(list(I), "R", ring=ring, f=f)
    N = fm.module_from_ideal(list(J), "R", ring=ring, f=f)
    th = hs.theta(M, N, gcfg)
    primitive = d * d * yz - d * deg_y * deg_z
    predicted = -Fraction(primitive, d)
    # residues of H(M)H(N)/H(R), H(M (x) N) and the Tor difference
    hM = fm.hilbert_series(fm.module_from_ideal(list(I), "P", ring=ring), gcfg)
    hN = fm.hilbert_series(fm.module_from_ideal(list(J), "P", ring=ring), gcfg)
    hR = fm.hilbert_series(fm.module_from_ideal([f], "P", ring=ring), gcfg)
    derived = residue_at_one(series_product_formula(hM, hN, hR))
    balance = derived == Fraction(deg_y * deg_z, d) and derived == yz + Fraction(th, d)
    return GradedCycleReport(deg_y, deg_z, d, yz, Fraction(primitive), predicted, th, balance)
