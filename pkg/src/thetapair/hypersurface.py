"""Resolutions over R = P/(f), matrix factorizations, stable Tor/Ext and the Theta pairing."""

from __future__ import annotations

from dataclasses import dataclass

from . import fpmod as fm
from . import gbasis
from .fpmod import DEFAULT, ComputeConfig, FPModule
from .polyring import Polynomial, PolyRing, SingularityContext


class NonIsolated(ValueError):
    pass


class NoStabilization(RuntimeError):
    pass


class LiftFailed(ValueError):
    pass


class InfiniteLength(ValueError):
    pass


# ---------- small matrix helpers (row-major lists of lists) ----------


def mat_mul(X, Y, ring: PolyRing):
    n, k = len(X), len(Y)
    m = len(Y[0]) if Y else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = ring.zero()
            for t in range(k):
                if X[i][t] and Y[t][j]:
                    s = s + X[i][t] * Y[t][j]
            row.append(s)
        out.append(row)
    return out


def transpose(X):
    return [list(r) for r in zip(*X)] if X else []


def cols_to_rows(cols, nrows: int):
    return [[c[i] for c in cols] for i in range(nrows)]


def rows_to_cols(rows):
    return [tuple(r[j] for r in rows) for j in range(len(rows[0]))] if rows else []


def is_scalar_multiple_of_identity(X, g: Polynomial) -> bool:
    for i, r in enumerate(X):
        for j, e in enumerate(r):
            if e != (g if i == j else g.ring.zero()):
                return False
    return True


def bareiss_det(X, ring: PolyRing) -> Polynomial:
    """Fraction-free determinant (exact polynomial divisions)."""
    n = len(X)
    if n == 0:
        return ring.one()
    M = [list(r) for r in X]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q, r = gbasis.divide(num, prev)
                assert r.is_zero()
                M[i][j] = q
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


# ---------- reports ----------


@dataclass(frozen=True)
class MatrixFactorization:
    """Square A, B with A*B = B*A = unit*f*I; ``unit`` is 1 unless a local lift needed one."""

    A: tuple
    B: tuple
    f: Polynomial
    unit: Polynomial

    @property
    def p(self) -> int:
        return len(self.A)

    @property
    def ring(self) -> PolyRing:
        return self.f.ring

    def check(self) -> bool:
        if self.p == 0:
            return True
        g = self.unit * self.f
        ring = self.ring
        return (is_scalar_multiple_of_identity(mat_mul(self.A, self.B, ring), g)
                and is_scalar_multiple_of_identity(mat_mul(self.B, self.A, ring), g))

    def transposed(self) -> "MatrixFactorization":
        return MatrixFactorization(_freeze(transpose(self.B)), _freeze(transpose(self.A)), self.f, self.unit)

    def coker(self, degrees=None) -> FPModule:
        return FPModule(self.ring, self.p, tuple(rows_to_cols(self.A)), "R", self.f, degrees)

    def to_json(self) -> dict:
        d = {
            "p": self.p,
            "A": [[str(e) for e in r] for r in self.A],
            "B": [[str(e) for e in r] for r in self.B],
        }
        if not self.unit == self.ring.one():
            d["unit"] = str(self.unit)
        return d


def _freeze(X):
    return tuple(tuple(r) for r in X)


@dataclass(frozen=True)
class ThetaReport:
    len_even: int
    len_odd: int
    theta: int
    stable_index: int
    mcm_steps: int = 0
    mf_size: int = 0

    def to_json(self) -> dict:
        return {"theta": self.theta, "lenEven": self.len_even, "lenOdd": self.len_odd,
                "stableIndex": self.stable_index}


@dataclass(frozen=True)
class HerbrandReport:
    len_even_ext: int
    len_odd_ext: int
    h: int

    def to_json(self) -> dict:
        return {"h": self.h, "lenEvenExt": self.len_even_ext, "lenOddExt": self.len_odd_ext}


@dataclass(frozen=True)
class ResolutionOverR:
    """Minimal resolution; ``differentials[i]`` is the matrix of F_{i+1} -> F_i."""

    differentials: tuple
    ranks: tuple
    stabilized_at: int
    tail: MatrixFactorization | None

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "stabilizedAt": self.stabilized_at,
            "differentials": [[[str(e) for e in r] for r in d] for d in self.differentials],
            "tail": self.tail.to_json() if self.tail is not None else None,
        }


# ---------- operations ----------


def milnor_number(ctx: SingularityContext, cfg: ComputeConfig = DEFAULT) -> int:
    J = fm.module_from_ideal(ctx.jacobian_ideal, "P", ring=ctx.ring)
    rep = fm.length(J, mode="local", cfg=cfg)
    if not rep.is_finite:
        raise NonIsolated(f"{ctx.f} does not have an isolated singularity at the origin")
    ctx.milnor_number = rep.length
    return rep.length


def _f_cols(f: Polynomial, rank: int) -> list:
    z = f.ring.zero()
    return [tuple(f if k == i else z for k in range(rank)) for i in range(rank)]


def relations_over_R(cols, rank: int, f: Polynomial, cfg: ComputeConfig = DEFAULT) -> list:
    """Minimal generators of the relations among ``cols`` taken modulo f."""
    ring = f.ring
    cols = [tuple(c) for c in cols]
    g = len(cols)
    if g == 0:
        return []
    S = fm.syz(cols + _f_cols(f, rank), rank, ring, cfg)
    rels = []
    for s in S:
        v = tuple(s[:g])
        if any(v) and not all(gbasis.divisible(p, f) for p in v) and v not in rels:
            rels.append(v)
    if not rels:
        return []
    keep = fm.minimal_generators(rels + _f_cols(f, g), g, ring, cfg, droppable=lambda j: j < len(rels))
    return [rels[j] for j in keep if j < len(rels)]


def syzygy_over_R(m: FPModule, cfg: ComputeConfig = DEFAULT) -> FPModule:
    """Minimal first syzygy module of m over R."""
    if m.over != "R":
        raise ValueError("syzygy_over_R needs a module over R")
    mp = fm.minimal_presentation(m, cfg)
    cols = list(mp.presentation)
    degs = None
    if mp.degrees is not None:
        ds = [fm.column_degree(c, mp.degrees) for c in cols]
        if all(d is not None for d in ds):
            degs = tuple(ds)
    rels = relations_over_R(cols, mp.rank, m.f, cfg)
    return FPModule(m.ring, len(cols), tuple(rels), "R", m.f, degs if cols else ())


def _mcm_presentation(m: FPModule, cfg: ComputeConfig):
    """Square matrix A with P^r/(A) = m as P-modules, or None if m is not MCM."""
    vecs = list(m.presentation) + _f_cols(m.f, m.rank)
    keep = fm.minimal_generators(vecs, m.rank, m.ring, cfg)
    if len(keep) != m.rank:
        return None
    return [vecs[j] for j in keep]


def _lift_columns(Acols, f: Polynomial, rank: int, cfg: ComputeConfig):
    """Columns Q_i and units u_i with A*Q_i = u_i*f*e_i; global lift first, local as fallback."""
    ring = f.ring
    targets = _f_cols(f, rank)
    gb = gbasis.standard_basis(Acols, cfg.global_order(ring), rank=rank, ring=ring, track=True)
    out = []
    local_basis = None
    for t in targets:
        try:
            out.append(gbasis.lift(t, gb))
            continue
        except gbasis.NotInSubmodule:
            pass
        if cfg.mode == "graded":
            raise LiftFailed("f*e_i is not in the span of the presentation")
        if local_basis is None:
            local_basis = gbasis.standard_basis(Acols, ring.local_order(), rank=rank, ring=ring, track=True)
        try:
            out.append(gbasis.lift(t, local_basis))
        except gbasis.NotInSubmodule as e:
            raise LiftFailed("f*e_i is not in the local span of the presentation") from e
    return out


def _strip_trivial(A, B, unit: Polynomial, mode: str):
    """Remove summands (f, 1) by Schur complements on unit entries of B."""
    ring = unit.ring
    F = ring.field
    while True:
        hit = None
        for i, r in enumerate(B):
            for j, b in enumerate(r):
                if fm.is_unit(b, mode):
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            return A, B, unit
        i, j = hit
        b = B[i][j]
        p = len(B)
        ks = [k for k in range(p) if k != i]
        ls = [l for l in range(p) if l != j]
        if b.is_constant():
            inv = F.inv(b.constant_term())
            newB = [[B[k][l] - (B[k][j] * B[i][l]).scale(inv) for l in ls] for k in ks]
        else:
            newB = [[b * B[k][l] - B[k][j] * B[i][l] for l in ls] for k in ks]
            unit = unit * b
        A = [[A[k][l] for l in range(p) if l != i] for k in range(p) if k != j]
        B = newB


def matrix_factorization(mcm: FPModule, ctx: SingularityContext | None = None,
                         cfg: ComputeConfig = DEFAULT, strip: bool = True) -> MatrixFactorization:
    """The factorization (A, B) with coker(A) = mcm; B is lifted column by column."""
    f = ctx.f if ctx is not None else mcm.f
    ring = f.ring
    if mcm.rank == 0:
        return MatrixFactorization((), (), f, ring.one())
    Acols = _mcm_presentation(mcm, cfg)
    if Acols is None:
        raise LiftFailed("module is not maximal Cohen-Macaulay (presentation is not square)")
    lifts = _lift_columns(Acols, f, mcm.rank, cfg)
    units = [u for _, u in lifts]
    unit = ring.one()
    for u in units:
        unit = unit * u
    Bcols = []
    for i, (q, u) in enumerate(lifts):
        scale = ring.one()
        for k, v in enumerate(units):
            if k != i:
                scale = scale * v
        Bcols.append(tuple(c * scale for c in q))
    A = cols_to_rows(Acols, mcm.rank)
    B = cols_to_rows(Bcols, len(Acols))
    if strip:
        A, B, unit = _strip_trivial(A, B, unit, cfg.mode)
    mf = MatrixFactorization(_freeze(A), _freeze(B), f, unit)
    if not mf.check():
        raise LiftFailed("A*B = B*A = f*I failed")
    if cfg.verify and 0 < mf.p <= 8:
        dA = bareiss_det(A, ring)
        g = unit * f
        if dA.is_zero() or not gbasis.divisible(g ** mf.p, dA):
            raise LiftFailed("det(A) does not divide f^p")
    return mf


def mcm_approximation(m: FPModule, cfg: ComputeConfig = DEFAULT, max_steps: int | None = None):
    """(MCM syzygy module, number of syzygy steps taken); the zero module for finite projective dimension."""
    mcm, steps, _ = _approximate(m, cfg, max_steps)
    return mcm, steps


def _approximate(m: FPModule, cfg: ComputeConfig, max_steps: int | None):
    if m.over != "R":
        raise ValueError("mcm_approximation needs a module over R")
    if max_steps is None:
        max_steps = cfg.max_steps if cfg.max_steps is not None else m.ring.nvars + 2
    cur = fm.minimal_presentation(m, cfg)
    for steps in range(max_steps + 1):
        if cur.rank == 0 or not cur.presentation:
            return fm.zero_module(cur), steps, None
        if _mcm_presentation(cur, cfg) is not None:
            mf = matrix_factorization(cur, cfg=cfg)
            if mf.p == 0:
                return fm.zero_module(cur), steps, mf
            return mf.coker(), steps, mf
        cur = syzygy_over_R(cur, cfg)
    raise NoStabilization(f"no MCM certificate after {max_steps} syzygy steps")


def stable_index(n: int) -> int:
    """Smallest even 2k with 2k > n."""
    return n + 1 if n % 2 else n + 2


def power_module(nmod: FPModule, p: int) -> FPModule:
    out = fm.FPModule(nmod.ring, 0, (), nmod.over, nmod.f, None)
    for _ in range(p):
        out = out.direct_sum(fm.FPModule(nmod.ring, nmod.rank, nmod.presentation, nmod.over, nmod.f, None))
    return out


def tensor_matrix(X, s: int, ring: PolyRing):
    """X (a x b) tensored with the identity on an s-generated module: (a*s) x (b*s)."""
    z = ring.zero()
    rows = []
    for i in range(len(X)):
        for k in range(s):
            rows.append([X[i][j] if k == l else z for j in range(len(X[i])) for l in range(s)])
    return rows


def _finite_length(mod: FPModule, cfg: ComputeConfig) -> int:
    rep = fm.length(mod, cfg=cfg)
    if not rep.is_finite:
        raise InfiniteLength("homology has infinite length (is the singularity isolated?)")
    return rep.length


def _periodic_lengths(X, Y, nmod: FPModule, cfg: ComputeConfig):
    """Lengths of ker(Y)/im(X) and ker(X)/im(Y) on N^p for a factorization pair."""
    nmod = fm.minimal_presentation(nmod, cfg)
    p = len(X)
    if nmod.rank == 0 or p == 0:
        return 0, 0
    ring = nmod.ring
    mid = power_module(nmod, p)
    s = nmod.rank
    Xn = tensor_matrix(X, s, ring)
    Yn = tensor_matrix(Y, s, ring)
    Xc, Yc = rows_to_cols(Xn), rows_to_cols(Yn)
    h1 = fm.homology_of(Xc, Yc, mid, mid, cfg)
    h2 = fm.homology_of(Yc, Xc, mid, mid, cfg)
    return _finite_length(h1, cfg), _finite_length(h2, cfg)


def stable_tor(m: FPModule, nmod: FPModule, cfg: ComputeConfig = DEFAULT) -> ThetaReport:
    """Tor lengths at a stable even and odd index, read off the 2-periodic tail."""
    n = m.ring.nvars - 1
    _, steps, mf = _approximate(m, cfg, None)
    if mf is None or mf.p == 0:
        return ThetaReport(0, 0, 0, stable_index(n), steps, 0)
    # for coker A: Tor_even = ker(B)/im(A), Tor_odd = ker(A)/im(B)
    ev, od = _periodic_lengths(mf.A, mf.B, nmod, cfg)
    if steps % 2:
        ev, od = od, ev
    return ThetaReport(ev, od, ev - od, stable_index(n), steps, mf.p)


def theta(m: FPModule, nmod: FPModule, cfg: ComputeConfig = DEFAULT) -> int:
    return stable_tor(m, nmod, cfg).theta


def stable_ext(m: FPModule, nmod: FPModule, cfg: ComputeConfig = DEFAULT) -> HerbrandReport:
    """Ext lengths at stable spots from Hom of the 2-periodic tail into N."""
    _, steps, mf = _approximate(m, cfg, None)
    if mf is None or mf.p == 0:
        return HerbrandReport(0, 0, 0)
    At, Bt = transpose(mf.A), transpose(mf.B)
    # Ext_even = ker(A^T)/im(B^T), Ext_odd = ker(B^T)/im(A^T)
    ev, od = _periodic_lengths(Bt, At, nmod, cfg)
    if steps % 2:
        ev, od = od, ev
    return HerbrandReport(ev, od, ev - od)


def dual_mcm(mf: MatrixFactorization) -> FPModule:
    """The MCM module coker(B^T), whose factorization is (B^T, A^T).

    This is the first syzygy of Hom(coker A, R); with this choice h(M, N) = theta(M*, N).
    """
    return mf.transposed().coker()


def parity_vanishing_check(ctx: SingularityContext, pairs, cfg: ComputeConfig = DEFAULT) -> list[int]:
    """Theta of every pair; for n even all of them should vanish."""
    if ctx.n % 2:
        raise ValueError("parity vanishing applies to an odd number of variables (n even)")
    return [theta(a, b, cfg) for a, b in pairs]


def resolve(m: FPModule, length: int | None = None, cfg: ComputeConfig = DEFAULT) -> ResolutionOverR:
    """First ``length`` differentials of a minimal R-free resolution, plus its periodic tail."""
    n = m.ring.nvars - 1
    if length is None:
        length = stable_index(n) + 2
    mcm, steps, mf = _approximate(m, cfg, None)
    cur = fm.minimal_presentation(m, cfg)
    rank = cur.rank
    cols = list(cur.presentation)
    diffs = []
    ranks = [rank]
    for _ in range(length):
        if not cols:
            break
        diffs.append(_freeze(cols_to_rows(cols, rank)))
        ranks.append(len(cols))
        nxt = relations_over_R(cols, rank, m.f, cfg)
        rank, cols = len(cols), nxt
    return ResolutionOverR(tuple(diffs), tuple(ranks), steps, mf)


def tor_via_resolution(m: FPModule, nmod: FPModule, indices, cfg: ComputeConfig = DEFAULT) -> dict:
    """length Tor_i(m, nmod) for each i >= 1 in ``indices``, from an explicit resolution."""
    top = max(indices)
    res = resolve(m, top + 1, cfg)
    nmod = fm.minimal_presentation(nmod, cfg)
    ring = m.ring
    s = nmod.rank
    d = list(res.differentials)
    ranks = list(res.ranks)
    out = {}
    for i in indices:
        if i < 1:
            raise ValueError("indices must be positive")
        if i >= len(ranks):
            out[i] = 0
            continue
        mid = power_module(nmod, ranks[i])
        tgt = power_module(nmod, ranks[i - 1])
        outc = rows_to_cols(tensor_matrix(d[i - 1], s, ring)) if s and ranks[i] else []
        inc = rows_to_cols(tensor_matrix(d[i], s, ring)) if i < len(d) and s else []
        if mid.rank == 0:
            out[i] = 0
            continue
        h = fm.homology_of(inc, outc, mid, tgt, cfg)
        out[i] = _finite_length(h, cfg)
    return out
