"""Finitely presented modules over P or R = P/(f).

A module is ``P^rank / (columns of the presentation)``; over R the relations
f*e_i are implicit.  Everything is computed inside P: kernels and homology by
syzygies of stacked matrices, lengths by counting standard monomials of a
standard basis (local order for the localization at the origin, the global
order in graded mode).
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import gbasis
from .polyring import MonomialOrder, Polynomial, PolyRing


class IllFormedMap(ValueError):
    pass


class NotAComplex(ValueError):
    pass


class NotGraded(ValueError):
    pass


@dataclass(frozen=True)
class ComputeConfig:
    """Engine knobs shared by every module-level computation."""

    mode: str = "local"  # "local" or "graded"
    order: str = "grevlex"  # global order used for syzygies: "grevlex" or "lex"
    max_steps: int | None = None
    verify: bool = False

    def __post_init__(self):
        if self.mode not in ("local", "graded"):
            raise ValueError(f"mode must be 'local' or 'graded', not {self.mode!r}")
        if self.order not in ("grevlex", "lex"):
            raise ValueError(f"order must be 'grevlex' or 'lex', not {self.order!r}")

    def global_order(self, ring: PolyRing) -> MonomialOrder:
        if self.order == "lex":
            return MonomialOrder("lex", ring.weights)
        return MonomialOrder("weighted-grevlex", ring.weights)

    def length_order(self, ring: PolyRing) -> MonomialOrder:
        if self.mode == "local":
            return ring.local_order()
        return self.global_order(ring)


DEFAULT = ComputeConfig()

Column = tuple  # tuple[Polynomial, ...]


@dataclass(frozen=True)
class FPModule:
    """``P^rank`` modulo the presentation columns (and f*P^rank when ``over == "R"``)."""

    ring: PolyRing
    rank: int
    presentation: tuple  # tuple of columns, each a tuple of `rank` polynomials
    over: str = "R"
    f: Polynomial | None = None
    degrees: tuple | None = None

    def __post_init__(self):
        if self.over not in ("P", "R"):
            raise ValueError("over must be 'P' or 'R'")
        if self.over == "R" and self.f is None:
            raise ValueError("a module over R needs f")
        for c in self.presentation:
            if len(c) != self.rank:
                raise ValueError("presentation column of the wrong length")
        if self.degrees is not None and len(self.degrees) != self.rank:
            raise ValueError("degrees must have one entry per generator")

    @property
    def ncols(self) -> int:
        return len(self.presentation)

    def is_zero_module(self) -> bool:
        return self.rank == 0

    def relations_over_P(self) -> list:
        """All P-relations, including f*e_i for modules over R."""
        rels = list(self.presentation)
        if self.over == "R":
            z = self.ring.zero()
            for i in range(self.rank):
                rels.append(tuple(self.f if k == i else z for k in range(self.rank)))
        return rels

    def matrix(self) -> list[list[Polynomial]]:
        """Presentation as a rank x ncols row-major matrix."""
        return [[c[i] for c in self.presentation] for i in range(self.rank)]

    def with_presentation(self, cols, rank=None, degrees=None) -> "FPModule":
        return FPModule(self.ring, self.rank if rank is None else rank, tuple(tuple(c) for c in cols),
                        self.over, self.f, degrees)

    def direct_sum(self, other: "FPModule") -> "FPModule":
        if self.over != other.over:
            raise ValueError("direct sum of modules over different rings")
        z = self.ring.zero()
        r1, r2 = self.rank, other.rank
        cols = [tuple(c) + (z,) * r2 for c in self.presentation]
        cols += [(z,) * r1 + tuple(c) for c in other.presentation]
        degs = None
        if self.degrees is not None and other.degrees is not None:
            degs = tuple(self.degrees) + tuple(other.degrees)
        return FPModule(self.ring, r1 + r2, tuple(cols), self.over, self.f, degs)

    def to_json(self) -> dict:
        d = {
            "ring": self.over,
            "presentation": [[str(c[i]) for c in self.presentation] for i in range(self.rank)],
            "rank": self.rank,
        }
        if self.degrees is not None:
            d["degrees"] = list(self.degrees)
        return d

    @classmethod
    def from_json(cls, d: dict, ring: PolyRing, f: Polynomial | None) -> "FPModule":
        over = d.get("ring", "R")
        if "ideal" in d:
            return module_from_ideal([ring.parse(s) for s in d["ideal"]], over, ring=ring, f=f)
        rows = d["presentation"]
        rank = d.get("rank", len(rows))
        if len(rows) != rank:
            raise ValueError("presentation must have one row per generator")
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged presentation matrix")
        cols = tuple(tuple(ring.parse(rows[i][j]) for i in range(rank)) for j in range(ncols))
        degs = tuple(d["degrees"]) if d.get("degrees") is not None else None
        return cls(ring, rank, cols, over, f if over == "R" else None, degs)


@dataclass(frozen=True)
class LengthReport:
    is_finite: bool
    length: int | None = None
    standard_monomials: list | None = field(default=None, compare=False)


@dataclass(frozen=True)
class HilbertSeries:
    """t^shift * numerator(t) / prod_j (1 - t^denominator[j]); numerator coefficients low to high."""

    numerator: tuple
    denominator: tuple
    shift: int = 0

    @property
    def denom_exponent(self) -> int:
        return len(self.denominator)

    def canonical(self) -> "HilbertSeries":
        num = list(self.numerator)
        shift = self.shift
        while num and num[0] == 0:
            num.pop(0)
            shift += 1
        while num and num[-1] == 0:
            num.pop()
        if not num:
            return HilbertSeries((), (), 0)
        den = sorted(self.denominator, reverse=True)
        out = []
        for e in den:
            q = _div_one_minus(num, e)
            if q is None:
                out.append(e)
            else:
                num = q
        return HilbertSeries(tuple(num), tuple(sorted(out)), shift)

    def expand(self, upto: int) -> list[int]:
        """Power-series coefficients of degrees 0..upto."""
        coeffs = [0] * (upto + 1)
        for i, c in enumerate(self.numerator):
            d = i + self.shift
            if 0 <= d <= upto:
                coeffs[d] += c
            elif d < 0:
                raise ValueError("negative degrees not supported in expand")
        for e in self.denominator:
            for d in range(e, upto + 1):
                coeffs[d] += coeffs[d - e]
        return coeffs

    def numerator_at_one(self) -> int:
        return sum(self.numerator)

    def same_function(self, other: "HilbertSeries") -> bool:
        """Equality as rational functions (cross-multiplied)."""
        return _tmul(self._num_full(), _den_poly(other.denominator)) == _tmul(other._num_full(), _den_poly(self.denominator))

    def _num_full(self) -> dict:
        return {i + self.shift: c for i, c in enumerate(self.numerator) if c}

    def __str__(self):
        num = _fmt_tpoly(self.numerator, self.shift)
        if not self.denominator:
            return num
        den = "*".join(f"(1-t^{e})" if e > 1 else "(1-t)" for e in self.denominator)
        if sum(1 for c in self.numerator if c) > 1:
            num = f"({num})"
        return f"{num}/({den})"


def _tmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _den_poly(factors) -> dict:
    out = {0: 1}
    for e in factors:
        out = _tmul(out, {0: 1, e: -1})
    return out


def _div_one_minus(num: list, e: int):
    """Exact quotient num / (1 - t^e), or None."""
    q = [0] * max(len(num) - e, 0)
    r = list(num)
    # (1 - t^e) * q = r  <=>  q_i = r_i + q_{i-e}
    for i in range(len(q)):
        q[i] = r[i] + (q[i - e] if i >= e else 0)
    check = [0] * len(num)
    for i, c in enumerate(q):
        check[i] += c
        check[i + e] -= c
    return q if check == r else None


def _fmt_tpoly(coeffs, shift=0) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        d = i + shift
        mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
        if mono:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------- construction ----------


def module_from_ideal(gens: Sequence[Polynomial], ring_kind: str = "R", *, ring: PolyRing | None = None,
                      f: Polynomial | None = None, ctx=None) -> FPModule:
    """The cyclic module P/I or R/I R."""
    if ctx is not None:
        ring, f = ctx.ring, ctx.f
    if ring is None:
        ring = gens[0].ring
    cols = tuple((g,) for g in gens if not g.is_zero())
    return FPModule(ring, 1, cols, ring_kind, f if ring_kind == "R" else None, (0,))


def free_module(ring: PolyRing, rank: int, ring_kind: str = "R", f=None) -> FPModule:
    return FPModule(ring, rank, (), ring_kind, f if ring_kind == "R" else None, (0,) * rank)


def zero_module(like: FPModule) -> FPModule:
    return FPModule(like.ring, 0, (), like.over, like.f, ())


# ---------- linear algebra helpers over P ----------


def is_unit(p: Polynomial, mode: str) -> bool:
    """Units of the local ring have a nonzero constant term; in graded mode only constants count."""
    if p.is_zero():
        return False
    if mode == "graded":
        return p.is_constant()
    return bool(p.constant_term())


def syz(cols: Sequence[Column], rank: int, ring: PolyRing, cfg: ComputeConfig = DEFAULT) -> list:
    if not cols:
        return []
    if rank == 0:
        z = ring.zero()
        return [tuple(ring.one() if k == j else z for k in range(len(cols))) for j in range(len(cols))]
    return gbasis.syzygies(list(cols), cfg.global_order(ring), rank=rank, ring=ring, check=cfg.verify)


def mat_vec(cols: Sequence[Column], v: Sequence[Polynomial], rank: int, ring: PolyRing) -> tuple:
    out = [ring.zero() for _ in range(rank)]
    for c, a in zip(cols, v):
        if a.is_zero():
            continue
        for i in range(rank):
            if c[i]:
                out[i] = out[i] + a * c[i]
    return tuple(out)


def _pivot_units(cols: list, rank: int, ring: PolyRing, mode: str, degrees):
    """Cancel generators against unit entries of relations (fraction-free locally)."""
    cols = [list(c) for c in cols if any(c)]
    degrees = list(degrees) if degrees is not None else None
    F = ring.field
    while True:
        hit = None
        for j, c in enumerate(cols):
            for i in range(rank - 1, -1, -1):
                if is_unit(c[i], mode):
                    hit = (j, i)
                    break
            if hit:
                break
        if hit is None:
            break
        j, i = hit
        pc = cols[j]
        u = pc[i]
        const = u.is_constant()
        new = []
        for l, c in enumerate(cols):
            if l == j:
                continue
            a = c[i]
            if a.is_zero():
                nc = c
            elif const:
                s = F.div(F.one, u.constant_term())
                nc = [ck - (a * pk).scale(s) for ck, pk in zip(c, pc)]
            else:
                nc = [u * ck - a * pk for ck, pk in zip(c, pc)]
            nc = nc[:i] + nc[i + 1:]
            if any(nc):
                new.append(nc)
        cols = new
        rank -= 1
        if degrees is not None:
            degrees.pop(i)
    # drop exact duplicates
    seen = []
    for c in cols:
        t = tuple(c)
        if t not in seen:
            seen.append(t)
    return seen, rank, (tuple(degrees) if degrees is not None else None)


def pivot_syzygies(n: int, syzygy_list: Sequence, mode: str, droppable) -> list[int]:
    """Indices kept after removing generators that a syzygy expresses with a unit coefficient.

    ``droppable(j)`` says which generator positions may be removed; later
    positions are removed first.
    """
    S = [list(s) for s in syzygy_list if any(s)]
    alive = list(range(n))
    while True:
        hit = None
        for j in range(len(alive) - 1, -1, -1):
            if not droppable(alive[j]):
                continue
            for si, s in enumerate(S):
                if is_unit(s[j], mode):
                    hit = (si, j)
                    break
            if hit:
                break
        if hit is None:
            return alive
        si, j = hit
        ps = S[si]
        u = ps[j]
        newS = []
        for l, s in enumerate(S):
            if l == si:
                continue
            a = s[j]
            if a.is_zero():
                ns = s
            elif u.is_constant():
                inv = u.ring.field.inv(u.constant_term())
                ns = [sk - (a * pk).scale(inv) for sk, pk in zip(s, ps)]
            else:
                ns = [u * sk - a * pk for sk, pk in zip(s, ps)]
            ns = ns[:j] + ns[j + 1:]
            if any(ns):
                newS.append(ns)
        S = newS
        alive.pop(j)


def minimal_generators(vectors: Sequence[Column], rank: int, ring: PolyRing, cfg: ComputeConfig = DEFAULT,
                       droppable=None) -> list[int]:
    """Indices of a minimal generating subset (local ring, or graded ring in graded mode)."""
    vectors = list(vectors)
    if not vectors:
        return []
    S = syz(vectors, rank, ring, cfg)
    zero_idx = {j for j, v in enumerate(vectors) if not any(v)}
    drop = droppable or (lambda j: True)
    keep = pivot_syzygies(len(vectors), S, cfg.mode, drop)
    return [j for j in keep if j not in zero_idx or not drop(j)]


def column_degree(col: Column, degrees) -> int | None:
    """Degree of a homogeneous column with generator degrees; None if inhomogeneous."""
    ds = set()
    for p, d in zip(col, degrees):
        if p.is_zero():
            continue
        if not p.is_homogeneous():
            return None
        ds.add(p.degree() + d)
    if len(ds) > 1:
        return None
    return ds.pop() if ds else 0


# ---------- operations ----------


def minimal_presentation(m: FPModule, cfg: ComputeConfig = DEFAULT, prune: bool = True) -> FPModule:
    """No unit entries; with ``prune`` the relations are also a minimal generating set."""
    cols, rank, degs = _pivot_units(list(m.presentation), m.rank, m.ring, cfg.mode, m.degrees)
    if m.over == "R":
        # multiples of f are implicit relations over R
        cols = [c for c in cols if not all(gbasis.divisible(p, m.f) for p in c)]
    if prune and cols:
        nrel = len(cols)
        allc = cols + [r for r in _f_columns(m, rank)]
        keep = minimal_generators(allc, rank, m.ring, cfg, droppable=lambda j: j < nrel)
        cols = [cols[j] for j in keep if j < nrel]
    return FPModule(m.ring, rank, tuple(tuple(c) for c in cols), m.over, m.f, degs)


def _f_columns(m: FPModule, rank: int) -> list:
    if m.over != "R":
        return []
    z = m.ring.zero()
    return [tuple(m.f if k == i else z for k in range(rank)) for i in range(rank)]


def length(m: FPModule, mode: str | None = None, cfg: ComputeConfig = DEFAULT, collect: bool = False) -> LengthReport:
    """Length via the standard monomials of a standard basis of the relations."""
    if mode is not None and mode != cfg.mode:
        cfg = ComputeConfig(mode=mode, order=cfg.order, max_steps=cfg.max_steps, verify=cfg.verify)
    if m.rank == 0:
        return LengthReport(True, 0, [] if collect else None)
    rels = m.relations_over_P()
    if not rels:
        return LengthReport(False)
    order = cfg.length_order(m.ring)
    basis = gbasis.standard_basis(rels, order, rank=m.rank, ring=m.ring)
    return _count_from_leading(basis.leading_terms(), m.rank, m.ring.nvars, collect)


def _minimize_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _count_from_leading(lts, rank, nvars, collect):
    by = {c: [] for c in range(rank)}
    for comp, e in lts:
        by[comp].append(e)
    total = 0
    monos = [] if collect else None
    for c in range(rank):
        gens = _minimize_monomials(by[c])
        for v in range(nvars):
            if not any(g[v] > 0 and all(g[k] == 0 for k in range(nvars) if k != v) for g in gens):
                if not any(sum(g) == 0 for g in gens):
                    return LengthReport(False)
        if any(sum(g) == 0 for g in gens):
            continue
        for e in _standard_monomials(gens, nvars):
            total += 1
            if collect:
                monos.append((c, e))
    return LengthReport(True, total, monos)


def _standard_monomials(gens, nvars):
    """Monomials outside the monomial ideal (assumed co-finite)."""
    if nvars == 0:
        if not gens:
            yield ()
        return
    bound = min(g[0] for g in gens if all(x == 0 for x in g[1:]))
    for e in range(bound):
        sub = _minimize_monomials([g[1:] for g in gens if g[0] <= e])
        if any(sum(g) == 0 for g in sub):
            continue
        for rest in _standard_monomials(sub, nvars - 1):
            yield (e,) + rest


def is_finite_length(m: FPModule, cfg: ComputeConfig = DEFAULT) -> bool:
    return length(m, cfg=cfg).is_finite


def check_map(phi_cols: Sequence[Column], source: FPModule, target: FPModule, cfg: ComputeConfig = DEFAULT):
    """Raise IllFormedMap unless phi sends source relations into target relations."""
    ring = source.ring
    trels = target.relations_over_P()
    basis = gbasis.standard_basis(trels, cfg.global_order(ring), rank=target.rank, ring=ring) if trels else None
    for rel in source.relations_over_P():
        img = mat_vec(phi_cols, rel, target.rank, ring)
        if not any(img):
            continue
        if basis is None or not gbasis.contains(basis, img):
            raise IllFormedMap("map does not respect the presentations")


def _as_cols(phi, target_rank: int, source_rank: int) -> list:
    """Accept a row-major target_rank x source_rank matrix; return its columns."""
    if len(phi) != target_rank or any(len(r) != source_rank for r in phi):
        raise ValueError("map matrix has the wrong shape")
    return [tuple(phi[i][j] for i in range(target_rank)) for j in range(source_rank)]


def kernel_vectors(phi_cols, source_rank: int, target: FPModule, cfg: ComputeConfig = DEFAULT) -> list:
    """Vectors of P^source_rank generating the preimage of the target relations."""
    ring = target.ring
    stacked = list(phi_cols) + list(target.relations_over_P())
    S = syz(stacked, target.rank, ring, cfg)
    out = []
    for s in S:
        v = tuple(s[:source_rank])
        if any(v) and v not in out:
            out.append(v)
    if not phi_cols or all(not any(c) for c in phi_cols):
        z = ring.zero()
        out = [tuple(ring.one() if k == j else z for k in range(source_rank)) for j in range(source_rank)]
    return out


def subquotient(gens: Sequence[Column], denominators: Sequence[Column], rank: int, ring: PolyRing,
                over: str, f, cfg: ComputeConfig = DEFAULT, degrees=None) -> FPModule:
    """(span of gens + denominators) / span of denominators, presented on ``gens``."""
    gens = [tuple(g) for g in gens]
    s = len(gens)
    if s == 0:
        return FPModule(ring, 0, (), over, f if over == "R" else None, ())
    S = syz(gens + list(denominators), rank, ring, cfg)
    rels = []
    for v in S:
        c = tuple(v[:s])
        if any(c) and c not in rels:
            rels.append(c)
    degs = None
    if degrees is not None:
        ds = [column_degree(g, degrees) for g in gens]
        if all(d is not None for d in ds):
            degs = tuple(ds)
    mod = FPModule(ring, s, tuple(rels), over, f if over == "R" else None, degs)
    return minimal_presentation(mod, cfg, prune=False)


def kernel(phi, source: FPModule, target: FPModule, cfg: ComputeConfig = DEFAULT) -> FPModule:
    """ker(phi: source -> target) as a finitely presented module.

    ``phi`` is row-major (target.rank x source.rank).
    """
    cols = _as_cols(phi, target.rank, source.rank)
    check_map(cols, source, target, cfg)
    K = kernel_vectors(cols, source.rank, target, cfg)
    return subquotient(K, source.relations_over_P(), source.rank, source.ring, source.over, source.f, cfg,
                       source.degrees)


def subquotient_homology(incoming, outgoing, middle: FPModule, cfg: ComputeConfig = DEFAULT,
                         source: FPModule | None = None, target: FPModule | None = None) -> FPModule:
    """ker(outgoing) / im(incoming) at ``middle``; source/target default to ``middle``."""
    source = source or middle
    target = target or middle
    inc = _as_cols(incoming, middle.rank, source.rank)
    out = _as_cols(outgoing, target.rank, middle.rank)
    ring = middle.ring
    trels = target.relations_over_P()
    if trels:
        basis = gbasis.standard_basis(trels, cfg.global_order(ring), rank=target.rank, ring=ring)
    for c in inc:
        img = mat_vec(out, c, target.rank, ring)
        if any(img) and (not trels or not gbasis.contains(basis, img)):
            raise NotAComplex("outgoing o incoming is not zero")
    return homology_of(inc, out, middle, target, cfg)


def homology_of(inc_cols, out_cols, middle: FPModule, target: FPModule, cfg: ComputeConfig = DEFAULT) -> FPModule:
    K = kernel_vectors(out_cols, middle.rank, target, cfg)
    denoms = [tuple(c) for c in inc_cols if any(c)] + list(middle.relations_over_P())
    return subquotient(K, denoms, middle.rank, middle.ring, middle.over, middle.f, cfg, middle.degrees)


# ---------- Hilbert series ----------


def _check_graded(m: FPModule):
    degs = m.degrees if m.degrees is not None else (0,) * m.rank
    for c in m.relations_over_P():
        if column_degree(c, degs) is None:
            raise NotGraded("presentation is not homogeneous for the declared weights and degrees")
    return degs


def _monomial_numerator(gens, weights) -> dict:
    """Numerator of the Hilbert series of P/(monomials) over prod (1 - t^w_i)."""
    gens = _minimize_monomials(gens)
    if not gens:
        return {0: 1}
    *rest, last = gens
    a = _monomial_numerator(rest, weights)
    colon = [tuple(max(x - y, 0) for x, y in zip(g, last)) for g in rest]
    b = _monomial_numerator(colon, weights)
    d = sum(map(operator.mul, last, weights))
    out = dict(a)
    for k, v in b.items():
        out[k + d] = out.get(k + d, 0) - v
    return {k: v for k, v in out.items() if v}


def hilbert_series(m: FPModule, cfg: ComputeConfig = DEFAULT) -> HilbertSeries:
    """Hilbert-Poincaré series of a graded module from a graded standard basis."""
    degs = _check_graded(m)
    ring = m.ring
    num: dict = {}
    if m.rank:
        rels = m.relations_over_P()
        order = cfg.global_order(ring)
        lts = gbasis.standard_basis(rels, order, rank=m.rank, ring=ring).leading_terms() if rels else []
        by = {c: [] for c in range(m.rank)}
        for comp, e in lts:
            by[comp].append(e)
        for c in range(m.rank):
            for k, v in _monomial_numerator(by[c], ring.weights).items():
                num[k + degs[c]] = num.get(k + degs[c], 0) + v
    num = {k: v for k, v in num.items() if v}
    if not num:
        return HilbertSeries((), (), 0)
    lo, hi = min(num), max(num)
    coeffs = tuple(num.get(k, 0) for k in range(lo, hi + 1))
    return HilbertSeries(coeffs, tuple(ring.weights), lo).canonical()


def graded_dimensions(m: FPModule, upto: int, cfg: ComputeConfig = DEFAULT) -> list[int]:
    """dim M_k for k = 0..upto by direct standard-monomial counting."""
    degs = _check_graded(m)
    ring = m.ring
    counts = [0] * (upto + 1)
    rels = m.relations_over_P()
    lts = gbasis.standard_basis(rels, cfg.global_order(ring), rank=m.rank, ring=ring).leading_terms() if rels else []
    by = {c: [] for c in range(m.rank)}
    for comp, e in lts:
        by[comp].append(e)
    for c in range(m.rank):
        gens = _minimize_monomials(by[c])
        for e in _monomials_up_to(ring.weights, upto - degs[c]):
            if not any(all(a <= b for a, b in zip(g, e)) for g in gens):
                counts[sum(map(operator.mul, e, ring.weights)) + degs[c]] += 1
    return counts


def _monomials_up_to(weights, maxdeg):
    if maxdeg < 0:
        return
    if not weights:
        yield ()
        return
    w, rest = weights[0], weights[1:]
    for k in range(maxdeg // w + 1):
        for tail in _monomials_up_to(rest, maxdeg - k * w):
            yield (k,) + tail
