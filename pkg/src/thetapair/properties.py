"""Seeded random instances, structural property checks and the regression table used by selftest."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import fpmod as fm
from . import graded as gr
from . import hypersurface as hs
from .fpmod import ComputeConfig
from .polyring import PolyRing, SingularityContext, make_field

# isolated hypersurface singularities used for randomized checks
HYPERSURFACES = [
    ("xy", "x*y"),
    ("xy", "x^2-y^3"),
    ("xyz", "x*y-z^2"),
    ("xyz", "x*y-z^3"),
    ("xyzw", "x*y-z*w"),
]

# ideals defining subvarieties that give nonzero pairings
IDEAL_POOLS = {
    "x*y": [["x"], ["y"], ["x", "y"], ["x^2"], ["y^2"], ["x", "y^2"], ["x+y"]],
    "x^2-y^3": [["x", "y"], ["x"], ["y"], ["x", "y^2"], ["x-y"]],
    "x*y-z^2": [["x", "z"], ["y", "z"], ["x"], ["x", "y", "z"], ["x", "z^2"]],
    "x*y-z^3": [["x", "z"], ["y", "z"], ["x", "z^2"], ["y", "z^2"], ["x"]],
    "x*y-z*w": [["x", "z"], ["y", "w"], ["x", "w"], ["y", "z"], ["x", "y", "z", "w"], ["x", "z^2"]],
}


def make_context(variables, f: str, field: str = "Q", weights=None) -> SingularityContext:
    ring = PolyRing(list(variables), make_field(field), weights)
    return SingularityContext(ring, ring.parse(f))


def random_ideal(rng: random.Random, ring: PolyRing, max_gens: int = 2) -> list:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        p = ring.zero()
        for _ in range(rng.randint(1, 2)):
            e = [0] * ring.nvars
            for _ in range(rng.randint(1, 2)):
                e[rng.randrange(ring.nvars)] += 1
            p = p + ring.monomial(tuple(e), rng.choice([1, -1, 2, -2, 3]))
        if not p.is_zero():
            gens.append(p)
    return gens or [ring.gen(0)]


def random_module(rng: random.Random, ctx: SingularityContext, pool=None) -> fm.FPModule:
    """A cyclic module R/I with I from ``pool`` (plus, sometimes, a random extra generator)."""
    if not pool:
        return fm.module_from_ideal(random_ideal(rng, ctx.ring), "R", ctx=ctx)
    gens = [ctx.ring(s) for s in rng.choice(pool)]
    if rng.random() < 0.3:
        gens += random_ideal(rng, ctx.ring, 1)
    return fm.module_from_ideal(gens, "R", ctx=ctx)


def residue_field(ctx: SingularityContext) -> fm.FPModule:
    return fm.module_from_ideal(ctx.ring.gens(), "R", ctx=ctx)


@dataclass
class Outcome:
    name: str
    ok: bool
    detail: str = ""


def property_cases(seed: int, count: int = 20) -> list[Outcome]:
    """Run each structural property on ``count`` random module pairs (7 checks per pair)."""
    rng = random.Random(seed)
    lex = ComputeConfig(order="lex")
    out = []
    for case in range(count):
        variables, fs = HYPERSURFACES[case % len(HYPERSURFACES)]
        ctx = make_context(variables, fs)
        pool = IDEAL_POOLS.get(fs)
        M, M2, N = (random_module(rng, ctx, pool) for _ in range(3))
        tag = f"{fs} #{case}"
        rep = hs.stable_tor(M, N)
        t = rep.theta
        out.append(Outcome(f"symmetry {tag}", t == hs.theta(N, M), f"{t}"))
        out.append(Outcome(f"syzygy sign {tag}", t == -hs.theta(hs.syzygy_over_R(M), N)))
        out.append(Outcome(f"additivity {tag}", hs.theta(M.direct_sum(M2), N) == t + hs.theta(M2, N)))
        free = fm.free_module(ctx.ring, 1 + case % 2, "R", ctx.f)
        out.append(Outcome(f"free {tag}", hs.theta(free, N) == 0))
        _, _, mf = hs._approximate(M, fm.DEFAULT, None)
        square = mf is None or (len(mf.A) == len(mf.B) and all(len(r) == len(mf.A) for r in mf.A + mf.B))
        out.append(Outcome(f"residue field {tag}", square and hs.theta(M, residue_field(ctx)) == 0))
        k = rep.stable_index
        tors = hs.tor_via_resolution(M, N, [k, k + 1, k + 2, k + 3])
        periodic = (tors[k] == tors[k + 2] == rep.len_even and tors[k + 1] == tors[k + 3] == rep.len_odd)
        out.append(Outcome(f"periodicity {tag}", periodic, f"{tors}"))
        out.append(Outcome(f"order independence {tag}", hs.stable_tor(M, N, lex) == rep))
    return out


# ---------- regression table ----------


def _ex_i():
    ctx = make_context("xy", "x*y")
    R = lambda *g: fm.module_from_ideal([ctx.ring(s) for s in g], "R", ctx=ctx)
    return ctx, R


def _ex_ii():
    ctx = make_context("xyz", "x*y-z^2")
    R = lambda *g: fm.module_from_ideal([ctx.ring(s) for s in g], "R", ctx=ctx)
    return ctx, R


def fermat_cubic(p: int = 1000003):
    """Fermat cubic surface over F_p (p = 1 mod 3) and a primitive cube root of unity."""
    if p % 3 != 1:
        raise ValueError("p must be 1 mod 3")
    ctx = make_context(["x0", "x1", "x2", "x3"], "x0^3+x1^3+x2^3+x3^3", f"Fp:{p}")
    w = next(pow(g, (p - 1) // 3, p) for g in range(2, p) if pow(g, (p - 1) // 3, p) != 1)
    return ctx, w


def cubic_line(ctx, w, a, b, i, c, d, j) -> list:
    """Linear forms x_a + w^i x_b and x_c + w^j x_d cutting out a line on the Fermat cubic."""
    x = ctx.ring.gens()
    F = ctx.ring.field
    return [x[a] + x[b].scale(pow(w, i, F.p)), x[c] + x[d].scale(pow(w, j, F.p))]


def cubic_line_pairs(p: int = 1000003):
    ctx, w = fermat_cubic(p)
    L1 = cubic_line(ctx, w, 0, 1, 0, 2, 3, 0)
    return ctx, {
        "skew": (L1, cubic_line(ctx, w, 0, 1, 1, 2, 3, 1)),
        "transverse": (L1, cubic_line(ctx, w, 0, 1, 0, 2, 3, 1)),
        "identical": (L1, L1),
    }


def _cubic_tor(kind):
    ctx, pairs = cubic_line_pairs()
    I, J = pairs[kind]
    r = hs.stable_tor(fm.module_from_ideal(I, "R", ctx=ctx), fm.module_from_ideal(J, "R", ctx=ctx))
    return (r.len_even, r.len_odd, r.theta)


def _tor_triple(M, N):
    r = hs.stable_tor(M, N)
    return (r.len_even, r.len_odd, r.theta)


def _t12(kind):
    ctx, pairs = cubic_line_pairs()
    rep = gr.theorem_1_2_check(ctx.f, *pairs[kind])
    return (rep.theta_predicted, rep.theta_computed, rep.residue_balance)


def _serre_vs_theta(variables, f, I, J):
    ctx = make_context(variables, f)
    I = [ctx.ring(s) for s in I]
    J = [ctx.ring(s) for s in J]
    th = hs.theta(fm.module_from_ideal(I, "R", ctx=ctx), fm.module_from_ideal(J, "R", ctx=ctx))
    return (th, gr.serre_intersection(I, J))


def regression_table() -> list[tuple[str, Callable, object]]:
    """(name, computation, expected value)."""
    return [
        ("xy: theta(R/x, R/x)", lambda: _tor_triple(_ex_i()[1]("x"), _ex_i()[1]("x")), (0, 1, -1)),
        ("xy: theta(R/x, R/y)", lambda: _tor_triple(_ex_i()[1]("x"), _ex_i()[1]("y")), (1, 0, 1)),
        ("xy: theta(R/x, R/m)", lambda: _tor_triple(_ex_i()[1]("x"), _ex_i()[1]("x", "y"))[2], 0),
        ("xy-z^2: theta(R/(x,z), R/(x,z))", lambda: _tor_triple(_ex_ii()[1]("x", "z"), _ex_ii()[1]("x", "z")),
         (1, 1, 0)),
        ("xy-z^2: MF of R/(x,z) is 2x2", lambda: hs._approximate(_ex_ii()[1]("x", "z"), fm.DEFAULT, None)[2].p, 2),
        ("mu(xy)", lambda: hs.milnor_number(_ex_i()[0]), 1),
        ("mu(x^3+y^3)", lambda: hs.milnor_number(make_context("xy", "x^3+y^3")), 4),
        ("cubic lines: skew", lambda: _cubic_tor("skew"), (1, 0, 1)),
        ("cubic lines: transverse", lambda: _cubic_tor("transverse"), (0, 2, -2)),
        ("primitive pairing formula: skew lines", lambda: _t12("skew"), (1, 1, True)),
        ("primitive pairing formula: transverse lines", lambda: _t12("transverse"), (-2, -2, True)),
        ("serre: xy, (x), (y)", lambda: _serre_vs_theta("xy", "x*y", ["x"], ["y"]), (1, 1)),
        ("serre: y(y-x^2)", lambda: _serre_vs_theta("xy", "y*(y-x^2)", ["y"], ["y-x^2"]), (2, 2)),
    ]


def run_regressions(corrupt: bool = False) -> list[Outcome]:
    out = []
    for k, (name, fn, expected) in enumerate(regression_table()):
        if corrupt and k == 0:
            expected = ("corrupted",)
        try:
            got = fn()
            out.append(Outcome(name, got == expected, f"got {got}, expected {expected}"))
        except Exception as e:  # a crash is a failure, not an abort
            out.append(Outcome(name, False, f"{type(e).__name__}: {e}"))
    return out


# Tabulated values the engine does not reproduce. Reported by selftest, never counted as passing.
KNOWN_DIFFERENCES = [
    ("cubic lines: identical", lambda: _cubic_tor("identical"), (0, 4, -4)),
]


def known_differences() -> list[tuple[str, object, object]]:
    """(name, computed, tabulated) for each entry of KNOWN_DIFFERENCES."""
    return [(name, fn(), tab) for name, fn, tab in KNOWN_DIFFERENCES]
