"""Command line front end: ``thetapair run problem.json`` and ``thetapair selftest``.

``run`` prints one JSON envelope per task (one per line) to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from . import fpmod as fm
from . import graded as gr
from . import hypersurface as hs
from . import properties
from .fpmod import ComputeConfig, FPModule
from .polyring import PolyRing, SingularityContext, make_field

COMMANDS = ("theta", "tor", "ext", "mf", "resolve", "mcm", "milnor", "hilbert", "serre", "theorem12",
            "parity-check")


class ProblemError(ValueError):
    """Schema or parse problem; the message names the offending field."""


class Problem:
    def __init__(self, ring: PolyRing, ctx: SingularityContext, modules: dict, tasks: list, raw: dict):
        self.ring = ring
        self.ctx = ctx
        self.modules = modules
        self.tasks = tasks
        self.raw = raw


def _need(d, key, where, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise ProblemError(f"{where}: missing field '{key}'")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ProblemError(f"{where}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _poly(ring, text, where):
    if not isinstance(text, str):
        raise ProblemError(f"{where}: expected a polynomial string")
    try:
        return ring.parse(text)
    except ValueError as e:
        raise ProblemError(f"{where}: {e}") from None


def parse_problem(raw: dict, field_override: str | None = None) -> Problem:
    if not isinstance(raw, dict):
        raise ProblemError("top level: expected a JSON object")
    variables = _need(raw, "variables", "problem", list)
    if not variables or not all(isinstance(v, str) for v in variables):
        raise ProblemError("problem.variables: expected a nonempty list of names")
    weights = raw.get("weights")
    if weights is not None and (not isinstance(weights, list) or len(weights) != len(variables)
                                or not all(isinstance(w, int) and w > 0 for w in weights)):
        raise ProblemError("problem.weights: expected one positive integer per variable")
    try:
        field = make_field(field_override or raw.get("field", "Q"))
    except ValueError as e:
        raise ProblemError(f"problem.field: {e}") from None
    try:
        ring = PolyRing(variables, field, weights)
    except ValueError as e:
        raise ProblemError(f"problem.variables: {e}") from None
    f = _poly(ring, _need(raw, "f", "problem"), "problem.f")
    try:
        ctx = SingularityContext(ring, f)
    except ValueError as e:
        raise ProblemError(f"problem.f: {e}") from None
    modules = {}
    for name, spec in (raw.get("modules") or {}).items():
        where = f"modules.{name}"
        if not isinstance(spec, dict):
            raise ProblemError(f"{where}: expected an object")
        over = spec.get("ring", "R")
        if over not in ("P", "R"):
            raise ProblemError(f"{where}.ring: expected 'P' or 'R'")
        if "ideal" in spec:
            gens = spec["ideal"]
            if not isinstance(gens, list):
                raise ProblemError(f"{where}.ideal: expected a list")
            ps = [_poly(ring, s, f"{where}.ideal[{i}]") for i, s in enumerate(gens)]
            modules[name] = fm.module_from_ideal(ps, over, ring=ring, f=f)
        elif "presentation" in spec:
            rows = spec["presentation"]
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise ProblemError(f"{where}.presentation: expected a list of rows")
            ncols = len(rows[0]) if rows else 0
            if any(len(r) != ncols for r in rows):
                raise ProblemError(f"{where}.presentation: rows have different lengths")
            mat = [[_poly(ring, s, f"{where}.presentation[{i}][{j}]") for j, s in enumerate(r)]
                   for i, r in enumerate(rows)]
            rank = spec.get("rank", len(rows))
            if rank != len(rows):
                raise ProblemError(f"{where}.rank: does not match the number of rows")
            degs = spec.get("degrees")
            if degs is not None and (not isinstance(degs, list) or len(degs) != rank):
                raise ProblemError(f"{where}.degrees: expected one integer per row")
            cols = tuple(tuple(mat[i][j] for i in range(rank)) for j in range(ncols))
            modules[name] = FPModule(ring, rank, cols, over, f if over == "R" else None,
                                     tuple(degs) if degs is not None else None)
        else:
            raise ProblemError(f"{where}: needs 'ideal' or 'presentation'")
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list):
        raise ProblemError("problem.tasks: expected a list")
    for i, t in enumerate(tasks):
        where = f"tasks[{i}]"
        cmd = _need(t, "command", where, str)
        if cmd not in COMMANDS:
            raise ProblemError(f"{where}.command: unknown command '{cmd}'")
        args = t.get("args", {})
        if not isinstance(args, dict):
            raise ProblemError(f"{where}.args: expected an object")
        for key, v in args.items():
            names = []
            if key in ("M", "N", "Y", "Z"):
                names = [v]
            elif key == "pairs":
                if not isinstance(v, list) or not all(isinstance(p, list) and len(p) == 2 for p in v):
                    raise ProblemError(f"{where}.args.pairs: expected a list of [M, N] pairs")
                names = [n for p in v for n in p]
            for n in names:
                if n not in modules:
                    raise ProblemError(f"{where}.args.{key}: unknown module '{n}'")
    return Problem(ring, ctx, modules, tasks, raw)


# ---------- task execution ----------


def _mod(problem, args, key):
    if key not in args:
        raise ValueError(f"argument '{key}' is required")
    return problem.modules[args[key]]


def _echo(problem, *names):
    return {n: problem.modules[n].to_json() for n in names}


def _ideal_gens(m: FPModule, what: str) -> list:
    if m.rank != 1:
        raise ValueError(f"{what} must be a cyclic module given by an ideal")
    return [c[0] for c in m.presentation]


def _frac(x) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def execute(problem: Problem, task: dict, cfg: ComputeConfig) -> dict:
    cmd = task["command"]
    args = task.get("args", {})
    ctx = problem.ctx
    if cmd == "theta":
        r = hs.stable_tor(_mod(problem, args, "M"), _mod(problem, args, "N"), cfg)
        return {**r.to_json(), "modules": _echo(problem, args["M"], args["N"])}
    if cmd == "tor":
        M, N = _mod(problem, args, "M"), _mod(problem, args, "N")
        r = hs.stable_tor(M, N, cfg)
        out = {**r.to_json(), "modules": _echo(problem, args["M"], args["N"])}
        if args.get("indices"):
            lens = hs.tor_via_resolution(M, N, [int(i) for i in args["indices"]], cfg)
            out["lengths"] = {str(k): v for k, v in sorted(lens.items())}
        return out
    if cmd == "ext":
        r = hs.stable_ext(_mod(problem, args, "M"), _mod(problem, args, "N"), cfg)
        return {**r.to_json(), "modules": _echo(problem, args["M"], args["N"])}
    if cmd == "mf":
        _, steps, mf = hs._approximate(_mod(problem, args, "M"), cfg, cfg.max_steps)
        mf = mf or hs.MatrixFactorization((), (), ctx.f, ctx.ring.one())
        return {"steps": steps, "mf": mf.to_json(), "verified": mf.check(), "modules": _echo(problem, args["M"])}
    if cmd == "mcm":
        mcm, steps = hs.mcm_approximation(_mod(problem, args, "M"), cfg, cfg.max_steps)
        return {"steps": steps, "isZero": mcm.rank == 0, "mcm": mcm.to_json(), "modules": _echo(problem, args["M"])}
    if cmd == "resolve":
        res = hs.resolve(_mod(problem, args, "M"), args.get("length"), cfg)
        return {**res.to_json(), "modules": _echo(problem, args["M"])}
    if cmd == "milnor":
        return {"mu": hs.milnor_number(ctx, cfg)}
    if cmd == "hilbert":
        if "M" in args:
            m = _mod(problem, args, "M")
            echo = _echo(problem, args["M"])
        else:
            m = fm.module_from_ideal([ctx.f], "P", ctx=ctx)
            echo = {}
        gcfg = ComputeConfig("graded", cfg.order, cfg.max_steps, cfg.verify)
        h = fm.hilbert_series(m, gcfg)
        return {"numerator": list(h.numerator), "shift": h.shift, "denominatorFactors": list(h.denominator),
                "series": str(h), "modules": echo}
    if cmd == "serre":
        I = _ideal_gens(_mod(problem, args, "M"), "M")
        J = _ideal_gens(_mod(problem, args, "N"), "N")
        return {"serre": gr.serre_intersection(I, J, cfg), "modules": _echo(problem, args["M"], args["N"])}
    if cmd == "theorem12":
        Y, Z = _mod(problem, args, "Y"), _mod(problem, args, "Z")
        rep = gr.theorem_1_2_check(ctx.f, _ideal_gens(Y, "Y"), _ideal_gens(Z, "Z"), cfg)
        return {**rep.to_json(), "agrees": rep.agrees, "modules": _echo(problem, args["Y"], args["Z"])}
    if cmd == "parity-check":
        pairs = args.get("pairs") or []
        thetas = hs.parity_vanishing_check(ctx, [(problem.modules[a], problem.modules[b]) for a, b in pairs], cfg)
        payload = {"thetas": thetas, "allZero": all(t == 0 for t in thetas),
                   "modules": _echo(problem, *sorted({n for p in pairs for n in p}))}
        if not payload["allZero"]:
            raise ContractViolation("nonzero theta in odd number of variables", payload)
        return payload
    raise ValueError(f"unknown command {cmd}")


class ContractViolation(RuntimeError):
    def __init__(self, msg, payload):
        super().__init__(msg)
        self.payload = payload


def run_task(problem: Problem, task: dict, cfg: ComputeConfig, timing: bool = True) -> dict:
    t0 = time.perf_counter()
    env = {"task": task, "engineVersion": __version__}
    try:
        env["payload"] = execute(problem, task, cfg)
        env["status"] = "ok"
    except ContractViolation as e:
        env.update(status="error", error=str(e), payload=e.payload)
    except Exception as e:  # reported in the envelope, exit code 1
        env.update(status="error", error=f"{type(e).__name__}: {e}")
    env["timingMs"] = int((time.perf_counter() - t0) * 1000) if timing else 0
    return env


def _worker(raw, field, cfg, index, timing):
    problem = parse_problem(raw, field)
    return run_task(problem, problem.tasks[index], cfg, timing)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("THETA_KERNEL_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


def load_problem_file(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ProblemError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def cmd_run(ns) -> int:
    try:
        raw = load_problem_file(ns.problem)
        problem = parse_problem(raw, ns.field)
        cfg = ComputeConfig(ns.mode, ns.order, ns.max_steps, ns.verify)
    except (ProblemError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    timing = not ns.no_timing
    n = len(problem.tasks)
    if ns.parallel and n > 1:
        with ProcessPoolExecutor(max_workers=min(_threads(), n)) as pool:
            futs = [pool.submit(_worker, raw, ns.field, cfg, i, timing) for i in range(n)]
            envs = [fu.result() for fu in futs]
    else:
        envs = [run_task(problem, t, cfg, timing) for t in problem.tasks]
    for env in envs:
        sys.stdout.write(json.dumps(env, sort_keys=True) + "\n")
    return 0 if all(e["status"] == "ok" for e in envs) else 1


def cmd_selftest(ns) -> int:
    rows = properties.run_regressions(corrupt=ns.corrupt_table)
    rows += properties.property_cases(ns.seed, ns.cases)
    width = max(len(r.name) for r in rows)
    for r in rows:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name.ljust(width)}  {r.detail if not r.ok else ''}".rstrip())
    for name, got, tab in properties.known_differences():
        if got != tab:
            print(f"DIFF  {name.ljust(width)}  computed {got}, tabulated {tab}")
    failed = sum(not r.ok for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thetapair", description="Theta pairing of modules over hypersurfaces.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="run the tasks of a problem file")
    run.add_argument("problem")
    run.add_argument("--field", help='override the coefficient field ("Q" or "Fp:<prime>")')
    run.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    run.add_argument("--mode", choices=("local", "graded"), default="local")
    run.add_argument("--max-steps", type=int, default=None)
    run.add_argument("--seed", type=int, default=0, help="accepted for symmetry with selftest")
    run.add_argument("--verify", action="store_true", help="extra exact assertions (det checks)")
    run.add_argument("--parallel", action="store_true")
    run.add_argument("--no-timing", action="store_true", help="report timingMs as 0 (byte-identical output)")
    run.set_defaults(func=cmd_run)
    st = sub.add_parser("selftest", help="regression table and seeded property checks")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--cases", type=int, default=20, help="random module pairs (7 checks each)")
    st.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)
    st.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
