"""Command-line interface.

Usage::

    schwarzmod modulus --alpha pi/5 --j 3 --refine
    schwarzmod modulus --t 1.41421356 --s 1.41421356 --r1 1 --r2 1 --json
    schwarzmod table --refine --format markdown
    schwarzmod benchmark
    schwarzmod ngon --family hexagon --vertices A,B,D,E
    schwarzmod render --alpha pi/4 --j 3 --samples 360 -o boundary.csv

Exit codes: 0 success, 1 solver failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import __version__
from .benchmarks import (
    HEXAGON_MODULUS,
    Q4_MODULUS,
    TABLE1,
    exact_case_q4,
    fixtures_json,
    hexagon_case,
    pn_case,
)
from .errors import DomainError, SchwarzModError
from .geometry import QuadrilateralSpec, quad_from_alpha_j
from .schwarz_ode import OdeTolerance, SchwarzParams, solve_ray
from .solver import SolverConfig, reciprocal_check, refine, solve_beta
from .specialfn import half_plane_modulus, is_inf

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_INPUT = 2

CLI_TANGENCY_RTOL = 1e-6

_ANGLE_RE = re.compile(
    r"^\s*(?:(?P<num>[0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>[0-9.eE+-]+))?\s*$"
)


class InputError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Radians from ``"0.6283"``, ``"pi/5"``, ``"3pi/8"`` or ``"3*pi/8"``."""
    text = str(text).strip().lower()
    m = _ANGLE_RE.match(text)
    try:
        if m:
            num = float(m.group("num")) if m.group("num") else 1.0
            den = float(m.group("den")) if m.group("den") else 1.0
            return num * math.pi / den
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def fmt17(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


# --- configuration -----------------------------------------------------------

_CONFIG_KEYS = {
    "ode_rel_tol": float,
    "ode_abs_tol": float,
    "ode_max_steps": int,
    "refined_rel_tol": float,
    "refined_abs_tol": float,
    "iters_bracket": int,
    "iters_gamma": int,
    "iters_beta": int,
    "swap_detect_tol": float,
    "refine_eps": float,
    "refine_iters": int,
    "max_swaps": int,
}


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key = value")
            key, val = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise InputError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val)
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def build_config(args) -> SolverConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    if getattr(args, "tol_ode", None) is not None:
        values["ode_rel_tol"] = values["ode_abs_tol"] = args.tol_ode
    for key in ("iters_beta", "iters_gamma", "iters_bracket", "refine_eps"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v

    base = SolverConfig()
    ode = OdeTolerance(
        values.pop("ode_rel_tol", base.ode_tol.rel_tol),
        values.pop("ode_abs_tol", base.ode_tol.abs_tol),
        values.pop("ode_max_steps", base.ode_tol.max_steps),
    )
    refined = OdeTolerance(
        values.pop("refined_rel_tol", base.refined_tol.rel_tol),
        values.pop("refined_abs_tol", base.refined_tol.abs_tol),
        ode.max_steps,
    )
    try:
        return replace(base, ode_tol=ode, refined_tol=refined, **values)
    except (ValueError, SchwarzModError) as exc:
        raise InputError(str(exc)) from None


def _spec_from_args(args) -> tuple[QuadrilateralSpec, dict]:
    have_tsr = all(getattr(args, k, None) is not None for k in ("t", "s", "r1", "r2"))
    have_aj = getattr(args, "alpha", None) is not None and getattr(args, "j", None) is not None
    if have_tsr == have_aj:
        raise InputError("give either --t --s --r1 --r2 or --alpha --j")
    if have_aj:
        spec = quad_from_alpha_j(args.alpha, args.j)
        echo = {"alpha": args.alpha, "j": args.j}
    else:
        spec = QuadrilateralSpec(args.t, args.s, args.r1, args.r2, CLI_TANGENCY_RTOL)
        echo = {}
    echo.update({"t": spec.t, "s": spec.s, "r1": spec.r1, "r2": spec.r2})
    return spec, echo


# --- output records ----------------------------------------------------------

RECORD_KEYS = (
    "inputs",
    "beta",
    "gamma",
    "modulus",
    "conjugate_modulus",
    "residual_ratio_st",
    "residual_ratio_r",
    "reciprocal_error",
    "error_number",
    "iterations",
    "wall_time_ms",
)


def make_record(inputs, result, conjugate=False, timing=True) -> dict:
    beta, mod, cmod = result.beta, result.modulus, result.conjugate_modulus
    if conjugate:
        beta, mod, cmod = 0.5 * math.pi - beta, cmod, mod
    return {
        "inputs": inputs,
        "beta": beta,
        "gamma": result.gamma,
        "modulus": mod,
        "conjugate_modulus": cmod,
        "residual_ratio_st": result.residual_ratio_st,
        "residual_ratio_r": result.residual_ratio_r,
        "reciprocal_error": result.reciprocal_error,
        "error_number": result.error_number,
        "iterations": result.iterations,
        "wall_time_ms": result.wall_time_ms if timing else None,
    }


def dump_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True)


def render_text(record: dict) -> str:
    lines = []
    width = max(len(k) for k in record)
    for key in RECORD_KEYS:
        if key not in record:
            continue
        val = record[key]
        if isinstance(val, dict):
            val = ", ".join(f"{k}={fmt17(v)}" for k, v in val.items())
        else:
            val = fmt17(val)
        lines.append(f"{key:<{width}}  {val}")
    for key in record:
        if key not in RECORD_KEYS:
            lines.append(f"{key:<{width}}  {fmt17(record[key])}")
    return "\n".join(lines)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------


def cmd_modulus(args) -> int:
    spec, echo = _spec_from_args(args)
    config = build_config(args)
    result = solve_beta(spec, config)
    if args.refine:
        result = refine(result, spec, config)
    if args.reciprocal:
        eps_r, eps_n = reciprocal_check(spec, config, refined=args.refine, primary=result)
        result = replace(result, reciprocal_error=eps_r, error_number=eps_n)
    echo["mode"] = result.mode
    echo["conjugate"] = bool(args.conjugate)
    record = make_record(echo, result, args.conjugate, timing=not args.no_timing)
    if args.json:
        print(dump_record(record))
    else:
        print(render_text(record))
    return EXIT_OK


def _table_row(job):
    n, j, do_refine, do_recip, config = job
    spec = quad_from_alpha_j(math.pi / n, j)
    start = time.perf_counter()
    row = {"alpha": f"pi/{n}", "j": j}
    try:
        res = solve_beta(spec, config)
        row["modulus_standard"] = res.modulus
        final = res
        if do_refine:
            final = refine(res, spec, config)
            row["modulus_refined"] = final.modulus
        row["beta"] = final.beta
        row["gamma"] = final.gamma
        if do_recip:
            eps_r, eps_n = reciprocal_check(spec, config, refined=do_refine, primary=final)
            row["reciprocal_error"] = eps_r
            row["error_number"] = eps_n
        row["error"] = ""
    except SchwarzModError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wall_time_ms"] = (time.perf_counter() - start) * 1e3
    return row


def table_rows(config, do_refine=False, do_recip=True, parallel=False, workers=None):
    """Compute every table row; output order follows the fixture order."""
    jobs = [(n, j, do_refine, do_recip, config) for (n, j) in TABLE1]
    if parallel:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_table_row, jobs))
    return [_table_row(job) for job in jobs]


def _table_columns(do_refine):
    cols = ["alpha", "j", "modulus_standard"]
    if do_refine:
        cols.append("modulus_refined")
    cols += ["beta", "gamma", "reciprocal_error", "error_number", "wall_time_ms", "error"]
    return cols


def max_deviation(rows, key):
    devs = [
        abs(r[key] - TABLE1[(int(r["alpha"][3:]), r["j"])])
        for r in rows
        if r.get(key) is not None
    ]
    return max(devs) if devs else math.nan


def format_table(rows, do_refine, fmt="csv", timing=True) -> str:
    cols = _table_columns(do_refine)
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow(
                [fmt17(r.get(c)) if (c != "wall_time_ms" or timing) else "" for c in cols]
            )
        buf.write(f"# max_abs_deviation_standard,{max_deviation(rows, 'modulus_standard'):.3e}\n")
        if do_refine:
            buf.write(f"# max_abs_deviation_refined,{max_deviation(rows, 'modulus_refined'):.3e}\n")
    else:
        buf.write("| " + " | ".join(cols) + " |\n")
        buf.write("|" + "---|" * len(cols) + "\n")
        for r in rows:
            cells = [fmt17(r.get(c)) if (c != "wall_time_ms" or timing) else "" for c in cols]
            buf.write("| " + " | ".join(cells) + " |\n")
        buf.write(f"\nmax abs deviation (standard): {max_deviation(rows, 'modulus_standard'):.3e}\n")
        if do_refine:
            buf.write(f"max abs deviation (refined): {max_deviation(rows, 'modulus_refined'):.3e}\n")
    return buf.getvalue()


def cmd_table(args) -> int:
    config = build_config(args)
    rows = table_rows(
        config,
        do_refine=args.refine,
        do_recip=not args.no_reciprocal,
        parallel=args.parallel,
        workers=args.workers,
    )
    _emit(format_table(rows, args.refine, args.format, timing=not args.no_timing), args.output)
    failed = [r for r in rows if r["error"]]
    for r in failed:
        print(f"row {r['alpha']} j={r['j']} failed: {r['error']}", file=sys.stderr)
    return EXIT_SOLVER if failed else EXIT_OK


def _check(report, name, value, expected, tol):
    err = abs(value - expected)
    ok = err <= tol
    report.append((name, ok, f"value={value:.17g} expected={expected:.17g} err={err:.3e} tol={tol:.0e}"))
    return ok


def cmd_benchmark(args) -> int:
    if args.fixtures_json:
        print(fixtures_json())
        return EXIT_OK
    config = build_config(args)
    report = []

    q4 = exact_case_q4()
    res = solve_beta(q4.input, config)
    _check(report, "q4 standard modulus", res.modulus, Q4_MODULUS, 1e-6)
    _check(report, "q4 standard sin(beta)", math.sin(res.beta), 1.0 / 3.0, 1e-6)
    _check(report, "q4 standard gamma", res.gamma, 2.0 / 3.0, 1e-6)
    if args.refine:
        rr = refine(res, q4.input, config)
        _check(report, "q4 refined modulus", rr.modulus, Q4_MODULUS, 1e-9)
        _check(report, "q4 refined sin(beta)", math.sin(rr.beta), 1.0 / 3.0, 1e-9)
        _check(report, "q4 refined gamma", rr.gamma, 2.0 / 3.0, 1e-9)

    hexa = hexagon_case("ABDE")
    _check(report, "hexagon ABDE", hexa.expected_modulus, HEXAGON_MODULUS, 1e-12)
    conj = hexagon_case("BDEA")
    _check(report, "hexagon conjugate product", hexa.expected_modulus * conj.expected_modulus, 1.0, 1e-12)
    _check(report, "P4 all vertices", pn_case(4, (0, 1, 2, 3)).expected_modulus, 1.0, 1e-12)
    _check(report, "P6 (0,2,4,inf)", pn_case(6, (0, 2, 4, 5)).expected_modulus, 1.0, 1e-12)

    if not args.quick:
        for (n, j) in TABLE1:
            spec = quad_from_alpha_j(math.pi / n, j)
            eps_r, eps_n = reciprocal_check(spec, config)
            ok = eps_n is None or eps_n >= 5
            report.append(
                (f"reciprocal pi/{n} j={j}", ok, f"eps_R={eps_r:.3e} eps_N={eps_n}")
            )

    width = max(len(r[0]) for r in report)
    for name, ok, detail in report:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
    n_fail = sum(not ok for _, ok, _ in report)
    print(f"{len(report) - n_fail}/{len(report)} passed")
    return EXIT_OK if n_fail == 0 else EXIT_SOLVER


def cmd_ngon(args) -> int:
    verts = [v.strip() for v in args.vertices.split(",") if v.strip()]
    if args.family == "hexagon":
        case = hexagon_case(verts)
    else:
        if args.n is None:
            raise InputError("--family pn needs --n")
        try:
            idx = [int(v) for v in verts]
        except ValueError:
            raise InputError(f"vertex indices must be integers: {args.vertices!r}") from None
        case = pn_case(args.n, idx)
    mod = case.expected_modulus
    record = {
        "inputs": {
            "family": args.family,
            "n": args.n if args.family == "pn" else 6,
            "vertices": verts,
            "images": ["inf" if is_inf(p) else p for p in case.input],
        },
        "modulus": mod,
        "conjugate_modulus": half_plane_modulus(*case.input[1:], case.input[0]),
    }
    if args.json:
        print(dump_record(record))
    else:
        print(render_text(record))
    return EXIT_OK


def singular_directions(beta):
    return (beta, math.pi - beta, math.pi + beta, 2 * math.pi - beta)


def boundary_samples(params: SchwarzParams, samples: int, tol: OdeTolerance, exclude=1e-3):
    """``(theta, f(exp(i theta)))`` on an even grid, skipping vertex neighbourhoods."""
    out = []
    sing = singular_directions(params.beta)
    for i in range(samples):
        th = 2 * math.pi * i / samples
        if any(abs(math.remainder(th - s, 2 * math.pi)) < exclude for s in sing):
            continue
        out.append((th, solve_ray(params, th, tol).f_end))
    return out


def cmd_render(args) -> int:
    config = build_config(args)
    if args.beta is not None:
        if args.gamma is None:
            raise InputError("--beta needs --gamma")
        params = SchwarzParams(args.beta, args.gamma)
    else:
        spec, _ = _spec_from_args(args)
        res = solve_beta(spec, config)
        params = SchwarzParams(res.solved_beta, res.gamma)
    if args.samples < 0:
        raise InputError("--samples must be >= 0")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "re_f", "im_f"])
    for th, f in boundary_samples(params, args.samples, config.ode_tol):
        w.writerow([fmt17(th), fmt17(f.real), fmt17(f.imag)])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _add_solver_flags(p):
    g = p.add_argument_group("solver settings")
    g.add_argument("--config", help="flat key = value file of solver settings")
    g.add_argument("--tol-ode", type=float, help="ODE rel/abs tolerance (standard mode)")
    g.add_argument("--iters-beta", type=int)
    g.add_argument("--iters-gamma", type=int)
    g.add_argument("--iters-bracket", type=int)
    g.add_argument("--refine-eps", type=float)


def _add_geometry_flags(p):
    g = p.add_argument_group("quadrilateral")
    g.add_argument("--t", type=float, help="centre of the circles on the real axis")
    g.add_argument("--s", type=float, help="centre of the circles on the imaginary axis")
    g.add_argument("--r1", type=float)
    g.add_argument("--r2", type=float)
    g.add_argument("--alpha", type=parse_angle, help="vertex angle, e.g. pi/5")
    g.add_argument("--j", type=int, help="family index 1..5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwarzmod",
        description="Conformal moduli of symmetric circular quadrilaterals with zero angles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modulus", help="modulus of one quadrilateral")
    _add_geometry_flags(p)
    _add_solver_flags(p)
    p.add_argument("--refine", action="store_true", help="second, high-accuracy stage")
    p.add_argument("--conjugate", action="store_true", help="report the conjugate quadrilateral")
    p.add_argument("--reciprocal", action="store_true", help="compute the reciprocal error")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timing", action="store_true", help="omit wall time (reproducible output)")
    p.set_defaults(func=cmd_modulus)

    p = sub.add_parser("table", help="reproduce the 25-case test family")
    _add_solver_flags(p)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--workers", type=int)
    p.add_argument("--no-reciprocal", action="store_true")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("benchmark", help="check exact benchmark values")
    _add_solver_flags(p)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--quick", action="store_true", help="skip the table reciprocal sweep")
    p.add_argument("--fixtures-json", action="store_true", help="print fixtures as JSON and exit")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("ngon", help="exact moduli of circular n-gon quadrilaterals")
    p.add_argument("--family", choices=("pn", "hexagon"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--vertices", required=True, help="four comma-separated labels or indices")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ngon)

    p = sub.add_parser("render", help="boundary samples of the mapping as CSV")
    _add_geometry_flags(p)
    _add_solver_flags(p)
    p.add_argument("--beta", type=parse_angle)
    p.add_argument("--gamma", type=float)
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchwarzModError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        history = getattr(exc, "history", None)
        if history:
            print(f"last iterate: {history[-1]}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
