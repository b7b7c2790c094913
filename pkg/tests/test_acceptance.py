"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; they
are also collected in the terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from schwarzmod import (
    STANDARD_TOL,
    DegenerateInputError,
    QuadrilateralSpec,
    SchwarzParams,
    SingularityError,
    elliptic_k,
    fit_circle_imag_axis,
    fit_circle_real_axis,
    half_plane_modulus,
    modulus_from_beta,
    probe_geometry,
    quad_from_alpha_j,
    reciprocal_check,
    refine,
    series_eval,
    solve_beta,
    solve_ray,
)
from schwarzmod.benchmarks import HEXAGON_MODULUS, TABLE1, hexagon_modulus_closed_form

Q4_SPEC = QuadrilateralSpec(math.sqrt(1.5), math.sqrt(3), math.sqrt(0.5), math.sqrt(2))
Q4_MOD = 0.6396307855855
LISTING = QuadrilateralSpec(2.0174131664886366, 1.1416407864998739, 1.642663833605752, 0.6753740370343625)


@pytest.fixture(scope="module")
def table_runs():
    """Standard and refined solves of all 25 rows, with timings."""
    standard, refined = {}, {}
    t0 = time.perf_counter()
    for (n, j) in TABLE1:
        standard[(n, j)] = solve_beta(quad_from_alpha_j(math.pi / n, j))
    t_std = time.perf_counter() - t0
    for (n, j), res in standard.items():
        refined[(n, j)] = refine(res, quad_from_alpha_j(math.pi / n, j))
    return standard, refined, t_std


def test_criterion_1_exact_benchmark(report):
    t0 = time.perf_counter()
    std = solve_beta(Q4_SPEC)
    t_std = time.perf_counter() - t0
    t0 = time.perf_counter()
    ref = refine(std, Q4_SPEC)
    t_ref = t_std + time.perf_counter() - t0

    def errs(r):
        return (abs(r.modulus - Q4_MOD), abs(math.sin(r.beta) - 1 / 3), abs(r.gamma - 2 / 3))

    e_std, e_ref = errs(std), errs(ref)
    ok = max(e_std) <= 1e-6 and max(e_ref) <= 1e-9 and t_std <= 5 and t_ref <= 60
    report(
        "1 exact benchmark",
        ok,
        f"standard max err {max(e_std):.2e} (<=1e-6) in {t_std:.2f}s (<=5s); "
        f"refined max err {max(e_ref):.2e} (<=1e-9) in {t_ref:.2f}s (<=60s)",
    )
    assert ok


def test_criterion_2_table(report, table_runs):
    standard, refined, t_std = table_runs
    dev_std = max(abs(standard[k].modulus - v) for k, v in TABLE1.items())
    dev_ref = max(abs(refined[k].modulus - v) for k, v in TABLE1.items())
    ok = dev_std <= 1e-6 and dev_ref <= 1e-8 and t_std <= 120
    report(
        "2 table reproduction",
        ok,
        f"25 rows, standard max dev {dev_std:.2e} (<=1e-6) in {t_std:.1f}s (<=120s); "
        f"refined max dev {dev_ref:.2e} (<=1e-8)",
    )
    assert ok


def test_criterion_3_listing(report):
    r = solve_beta(LISTING)
    d = (abs(r.beta - 1.02791), abs(r.gamma - 0.440765), abs(r.modulus - 1.25503))
    prod = abs(r.modulus * 0.79679236427334 - 1)
    ok = max(d) <= 1e-4 and prod <= 1e-5
    report(
        "3 reference listing",
        ok,
        f"(beta, gamma, Mod) = ({r.beta:.6f}, {r.gamma:.6f}, {r.modulus:.6f}), max dev {max(d):.2e} "
        f"(<=1e-4); |Mod*0.79679236427334 - 1| = {prod:.2e} (<=1e-5)",
    )
    assert ok


def test_criterion_4_hexagon(report):
    s2 = math.sqrt(2)
    val = half_plane_modulus(-(3 + 2 * s2), -1, 0, 1)
    e1 = abs(val - 0.92401502327430725964)
    e2 = abs(hexagon_modulus_closed_form() - HEXAGON_MODULUS)
    ok = e1 <= 1e-12 and e2 <= 1e-12
    report("4 hexagon exact value", ok, f"half-plane err {e1:.2e}, closed forms differ by {e2:.2e} (<=1e-12)")
    assert ok


def test_criterion_5_reciprocal(report, table_runs):
    standard, refined, _ = table_runs
    rows = []
    for (n, j) in TABLE1:
        spec = quad_from_alpha_j(math.pi / n, j)
        e_s, n_s = reciprocal_check(spec, primary=standard[(n, j)])
        e_r, n_r = reciprocal_check(spec, refined=True, primary=refined[(n, j)])
        rows.append(((n, j), e_s, n_s, e_r, n_r))
    worst_s = max(r[1] for r in rows)
    worst_r = max(r[3] for r in rows)
    for (n, j), e_s, n_s, e_r, n_r in rows:
        print(f"    pi/{n} j={j}: eps_R standard {e_s:.2e} (eps_N {n_s}), refined {e_r:.2e} (eps_N {n_r})")
    ok = worst_s <= 1e-5 and worst_r <= 1e-7
    report(
        "5 reciprocal identity",
        ok,
        f"25 specs, worst eps_R standard {worst_s:.2e} (<=1e-5), refined {worst_r:.2e} (<=1e-7); "
        f"min eps_N standard {min(r[2] for r in rows if r[2] is not None)}",
    )
    assert ok


def test_criterion_6_properties(report):
    t0 = time.perf_counter()
    fails = []

    worst = 0.0
    for m in np.round(np.arange(0.05, 0.951, 0.05), 2):
        ref, _ = quad(lambda p: 1 / math.sqrt(1 - m * math.sin(p) ** 2), 0, math.pi / 2,
                      epsabs=0, epsrel=1e-13, limit=200)
        worst = max(worst, abs(elliptic_k(m) - ref) / ref)
    if worst > 1e-12:
        fails.append(f"AGM {worst:.1e}")

    rng = np.random.default_rng(2024)
    rec = max(
        abs(modulus_from_beta(b) * modulus_from_beta(math.pi / 2 - b) - 1)
        for b in rng.uniform(0.05, math.pi / 2 - 0.05, 50)
    )
    if rec > 1e-12:
        fails.append(f"reciprocity {rec:.1e}")

    ser = wr = 0.0
    for _ in range(20):
        beta, gamma, theta = rng.uniform(0.1, math.pi / 2 - 0.1), rng.uniform(-2, 2), rng.uniform(0, 2 * math.pi)
        p = SchwarzParams(beta, gamma)
        ray = solve_ray(p, theta, x_end=0.5)
        u, v = series_eval(p, theta, 0.5)
        ser = max(ser, abs(ray.u_end - u), abs(ray.v_end - v))
        wr = max(wr, ray.ode_stats["wronskian_drift"])
        if min(abs(math.remainder(theta - s, math.pi)) for s in (beta, -beta)) > 1e-3:
            wr = max(wr, solve_ray(p, theta).ode_stats["wronskian_drift"])
    if ser > 1e-10:
        fails.append(f"series {ser:.1e}")
    if wr > 1e-9:
        fails.append(f"Wronskian {wr:.1e}")

    inv = 0.0
    tol = 2 * STANDARD_TOL.rel_tol
    for p in (SchwarzParams(math.asin(1 / 3), 2 / 3), SchwarzParams(0.5428896210992893, 0.440763551034728)):
        base = probe_geometry(p)
        for f in (0.1, 0.3, 0.7, 0.9):
            moved = probe_geometry(p, theta2=f * p.beta, theta3=p.beta + f * (math.pi / 2 - p.beta))
            inv = max(inv, *(abs(getattr(moved, a) - getattr(base, a)) / abs(getattr(base, a))
                             for a in ("T", "R1", "S", "R2")))
    if inv > tol:
        fails.append(f"probe invariance {inv:.1e}")

    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed < 30
    report(
        "6 property suites",
        ok,
        f"AGM {worst:.1e} (<=1e-12), reciprocity {rec:.1e} (<=1e-12), series {ser:.1e} (<=1e-10), "
        f"Wronskian {wr:.1e} (<=1e-9), probe invariance {inv:.1e} (<={tol:.0e}) in {elapsed:.2f}s (<30s)"
        + (f"; failing: {', '.join(fails)}" if fails else ""),
    )
    assert ok


def test_criterion_7_degenerate(report):
    checks = {}
    t0 = time.perf_counter()
    sym = solve_beta(QuadrilateralSpec(math.sqrt(2), math.sqrt(2), 1.0, 1.0))
    checks["symmetric Mod=1, no swap"] = (
        sym.modulus == 1.0 and sym.iterations["swaps"] == 0 and time.perf_counter() - t0 < 1
    )
    p = SchwarzParams(math.asin(1 / 3), 2 / 3)
    raised = 0
    for th in (p.beta, -p.beta, math.pi - p.beta, math.pi + p.beta, p.beta + 1e-7):
        try:
            solve_ray(p, th)
            checks[f"singular ray {th:.3f} raises"] = False
        except SingularityError:
            raised += 1
    checks["singular probes raise"] = raised == 5
    for name, fn, args in (
        ("real-axis fit", fit_circle_real_axis, (0.3, 0.3, 1.0)),
        ("imag-axis fit", fit_circle_imag_axis, (0.4, 0.7, 0.7)),
    ):
        try:
            out = fn(*args)
            checks[f"{name} raises"] = False
            checks[f"{name} finite"] = all(np.isfinite(out))
        except DegenerateInputError:
            checks[f"{name} raises"] = True
    ok = all(checks.values())
    report(
        "7 degenerate handling",
        ok,
        ", ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in checks.items()),
    )
    assert ok
