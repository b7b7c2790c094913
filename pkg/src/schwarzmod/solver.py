"""Nested bisection for the accessory parameters ``(beta, gamma)``.

For a fixed ``beta`` the boundary circles of ``f(disk; beta, gamma)`` are
fitted from four probe rays, giving centres ``T``, ``S`` and radii
``R1``, ``R2``. The outer bisection drives ``R2/R1`` to ``K = r2/r1`` over
``beta``; the inner one drives ``S/T`` to ``k = s/t`` over ``gamma`` inside
the interval ``(A_gamma, B_gamma)`` between the two parameter values where
a pair of sides degenerates into parallel lines (``T`` or ``S`` passes
through infinity).

If the target modulus exceeds one the ``beta`` bisection on ``[0, pi/4]``
runs into ``pi/4``; the quadrilateral is then rotated a quarter turn
(``t <-> s``, ``r1 <-> r2``), solved again, and ``beta`` is reported as
``pi/2 - beta``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, replace

from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateInputError,
    InfeasibleBracketError,
    PoleOnRayError,
    RefinementEscapeError,
)
from .geometry import (
    QuadGeometry,
    QuadrilateralSpec,
    fit_circle_imag_axis,
    fit_circle_real_axis,
    probe_angles,
    probe_geometry,
)
from .schwarz_ode import REFINED_TOL, STANDARD_TOL, OdeTolerance, SchwarzParams, solve_ray
from .specialfn import modulus_from_beta

__all__ = [
    "SolverConfig",
    "ModulusResult",
    "gamma_bracket",
    "solve_gamma",
    "solve_beta",
    "solve_direct",
    "refine",
    "reciprocal_check",
    "error_number",
    "solve_modulus",
]

QUARTER = 0.25 * math.pi
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Iteration counts and seeds of the nested bisection.

    Seed intervals are affine in ``beta``: a pair ``(a, b)`` means
    ``a + b * beta``.
    """

    ode_tol: OdeTolerance = STANDARD_TOL
    refined_tol: OdeTolerance = REFINED_TOL
    iters_bracket: int = 10
    iters_gamma: int = 25
    iters_beta: int = 25
    gamma_seed_low: tuple[float, float] = (0.7, -4.0 / math.pi)
    gamma_seed_low_alt: tuple[float, float] = (0.75, -4.0 / math.pi)
    gamma_seed_high: tuple[float, float] = (1.2, -3.0 / math.pi)
    swap_detect_tol: float = 1e-5
    refine_eps: float = 2e-6
    refine_iters: int = 30
    max_swaps: int = 1
    scan_divisions: int = 16
    scan_max_steps: int = 64

    def __post_init__(self):
        for name in ("iters_bracket", "iters_gamma", "iters_beta", "refine_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.refine_eps > 0:
            raise ValueError("refine_eps must be positive")
        if self.max_swaps < 0:
            raise ValueError("max_swaps must be >= 0")

    @staticmethod
    def seed(pair: tuple[float, float], beta: float) -> float:
        return pair[0] + pair[1] * beta


@dataclass
class ModulusResult:
    """Outcome of a solve.

    ``beta`` is the vertex-preimage angle of the quadrilateral as given;
    ``gamma`` and ``solved_beta`` belong to the orientation that was
    actually integrated (the rotated one when ``swapped``).
    """

    beta: float
    gamma: float
    modulus: float
    conjugate_modulus: float
    swapped: bool
    residual_ratio_st: float
    residual_ratio_r: float
    solved_beta: float
    reciprocal_error: float | None = None
    error_number: int | None = None
    mode: str = "standard"
    iterations: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    @classmethod
    def from_beta(cls, beta, gamma, swapped, solved_beta, res_st, res_r, **kw):
        mod = modulus_from_beta(beta)
        return cls(beta, gamma, mod, 1.0 / mod, swapped, res_st, res_r, solved_beta, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


class _Counter:
    def __init__(self):
        self.rays = 0


# --- single-circle evaluations used by the bracket search -------------------


def _right_circle(beta, gamma, tol, counter):
    """``(T, x2 - x1)``; the second value changes sign where ``T`` has a pole."""
    p = SchwarzParams(beta, gamma)
    th1, th2, _, _ = probe_angles(beta)
    f1 = solve_ray(p, th1, tol).f_end
    f2 = solve_ray(p, th2, tol).f_end
    counter.rays += 2
    T, _ = fit_circle_real_axis(f1.real, f2.real, f2.imag)
    return T, f2.real - f1.real


def _top_circle(beta, gamma, tol, counter):
    """``(S, y3 - y4)``."""
    p = SchwarzParams(beta, gamma)
    _, _, th3, th4 = probe_angles(beta)
    f3 = solve_ray(p, th3, tol).f_end
    f4 = solve_ray(p, th4, tol).f_end
    counter.rays += 2
    S, _ = fit_circle_imag_axis(f3.real, f3.imag, f4.imag)
    return S, f3.imag - f4.imag


def _safe(fn, *args):
    try:
        return fn(*args)
    except (DegenerateInputError, PoleOnRayError):
        return math.nan, math.nan


def _bisect_sign(fn, neg, pos, n, fneg=None, fpos=None):
    """Bisect between ``fn(neg) < 0`` and ``fn(pos) > 0``; returns final ends."""
    for _ in range(n):
        mid = 0.5 * (neg + pos)
        val = fn(mid)
        if val[0] < 0:
            neg, fneg = mid, val
        else:
            pos, fpos = mid, val
    return neg, pos, fneg, fpos


def _is_pole(vneg, vpos):
    # a pole of a fitted centre is a sign change of the fit's denominator
    if vneg is None or vpos is None:
        return True
    return vneg[1] * vpos[1] < 0


def _scan(fn, start, step, max_steps, want_negative):
    """Walk from ``start`` until ``fn`` takes the requested sign."""
    prev = start
    for i in range(1, max_steps + 1):
        g = start + i * step
        val = fn(g)
        if want_negative and val[0] < 0:
            return g, prev
        if not want_negative and val[0] > 0:
            return prev, g
        prev = g
    return None


def gamma_bracket(
    beta: float,
    config: SolverConfig = SolverConfig(),
    tol: OdeTolerance | None = None,
    _counter: _Counter | None = None,
) -> tuple[float, float]:
    """Locate ``(A_gamma, B_gamma)`` for the given ``beta``.

    ``B_gamma`` is where the top centre ``S`` leaves ``+inf`` (``S > 0`` below
    it); ``A_gamma`` is where the right centre ``T`` arrives from ``-inf``
    (``T > 0`` above it). Each is found by ``iters_bracket`` bisection steps on
    the sign of the centre over its seed interval. When a seed interval shows
    no sign change, or the change it brackets is a zero rather than a pole,
    the crossing is located by a stepped scan instead. The returned values are
    the bracket ends on the inner side of each pole.
    """
    tol = tol or config.ode_tol
    counter = _counter or _Counter()
    lo = config.seed(config.gamma_seed_low, beta)
    lo_alt = config.seed(config.gamma_seed_low_alt, beta)
    hi = config.seed(config.gamma_seed_high, beta)
    step = (hi - lo_alt) / config.scan_divisions

    def neg_S(g):
        S, d = _safe(_top_circle, beta, g, tol, counter)
        return -S, d

    def pos_T(g):
        return _safe(_right_circle, beta, g, tol, counter)

    # B_gamma: S > 0 below, S < 0 above
    s_lo, s_hi = neg_S(lo), neg_S(hi)
    if not s_lo[0] < 0:
        raise BracketError(
            f"S <= 0 at the low seed gamma={lo:.6g} (beta={beta:.6g})",
            {"beta": beta, "gamma": lo, "S": -s_lo[0]},
        )
    B = None
    if s_hi[0] > 0:
        neg, pos, vn, vp = _bisect_sign(neg_S, lo, hi, config.iters_bracket, s_lo, s_hi)
        if _is_pole(vn, vp):
            B = neg
    if B is None:
        found = _scan(neg_S, lo, step, config.scan_max_steps, want_negative=False)
        if found is None:
            raise BracketError(
                f"no sign change of S above gamma={lo:.6g} (beta={beta:.6g})",
                {"beta": beta, "low": lo, "high": hi, "S_low": -s_lo[0], "S_high": -s_hi[0]},
            )
        B, _, _, _ = _bisect_sign(neg_S, *found, config.iters_bracket)

    # A_gamma: T < 0 below, T > 0 above
    t_lo, t_hi = pos_T(lo_alt), pos_T(hi)
    A = None
    if t_lo[0] < 0 and t_hi[0] > 0:
        neg, pos, vn, vp = _bisect_sign(pos_T, lo_alt, hi, config.iters_bracket, t_lo, t_hi)
        if _is_pole(vn, vp) and pos < B:
            A = pos
    if A is None:
        # T > 0 on (A, B): walk down from B to the first negative value
        found = _scan(pos_T, B, -step, config.scan_max_steps, want_negative=True)
        if found is None:
            raise BracketError(
                f"no sign change of T below gamma={B:.6g} (beta={beta:.6g})",
                {"beta": beta, "low": lo_alt, "high": hi, "T_low": t_lo[0], "T_high": t_hi[0]},
            )
        _, A, _, _ = _bisect_sign(pos_T, *found, config.iters_bracket)

    if not A < B:
        raise InfeasibleBracketError(
            f"empty gamma bracket A={A:.9g} >= B={B:.9g} (beta={beta:.6g})",
            {"beta": beta, "A": A, "B": B},
        )
    return A, B


def _evaluate(beta, gamma, tol, counter):
    counter.rays += 4
    return probe_geometry(SchwarzParams(beta, gamma), tol)


def _gamma_root(beta, k, lo, hi, n, tol, counter, check=True):
    """Bisection on the sign of ``k T - S`` (positive at ``lo``, negative at ``hi``)."""
    if check:
        ga = _evaluate(beta, lo, tol, counter)
        gb = _evaluate(beta, hi, tol, counter)
        fa = k * ga.T - ga.S
        fb = k * gb.T - gb.S
        if not (fa > 0 and fb < 0):
            raise BracketError(
                f"k*T - S does not change sign on [{lo:.9g}, {hi:.9g}] (beta={beta:.6g})",
                {"beta": beta, "low": lo, "high": hi, "f_low": fa, "f_high": fb},
            )
    gamma = geo = None
    for _ in range(n):
        gamma = 0.5 * (lo + hi)
        geo = _evaluate(beta, gamma, tol, counter)
        if k * geo.T < geo.S:
            hi = gamma
        else:
            lo = gamma
    return gamma, geo


def solve_gamma(
    beta: float,
    k: float,
    config: SolverConfig = SolverConfig(),
    tol: OdeTolerance | None = None,
) -> float:
    """Solve ``S(beta, gamma) / T(beta, gamma) = k`` for ``gamma``."""
    tol = tol or config.ode_tol
    counter = _Counter()
    A, B = gamma_bracket(beta, config, tol, counter)
    gamma, _ = _gamma_root(beta, k, A, B, config.iters_gamma, tol, counter)
    return gamma


@dataclass
class _BetaRun:
    beta: float
    gamma: float
    geometry: QuadGeometry
    upper_moved: bool
    lower_moved: bool
    history: list


def _bisect_beta(spec, lo, hi, config, tol, counter, gamma_box=None, n=None):
    k, K = spec.k, spec.K
    n = n or config.iters_beta
    history = []
    upper_moved = lower_moved = False
    beta = gamma = geo = None
    for _ in range(n):
        beta = 0.5 * (lo + hi)
        if gamma_box is None:
            A, B = gamma_bracket(beta, config, tol, counter)
            gamma, geo = _gamma_root(beta, k, A, B, config.iters_gamma, tol, counter)
        else:
            gamma, geo = _gamma_root(
                beta, k, *gamma_box, config.refine_iters, tol, counter, check=False
            )
        history.append((beta, gamma, geo.ratio_st - k, geo.ratio_r - K))
        if geo.ratio_r < K:
            hi = beta
            upper_moved = True
        else:
            lo = beta
            lower_moved = True
    return _BetaRun(beta, gamma, geo, upper_moved, lower_moved, history)


def _is_symmetric(spec):
    return abs(spec.k - 1.0) <= SYMMETRY_TOL and abs(spec.K - 1.0) <= SYMMETRY_TOL


def _symmetric_result(start, mode):
    res = ModulusResult.from_beta(QUARTER, 0.0, False, QUARTER, 0.0, 0.0, mode=mode)
    res.iterations = {"beta": 0, "rays": 0, "swaps": 0}
    res.wall_time_ms = (time.perf_counter() - start) * 1e3
    return res


def solve_beta(
    spec: QuadrilateralSpec,
    config: SolverConfig = SolverConfig(),
    tol: OdeTolerance | None = None,
) -> ModulusResult:
    """Standard-accuracy solve of ``spec`` (bisection on ``beta`` in ``[0, pi/4]``)."""
    start = time.perf_counter()
    tol = tol or config.ode_tol
    if _is_symmetric(spec):
        return _symmetric_result(start, "standard")

    counter = _Counter()
    current = spec
    swaps = 0
    history = []
    while True:
        run = _bisect_beta(current, 0.0, QUARTER, config, tol, counter)
        history.extend(run.history)
        residual_r = abs(run.geometry.ratio_r - current.K)
        at_boundary = not run.upper_moved and residual_r > config.swap_detect_tol * current.K
        if not at_boundary:
            break
        if swaps >= config.max_swaps:
            raise ConvergenceError(
                "beta bisection converged to pi/4 in both orientations", history
            )
        current = current.swapped()
        swaps += 1
    if not run.lower_moved:
        raise ConvergenceError("beta bisection converged to 0", history)

    swapped = swaps % 2 == 1
    beta = 0.5 * math.pi - run.beta if swapped else run.beta
    res = ModulusResult.from_beta(
        beta,
        run.gamma,
        swapped,
        run.beta,
        abs(run.geometry.ratio_st - current.k),
        abs(run.geometry.ratio_r - current.K),
    )
    res.iterations = {
        "beta": len(history),
        "rays": counter.rays,
        "swaps": swaps,
    }
    res.wall_time_ms = (time.perf_counter() - start) * 1e3
    return res


def solve_direct(
    spec: QuadrilateralSpec,
    beta_range: tuple[float, float],
    config: SolverConfig = SolverConfig(),
    tol: OdeTolerance | None = None,
) -> ModulusResult:
    """Bisection on ``beta`` over ``beta_range`` with no orientation swap.

    Used for solving a quadrilateral whose modulus exceeds one in its own
    orientation (``beta_range = (pi/4, pi/2)``), independently of its rotated
    counterpart.
    """
    start = time.perf_counter()
    tol = tol or config.ode_tol
    if _is_symmetric(spec):
        return _symmetric_result(start, "standard")
    counter = _Counter()
    run = _bisect_beta(spec, *beta_range, config, tol, counter)
    if not (run.upper_moved and run.lower_moved):
        raise ConvergenceError(
            f"beta bisection stuck at an end of {beta_range}", run.history
        )
    res = ModulusResult.from_beta(
        run.beta,
        run.gamma,
        False,
        run.beta,
        abs(run.geometry.ratio_st - spec.k),
        abs(run.geometry.ratio_r - spec.K),
    )
    res.iterations = {"beta": len(run.history), "rays": counter.rays, "swaps": 0}
    res.wall_time_ms = (time.perf_counter() - start) * 1e3
    return res


def refine(
    seed: ModulusResult,
    spec: QuadrilateralSpec,
    config: SolverConfig = SolverConfig(),
    tol_refined: OdeTolerance | None = None,
) -> ModulusResult:
    """Second-stage bisection in a small box around a converged seed.

    ``beta`` and ``gamma`` are each confined to ``+-refine_eps`` around the
    seed values and bisected ``refine_iters`` times with the tighter ODE
    tolerance; no bracket search is done.

    Raises
    ------
    RefinementEscapeError
        The solution hugs an edge of the box, meaning the seed was off by
        more than ``refine_eps``.
    """
    start = time.perf_counter()
    tol = tol_refined or config.refined_tol
    if _is_symmetric(spec):
        res = _symmetric_result(start, "refined")
        return res

    current = spec.swapped() if seed.swapped else spec
    eps = config.refine_eps
    b0, g0 = seed.solved_beta, seed.gamma
    counter = _Counter()
    run = _bisect_beta(
        current,
        b0 - eps,
        b0 + eps,
        config,
        tol,
        counter,
        gamma_box=(g0 - eps, g0 + eps),
        n=config.refine_iters,
    )
    # bisection that never turned back has run into a wall of the box
    edge = 4.0 * eps * 0.5**config.refine_iters
    gammas = [h[1] for h in run.history]
    if (
        not (run.upper_moved and run.lower_moved)
        or min(gammas) - (g0 - eps) < edge
        or (g0 + eps) - max(gammas) < edge
    ):
        raise RefinementEscapeError(
            f"refined solution left the {eps:g}-box around the seed", run.history
        )

    beta = 0.5 * math.pi - run.beta if seed.swapped else run.beta
    res = ModulusResult.from_beta(
        beta,
        run.gamma,
        seed.swapped,
        run.beta,
        abs(run.geometry.ratio_st - current.k),
        abs(run.geometry.ratio_r - current.K),
        mode="refined",
    )
    res.iterations = {
        "beta": seed.iterations.get("beta", 0) + len(run.history),
        "rays": seed.iterations.get("rays", 0) + counter.rays,
        "swaps": seed.iterations.get("swaps", 0),
        "refine": len(run.history),
    }
    res.wall_time_ms = seed.wall_time_ms + (time.perf_counter() - start) * 1e3
    return res


def error_number(eps_r: float) -> int | None:
    """``|ceil(log10 eps_R)|``; ``None`` when ``eps_R`` is exactly zero."""
    if eps_r == 0:
        return None
    return abs(math.ceil(math.log10(abs(eps_r))))


def reciprocal_check(
    spec: QuadrilateralSpec,
    config: SolverConfig = SolverConfig(),
    tol: OdeTolerance | None = None,
    refined: bool = False,
    primary: ModulusResult | None = None,
) -> tuple[float, int | None]:
    """Reciprocal error of ``spec`` and its conjugate (rotated) quadrilateral.

    The orientation with modulus below one is the one :func:`solve_beta`
    integrates; the other orientation is solved on its own by bisection over
    ``[pi/4, pi/2]``, so the two moduli come from independent runs.

    Returns ``(eps_R, eps_N)`` with ``eps_R = |1 - Mod(Q) Mod(Q~)|``.
    """
    if _is_symmetric(spec):
        return 0.0, None
    first = primary if primary is not None else solve_beta(spec, config, tol)
    if refined and first.mode != "refined":
        first = refine(first, spec, config)
    other_spec = spec if first.swapped else spec.swapped()
    second = solve_direct(other_spec, (QUARTER, 0.5 * math.pi), config, tol)
    if refined:
        second = refine(second, other_spec, config)
    mod_low = modulus_from_beta(first.solved_beta)
    mod_high = second.modulus
    eps_r = abs(1.0 - mod_low * mod_high)
    return eps_r, error_number(eps_r)


def solve_modulus(
    spec: QuadrilateralSpec,
    config: SolverConfig = SolverConfig(),
    refined: bool = False,
    reciprocal: bool = False,
) -> ModulusResult:
    """Convenience driver: standard solve, optional refinement and diagnostics."""
    res = solve_beta(spec, config)
    if refined:
        res = refine(res, spec, config)
    if reciprocal:
        eps_r, eps_n = reciprocal_check(spec, config, refined=refined, primary=res)
        res = replace(res, reciprocal_error=eps_r, error_number=eps_n)
    return res
