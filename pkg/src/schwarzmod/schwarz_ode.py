"""Two-parameter Schwarzian and the ray ODEs for ``f = u / v``.

For a symmetric zero-angle quadrilateral with vertex preimages
``+-exp(+-i beta)`` the Schwarzian of the disk map is

    S_f(z)/2 = a/(w - a)^2 + abar/(w - abar)^2 - gamma / ((w - a)(w - abar)),

with ``w = z**2`` and ``a = exp(2 i beta)``.  Along the ray
``z = x exp(i theta)`` the functions ``u`` (odd, ``u'(0) = 1``) and ``v``
(even, ``v(0) = 1``) satisfy ``h'' + F(x) h = 0`` in the real variable
``x``, where ``F(x) = exp(2 i theta) S_f(x exp(i theta)) / 2``.

The ray equations are integrated by an adaptive Dormand-Prince 5(4) pair
compiled with numba. An independent power-series evaluation is provided
for cross-checking inside the disk of radius 0.6.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import (
    DomainError,
    IntegrationAccuracyError,
    PoleOnRayError,
    SingularityError,
    StiffnessError,
)

__all__ = [
    "SchwarzParams",
    "OdeTolerance",
    "RaySolution",
    "STANDARD_TOL",
    "REFINED_TOL",
    "schwarzian_coeff",
    "solve_ray",
    "series_coefficients",
    "series_eval",
]

SINGULAR_GUARD = 1e-6
SERIES_MAX_X = 0.6


@dataclass(frozen=True)
class SchwarzParams:
    """Accessory parameters: preimage angle ``beta`` and real ``gamma``."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (0.0 < self.beta < 0.5 * math.pi):
            raise DomainError(f"beta={self.beta!r} outside (0, pi/2)")
        if not math.isfinite(self.gamma):
            raise DomainError(f"gamma={self.gamma!r} is not finite")


@dataclass(frozen=True)
class OdeTolerance:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("ODE tolerances must be positive")
        if self.max_steps <= 0:
            raise DomainError("max_steps must be positive")


STANDARD_TOL = OdeTolerance(1e-12, 1e-12)
REFINED_TOL = OdeTolerance(1e-14, 1e-14)


@dataclass(frozen=True)
class RaySolution:
    """Endpoint data of one probe ray.

    ``ode_stats`` has keys ``steps``, ``rejected``, ``error_budget`` (sum of
    accepted local error estimates) and ``wronskian_drift`` (max relative
    deviation of ``u'v - uv'`` from its initial value ``exp(i theta)``).
    """

    theta: float
    u_end: complex
    v_end: complex
    f_end: complex
    x_end: float = 1.0
    ode_stats: dict = field(default_factory=dict, compare=False)


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
        [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ]
)
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array(
    [71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


@numba.njit(cache=True)
def _coeff(x, e2t, a, gamma):
    w = x * x * e2t
    ab = 1.0 / a
    d1 = w - a
    d2 = w - ab
    return e2t * (a / (d1 * d1) + ab / (d2 * d2) - gamma / (d1 * d2))


@numba.njit(cache=True)
def _integrate(beta, gamma, theta, x_end, rtol, atol, max_steps):
    e2t = complex(math.cos(2.0 * theta), math.sin(2.0 * theta))
    a = complex(math.cos(2.0 * beta), math.sin(2.0 * beta))
    w0 = complex(math.cos(theta), math.sin(theta))

    # state: u, u', v, v'
    y = np.empty(4, np.complex128)
    y[0] = 0.0
    y[1] = w0
    y[2] = 1.0
    y[3] = 0.0
    k = np.empty((7, 4), np.complex128)
    ytmp = np.empty(4, np.complex128)
    ynew = np.empty(4, np.complex128)
    inc = np.empty(4, np.complex128)
    comp = np.zeros(4, np.complex128)  # Kahan compensation for y

    x = 0.0
    f = _coeff(x, e2t, a, gamma)
    k[0, 0] = y[1]
    k[0, 1] = -f * y[0]
    k[0, 2] = y[3]
    k[0, 3] = -f * y[2]

    h = min(1e-3, x_end)
    err_old = 1e-4
    steps = 0
    rejected = 0
    budget = 0.0
    drift = 0.0
    status = 0

    while x < x_end:
        if steps + rejected >= max_steps:
            status = 1
            break
        last = False
        if x + h >= x_end:
            h = x_end - x
            last = True
        for s in range(1, 7):
            for j in range(4):
                acc = 0j
                for r in range(s):
                    acc += _A[s, r] * k[r, j]
                acc *= h
                if s == 6:
                    inc[j] = acc
                ytmp[j] = y[j] + acc
            f = _coeff(x + _C[s] * h, e2t, a, gamma)
            k[s, 0] = ytmp[1]
            k[s, 1] = -f * ytmp[0]
            k[s, 2] = ytmp[3]
            k[s, 3] = -f * ytmp[2]
        # FSAL: the 7th stage was evaluated at the 5th-order solution
        for j in range(4):
            ynew[j] = ytmp[j]

        err = 0.0
        err_abs = 0.0
        for j in range(4):
            e = 0j
            for r in range(7):
                e += h * _E[r] * k[r, j]
            sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            ae = abs(e)
            if ae / sc > err:
                err = ae / sc
            if ae > err_abs:
                err_abs = ae
        if not math.isfinite(err):
            status = 2
            break

        if err <= 1.0:
            steps += 1
            budget += err_abs
            if last:
                x = x_end
            else:
                x += h
            for j in range(4):
                # compensated y += inc keeps the rounding floor near eps
                t = inc[j] - comp[j]
                ysum = y[j] + t
                comp[j] = (ysum - y[j]) - t
                y[j] = ysum
                k[0, j] = k[6, j]
            wr = y[1] * y[2] - y[0] * y[3]
            d = abs(wr - w0)
            if d > drift:
                drift = d
            if err == 0.0:
                fac = 5.0
            else:
                fac = 0.9 * err ** (-0.7 / 5.0) * err_old ** (0.4 / 5.0)
            fac = min(5.0, max(0.2, fac))
            h *= fac
            err_old = max(err, 1e-4)
        else:
            rejected += 1
            h *= max(0.2, 0.9 * err ** (-0.2))
    return y, steps, rejected, budget, drift, status


def schwarzian_coeff(x: float, theta: float, params: SchwarzParams) -> complex:
    """The ray coefficient ``exp(2 i theta) S_f(x exp(i theta)) / 2``."""
    e2t = cmath.exp(2j * theta)
    a = cmath.exp(2j * params.beta)
    w = x * x * e2t
    d1 = w - a
    d2 = w - a.conjugate()
    if abs(d1) < 1e-300 or abs(d2) < 1e-300:
        raise SingularityError(
            f"Schwarzian pole at x={x!r}, theta={theta!r}, beta={params.beta!r}"
        )
    return e2t * (a / (d1 * d1) + a.conjugate() / (d2 * d2) - params.gamma / (d1 * d2))


def _angle_to_singular(theta: float, beta: float) -> float:
    best = math.inf
    for s in (beta, -beta):
        d = math.remainder(theta - s, math.pi)
        best = min(best, abs(d))
    return best


def solve_ray(
    params: SchwarzParams,
    theta: float,
    tol: OdeTolerance = STANDARD_TOL,
    x_end: float = 1.0,
) -> RaySolution:
    """Integrate ``u`` and ``v`` from the origin to ``x_end exp(i theta)``.

    Raises
    ------
    SingularityError
        ``theta`` is within 1e-6 of a vertex preimage direction and the ray
        reaches the unit circle.
    PoleOnRayError
        ``|v_end| < 1e-12 |u_end|``.
    StiffnessError
        The step budget ``tol.max_steps`` was exhausted.
    """
    theta = float(theta)
    x_end = float(x_end)
    if not (0.0 < x_end <= 1.0):
        raise DomainError(f"x_end={x_end!r} outside (0, 1]")
    if x_end >= 1.0 - 1e-12 and _angle_to_singular(theta, params.beta) < SINGULAR_GUARD:
        raise SingularityError(
            f"ray theta={theta!r} hits a vertex preimage (beta={params.beta!r})"
        )
    y, steps, rejected, budget, drift, status = _integrate(
        float(params.beta),
        float(params.gamma),
        theta,
        x_end,
        float(tol.rel_tol),
        float(tol.abs_tol),
        int(tol.max_steps),
    )
    if status == 1:
        raise StiffnessError(
            f"step budget {tol.max_steps} exhausted on ray theta={theta!r}"
        )
    if status == 2:
        raise IntegrationAccuracyError(f"non-finite state on ray theta={theta!r}")
    u, v = complex(y[0]), complex(y[2])
    if abs(v) < 1e-12 * abs(u):
        raise PoleOnRayError(f"v vanishes at the end of ray theta={theta!r}")
    stats = {
        "steps": int(steps),
        "rejected": int(rejected),
        "error_budget": float(budget),
        "wronskian_drift": float(drift),
    }
    return RaySolution(theta, u, v, u / v, x_end, stats)


def series_coefficients(params: SchwarzParams, n_terms: int = 200):
    """Taylor coefficients of ``u`` and ``v`` about the origin.

    Returns ``(odd, even)`` where ``u(z) = sum odd[k] z**(2k+1)`` and
    ``v(z) = sum even[k] z**(2k)``, each of length ``n_terms``.

    Uses ``S_f(z)/2 = sum c_n z**(2n)`` with
    ``c_n = 2 (n+1) cos(2 (n+1) beta) - gamma sin(2 (n+1) beta) / sin(2 beta)``.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    beta, gamma = params.beta, params.gamma
    n = np.arange(1, n_terms + 1)
    c = 2 * n * np.cos(2 * n * beta) - gamma * np.sin(2 * n * beta) / math.sin(2 * beta)

    odd = np.zeros(n_terms, dtype=float)
    even = np.zeros(n_terms, dtype=float)
    odd[0] = 1.0
    even[0] = 1.0
    for kk in range(n_terms - 1):
        # (2k+3)(2k+2) a_{2k+3} = -sum_j c_j a_{2(k-j)+1}, likewise for b
        odd[kk + 1] = -np.dot(c[: kk + 1], odd[kk::-1]) / ((2 * kk + 3) * (2 * kk + 2))
        even[kk + 1] = -np.dot(c[: kk + 1], even[kk::-1]) / ((2 * kk + 2) * (2 * kk + 1))
    return odd, even


def series_eval(
    params: SchwarzParams, theta: float, x: float, n_terms: int = 200
) -> tuple[complex, complex]:
    """``(u, v)`` at ``z = x exp(i theta)`` from the power series."""
    if abs(x) > SERIES_MAX_X:
        raise DomainError(f"|x|={abs(x)!r} beyond the series region {SERIES_MAX_X}")
    odd, even = series_coefficients(params, n_terms)
    z = x * cmath.exp(1j * theta)
    w = z * z
    # Horner in w
    u = 0j
    v = 0j
    for k in range(n_terms - 1, -1, -1):
        u = u * w + odd[k]
        v = v * w + even[k]
    return u * z, v
