"""Target quadrilaterals and recovery of circle data from boundary probes.

A symmetric zero-angle quadrilateral is bounded by four mutually tangent
circles centred at ``+-t`` (radius ``r1``) and ``+-i s`` (radius ``r2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, DomainError, IntegrationAccuracyError
from .schwarz_ode import (
    STANDARD_TOL,
    OdeTolerance,
    RaySolution,
    SchwarzParams,
    solve_ray,
)

__all__ = [
    "QuadrilateralSpec",
    "QuadGeometry",
    "quad_from_alpha_j",
    "fit_circle_real_axis",
    "fit_circle_imag_axis",
    "probe_angles",
    "probe_geometry",
]

TANGENCY_RTOL = 1e-9
SYMMETRY_RTOL = 1e-8


@dataclass(frozen=True)
class QuadrilateralSpec:
    """Circle centres ``t``, ``s`` and radii ``r1``, ``r2``.

    ``tangency_rtol`` is the relative tolerance on ``t^2 + s^2 = (r1 + r2)^2``.
    """

    t: float
    s: float
    r1: float
    r2: float
    tangency_rtol: float = TANGENCY_RTOL

    def __post_init__(self):
        for name in ("t", "s", "r1", "r2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name}={v!r} must be a positive finite number")
        if not (self.t > self.r1 and self.s > self.r2):
            raise DomainError("need t > r1 and s > r2 (vertices off the axes)")
        if self.tangency_residual() > self.tangency_rtol:
            raise DomainError(
                "external tangency t^2 + s^2 = (r1 + r2)^2 violated: "
                f"relative residual {self.tangency_residual():.3e}"
            )

    @property
    def k(self) -> float:
        return self.s / self.t

    @property
    def K(self) -> float:
        return self.r2 / self.r1

    def tangency_residual(self) -> float:
        rr = (self.r1 + self.r2) ** 2
        return abs(self.t**2 + self.s**2 - rr) / rr

    def swapped(self) -> QuadrilateralSpec:
        """The same domain rotated by a quarter turn (conjugate quadrilateral)."""
        return QuadrilateralSpec(self.s, self.t, self.r2, self.r1, self.tangency_rtol)


@dataclass(frozen=True)
class QuadGeometry:
    T: float
    R1: float
    S: float
    R2: float
    probes: tuple[RaySolution, ...] = ()

    @property
    def ratio_st(self) -> float:
        return self.S / self.T

    @property
    def ratio_r(self) -> float:
        return self.R2 / self.R1


def quad_from_alpha_j(alpha: float, j: int) -> QuadrilateralSpec:
    """Member of the test family with vertex ``exp(i alpha)`` on the unit circle.

    ``t = 1 + 0.2 j (1/cos(alpha) - 1)`` and ``s = t sin(alpha)/(t - cos(alpha))``,
    which puts ``t``, ``exp(i alpha)`` and ``i s`` on one line.
    """
    if not (0.0 < alpha < 0.5 * math.pi):
        raise DomainError(f"alpha={alpha!r} outside (0, pi/2)")
    if int(j) != j or not (1 <= j <= 5):
        raise DomainError(f"j={j!r} must be an integer in 1..5")
    ca, sa = math.cos(alpha), math.sin(alpha)
    t = 1.0 + 0.2 * j * (1.0 / ca - 1.0)
    if t <= ca:
        raise DomainError("t <= cos(alpha)")
    s = t * sa / (t - ca)
    r1 = math.hypot(ca - t, sa)
    r2 = math.hypot(ca, sa - s)
    return QuadrilateralSpec(t, s, r1, r2)


def fit_circle_real_axis(x1: float, x2: float, y2: float) -> tuple[float, float]:
    """Circle centred on the real axis through ``(x1, 0)`` and ``(x2, y2)``."""
    if x2 == x1:
        raise DegenerateInputError("fit_circle_real_axis: x1 == x2 (infinite radius)")
    T = 0.5 * (x1 + x2 + y2 * y2 / (x2 - x1))
    return T, abs(T - x1)


def fit_circle_imag_axis(x3: float, y3: float, y4: float) -> tuple[float, float]:
    """Circle centred on the imaginary axis through ``(x3, y3)`` and ``(0, y4)``."""
    if y3 == y4:
        raise DegenerateInputError("fit_circle_imag_axis: y3 == y4 (infinite radius)")
    S = 0.5 * (y3 + y4 + x3 * x3 / (y3 - y4))
    return S, abs(y4 - S)


def probe_angles(beta: float) -> tuple[float, float, float, float]:
    return (0.0, 0.5 * beta, 0.25 * math.pi + 0.5 * beta, 0.5 * math.pi)


def probe_geometry(
    params: SchwarzParams,
    tol: OdeTolerance = STANDARD_TOL,
    theta2: float | None = None,
    theta3: float | None = None,
) -> QuadGeometry:
    """Fit the right and top boundary circles of ``f(disk; beta, gamma)``.

    The default probes are at ``0``, ``beta/2``, ``pi/4 + beta/2`` and
    ``pi/2``; ``theta2`` in ``(0, beta)`` and ``theta3`` in ``(beta, pi/2)``
    may be overridden.
    """
    th1, th2, th3, th4 = probe_angles(params.beta)
    if theta2 is not None:
        th2 = theta2
    if theta3 is not None:
        th3 = theta3
    rays = tuple(solve_ray(params, th, tol) for th in (th1, th2, th3, th4))
    f1, f2, f3, f4 = (r.f_end for r in rays)

    # f(conj z) = conj f(z) and f(-z) = -f(z): f(1) is real, f(i) imaginary
    if abs(f1.imag) > SYMMETRY_RTOL * abs(f1) or abs(f4.real) > SYMMETRY_RTOL * abs(f4):
        raise IntegrationAccuracyError(
            f"symmetry check failed: Im f(1)={f1.imag:.3e}, Re f(i)={f4.real:.3e}"
        )
    T, R1 = fit_circle_real_axis(f1.real, f2.real, f2.imag)
    S, R2 = fit_circle_imag_axis(f3.real, f3.imag, f4.imag)
    return QuadGeometry(T, R1, S, R2, rays)
