"""Elliptic integrals, cross-ratios and Mobius maps.

Elliptic integrals use the *parameter* convention throughout: ``m = k**2``
where ``k`` is the elliptic modulus, so ``elliptic_k(m)`` is

    K(m) = int_0^1 dt / sqrt((1 - t^2) (1 - m t^2)).

Points of the extended complex plane are plain Python numbers, with the
point at infinity represented by the :data:`INF` singleton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, DomainError

__all__ = [
    "INF",
    "Infinity",
    "MobiusMap",
    "elliptic_k",
    "modulus_from_beta",
    "cross_ratio",
    "mobius_apply",
    "lambda_from_cross_ratio",
    "half_plane_modulus",
    "pn_vertex_images",
]

_EPS = 2.220446049250313e-16
_AGM_MAX_ITER = 40


class Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


def is_inf(z) -> bool:
    return z is INF


def _agm(a: float, b: float) -> float:
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= 4 * _EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _k_from_complement(mc: float) -> float:
    # K as a function of the complementary parameter 1 - m, which callers
    # can often form without cancellation.
    return math.pi / (2.0 * _agm(1.0, math.sqrt(mc)))


def elliptic_k(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention.

    Computed as ``pi / (2 agm(1, sqrt(1 - m)))``.

    Raises
    ------
    DomainError
        If ``m`` is outside ``[0, 1)``.
    """
    m = float(m)
    if not (0.0 <= m < 1.0):
        raise DomainError(f"elliptic parameter m={m!r} outside [0, 1)")
    return _k_from_complement(1.0 - m)


def modulus_from_beta(beta: float) -> float:
    """Conformal modulus of the unit disk with vertices ``+-exp(+-i beta)``.

    ``Mod = 2 K(m) / K(1 - m)`` with ``m = tan(beta/2)**4``. Both ``m`` and
    ``1 - m = cos(beta) / cos(beta/2)**4`` are formed directly so that the
    reciprocity ``Mod(beta) Mod(pi/2 - beta) = 1`` holds to rounding.
    """
    beta = float(beta)
    if not (0.0 < beta < 0.5 * math.pi):
        raise DomainError(f"beta={beta!r} outside (0, pi/2)")
    c4 = math.cos(0.5 * beta) ** 4
    m = math.sin(0.5 * beta) ** 4 / c4
    mc = math.cos(beta) / c4
    if beta == 0.25 * math.pi:
        return 1.0
    return 2.0 * _k_from_complement(mc) / _k_from_complement(m)


def cross_ratio(z1, z2, z3, z4) -> complex:
    """Cross-ratio ``(z3 - z1)(z4 - z2) / ((z3 - z2)(z4 - z1))``.

    One argument may be :data:`INF`; the two factors containing it cancel.
    """
    pts = (z1, z2, z3, z4)
    n_inf = sum(is_inf(z) for z in pts)
    if n_inf > 1:
        raise DegenerateInputError("cross_ratio: repeated point at infinity")
    finite = [complex(z) for z in pts if not is_inf(z)]
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            if finite[i] == finite[j]:
                raise DegenerateInputError("cross_ratio: repeated points")

    if is_inf(z1):
        return (z4 - z2) / (z3 - z2)
    if is_inf(z2):
        return (z3 - z1) / (z4 - z1)
    if is_inf(z3):
        return (z4 - z2) / (z4 - z1)
    if is_inf(z4):
        return (z3 - z1) / (z3 - z2)
    return ((z3 - z1) * (z4 - z2)) / ((z3 - z2) * (z4 - z1))


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (a z + b) / (c z + d)`` with ``a d - b c != 0``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise DegenerateInputError("Mobius map with zero determinant")

    def __call__(self, z):
        return mobius_apply(self, z)

    def inverse(self) -> MobiusMap:
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: MobiusMap) -> MobiusMap:
        """``self o other``."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def mobius_apply(mob: MobiusMap, z):
    """Evaluate a Mobius map on the extended plane."""
    if is_inf(z):
        if mob.c == 0:
            return INF
        return mob.a / mob.c
    num = mob.a * z + mob.b
    den = mob.c * z + mob.d
    if den == 0:
        return INF
    return num / den


def lambda_from_cross_ratio(cr: float) -> float:
    """Normal-form parameter of the half-plane quadrilateral ``+-1, +-1/lambda``.

    Returns the root in ``(0, 1)`` of ``lambda^2 + (2 - 4 cr) lambda + 1 = 0``.
    The roots multiply to one, so the small root is taken as the reciprocal
    of the large one.
    """
    cr = float(cr)
    if not cr > 1.0:
        raise DomainError(f"cross-ratio {cr!r} must exceed 1 (cr=1 is degenerate)")
    p = 2.0 * cr - 1.0
    return 1.0 / (p + math.sqrt((p - 1.0) * (p + 1.0)))


def half_plane_modulus(p1, p2, p3, p4) -> float:
    """Modulus of the upper half-plane with boundary vertices ``p1..p4``.

    The points are extended reals in increasing cyclic order; one may be
    :data:`INF`.
    """
    cr = cross_ratio(p1, p2, p3, p4)
    if abs(cr.imag) > 1e-12 * abs(cr):
        raise DomainError("vertices are not on the real axis")
    lam = lambda_from_cross_ratio(cr.real)
    m = lam * lam
    # K(lambda') / (2 K(lambda)) in the modulus convention
    return _k_from_complement(m) / (2.0 * _k_from_complement(1.0 - m))


def pn_vertex_images(n: int) -> list:
    """Half-plane images ``-cos(pi k / (n - 2))``, ``k = 0..n-2``, then ``INF``."""
    if int(n) != n or n < 4:
        raise DomainError(f"P_n family needs integer n >= 4, got {n!r}")
    n = int(n)
    pts = []
    for k in range(n - 1):
        # exact values at the ends and the middle keep the symmetric cases exact
        if 2 * k == n - 2:
            pts.append(0.0)
        else:
            pts.append(-math.cos(math.pi * k / (n - 2)))
    pts.append(INF)
    return pts
