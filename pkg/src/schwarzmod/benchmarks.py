"""Reference values: exactly solvable quadrilaterals and the published table.

Values derivable from elliptic integrals (the analytic quadrilateral, the
hexagon, the ``P_n`` family) are recomputed when the module is imported and
checked against their stored constants. The 25 table moduli are stored
verbatim; they come from a higher-precision computation and are never
recomputed here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError
from .geometry import QuadrilateralSpec, quad_from_alpha_j
from .specialfn import (
    INF,
    MobiusMap,
    _k_from_complement,
    elliptic_k,
    half_plane_modulus,
    is_inf,
    pn_vertex_images,
)

__all__ = [
    "BenchmarkCase",
    "Q4_MODULUS",
    "HEXAGON_MODULUS",
    "HEXAGON_IMAGES",
    "HEXAGON_DISK_IMAGES",
    "HEXAGON_TO_DISK",
    "TABLE1",
    "exact_case_q4",
    "hexagon_case",
    "hexagon_modulus_closed_form",
    "pn_case",
    "table1_fixture",
    "fixtures_json",
]

Q4_MODULUS = 0.6396307855855
HEXAGON_MODULUS = 0.92401502327430725964

_SQ2 = math.sqrt(2.0)
HEXAGON_IMAGES = {
    "A": -(3.0 + 2.0 * _SQ2),
    "B": -1.0,
    "C": -(3.0 - 2.0 * _SQ2),
    "D": 0.0,
    "E": 1.0,
    "F": INF,
}
HEXAGON_TO_DISK = MobiusMap(-(1 - 3j), 4, -(1 + 3j), 4)
# HEXAGON_TO_DISK acts on the hexagon itself, which lies in the upper
# half-plane with vertices A..F at -2, 0, 2/3, 1, 2 and infinity
HEXAGON_PLANE_VERTICES = {"A": -2.0, "B": 0.0, "C": 2.0 / 3.0, "D": 1.0, "E": 2.0, "F": INF}
HEXAGON_DISK_IMAGES = {
    "A": -1j,
    "B": 1 + 0j,
    "C": (8 + 15j) / 17,
    "D": 1j,
    "E": (-4 + 3j) / 5,
    "F": (-4 - 3j) / 5,
}

# (n, j) -> modulus, alpha = pi/n; "higher accuracy" column
TABLE1 = {
    (4, 1): 1.65195641811156,
    (4, 2): 1.41312882432748,
    (4, 3): 1.23851628549016,
    (4, 4): 1.10517573064876,
    (4, 5): 1.0,
    (5, 1): 0.98160730939538,
    (5, 2): 0.88131392866493,
    (5, 3): 0.79679236427334,
    (5, 4): 0.72458889240001,
    (5, 5): 0.66218813398119,
    (6, 1): 0.69813355689778,
    (6, 2): 0.63911229266297,
    (6, 3): 0.58614411420414,
    (6, 4): 0.53833144748697,
    (6, 5): 0.49493951440663,
    (7, 1): 0.54204377899126,
    (7, 2): 0.50133063755764,
    (7, 3): 0.46350872114770,
    (7, 4): 0.42826373909062,
    (7, 5): 0.39531863465020,
    (8, 1): 0.44327582367411,
    (8, 2): 0.41254658974644,
    (8, 3): 0.38338339855016,
    (8, 4): 0.35565066792949,
    (8, 5): 0.32922144646084,
}

# "rough accuracy" column, documentation only; (4, 5) is the sharp value 1
TABLE1_ROUGH = {
    (4, 1): 1.65195637087856,
    (4, 2): 1.41312892318176,
    (4, 3): 1.23851630005081,
    (4, 4): 1.10517568205164,
    (4, 5): 1.0,
    (5, 1): 0.98160716203795,
    (5, 2): 0.88131392216865,
    (5, 3): 0.79679231514866,
    (5, 4): 0.72458905475484,
    (5, 5): 0.66218846198336,
    (6, 1): 0.69813401618400,
    (6, 2): 0.63911291428315,
    (6, 3): 0.58614443760266,
    (6, 4): 0.53833141064728,
    (6, 5): 0.49493995006987,
    (7, 1): 0.54204363753707,
    (7, 2): 0.50133118737030,
    (7, 3): 0.46350927171723,
    (7, 4): 0.42826417448376,
    (7, 5): 0.39531876405162,
    (8, 1): 0.44327621319647,
    (8, 2): 0.41254694695236,
    (8, 3): 0.38338345187308,
    (8, 4): 0.35565053319540,
    (8, 5): 0.32922105387009,
}


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    input: object
    expected_modulus: float
    source: str
    expected_beta: float | None = None
    expected_gamma: float | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_json_dict(self) -> dict:
        inp = self.input
        if isinstance(inp, QuadrilateralSpec):
            inputs = {"t": inp.t, "s": inp.s, "r1": inp.r1, "r2": inp.r2}
        else:
            inputs = {"vertices": ["inf" if is_inf(p) else p for p in inp]}
        inputs.update(self.extra)
        expected = {"modulus": self.expected_modulus}
        if self.expected_beta is not None:
            expected["beta"] = self.expected_beta
        if self.expected_gamma is not None:
            expected["gamma"] = self.expected_gamma
        return {
            "name": self.name,
            "inputs": inputs,
            "expected": expected,
            "provenance": self.source,
        }


def exact_case_q4() -> BenchmarkCase:
    """Quadrilateral with ``k = sqrt(2)``, ``K = 2`` and closed-form modulus."""
    spec = QuadrilateralSpec(math.sqrt(1.5), math.sqrt(3.0), math.sqrt(0.5), math.sqrt(2.0))
    return BenchmarkCase(
        name="q4",
        input=spec,
        expected_modulus=Q4_MODULUS,
        source="analytic quadrilateral, Mod = K(sqrt3/2)/(2K(1/2)), sin(beta)=1/3, gamma=2/3",
        expected_beta=math.asin(1.0 / 3.0),
        expected_gamma=2.0 / 3.0,
    )


def q4_modulus_closed_form() -> float:
    # K(sqrt(3)/2) / (2 K(1/2)) with modulus arguments; parameters 3/4 and 1/4
    return elliptic_k(0.75) / (2.0 * elliptic_k(0.25))


def hexagon_modulus_closed_form() -> float:
    """``K(1/sqrt(1+sqrt2)) / K(sqrt(sqrt2/(1+sqrt2)))`` (modulus arguments).

    In the parameter convention the arguments are ``m = 1/(1+sqrt2)`` and its
    complement ``sqrt2/(1+sqrt2)``.
    """
    m = 1.0 / (1.0 + _SQ2)
    return _k_from_complement(_SQ2 / (1.0 + _SQ2)) / _k_from_complement(m)


def _cyclic_ok(indices, n):
    # indices must appear in cyclic order around an n-gon
    if len(indices) != 4 or len(set(indices)) != 4:
        return False
    if any(not (0 <= i < n) for i in indices):
        return False
    rot = min(range(4), key=lambda r: indices[r])
    seq = [indices[(rot + r) % 4] for r in range(4)]
    return seq == sorted(seq)


def hexagon_case(vertex_selection) -> BenchmarkCase:
    """Exact modulus of the hexagon quadrilateral on four of ``A..F``."""
    labels = "ABCDEF"
    sel = [str(v).strip().upper() for v in vertex_selection]
    if any(v not in labels for v in sel):
        raise DomainError(f"unknown hexagon vertex in {vertex_selection!r}")
    idx = [labels.index(v) for v in sel]
    if not _cyclic_ok(idx, 6):
        raise DomainError(f"vertices {sel} are not four distinct vertices in cyclic order")
    pts = [HEXAGON_IMAGES[v] for v in sel]
    name = "hexagon_" + "".join(sel)
    return BenchmarkCase(
        name=name,
        input=pts,
        expected_modulus=half_plane_modulus(*pts),
        source="circular hexagon, half-plane vertex images of A..F",
        extra={"selection": "".join(sel)},
    )


def pn_case(n: int, vertex_indices) -> BenchmarkCase:
    """Exact modulus of ``P_n`` with four vertices fixed.

    Indices ``0..n-2`` are the finite vertices, ``n-1`` the one at infinity.
    """
    images = pn_vertex_images(n)
    idx = [int(i) for i in vertex_indices]
    if not _cyclic_ok(idx, len(images)):
        raise DomainError(f"indices {idx} are not four distinct vertices of P_{n} in cyclic order")
    pts = [images[i] for i in idx]
    return BenchmarkCase(
        name=f"P{n}_" + "_".join(map(str, idx)),
        input=pts,
        expected_modulus=half_plane_modulus(*pts),
        source="P_n family, vertices at -cos(pi k/(n-2)) and infinity",
        extra={"n": n, "indices": idx},
    )


def table1_fixture() -> list[BenchmarkCase]:
    """The 25 ``(alpha = pi/n, j)`` cases with their published moduli."""
    cases = []
    for (n, j), mod in TABLE1.items():
        cases.append(
            BenchmarkCase(
                name=f"table1_pi/{n}_j{j}",
                input=quad_from_alpha_j(math.pi / n, j),
                expected_modulus=mod,
                source="published table, higher-accuracy column"
                + (" (sharp value)" if (n, j) == (4, 5) else ""),
                extra={"alpha": f"pi/{n}", "j": j},
            )
        )
    return cases


def fixtures_json(indent: int | None = 2) -> str:
    """All fixtures as one JSON document."""
    cases = [exact_case_q4(), hexagon_case("ABDE"), hexagon_case("BDEA")]
    cases += [pn_case(4, (0, 1, 2, 3)), pn_case(6, (0, 2, 4, 5)), pn_case(6, (0, 1, 2, 3))]
    cases += table1_fixture()
    return json.dumps([c.to_json_dict() for c in cases], indent=indent)


def _load_time_checks():
    if abs(q4_modulus_closed_form() - Q4_MODULUS) > 1e-12:
        raise AssertionError("q4 closed form disagrees with stored modulus")
    if abs(hexagon_modulus_closed_form() - HEXAGON_MODULUS) > 1e-12:
        raise AssertionError("hexagon closed forms disagree")
    if abs(hexagon_case("ABDE").expected_modulus - HEXAGON_MODULUS) > 1e-12:
        raise AssertionError("hexagon half-plane modulus disagrees with stored value")


_load_time_checks()
