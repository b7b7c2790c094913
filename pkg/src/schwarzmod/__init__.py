"""Conformal moduli of symmetric circular quadrilaterals with cusps."""

from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InfeasibleBracketError,
    IntegrationAccuracyError,
    PoleOnRayError,
    RefinementEscapeError,
    SchwarzModError,
    SingularityError,
    StiffnessError,
)
from .geometry import (
    QuadGeometry,
    QuadrilateralSpec,
    fit_circle_imag_axis,
    fit_circle_real_axis,
    probe_geometry,
    quad_from_alpha_j,
)
from .schwarz_ode import (
    REFINED_TOL,
    STANDARD_TOL,
    OdeTolerance,
    RaySolution,
    SchwarzParams,
    schwarzian_coeff,
    series_eval,
    solve_ray,
)
from .solver import (
    ModulusResult,
    SolverConfig,
    gamma_bracket,
    reciprocal_check,
    refine,
    solve_beta,
    solve_direct,
    solve_gamma,
    solve_modulus,
)
from .specialfn import (
    INF,
    MobiusMap,
    cross_ratio,
    elliptic_k,
    half_plane_modulus,
    lambda_from_cross_ratio,
    mobius_apply,
    modulus_from_beta,
    pn_vertex_images,
)

__version__ = "0.1.0"
