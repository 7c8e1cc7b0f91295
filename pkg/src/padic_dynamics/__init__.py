"""Exact p-adic arithmetic and the dynamics of the Potts-Bethe map f(x) = ((theta x + q - 1)/(x + theta + q - 2))^3."""

from .errors import *  # noqa: F401,F403
from .functions import exp_p, in_Ep, log_p, theta_from_J
from .padic import (
    DEFAULT_PRECISION,
    DigitExpansion,
    Domain,
    PadicBall,
    PadicNumber,
    Prime,
    digits,
    format_padic,
    norm,
    parse_literal,
    valuation,
)
from .polyroots import (
    Polynomial,
    RootCertificate,
    cubic_roots_Qp,
    hensel_lift,
    legendre_symbol,
    newton_polygon,
    roots_mod_pk,
    roots_Qp,
    sqrt_exists,
)
from .potts import (
    FixedPointClass,
    FixedPointReport,
    ModelParams,
    classify_fixed_point,
    eval_derivative,
    eval_map,
    find_fixed_points,
    fixed_point_cubics,
    orbit,
    verify_corollary_congruence,
)
from .basin import (
    BallSpec,
    Region,
    basin_membership,
    check_transition,
    classify_region,
    enumerate_ball_representatives,
    pairwise_scaling,
    predict_escape_time,
)
from .gibbs import (
    BoundaryVector,
    Case,
    Partition,
    case_cubic,
    consistency_residual,
    enumerate_tipgm,
    recursion_step,
    solve_E3,
    tipgm_to_boundary_field,
)

__version__ = "0.1.0"
