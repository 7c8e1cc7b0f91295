"""The Potts-Bethe map f(x) = ((theta*x + q - 1) / (x + theta + q - 2))**k over Q_p.

Fixed points, multipliers and their classification are only claimed for
k = 3, p >= 5 and p = 2 (mod 3); evaluation and orbits work for any k.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    HypothesisViolated,
    SingularInput,
    TheoremViolation,
    WrongResidueClassModThree,
)
from .functions import in_Ep
from .padic import DEFAULT_PRECISION, PadicNumber, Prime
from .polyroots import Polynomial, RootCertificate, cubic_roots_Qp, hensel_lift


def _as_padic(value, p: int) -> PadicNumber:
    if isinstance(value, PadicNumber):
        return value
    if isinstance(value, str):
        from .padic import parse_literal

        return parse_literal(value, p)
    return PadicNumber(value, p)


@dataclass(frozen=True)
class ModelParams:
    """Parameters (p, q, theta, k) of the p-adic q-state Potts model.

    ``tier1`` is |theta - 1| < 1, |q| < 1 and (theta - 1)(1 - theta - q) != 0;
    ``tier2`` additionally requires |theta - 1| < |q|.
    """

    p: Prime
    q: int
    theta: PadicNumber
    k: int = 3
    theta_source: str = field(default="direct", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "theta", _as_padic(self.theta, int(self.p)))
        if int(self.q) != self.q or self.q < 2:
            raise HypothesisViolated(f"q must be a natural number >= 2, got {self.q}")
        object.__setattr__(self, "q", int(self.q))
        if self.k < 1:
            raise HypothesisViolated("tree order k must be positive")
        if not in_Ep(self.theta):
            raise HypothesisViolated(f"theta = {self.theta} is not in E_p")
        if self.theta == 1:
            raise HypothesisViolated("theta = 1 is excluded")
        if self.theta == 1 - self.q:
            raise HypothesisViolated("theta = 1 - q is excluded")

    @property
    def q_padic(self) -> PadicNumber:
        return PadicNumber(self.q, self.p)

    @property
    def x0(self) -> PadicNumber:
        return PadicNumber(1, self.p)

    @property
    def x_inf(self) -> PadicNumber:
        return 2 - self.theta - self.q

    @property
    def theta_val(self) -> int:
        """v(theta - 1)."""
        return (self.theta - 1).valuation

    @property
    def q_val(self) -> int:
        return self.q_padic.valuation

    @property
    def tier1(self) -> bool:
        return self.theta_val > 0 and self.q_val > 0 and not (1 - self.theta - self.q).is_zero

    @property
    def tier2(self) -> bool:
        return self.tier1 and self.theta_val > self.q_val

    @property
    def contraction_ratio(self) -> Fraction:
        """|theta - 1| / |q|."""
        return Fraction(self.p) ** (self.q_val - self.theta_val)

    def require_classification_scope(self, tier: int = 1) -> None:
        """Raise unless the fixed-point theory applies to these parameters."""
        if self.p.residue_class_mod_3 != 2:
            raise WrongResidueClassModThree(
                f"p = {int(self.p)} is not 2 mod 3; the fixed-point classification is unavailable"
            )
        if self.p < 5:
            raise HypothesisViolated("the fixed-point theory needs p >= 5")
        if self.k != 3:
            raise HypothesisViolated("the fixed-point theory is for k = 3 only")
        if not self.tier1:
            raise HypothesisViolated("need |theta - 1|_p < 1, |q|_p < 1 and (theta - 1)(1 - theta - q) != 0")
        if tier >= 2 and not self.tier2:
            raise HypothesisViolated("need |theta - 1|_p < |q|_p")


class FixedPointClass(enum.Enum):
    ATTRACTING = "Attracting"
    INDIFFERENT = "Indifferent"
    REPELLING = "Repelling"


def classify_fixed_point(multiplier_norm) -> FixedPointClass:
    m = Fraction(multiplier_norm)
    if m < 1:
        return FixedPointClass.ATTRACTING
    if m == 1:
        return FixedPointClass.INDIFFERENT
    return FixedPointClass.REPELLING


# -- the map -----------------------------------------------------------------------


def eval_map(params: ModelParams, x) -> PadicNumber:
    x = _as_padic(x, params.p)
    theta = params.theta
    den = x + theta + (params.q - 2)
    if den.is_zero:
        raise SingularInput(f"x = {x} is the pole x_inf = 2 - theta - q")
    return ((theta * x + (params.q - 1)) / den) ** params.k


def eval_derivative(params: ModelParams, x) -> PadicNumber:
    """f'(x) = k (theta - 1)(theta - 1 + q) u^(k-1) / (x + theta + q - 2)^(k+1), u = theta x + q - 1."""
    x = _as_padic(x, params.p)
    theta, q, k = params.theta, params.q, params.k
    den = x + theta + (q - 2)
    if den.is_zero:
        raise SingularInput(f"x = {x} is the pole x_inf = 2 - theta - q")
    num = theta * x + (q - 1)
    return k * (theta - 1) * (theta - 1 + q) * num ** (k - 1) / den ** (k + 1)


@dataclass(frozen=True)
class FixedPointCubics:
    x_form: Polynomial
    y_form: Polynomial
    z_form: Polynomial


def fixed_point_cubics(params: ModelParams) -> FixedPointCubics:
    """The cubic satisfied by non-trivial fixed points, in x, y and z = y - 3.

    ``y = (x - 1 + q) / (theta - 1) + 1``. The x-form is normalised to be monic.
    """
    if not params.tier1:
        raise HypothesisViolated("fixed-point cubics need tier-1 parameters")
    p = params.p
    t = params.theta
    q = params.q_padic
    X = lambda *c: Polynomial(c, p)  # noqa: E731
    lhs = X(q - 1, t) * X(t + 2 * q - 3, t + 1) * (t - 1)
    rhs = X(q - 1, 1) * X(t + q - 2, 1) * X(t + q - 2, 1)
    x_form = rhs - lhs
    r = 1 - t - q
    y_form = X(-(r * r), -(2 * t + 1) * r, -(1 + t + t * t), 1)
    z_form = X(
        q * (4 * t + 5) - (t - 1) * (4 * t + 14) - q * q,
        21 - 6 * t * (t + 1) - (2 * t + 1) * r,
        8 - t - t * t,
        1,
    )
    return FixedPointCubics(x_form, y_form, z_form)


def fixed_point_norm_formula(params: ModelParams) -> PadicNumber:
    """The constant q(4 theta + 5) - (theta - 1)(4 theta + 14) - q^2; |y1 - 3| equals its norm."""
    t, q = params.theta, params.q_padic
    return q * (4 * t + 5) - (t - 1) * (4 * t + 14) - q * q


@dataclass(frozen=True)
class FixedPointReport:
    """The two fixed points x0 = 1 and x1 = 1 - q + (theta - 1)(y1 - 1).

    ``x1`` is a rational representative congruent to the true fixed point
    modulo ``p**x1_precision``.
    """

    params: ModelParams
    x0: PadicNumber
    y1: RootCertificate
    x1: PadicNumber
    x1_precision: int
    congruence: tuple | None
    multiplier_x0: Fraction
    multiplier_x1: Fraction
    class_x0: FixedPointClass
    class_x1: FixedPointClass

    @property
    def precision(self) -> int:
        return self.y1.precision

    def x1_distance_valuation(self, x: PadicNumber):
        """v(x - x1), or None when x agrees with x1 to full certified precision."""
        d = x - self.x1
        if d.is_zero or d.valuation >= self.x1_precision:
            return None
        return d.valuation


def find_fixed_points(params: ModelParams, n: int = DEFAULT_PRECISION) -> FixedPointReport:
    """Compute Fix(f) = {1, x1} with x1 certified to ``n`` digits of y1."""
    params.require_classification_scope(tier=1)
    p = params.p
    cubics = fixed_point_cubics(params)
    y_form = cubics.y_form
    lifted = hensel_lift(y_form, 3, n)
    certs = cubic_roots_Qp(y_form, n)
    if len(certs) != 1:
        raise TheoremViolation(f"expected exactly one root of the y-cubic, found {len(certs)}")
    if not certs[0].agrees_with(lifted, n) or certs[0].initial_residue != 3:
        raise TheoremViolation("root engine and direct Hensel lift disagree")
    y1 = lifted
    y_rep = y1.value()
    if y_rep.valuation != 0:
        raise TheoremViolation("|y1|_p != 1")
    expected = fixed_point_norm_formula(params)
    dz = y_rep - 3
    if not expected.is_zero and expected.valuation < n:
        if dz.is_zero or dz.valuation != expected.valuation:
            raise TheoremViolation("|y1 - 3|_p does not match the norm formula")
    theta = params.theta
    x1 = 1 - params.q_padic + (theta - 1) * (y_rep - 1)
    x1_precision = n + params.theta_val
    congruence = None
    if params.tier2:
        congruence = corollary_congruence_digits(params)
    m0 = multiplier_norm_x0(params)
    m1 = _multiplier_norm_at(params, x1, x1_precision)
    return FixedPointReport(
        params=params,
        x0=PadicNumber(1, p),
        y1=y1,
        x1=x1,
        x1_precision=x1_precision,
        congruence=congruence,
        multiplier_x0=m0,
        multiplier_x1=m1,
        class_x0=classify_fixed_point(m0),
        class_x1=classify_fixed_point(m1),
    )


def multiplier_norm_x0(params: ModelParams) -> Fraction:
    return eval_derivative(params, 1).norm()


def _multiplier_norm_at(params: ModelParams, x_rep: PadicNumber, precision: int) -> Fraction:
    # near x1 both x - x_inf and theta x + q - 1 have norm |theta - 1|, so an
    # error of norm below that leaves |f'| unchanged
    if precision <= params.theta_val:
        raise HypothesisViolated("precision too small to resolve |f'(x1)|_p; raise N")
    return eval_derivative(params, x_rep).norm()


def multiplier_at(params: ModelParams, report: FixedPointReport, which: str) -> Fraction:
    """|f'(x)|_p at ``which`` in {"x0", "x1"}."""
    if which == "x0":
        return report.multiplier_x0
    if which == "x1":
        return report.multiplier_x1
    raise ValueError(f"unknown fixed point {which!r}")


def multiplier_closed_form(params: ModelParams, x: PadicNumber, y: PadicNumber | None = None) -> PadicNumber:
    """3(theta-1)(theta-1+q) x / ((theta x + q - 1)(x + theta + q - 2)) at a fixed point x."""
    t, q = params.theta, params.q
    return 3 * (t - 1) * (t - 1 + q) * x / ((t * x + (q - 1)) * (x + t + (q - 2)))


def split_q(params: ModelParams) -> tuple:
    """(m, s) with q = p**m * s and p not dividing s."""
    m = params.q_val
    return m, params.q // int(params.p) ** m


def corollary_congruence_digits(params: ModelParams) -> tuple:
    """(s0, m) with y1 = 3 + s0 p^m (mod p^(m+1)) predicted from q = p^m s."""
    m, s = split_q(params)
    return (-s) % int(params.p), m


@dataclass(frozen=True)
class CongruenceCheck:
    s0: int
    m: int
    passed: bool


def verify_corollary_congruence(params: ModelParams, report: FixedPointReport) -> CongruenceCheck:
    if not params.tier2:
        raise HypothesisViolated("the congruence for y1 needs |theta - 1|_p < |q|_p")
    s0, m = corollary_congruence_digits(params)
    p = int(params.p)
    if report.y1.precision < m + 1:
        raise HypothesisViolated(f"y1 known to {report.y1.precision} digits; need {m + 1}")
    y_res = report.y1.residue(m + 1)
    passed = y_res == (3 + s0 * p**m) % p ** (m + 1)
    # equivalent norm form: |y1 - 3 + q| < |q|
    d = report.y1.value() - 3 + params.q
    passed_norm = d.is_zero or d.valuation > m
    if passed != passed_norm:
        raise TheoremViolation("digit and norm forms of the congruence disagree")
    return CongruenceCheck(s0, m, passed)


# -- orbits ------------------------------------------------------------------------


class OrbitStatus(enum.Enum):
    FIXED_POINT = "FixedPoint"
    AT_REPELLER = "AtRepeller"
    UNKNOWN_AT_PRECISION = "UnknownAtPrecision"
    SINGULAR = "Singular"
    CONVERGED_TO_A0 = "ConvergedToA0"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class Orbit:
    trajectory: tuple
    status: OrbitStatus

    @property
    def steps(self) -> int:
        return len(self.trajectory) - 1


def _a0_applies(params: ModelParams) -> bool:
    return params.k == 3 and params.tier2 and params.p.residue_class_mod_3 == 2 and params.p >= 5


def orbit(params: ModelParams, x, max_iter: int = 500, fixed_points: FixedPointReport | None = None) -> Orbit:
    """Iterate f from ``x`` until a decisive event or ``max_iter`` steps.

    Entry into A0 = {|x - 1| < |q|} counts as convergence once the
    classification theory applies, since A0 is forward-invariant and f
    contracts it toward 1.
    """
    x = _as_padic(x, params.p)
    x_inf = params.x_inf
    use_a0 = _a0_applies(params)
    trajectory = [x]
    for step in range(max_iter + 1):
        if x == x_inf:
            return Orbit(tuple(trajectory), OrbitStatus.SINGULAR)
        if x == 1:
            return Orbit(tuple(trajectory), OrbitStatus.FIXED_POINT)
        if fixed_points is not None and fixed_points.x1_distance_valuation(x) is None:
            status = OrbitStatus.AT_REPELLER if x == fixed_points.x1 else OrbitStatus.UNKNOWN_AT_PRECISION
            return Orbit(tuple(trajectory), status)
        if use_a0 and (x - 1).valuation > params.q_val:
            return Orbit(tuple(trajectory), OrbitStatus.CONVERGED_TO_A0)
        if step == max_iter:
            break
        nxt = eval_map(params, x)
        if nxt == x:
            trajectory.append(nxt)
            return Orbit(tuple(trajectory), OrbitStatus.FIXED_POINT)
        x = nxt
        trajectory.append(x)
    return Orbit(tuple(trajectory), OrbitStatus.BUDGET_EXHAUSTED)


# -- parameter sampling ------------------------------------------------------------


def _random_unit(rng: random.Random, p: int, digits: int = 3) -> int:
    while True:
        u = rng.randrange(1, p**digits)
        if u % p:
            return u


def sample_params(rng: random.Random, p: int, tier: int = 2, max_m: int = 2, max_gap: int = 3,
                  unit_digits: int = 3) -> ModelParams:
    """Draw theta = 1 + p^a u and q = p^m s with u, s units.

    ``tier=2`` forces a > m >= 1. ``tier=1`` draws a and m independently
    and rejects the measure-zero case 1 - theta - q = 0.
    """
    p = int(p)
    while True:
        m = rng.randint(1, max_m)
        if tier >= 2:
            a = m + rng.randint(1, max_gap)
        else:
            a = rng.randint(1, max_m + max_gap)
        s = _random_unit(rng, p, 1 if p**unit_digits > 10**6 else 2)
        u = _random_unit(rng, p, unit_digits)
        if rng.random() < 0.5:
            u = -u
        theta = 1 + p**a * u
        q = p**m * s
        if theta == 1 - q:
            continue
        return ModelParams(p, q, PadicNumber(theta, p), 3)
