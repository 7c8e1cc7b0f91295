"""Translation-invariant p-adic Gibbs measures of the q-state Potts model on
the Cayley tree of order three, described through boundary vectors
z in E_p^(q-1) solving

    z_i = (((theta - 1) z_i + sum_j z_j + 1) / (theta + sum_j z_j))**3.

Vectors come in five shapes (cases A to E) built from blocks of equal
entries; each non-trivial shape reduces to a cubic in one unknown.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    DenominatorVanishes,
    GuardViolated,
    HypothesisViolated,
    OutsideConvergenceDomain,
    UnresolvedMultipleRoot,
)
from .functions import exp_series, in_Ep, in_exp_domain, in_log_domain, log_series
from .padic import DEFAULT_PRECISION, PadicNumber, truncate
from .polyroots import Polynomial, RootCertificate, cubic_roots_Qp, roots_Qp
from .potts import ModelParams, _as_padic

MAX_Q = 20
RESIDUAL_SLACK = 2


class Case(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D1 = "D(i)"
    D2 = "D(ii)"
    E1 = "E(i)"
    E2 = "E(ii)"
    E3 = "E(iii)"

    @property
    def family(self) -> str:
        return self.value[0]


@dataclass(frozen=True, order=True)
class Partition:
    """Block sizes of a boundary vector; ``m3`` is None outside case E."""

    m1: int
    m2: int
    m3: int | None = None

    def __post_init__(self):
        parts = self.parts
        if any(int(m) != m or m < 1 for m in parts):
            raise HypothesisViolated(f"partition parts must be positive integers: {parts}")

    @property
    def parts(self) -> tuple:
        return (self.m1, self.m2) if self.m3 is None else (self.m1, self.m2, self.m3)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def as_list(self) -> list:
        return list(self.parts)


@dataclass(frozen=True)
class CertifiedValue:
    """A p-adic number known modulo p**absolute_precision (exactly if ``exact``)."""

    value: PadicNumber
    absolute_precision: int
    exact: bool = False

    def residue_digits(self, k: int | None = None) -> int:
        k = self.absolute_precision if k is None else min(k, self.absolute_precision)
        return self.value.residue(k)


@dataclass(frozen=True)
class BoundaryVector:
    case: Case
    partition: Partition | None
    roots: tuple
    companions: tuple
    z: tuple
    precision: int
    block_values: tuple = field(default=())

    @property
    def size(self) -> int:
        return len(self.z)


# -- cubics -------------------------------------------------------------------------


def _guard(params_theta: PadicNumber, m: int, label: str) -> PadicNumber:
    d = params_theta - 1 + 3 * m
    if d.is_zero:
        raise GuardViolated(f"{label} = (1 - theta)/3 so theta - 1 + 3*{label} vanishes")
    return d


def case_cubic(case: Case, params: ModelParams, partition: Partition | None = None) -> Polynomial:
    """The cubic whose roots parameterise boundary vectors of the given case."""
    p = params.p
    t = params.theta
    q = params.q
    X = lambda *c: Polynomial(c, p)  # noqa: E731
    if case is Case.B:
        t1sq = (t - 1) ** 2
        return X(
            1,
            3 * (q - 1) - t1sq * (t + 2),
            3 * (q - 1) ** 2 - t1sq * (t + 3 * (q - 1) - 1),
            (q - 1) ** 3,
        )
    if partition is None:
        raise HypothesisViolated(f"case {case.value} needs a partition")
    if case is Case.C:
        m1, m2 = partition.m1, partition.m2
        t1sq = (t - 1) ** 2
        return X(
            (m1 + 1) ** 3,
            3 * m2 * (m1 + 1) ** 2 - t1sq * (t + 3 * (m1 + 1) - 1),
            3 * m2**2 * (m1 + 1) - t1sq * (t + 3 * m2 - 1),
            m2**3,
        )
    if case in (Case.D1, Case.D2, Case.E1, Case.E2):
        m1, m2 = partition.m1, partition.m2
        if case in (Case.D2, Case.E2):
            m1, m2 = m2, m1
        d1 = _guard(t, m1, "m1" if case in (Case.D1, Case.E1) else "m2")
        d2 = t - 1 + 3 * m2
        if case.family == "D":
            shift, const = m1 - 1, t + 2
        else:
            m3 = partition.m3
            shift, const = m1 - m3 - 1, t + 2 + 3 * m3
        lin = X(shift, m1 - m2)
        return lin * lin * lin + X(0, d1 * d1 * const, d1 * d1 * d2)
    raise HypothesisViolated(f"case {case.value} has no single-variable cubic here")


def companion_value(case: Case, params: ModelParams, partition: Partition, root: PadicNumber) -> PadicNumber:
    """The other block value, linear in the root of the case cubic."""
    t = params.theta
    m1, m2 = partition.m1, partition.m2
    if case in (Case.D2, Case.E2):
        m1, m2 = m2, m1
    d1 = _guard(t, m1, "m1")
    const = t + 2
    if case.family == "E":
        const = const + 3 * partition.m3
    return -((t - 1 + 3 * m2) * root + const) / d1


def e3_cubic(p: int, z1: PadicNumber) -> Polynomial:
    """(z1 + z2 + 1)^3 - 27 z1 z2 as a cubic in z2."""
    s = z1 + 1
    return Polynomial((s**3, 3 * s * s - 27 * z1, 3 * s, 1), p)


# -- partitions ---------------------------------------------------------------------


def partitions_for(case: Case, q: int) -> list:
    n = q - 1
    if case is Case.C:
        return [Partition(m1, n - m1) for m1 in range(1, n)]
    if case in (Case.D1, Case.D2):
        return [Partition(m1, n - m1) for m1 in range(1, n // 2 + 1)]
    if case in (Case.E1, Case.E2):
        out = []
        for m3 in range(1, n - 1):
            rest = n - m3
            for m1 in range(1, rest // 2 + 1):
                out.append(Partition(m1, rest - m1, m3))
        return out
    return []


def expand_vector(case: Case, partition: Partition | None, values: dict, q: int) -> tuple:
    """Lay the block values out as a (q-1)-vector: z1-block, z2-block, ones."""
    if case is Case.A:
        return (values["one"],) * (q - 1)
    if case is Case.B:
        return (values["z"],) * (q - 1)
    if case is Case.C:
        return (values["one"],) * partition.m1 + (values["z"],) * partition.m2
    vec = (values["z1"],) * partition.m1 + (values["z2"],) * partition.m2
    if partition.m3 is not None:
        vec = vec + (values["one"],) * partition.m3
    return vec


# -- consistency checks ---------------------------------------------------------------


@dataclass(frozen=True)
class Residual:
    valuations: tuple
    required: int
    denominator_valuation: int

    @property
    def passed(self) -> bool:
        return all(v >= self.required for v in self.valuations)


def consistency_residual(params: ModelParams, z, k: int = 3, precision: int | None = None,
                         slack: int = RESIDUAL_SLACK) -> Residual:
    """Valuations of z_i - (((theta-1) z_i + S + 1)/(theta + S))^k, S = sum z_j.

    Zero residuals are reported as ``inf``. With ``precision`` set, the
    denominator theta + S must be resolvable at that precision.
    """
    p = params.p
    zs = [_as_padic(v, p) for v in z]
    if len(zs) != params.q - 1:
        raise HypothesisViolated(f"expected {params.q - 1} components, got {len(zs)}")
    t = params.theta
    s = sum(zs, PadicNumber(0, p))
    den = t + s
    dv = den.valuation if not den.is_zero else None
    if den.is_zero or (precision is not None and dv >= precision):
        raise DenominatorVanishes("theta + sum z_j vanishes at working precision")
    vals = []
    cache = {}
    for zi in zs:
        if zi not in cache:
            r = zi - (((t - 1) * zi + s + 1) / den) ** k
            cache[zi] = float("inf") if r.is_zero else r.valuation
        vals.append(cache[zi])
    required = (precision - slack) if precision is not None else 0
    return Residual(tuple(vals), required, dv)


def _exp(x: PadicNumber, n: int) -> PadicNumber:
    return truncate(exp_series(x, n), n).value()


def _log(x: PadicNumber, n: int) -> PadicNumber:
    if not in_log_domain(x):
        raise OutsideConvergenceDomain(f"log_p argument {x} is outside B(1, 1)")
    return truncate(log_series(x, n), n).value()


def recursion_step(params: ModelParams, h, n: int = DEFAULT_PRECISION) -> tuple:
    """F(h)_i = log_p(((theta-1) e^h_i + sum_j e^h_j + 1) / (theta + sum_j e^h_j)) modulo p**n."""
    p = params.p
    hs = [_as_padic(v, p) for v in h]
    for hi in hs:
        if not in_exp_domain(hi):
            raise OutsideConvergenceDomain(f"h component {hi} is outside the exp_p domain")
    cache = {}
    es = []
    for hi in hs:
        if hi not in cache:
            cache[hi] = _exp(hi, n)
        es.append(cache[hi])
    t = params.theta
    s = sum(es, PadicNumber(0, p))
    den = t + s
    if den.is_zero:
        raise DenominatorVanishes("theta + sum exp_p(h_j) vanishes")
    out = []
    done = {}
    for e in es:
        if e not in done:
            done[e] = _log(((t - 1) * e + s + 1) / den, n)
        out.append(done[e])
    return tuple(out)


@dataclass(frozen=True)
class RecursionCheck:
    """Outcome of h = 3 F(h); ``defined`` is False when some log_p argument
    leaves B(1, 1), which happens for p = 1 (mod 3) when the cube root
    picked out by the system is a non-trivial root of unity times a 1-unit.
    """

    valuations: tuple
    required: int
    defined: bool = True

    @property
    def passed(self) -> bool:
        return self.defined and all(v >= self.required for v in self.valuations)

    @property
    def status(self) -> str:
        if not self.defined:
            return "undefined"
        return "pass" if self.passed else "fail"


def recursion_check(params: ModelParams, z, n: int, slack: int = RESIDUAL_SLACK) -> RecursionCheck:
    """Test h = 3 F(h) for h_i = log_p(z_i), compared modulo p**n.

    exp_p and log_p are truncated at a working precision raised by twice
    v(theta + sum z_j), the digits lost when dividing by that denominator.
    """
    p = params.p
    zs = [_as_padic(v, p) for v in z]
    den = params.theta + sum(zs, PadicNumber(0, p))
    if den.is_zero:
        raise DenominatorVanishes("theta + sum z_j vanishes")
    work = n + 2 * max(den.valuation, 0) + 2
    h = [_log(v, work) for v in zs]
    try:
        f = recursion_step(params, h, work)
    except OutsideConvergenceDomain:
        return RecursionCheck((), n - slack, defined=False)
    vals = []
    for hi, fi in zip(h, f):
        d = hi - 3 * fi
        vals.append(float("inf") if d.is_zero else d.valuation)
    return RecursionCheck(tuple(vals), n - slack)


def tipgm_to_boundary_field(vector: BoundaryVector, h_free=1, n: int = DEFAULT_PRECISION) -> tuple:
    """(log_p(h z_1), ..., log_p(h z_{q-1}), log_p(h)) modulo p**n."""
    if not vector.z:
        raise HypothesisViolated("empty boundary vector")
    p = vector.z[0].p
    h = _as_padic(h_free, p)
    if not in_Ep(h):
        raise HypothesisViolated(f"h = {h} must lie in E_p")
    comps = []
    cache = {}
    for zj in vector.z:
        if zj not in cache:
            cache[zj] = _log(h * zj, n)
        comps.append(cache[zj])
    comps.append(_log(h, n))
    return tuple(comps)


# -- enumeration ----------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    case: Case
    partition: Partition | None
    kind: str
    message: str
    residues: tuple = ()


@dataclass(frozen=True)
class Catalogue:
    params: ModelParams
    precision: int
    vectors: tuple
    diagnostics: tuple
    h_free: PadicNumber

    def by_case(self, family: str) -> list:
        return [v for v in self.vectors if v.case.family == family]


def _is_one(f: Polynomial, cert: RootCertificate) -> bool:
    if cert.exact is not None:
        return cert.exact == 1
    return f(1).is_zero and (cert.value() - 1).valuation >= cert.absolute_precision


def _admissible(cert: RootCertificate, f: Polynomial) -> bool:
    if cert.absolute_precision < 2:
        return False
    return in_Ep(cert.value()) and not _is_one(f, cert)


def _certified(value: PadicNumber, precision, exact: bool) -> CertifiedValue:
    return CertifiedValue(value, precision, exact)


def _solve(f: Polynomial, n: int) -> list:
    if f.degree == 3:
        return cubic_roots_Qp(f, n)
    if f.degree < 1:
        return []
    return roots_Qp(f, n)


def _vectors_for(params: ModelParams, case: Case, partition: Partition | None, work: int) -> list:
    f = case_cubic(case, params, partition)
    certs = _solve(f, work)
    p = params.p
    one = PadicNumber(1, p)
    out = []
    for cert in certs:
        if not _admissible(cert, f):
            continue
        z = cert.value()
        exact = cert.exact is not None
        root_cv = _certified(z, cert.absolute_precision, exact)
        if case in (Case.B, Case.C):
            values = {"z": z, "one": one}
            companions = ()
            blocks = (z,)
        else:
            w = companion_value(case, params, partition, z)
            m1, m2 = partition.m1, partition.m2
            if case in (Case.D2, Case.E2):
                m1, m2 = m2, m1
            lost = (params.theta - 1 + 3 * m1).valuation - (params.theta - 1 + 3 * m2).valuation
            w_prec = cert.absolute_precision - max(lost, 0)
            if w_prec < 2 or not in_Ep(w) or (w == 1):
                continue
            w_cv = _certified(w, w_prec, exact)
            if case in (Case.D1, Case.E1):
                values = {"z1": w, "z2": z, "one": one}
            else:
                values = {"z1": z, "z2": w, "one": one}
            companions = (w_cv,)
            blocks = (values["z1"], values["z2"])
        vec = expand_vector(case, partition, values, params.q)
        prec = min([root_cv.absolute_precision] + [c.absolute_precision for c in companions])
        out.append(BoundaryVector(case, partition, (root_cv,), companions, vec, prec, blocks))
    return out


def enumerate_tipgm(params: ModelParams, n: int = 16, cases=None, partition: Partition | None = None,
                    h_free=1, guard: int = 8) -> Catalogue:
    """Catalogue boundary vectors for cases A to E(ii).

    Roots are computed with ``guard`` extra digits so companion values and
    residuals survive the divisions by theta - 1 + 3 m_i and theta + S.
    """
    if not params.tier1:
        raise HypothesisViolated("the catalogue needs |theta - 1|_p < 1 and |q|_p < 1")
    if params.q > MAX_Q and partition is None:
        raise HypothesisViolated(f"full enumeration is limited to q <= {MAX_Q}; pass a single partition")
    if params.k != 3:
        raise HypothesisViolated("the catalogue is for k = 3")
    p = params.p
    one = PadicNumber(1, p)
    work = n + guard + 2 * params.theta_val + params.q_val
    wanted = set(cases) if cases is not None else {"A", "B", "C", "D", "E"}
    vectors = [BoundaryVector(Case.A, None, (), (), (one,) * (params.q - 1), n, (one,))] if "A" in wanted else []
    diagnostics = []

    def run(case, part):
        try:
            return _vectors_for(params, case, part, work)
        except UnresolvedMultipleRoot as exc:
            diagnostics.append(Diagnostic(case, part, "UnresolvedMultipleRoot", str(exc),
                                          tuple((c.residue(1) if not c.is_zero else 0, v) for c, v in exc.residues)))
        except GuardViolated as exc:
            raise exc
        return []

    if "B" in wanted and partition is None:
        vectors.extend(run(Case.B, None))
    for family, pair in (("C", (Case.C, None)), ("D", (Case.D1, Case.D2)), ("E", (Case.E1, Case.E2))):
        if family not in wanted:
            continue
        primary = pair[0]
        parts = [partition] if partition is not None else partitions_for(primary, params.q)
        for part in parts:
            if family == "E" and part.m3 is None or family != "E" and part.m3 is not None:
                continue
            if part.total != params.q - 1:
                raise HypothesisViolated(f"partition {part.parts} does not sum to q - 1 = {params.q - 1}")
            try:
                vectors.extend(run(primary, part))
            except GuardViolated as exc:
                if pair[1] is None:
                    diagnostics.append(Diagnostic(primary, part, "GuardViolated", str(exc)))
                    continue
                try:
                    vectors.extend(run(pair[1], part))
                except GuardViolated as exc2:
                    diagnostics.append(Diagnostic(pair[1], part, "GuardViolated", str(exc2)))
    vectors.sort(key=lambda v: (list(Case).index(v.case), v.partition.parts if v.partition else (),
                                [c.value.residue(min(c.absolute_precision, n)) for c in v.roots]))
    return Catalogue(params, n, tuple(vectors), tuple(diagnostics), _as_padic(h_free, p))


def d_parameterisations_agree(params: ModelParams, partition: Partition, n: int = 16, guard: int = 8) -> bool | None:
    """Compare the (z1, z2) pairs from D(i) and D(ii); None when a guard fails."""
    work = n + guard + 2 * params.theta_val + params.q_val
    try:
        a = _vectors_for(params, Case.D1, partition, work)
        b = _vectors_for(params, Case.D2, partition, work)
    except GuardViolated:
        return None
    def pairs(vs):
        return {(v.block_values[0].residue(n), v.block_values[1].residue(n)) for v in vs}
    return pairs(a) == pairs(b)


def solve_E3(p: int, q: int, theta, z1, n: int = DEFAULT_PRECISION) -> list:
    """Roots z2 in E_p of (z1 + z2 + 1)^3 = 27 z1 z2, available only for theta = 1 - q."""
    theta = _as_padic(theta, p)
    z1 = _as_padic(z1, p)
    if theta != 1 - q:
        raise HypothesisViolated("case E(iii) requires theta = 1 - q exactly")
    if (q - 1) % 3 != 2 or q - 1 < 5:
        raise HypothesisViolated(f"no partition m1 = m2 = m3 + 1 of q - 1 = {q - 1}")
    if not in_Ep(z1):
        raise HypothesisViolated(f"z1 = {z1} must lie in E_p")
    f = e3_cubic(p, z1)
    return [c for c in cubic_roots_Qp(f, n) if c.absolute_precision >= 2 and in_Ep(c.value())]


# -- verification ---------------------------------------------------------------------


@dataclass(frozen=True)
class VectorCheck:
    vector: BoundaryVector
    consistency: Residual
    recursion: RecursionCheck

    @property
    def passed(self) -> bool:
        return self.consistency.passed and self.recursion.passed

    @property
    def sound(self) -> bool:
        """Consistency holds and the recursion check did not fail outright."""
        return self.consistency.passed and self.recursion.status != "fail"


def verify_vector(params: ModelParams, vector: BoundaryVector, n: int) -> VectorCheck:
    res = consistency_residual(params, vector.z, 3, precision=n)
    rec = recursion_check(params, vector.z, n)
    return VectorCheck(vector, res, rec)


def catalogue_records(cat: Catalogue, checks=None) -> list:
    """JSON-ready records: case, partition, root residues, precision and check outcome."""
    if checks is None:
        checks = [verify_vector(cat.params, v, cat.precision) for v in cat.vectors]
    out = []
    for v, chk in zip(cat.vectors, checks):
        residues = [c.residue_digits(cat.precision) for c in v.roots + v.companions]
        out.append({
            "case": v.case.value,
            "partition": v.partition.as_list() if v.partition else [],
            "root_residues": residues,
            "precision": min(cat.precision, v.precision),
            "consistency_check": "pass" if chk.consistency.passed else "fail",
            "recursion_check": chk.recursion.status,
        })
    return out


def e3_factorisation_holds() -> bool:
    """Symbolic identity (z + 2)^3 - 27 z = (z - 1)^2 (z + 8)."""
    import sympy

    z = sympy.Symbol("z")
    return sympy.expand((z + 2) ** 3 - 27 * z - (z - 1) ** 2 * (z + 8)) == 0


def unique_tipgm(cat: Catalogue) -> bool:
    return len(cat.vectors) == 1 and cat.vectors[0].case is Case.A


__all__ = [
    "Case", "Partition", "CertifiedValue", "BoundaryVector", "case_cubic", "companion_value",
    "partitions_for", "consistency_residual", "recursion_step", "recursion_check",
    "tipgm_to_boundary_field", "enumerate_tipgm", "solve_E3", "verify_vector",
    "catalogue_records", "Catalogue", "Diagnostic", "e3_factorisation_holds",
    "d_parameterisations_agree", "unique_tipgm",
]
