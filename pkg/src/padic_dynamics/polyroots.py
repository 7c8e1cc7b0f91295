"""Roots of polynomials over Q_p.

The engine combines Newton polygons (to bracket root valuations), reduction
modulo p (to locate residue classes) and Hensel lifting (to refine simple
residues). Residues that are multiple modulo p are re-centred and examined
again one digit deeper; a root whose class never separates is reported as
:class:`UnresolvedMultipleRoot` unless it is an exact rational root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .errors import (
    BudgetExceeded,
    HypothesisViolated,
    NotARootModP,
    NotAUnit,
    SingularRootModP,
    UnresolvedMultipleRoot,
)
from .padic import (
    DEFAULT_PRECISION,
    DigitExpansion,
    Domain,
    PadicNumber,
    digits,
    domain_classify,
    rational_reconstruction,
)

ENUMERATION_BUDGET = 10**7
_SMALL_PRIME_SCAN = 5000


class Polynomial:
    """Polynomial over Q_p with coefficients stored lowest degree first.

    Trailing zero coefficients are stripped, so ``coefficients[-1]`` is the
    nonzero leading coefficient (the zero polynomial has no coefficients).
    """

    __slots__ = ("p", "coefficients")

    def __init__(self, coefficients: Iterable, p: int):
        coeffs = [c if isinstance(c, PadicNumber) else PadicNumber(c, p) for c in coefficients]
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.p = p
        self.coefficients = tuple(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence, p: int) -> Polynomial:
        poly = cls([1], p)
        for r in roots:
            poly = poly * cls([-PadicNumber(r, p) if not isinstance(r, PadicNumber) else -r, 1], p)
        return poly

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, i: int) -> PadicNumber:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return PadicNumber(0, self.p)

    def __call__(self, x) -> PadicNumber:
        x = x if isinstance(x, PadicNumber) else PadicNumber(x, self.p)
        acc = mpq(0)
        xv = x._value
        for c in reversed(self.coefficients):
            acc = acc * xv + c._value
        return PadicNumber._raw(acc, self.p)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.p, self.coefficients))

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial([self[i] + other[i] for i in range(n)], self.p)

    def __sub__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial([self[i] - other[i] for i in range(n)], self.p)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial([c * other for c in self.coefficients], self.p)
        if self.is_zero or other.is_zero:
            return Polynomial([], self.p)
        out = [mpq(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a._value * b._value
        return Polynomial([PadicNumber._raw(c, self.p) for c in out], self.p)

    __rmul__ = __mul__

    def __repr__(self):
        terms = ", ".join(str(c.rational) for c in self.coefficients)
        return f"Polynomial([{terms}], p={self.p})"

    def derivative(self) -> Polynomial:
        return Polynomial([c * i for i, c in enumerate(self.coefficients)][1:], self.p)

    def shift(self, center) -> Polynomial:
        """g(s) = f(center + s), by repeated synthetic division."""
        c = center._value if isinstance(center, PadicNumber) else mpq(center)
        work = [a._value for a in self.coefficients]
        n = len(work)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                work[j] += c * work[j + 1]
        return Polynomial([PadicNumber._raw(v, self.p) for v in work], self.p)

    def scale(self, v: int) -> Polynomial:
        """g(t) = f(p**v * t)."""
        pv = mpq(self.p) ** v
        out = []
        factor = mpq(1)
        for c in self.coefficients:
            out.append(PadicNumber._raw(c._value * factor, self.p))
            factor *= pv
        return Polynomial(out, self.p)

    def divide_linear(self, root) -> tuple:
        """Quotient and remainder of division by (x - root)."""
        r = root._value if isinstance(root, PadicNumber) else mpq(root)
        coeffs = [c._value for c in self.coefficients]
        quotient = [mpq(0)] * (len(coeffs) - 1)
        acc = mpq(0)
        for i in range(len(coeffs) - 1, 0, -1):
            acc = acc * r + coeffs[i]
            quotient[i - 1] = acc
        remainder = acc * r + coeffs[0]
        return (
            Polynomial([PadicNumber._raw(q, self.p) for q in quotient], self.p),
            PadicNumber._raw(remainder, self.p),
        )

    def min_valuation(self) -> int:
        return min(c.valuation for c in self.coefficients if not c.is_zero)

    def primitive(self) -> Polynomial:
        """Scale by a power of p so the coefficients lie in Z_p with one unit."""
        mu = self.min_valuation()
        return self * PadicNumber(Fraction(self.p) ** (-mu), self.p)

    def has_integral_coefficients(self) -> bool:
        return all(c.is_integral() for c in self.coefficients)

    def coefficients_mod(self, k: int) -> list:
        return [c.residue(k) if not c.is_zero else 0 for c in self.coefficients]


@dataclass(frozen=True)
class NewtonPolygonSegment:
    """One edge of the lower convex hull of (i, v(a_i)).

    ``slope`` is the hull slope; the roots attached to the edge have
    valuation ``-slope``.
    """

    slope: Fraction
    length: int
    start: tuple

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope


@dataclass(frozen=True)
class RootCertificate:
    """A root of a polynomial over Q_p known to ``root.precision`` digits.

    ``representative`` is the truncated rational the digits spell out.
    ``exact`` is set when the root is a rational number that annihilates the
    polynomial exactly. ``simple`` means the root was obtained by Hensel
    lifting a simple residue; ``lift_trace`` records v(f(y_i)) along the
    Newton iteration.
    """

    p: int
    root: DigitExpansion
    representative: PadicNumber
    initial_residue: int
    simple: bool
    region: Domain
    multiplicity: int = 1
    exact: PadicNumber | None = None
    lift_trace: tuple = field(default=(), compare=False)

    @property
    def precision(self) -> int:
        return self.root.precision

    @property
    def absolute_precision(self) -> int:
        if self.exact is not None and self.exact.is_zero:
            return math.inf
        return self.root.absolute_precision

    def residue(self, k: int) -> int:
        """Root modulo p**k (root must be a p-adic integer)."""
        if self.exact is not None:
            return self.exact.residue(k)
        if k > self.absolute_precision:
            raise ValueError(f"root only certified modulo p^{self.absolute_precision}")
        return self.representative.residue(k)

    def value(self) -> PadicNumber:
        return self.exact if self.exact is not None else self.representative

    def agrees_with(self, other: RootCertificate, k: int) -> bool:
        diff = self.value() - other.value()
        return diff.is_zero or diff.valuation >= k


# -- residues and squares -------------------------------------------------------


def legendre_symbol(a, p: int) -> int:
    """Euler's criterion: +1 if ``a`` is a square mod the odd prime p, else -1."""
    if p == 2:
        raise ValueError("Legendre symbol needs an odd prime")
    if isinstance(a, (PadicNumber, Fraction)):
        a = PadicNumber(a, p)
        if a.is_zero or a.valuation != 0:
            raise NotAUnit(f"{a} is not a p-adic unit")
        a = a.residue(1)
    a = int(a) % p
    if a == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _poly_mod_p_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _strip(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divide_root_mod_p(coeffs: list, r: int, p: int) -> tuple:
    n = len(coeffs)
    quotient = [0] * (n - 1)
    acc = 0
    for i in range(n - 1, 0, -1):
        acc = (acc * r + coeffs[i]) % p
        quotient[i - 1] = acc
    return quotient, (acc * r + coeffs[0]) % p


def roots_mod_p(coeffs: Sequence[int], p: int) -> dict:
    """Roots of a polynomial over F_p with their multiplicities."""
    coeffs = _strip([c % p for c in coeffs])
    if len(coeffs) <= 1:
        return {}
    if p <= _SMALL_PRIME_SCAN:
        candidates = [x for x in range(p) if _poly_mod_p_eval(coeffs, x, p) == 0]
    else:
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        candidates = []
        for factor, _ in poly.factor_list()[1]:
            if factor.degree() == 1:
                a, b = factor.all_coeffs()
                candidates.append(int(-b * pow(int(a), -1, p)) % p)
    result = {}
    for r in candidates:
        work = list(coeffs)
        mult = 0
        while len(work) > 1:
            quotient, rem = _divide_root_mod_p(work, r, p)
            if rem:
                break
            mult += 1
            work = _strip(quotient)
        result[r] = mult
    return result


def _sqrt_mod_p(a: int, p: int) -> int:
    roots = roots_mod_p([-a, 0, 1], p)
    return min(roots)


@dataclass(frozen=True)
class SqrtResult:
    exists: bool
    root: PadicNumber | None = None
    precision: int = 0

    def __bool__(self):
        return self.exists


def sqrt_exists(d: PadicNumber, p: int | None = None, n: int = DEFAULT_PRECISION) -> SqrtResult:
    """Decide whether ``d`` is a square in Q_p (p odd); lift a root if so.

    The returned root is known to ``n`` digits of relative precision.
    """
    if p is None:
        p = d.p
    d = PadicNumber(d, p)
    if p == 2:
        raise ValueError("sqrt_exists handles odd primes only")
    if d.is_zero:
        return SqrtResult(True, PadicNumber(0, p), math.inf)
    v = d.valuation
    if v % 2:
        return SqrtResult(False)
    u = d.unit
    if legendre_symbol(u, p) != 1:
        return SqrtResult(False)
    r0 = _sqrt_mod_p(u.residue(1), p)
    cert = hensel_lift(Polynomial([-u, 0, 1], p), r0, n)
    root = cert.value() * PadicNumber(Fraction(p) ** (v // 2), p)
    return SqrtResult(True, root, n)


# -- Hensel lifting ----------------------------------------------------------------


def _certificate(f: Polynomial, value: PadicNumber, n: int, residue: int, simple: bool,
                 multiplicity: int = 1, trace: tuple = (), exact: PadicNumber | None = None,
                 try_exact: bool = True) -> RootCertificate:
    p = f.p
    if exact is None and try_exact and not value.is_zero:
        exact = _exact_candidate(f, value, n)
    if exact is not None:
        value_for_digits = exact
    else:
        value_for_digits = value
    if value_for_digits.is_zero:
        expansion = DigitExpansion(p, n, ())
        representative = value_for_digits
        region = Domain.ZERO
    else:
        expansion = digits(value_for_digits, n)
        representative = expansion.value()
        region = domain_classify(value_for_digits)
    return RootCertificate(
        p=p,
        root=expansion,
        representative=representative,
        initial_residue=residue,
        simple=simple,
        region=region,
        multiplicity=multiplicity,
        exact=exact,
        lift_trace=trace,
    )


def _exact_candidate(f: Polynomial, value: PadicNumber, n: int) -> PadicNumber | None:
    """Rational root near ``value`` if one annihilates f exactly."""
    p = f.p
    v = value.valuation
    modulus = p**n
    unit = value.unit
    r = rational_reconstruction(unit.residue(n), modulus)
    candidates = []
    if r is not None:
        candidates.append(PadicNumber(r * Fraction(p) ** v, p))
    # Plain integers sitting in the upper half of the residue range.
    if v >= 0:
        shifted = value.residue(v + n) - p ** (v + n)
        candidates.append(PadicNumber(shifted, p))
    for cand in candidates:
        if f(cand).is_zero:
            return cand
    return None


def hensel_lift(f: Polynomial, y0: int, n: int = DEFAULT_PRECISION) -> RootCertificate:
    """Lift a simple root ``y0`` of f mod p to a root known mod p**n.

    Newton's iteration doubles the number of correct digits per step.
    """
    p = f.p
    if not f.has_integral_coefficients():
        raise HypothesisViolated("hensel_lift needs coefficients in Z_p")
    if n < 1:
        raise ValueError("precision must be at least 1")
    df = f.derivative()
    y0 = int(y0) % p
    fy0 = f(y0)
    if not fy0.is_zero and fy0.valuation < 1:
        raise NotARootModP(f"f({y0}) is not divisible by {p}")
    dfy0 = df(y0)
    if dfy0.is_zero or dfy0.valuation > 0:
        raise SingularRootModP(f"f'({y0}) = 0 mod {p}: residue is not simple")
    y = y0
    k = 1
    fy = f(y)
    trace = [fy.valuation]
    while k < n and not fy.is_zero:
        k = min(2 * k, n)
        modulus = p**k
        fy_res = fy.residue(k)
        dfy_res = df(y).residue(k)
        y = (y - fy_res * int(gmpy2.invert(dfy_res, modulus))) % modulus
        fy = f(y)
        trace.append(fy.valuation)
    return _certificate(f, PadicNumber(y, p), n, y0, True, trace=tuple(trace))


# -- brute-force oracle -------------------------------------------------------------


def roots_mod_pk(f: Polynomial, k: int, budget: int = ENUMERATION_BUDGET) -> set:
    """Every residue y in [0, p**k) with f(y) = 0 mod p**k, by exhaustive scan."""
    p = f.p
    modulus = p**k
    if modulus > budget:
        raise BudgetExceeded(f"p^k = {modulus} exceeds the enumeration budget {budget}")
    if not f.has_integral_coefficients():
        raise HypothesisViolated("roots_mod_pk needs coefficients in Z_p")
    coeffs = f.coefficients_mod(k)
    ys = np.arange(modulus, dtype=np.int64)
    acc = np.zeros(modulus, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * ys + c) % modulus
    return set(int(y) for y in np.nonzero(acc == 0)[0])


# -- Newton polygon ------------------------------------------------------------------


def newton_polygon(f: Polynomial) -> list:
    """Lower convex hull of the points (i, v(a_i)) for nonzero a_i."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no Newton polygon")
    points = [(i, c.valuation) for i, c in enumerate(f.coefficients) if not c.is_zero]
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append(NewtonPolygonSegment(Fraction(y2 - y1, x2 - x1), x2 - x1, (x1, y1)))
    return segments


# -- root engine ---------------------------------------------------------------------


@dataclass
class _EngineState:
    f: Polynomial
    n: int
    max_depth: int
    certificates: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)


def _local_reduction(g: Polynomial, v: int) -> tuple:
    """g(p**v t) / p**mu as a polynomial with Z_p coefficients, and its reduction mod p."""
    p = g.p
    scaled = g.scale(v)
    mu = scaled.min_valuation()
    local = scaled * PadicNumber(Fraction(p) ** (-mu), p)
    reduced = [c.residue(1) if not c.is_zero and c.valuation == 0 else 0 for c in local.coefficients]
    return local, reduced


def _search(state: _EngineState, center: PadicNumber, min_val, depth: int):
    f = state.f
    p = f.p
    g = f.shift(center)
    order = 0
    while order < len(g.coefficients) and g.coefficients[order].is_zero:
        order += 1
    if order:
        state.certificates.append(
            _certificate(f, center, state.n, _residue_of(center), False,
                         multiplicity=order, exact=center)
        )
        g = Polynomial(g.coefficients[order:], p)
    if g.degree < 1:
        return
    for seg in newton_polygon(g):
        v = seg.root_valuation
        if v.denominator != 1:
            continue  # roots live in a ramified extension
        v = int(v)
        if min_val is not None and v < min_val:
            continue
        local, reduced = _local_reduction(g, v)
        for t0, mult in sorted(roots_mod_p(reduced, p).items()):
            if t0 == 0:
                continue  # belongs to a segment of larger valuation
            step = PadicNumber(Fraction(p) ** v * t0, p)
            if mult == 1:
                cert = hensel_lift(local, t0, state.n)
                t = cert.value()
                root = center + t * PadicNumber(Fraction(p) ** v, p)
                state.certificates.append(
                    _certificate(f, root, state.n, _residue_of(root), True, trace=cert.lift_trace)
                )
                continue
            new_center = center + step
            if depth >= state.max_depth:
                state.unresolved.append((new_center, v + 1, mult))
                continue
            known = v + 1 - new_center.valuation if not new_center.is_zero else 0
            exact = _exact_candidate(f, new_center, known) if depth >= 2 and known > 0 else None
            if exact is not None and (exact - new_center).valuation >= v + 1:
                _search(state, exact, v + 1, depth + 1)
            else:
                _search(state, new_center, v + 1, depth + 1)


def _residue_of(x: PadicNumber) -> int:
    if x.is_zero:
        return 0
    if x.valuation >= 0:
        return x.residue(1)
    return x.unit.residue(1)


def _dedupe(certs: list) -> list:
    out = []
    for c in certs:
        for o in out:
            if o.exact is not None and c.exact is not None and o.exact == c.exact:
                break
        else:
            out.append(c)
    return out


def roots_Qp(f: Polynomial, n: int = DEFAULT_PRECISION, max_depth: int | None = None) -> list:
    """All roots of f in Q_p, as certificates; raises on unresolved classes."""
    if f.degree < 1:
        raise ValueError("need a polynomial of positive degree")
    state = _EngineState(f=f, n=n, max_depth=max_depth if max_depth is not None else n + 8)
    _search(state, PadicNumber(0, f.p), None, 0)
    certs = _dedupe(state.certificates)
    if state.unresolved:
        certs = _resolve_by_deflation(f, certs, state.unresolved, n)
    return sorted(certs, key=_sort_key)


def _sort_key(c: RootCertificate):
    v = c.root.valuation
    return (v if v != math.inf else 10**9, c.root.digits)


def quadratic_roots_Qp(f: Polynomial, n: int = DEFAULT_PRECISION) -> list:
    """Roots of a quadratic through the discriminant and a p-adic square root."""
    if f.degree != 2:
        raise ValueError("expected a quadratic")
    p = f.p
    c, b, a = f.coefficients
    disc = b * b - a * c * 4
    if disc.is_zero:
        r = -b / (a * 2)
        return [_certificate(f, r, n, _residue_of(r), False, multiplicity=2, exact=r)]
    rational = disc.rational
    num_root = math.isqrt(rational.numerator) if rational.numerator > 0 else None
    den_root = math.isqrt(rational.denominator)
    if num_root is not None and num_root**2 == rational.numerator and den_root**2 == rational.denominator:
        s = PadicNumber(Fraction(num_root, den_root), p)
        roots = [(-b + s) / (a * 2), (-b - s) / (a * 2)]
        return [_certificate(f, r, n, _residue_of(r), True, exact=r) for r in roots]
    extra = n + disc.valuation + 2 * max(0, (a * 2).valuation) + 4
    sq = sqrt_exists(disc, p, extra)
    if not sq.exists:
        return []
    out = []
    for s in (sq.root, -sq.root):
        r = (-b + s) / (a * 2)
        out.append(_certificate(f, r, n, _residue_of(r), True, try_exact=False))
    return out


def _resolve_by_deflation(f: Polynomial, certs: list, unresolved: list, n: int) -> list:
    exact = [c for c in certs if c.exact is not None]
    if f.degree == 3 and exact:
        quotient, remainder = f.divide_linear(exact[0].exact)
        if remainder.is_zero:
            rest = quadratic_roots_Qp(quotient, n)
            merged = [exact[0]]
            for r in rest:
                if r.exact is not None and r.exact == exact[0].exact:
                    merged[0] = replace(merged[0], multiplicity=merged[0].multiplicity + r.multiplicity)
                else:
                    merged.append(r)
            return merged
    raise UnresolvedMultipleRoot(
        f"{len(unresolved)} residue class(es) with a multiple root could not be separated",
        residues=[(c, v) for c, v, _ in unresolved],
    )


def cubic_roots_Qp(f: Polynomial, n: int = DEFAULT_PRECISION) -> list:
    """Certified roots in Q_p of a polynomial of degree exactly three."""
    if f.degree != 3:
        raise ValueError(f"expected a cubic, got degree {f.degree}")
    return roots_Qp(f, n)


def root_norm_estimate(f: Polynomial) -> Fraction:
    """|C|/|B| for z^3 + A z^2 + B z + C with |B| = |A|^2 = 1 and |C| < |A|^3.

    That quotient is the norm of the unique root of norm below one.
    """
    if f.degree != 3 or f[3] != 1:
        raise HypothesisViolated("expected a monic cubic z^3 + A z^2 + B z + C")
    C, B, A = f[0], f[1], f[2]
    if A.is_zero or B.is_zero or A.valuation != 0 or B.valuation != 0:
        raise HypothesisViolated("need |A|_p = |B|_p = 1")
    if not C.is_zero and C.valuation <= 0:
        raise HypothesisViolated("need |C|_p < 1")
    return C.norm() / B.norm()
