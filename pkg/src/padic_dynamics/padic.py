"""Exact arithmetic in Q_p.

A p-adic number is stored as an exact rational. Its valuation and unit
part are derived on demand, so every norm is an exact power of p and no
digit stream is ever truncated behind the caller's back. Digit expansions
are a view computed to whatever precision is requested.
"""

from __future__ import annotations

import ast
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

from .errors import (
    DivisionByZero,
    LiteralSyntaxError,
    NotPrime,
    PrimeMismatch,
    ZeroHasNoExpansion,
)

DEFAULT_PRECISION = 64

# BPSW (which gmpy2.is_prime runs first) has been checked exhaustively below 2**64.
_CERTIFIED_PRIME_BOUND = 2**64

Rational = Union[int, Fraction, "mpq"]


class Prime(int):
    """A prime number, validated at construction.

    Behaves exactly like ``int``. ``certified`` is False for primes above
    2**64, where the primality test is probabilistic.
    """

    certified: bool

    def __new__(cls, value):
        if isinstance(value, Prime):
            return value
        n = int(value)
        if n < 2 or not gmpy2.is_prime(n, 32):
            raise NotPrime(f"{value!r} is not prime")
        obj = super().__new__(cls, n)
        obj.certified = n < _CERTIFIED_PRIME_BOUND
        return obj

    @property
    def residue_class_mod_3(self) -> int:
        return int(self) % 3

    def __repr__(self):
        return f"Prime({int(self)})"

    def __reduce__(self):
        return (Prime, (int(self),))


class Domain(enum.Enum):
    """Which of the standard subsets of Q_p a number lies in."""

    UNIT_SPHERE = "Z_p^*"
    MAXIMAL_IDEAL = "Z_p\\Z_p^*"
    OUTSIDE_INTEGERS = "Q_p\\Z_p"
    ZERO = "0"


def _to_mpq(value) -> mpq:
    if isinstance(value, PadicNumber):
        return value._value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, type(mpz(0)), type(mpq(0)))):
        return mpq(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a p-adic number")


class PadicNumber:
    """An element of Q_p represented exactly as a rational number.

    >>> x = PadicNumber(Fraction(-24325, 24389), 5)
    >>> x.valuation, x.norm()
    (2, Fraction(1, 25))
    """

    __slots__ = ("p", "_value", "_val", "_unit")

    def __init__(self, value, p: int):
        if isinstance(value, PadicNumber):
            if value.p != p:
                raise PrimeMismatch(f"cannot reinterpret a {value.p}-adic number as {p}-adic")
            self.p = value.p
            self._value = value._value
            self._val = value._val
            self._unit = value._unit
            return
        self.p = p
        self._value = _to_mpq(value)
        self._val = None
        self._unit = None

    @classmethod
    def _raw(cls, value: mpq, p: int) -> PadicNumber:
        obj = cls.__new__(cls)
        obj.p = p
        obj._value = value
        obj._val = None
        obj._unit = None
        return obj

    def _decompose(self):
        num = self._value.numerator
        den = self._value.denominator
        num_unit, vn = gmpy2.remove(num, self.p)
        den_unit, vd = gmpy2.remove(den, self.p)
        self._val = int(vn) - int(vd)
        self._unit = (num_unit, den_unit)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._value == 0

    @property
    def valuation(self):
        """p-order of the number; ``math.inf`` for zero."""
        if self._value == 0:
            return math.inf
        if self._val is None:
            self._decompose()
        return self._val

    @property
    def unit_num(self) -> int:
        if self._value == 0:
            return 0
        if self._unit is None:
            self._decompose()
        return int(self._unit[0])

    @property
    def unit_den(self) -> int:
        if self._value == 0:
            return 1
        if self._unit is None:
            self._decompose()
        return int(self._unit[1])

    @property
    def unit(self) -> PadicNumber:
        """The unit x / p**valuation (zero maps to zero)."""
        if self._value == 0:
            return self
        if self._unit is None:
            self._decompose()
        return PadicNumber._raw(mpq(self._unit[0], self._unit[1]), self.p)

    @property
    def rational(self) -> Fraction:
        return Fraction(int(self._value.numerator), int(self._value.denominator))

    def norm(self) -> Fraction:
        """|x|_p as an exact rational (``p**-valuation``, or 0)."""
        if self._value == 0:
            return Fraction(0)
        return Fraction(self.p) ** (-self.valuation)

    def is_integral(self) -> bool:
        return self._value == 0 or self.valuation >= 0

    def domain(self) -> Domain:
        return domain_classify(self)

    def residue(self, k: int = 1) -> int:
        """The residue of an element of Z_p modulo p**k, in [0, p**k)."""
        if not self.is_integral():
            raise ValueError(f"{self} is not a p-adic integer")
        modulus = mpz(self.p) ** k
        num = self._value.numerator
        den = self._value.denominator
        return int(num * gmpy2.invert(den, modulus) % modulus)

    def digits(self, n: int = DEFAULT_PRECISION) -> DigitExpansion:
        return digits(self, n)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise PrimeMismatch(f"mixing {self.p}-adic and {other.p}-adic numbers")
            return other._value
        try:
            return _to_mpq(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicNumber._raw(self._value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicNumber._raw(self._value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicNumber._raw(o - self._value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicNumber._raw(self._value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise DivisionByZero("division by zero in Q_p")
        return PadicNumber._raw(self._value / o, self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._value == 0:
            raise DivisionByZero("division by zero in Q_p")
        return PadicNumber._raw(o / self._value, self.p)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self._value == 0:
                raise DivisionByZero("zero to a negative power")
            return PadicNumber._raw(1 / self._value ** (-exponent), self.p)
        return PadicNumber._raw(self._value**exponent, self.p)

    def __neg__(self):
        return PadicNumber._raw(-self._value, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._value == o

    def __hash__(self):
        return hash(self._value)

    def __bool__(self):
        return self._value != 0

    def __repr__(self):
        return f"PadicNumber({self._value}, p={self.p})"

    def __str__(self):
        return format_rational(self)

    def __reduce__(self):
        return (_rebuild, (self.rational, self.p))


def _rebuild(value, p):
    return PadicNumber(value, p)


def valuation(x: PadicNumber):
    return x.valuation


def norm(x: PadicNumber) -> Fraction:
    return x.norm()


def domain_classify(x: PadicNumber) -> Domain:
    if x.is_zero:
        return Domain.ZERO
    v = x.valuation
    if v == 0:
        return Domain.UNIT_SPHERE
    return Domain.MAXIMAL_IDEAL if v > 0 else Domain.OUTSIDE_INTEGERS


@dataclass(frozen=True)
class DigitExpansion:
    """Canonical expansion ``p**valuation * sum(digits[i] * p**i)``.

    The number is known modulo ``p**(valuation + len(digits))``. An empty
    ``digits`` tuple means "zero modulo p**valuation".
    """

    p: int
    valuation: int
    digits: tuple

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def absolute_precision(self) -> int:
        return self.valuation + len(self.digits)

    @property
    def is_zero(self) -> bool:
        return not self.digits

    def value(self) -> PadicNumber:
        """The truncated number the digits spell out."""
        total = 0
        for d in reversed(self.digits):
            total = total * self.p + d
        return PadicNumber(Fraction(total) * Fraction(self.p) ** self.valuation, self.p)

    def agrees_with(self, x: PadicNumber) -> bool:
        """True when ``x`` matches these digits modulo p**absolute_precision."""
        diff = x - self.value()
        return diff.is_zero or diff.valuation >= self.absolute_precision

    def to_literal(self) -> str:
        return format_digits(self)


def digits(x: PadicNumber, n: int = DEFAULT_PRECISION) -> DigitExpansion:
    """First ``n`` canonical digits of a nonzero ``x``."""
    if x.is_zero:
        raise ZeroHasNoExpansion("zero has no canonical digit expansion")
    if n < 0:
        raise ValueError("precision must be non-negative")
    p = x.p
    modulus = mpz(p) ** n
    u = int(mpz(x.unit_num) * gmpy2.invert(mpz(x.unit_den), modulus) % modulus) if n else 0
    out = []
    for _ in range(n):
        u, d = divmod(u, p)
        out.append(d)
    return DigitExpansion(p, x.valuation, tuple(out))


def truncate(x: PadicNumber, absolute_precision: int) -> DigitExpansion:
    """Digits of ``x`` modulo p**absolute_precision (zero-safe)."""
    if x.is_zero or x.valuation >= absolute_precision:
        return DigitExpansion(x.p, absolute_precision, ())
    return digits(x, absolute_precision - x.valuation)


@dataclass(frozen=True)
class PadicBall:
    """The ball of points within ``p**-radius_exponent`` of ``center``."""

    center: PadicNumber
    radius_exponent: int
    strict: bool = True

    def __contains__(self, x: PadicNumber) -> bool:
        d = x - self.center
        if d.is_zero:
            return True
        if self.strict:
            return d.valuation > self.radius_exponent
        return d.valuation >= self.radius_exponent


# -- literal text format -------------------------------------------------------

_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def _eval_literal(node, p: int) -> Fraction:
    if isinstance(node, ast.Expression):
        return _eval_literal(node.body, p)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return Fraction(node.value)
    if isinstance(node, ast.Name) and node.id == "p":
        return Fraction(p)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_literal(node.operand, p)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left = _eval_literal(node.left, p)
        right = _eval_literal(node.right, p)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right == 0:
                raise LiteralSyntaxError("division by zero in literal")
            return left / right
        if right.denominator != 1 or abs(right) > 10_000:
            raise LiteralSyntaxError("exponents must be small integers")
        if left == 0 and right < 0:
            raise LiteralSyntaxError("zero to a negative power in literal")
        return left ** int(right)
    raise LiteralSyntaxError(f"unsupported syntax in p-adic literal: {ast.dump(node)}")


def parse_literal(text: str, p: int) -> PadicNumber:
    """Parse a rational ``a/b`` or a digit form like ``p^-1*(3+2*p+p^2)``.

    Integers, ``+ - * / ^`` and parentheses are accepted; the symbol ``p``
    stands for the prime.
    """
    src = text.strip().replace("^", "**")
    if not src:
        raise LiteralSyntaxError("empty literal")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise LiteralSyntaxError(f"cannot parse {text!r}: {exc.msg}") from None
    return PadicNumber(_eval_literal(tree, p), p)


def format_rational(x: PadicNumber) -> str:
    """Exact ``a/b`` form."""
    r = x.rational
    return f"{r.numerator}/{r.denominator}"


def format_digits(expansion: DigitExpansion) -> str:
    """Digit form mirroring :func:`parse_literal`, zero digits omitted."""
    terms = []
    for i, d in enumerate(expansion.digits):
        if d == 0:
            continue
        if i == 0:
            terms.append(str(d))
        elif i == 1:
            terms.append(f"{d}*p")
        else:
            terms.append(f"{d}*p^{i}")
    if not terms:
        return "0"
    body = "+".join(terms)
    if expansion.valuation == 0:
        return body
    return f"p^{expansion.valuation}*({body})"


def format_padic(x: PadicNumber, n: int | None = None) -> str:
    """Digit literal to relative precision ``n``, or exact rational if ``n`` is None."""
    if n is None:
        return format_rational(x)
    if x.is_zero:
        return "0"
    return format_digits(digits(x, n))


def rational_reconstruction(residue: int, modulus: int):
    """Smallest-height fraction a/b with a = b*residue mod modulus, if one exists.

    Uses the half-extended Euclidean algorithm with bound sqrt(modulus/2).
    """
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, residue % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        s0, s1 = s1, s0 - quo * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)
