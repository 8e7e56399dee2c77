"""Exact scalars: rationals and formal slopes ``2*pi*q + r``.

Every parameter value in the package is either a :class:`fractions.Fraction`
or a :class:`SymbolicSlope`.  Both support ``+``, ``-``, negation, scaling by
rationals and exact comparison, which is all the persistence code needs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

INF = math.inf
NEG_INF = -math.inf


class ScalarParseError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a reduced Fraction."""
    if isinstance(text, bool):
        raise ScalarParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ScalarParseError(f"not a rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ScalarParseError(f"not a rational: {text!r}") from None
    if q == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SymbolicSlope:
    """The real number ``2*pi*two_pi + const`` with pi kept formal.

    Ordering is lexicographic in ``(two_pi, const)``.  This agrees with the
    real ordering as long as compared values differ in ``const`` by less than
    the spacing of their ``two_pi`` parts times 2*pi, which holds for every
    sample the contact models produce.
    """

    two_pi: Fraction
    const: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "two_pi", Fraction(self.two_pi))
        object.__setattr__(self, "const", Fraction(self.const))

    @classmethod
    def coerce(cls, x) -> "SymbolicSlope":
        if isinstance(x, SymbolicSlope):
            return x
        if isinstance(x, (int, Rational)) and not isinstance(x, bool):
            return cls(Fraction(0), Fraction(x))
        raise TypeError(f"cannot coerce {x!r} to SymbolicSlope")

    def _other(self, other):
        if isinstance(other, SymbolicSlope):
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return SymbolicSlope(0, other)
        return None

    def _key(self):
        return (self.two_pi, self.const)

    # comparisons -----------------------------------------------------------
    def _cmp(self, other, op):
        if isinstance(other, float) and math.isinf(other):
            return op(0, other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return op(self._key(), o._key())

    def __lt__(self, other):
        return self._cmp(other, lambda a, b: a < b)

    def __le__(self, other):
        return self._cmp(other, lambda a, b: a <= b)

    def __gt__(self, other):
        return self._cmp(other, lambda a, b: a > b)

    def __ge__(self, other):
        return self._cmp(other, lambda a, b: a >= b)

    def __eq__(self, other):
        if isinstance(other, float):
            return False
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._key() == o._key()

    def __hash__(self):
        if self.two_pi == 0:
            return hash(self.const)
        return hash(self._key())

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return SymbolicSlope(self.two_pi + o.two_pi, self.const + o.const)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return SymbolicSlope(self.two_pi - o.two_pi, self.const - o.const)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return SymbolicSlope(-self.two_pi, -self.const)

    def __abs__(self):
        return -self if self < 0 else self

    def __mul__(self, k):
        if isinstance(k, (int, Rational)) and not isinstance(k, bool):
            return SymbolicSlope(self.two_pi * k, self.const * k)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, (int, Rational)) and not isinstance(k, bool):
            return SymbolicSlope(self.two_pi / k, self.const / k)
        return NotImplemented

    def __floordiv__(self, other) -> int:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return _symbolic_floordiv(self, o)

    def __rfloordiv__(self, other) -> int:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return _symbolic_floordiv(o, self)

    def is_rational(self) -> bool:
        return self.two_pi == 0

    def __str__(self):
        return format_scalar(self)


def _symbolic_floordiv(a: SymbolicSlope, d: SymbolicSlope) -> int:
    if d <= 0:
        raise ZeroDivisionError("floor division by a non-positive slope")
    if d.two_pi == 0:
        if a.two_pi != 0:
            raise OverflowError("quotient is formally infinite")
        return math.floor(a.const / d.const)
    n0 = math.floor(a.two_pi / d.two_pi)
    for n in (n0 - 1, n0, n0 + 1):
        rem = a - d * n
        if 0 <= rem < d:
            return n
    raise ArithmeticError(f"no floor for {a} // {d}")  # pragma: no cover


Scalar = Union[Fraction, SymbolicSlope]


def floor_div(a: Scalar, d: Scalar) -> int:
    """Largest integer n with ``n*d <= a`` (d > 0)."""
    if isinstance(a, SymbolicSlope) or isinstance(d, SymbolicSlope):
        return _symbolic_floordiv(SymbolicSlope.coerce(a), SymbolicSlope.coerce(d))
    return math.floor(Fraction(a) / Fraction(d))


_SLOPE_RE = re.compile(r"^([+-]?(?:\d+(?:/\d+)?)?)pi([+-]\d+(?:/\d+)?)?$")


def parse_scalar(text: str):
    """Rationals, ``inf``, or slopes such as ``"2pi"``, ``"-pi"``, ``"4pi+1/10"``."""
    s = text.strip().replace(" ", "")
    if s in ("inf", "+inf", "-inf"):
        return scalar_from_json(s)
    m = _SLOPE_RE.match(s)
    if m is None:
        return parse_rational(s)
    head, tail = m.groups()
    coef = Fraction(1) if head in ("", "+") else Fraction(-1) if head == "-" else parse_rational(head)
    return SymbolicSlope(coef / 2, parse_rational(tail) if tail else 0)


def is_infinite(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def format_scalar(x) -> str:
    """Text form used in reports: ``"3/2"``, ``"inf"``, ``"-2pi"``, ``"4pi+1/10"``."""
    if is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, SymbolicSlope):
        if x.two_pi == 0:
            return format_rational(x.const)
        coef = 2 * x.two_pi
        if coef == 1:
            head = "pi"
        elif coef == -1:
            head = "-pi"
        else:
            head = f"{format_rational(coef)}pi"
        if x.const == 0:
            return head
        sign = "+" if x.const > 0 else "-"
        return f"{head}{sign}{format_rational(abs(x.const))}"
    return format_rational(Fraction(x))


def scalar_to_json(x):
    if is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, SymbolicSlope):
        return {"two_pi": format_rational(x.two_pi), "const": format_rational(x.const)}
    return format_rational(Fraction(x))


def scalar_from_json(obj):
    if isinstance(obj, dict):
        if set(obj) != {"two_pi", "const"}:
            raise ScalarParseError(f"bad symbolic slope keys: {sorted(obj)}")
        return SymbolicSlope(parse_rational(obj["two_pi"]), parse_rational(obj["const"]))
    if obj in ("inf", "+inf"):
        return INF
    if obj == "-inf":
        return NEG_INF
    return parse_rational(obj)
