"""Exact number systems.

``Rational`` is :class:`fractions.Fraction`.  :class:`EpsNum` is the ordered
plane of pairs ``a + b*eps`` compared lexicographically (``0 < eps << 1``),
and :class:`ExtVal` adjoins ``+inf`` to an ordered number type.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

Rational = Fraction

__all__ = [
    "Rational",
    "EpsNum",
    "ExtVal",
    "POS_INF",
    "ZERO",
    "EPS",
    "as_rational",
    "parse_rational",
    "parse_epsnum",
    "format_rational",
    "eps_compare",
    "ext_strict_gt",
]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``p``, ``-p`` or ``p/q``; floats are rejected."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@total_ordering
class EpsNum:
    """An element ``std + eps*eps_unit`` of the lexicographic plane."""

    __slots__ = ("std", "eps")

    def __init__(self, std=0, eps=0):
        object.__setattr__(self, "std", as_rational(std))
        object.__setattr__(self, "eps", as_rational(eps))

    def __setattr__(self, name, value):
        raise AttributeError("EpsNum is immutable")

    @classmethod
    def lift(cls, value) -> "EpsNum":
        if isinstance(value, EpsNum):
            return value
        return cls(as_rational(value), 0)

    def is_rational(self) -> bool:
        return self.eps == 0

    def __add__(self, other):
        if not isinstance(other, (EpsNum, Fraction, int)):
            return NotImplemented
        other = EpsNum.lift(other)
        return EpsNum(self.std + other.std, self.eps + other.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (EpsNum, Fraction, int)):
            return NotImplemented
        other = EpsNum.lift(other)
        return EpsNum(self.std - other.std, self.eps - other.eps)

    def __rsub__(self, other):
        return EpsNum.lift(other) - self

    def __neg__(self):
        return EpsNum(-self.std, -self.eps)

    def __mul__(self, r):
        # module action only: eps*eps terms are out of scope
        if isinstance(r, EpsNum):
            if r.eps == 0:
                r = r.std
            elif self.eps == 0:
                return r * self.std
            else:
                raise TypeError("product of two eps-carrying values is not defined")
        if not isinstance(r, (Fraction, int)):
            return NotImplemented
        return EpsNum(self.std * r, self.eps * r)

    __rmul__ = __mul__

    def __truediv__(self, r):
        if not isinstance(r, (Fraction, int)):
            return NotImplemented
        if r == 0:
            raise ZeroDivisionError("EpsNum division by zero")
        return EpsNum(self.std / r, self.eps / r)

    def _key(self):
        return (self.std, self.eps)

    def __eq__(self, other):
        if isinstance(other, (Fraction, int)):
            other = EpsNum.lift(other)
        if not isinstance(other, EpsNum):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        if isinstance(other, (Fraction, int)):
            other = EpsNum.lift(other)
        if not isinstance(other, EpsNum):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        if self.eps == 0:
            return hash(self.std)
        return hash(self._key())

    def sign(self) -> int:
        if self.std != 0:
            return 1 if self.std > 0 else -1
        if self.eps != 0:
            return 1 if self.eps > 0 else -1
        return 0

    def at(self, t: Fraction) -> Fraction:
        """Substitute a concrete positive rational for eps."""
        return self.std + self.eps * t

    def __repr__(self):
        return f"EpsNum({format_rational(self.std)}, {format_rational(self.eps)})"

    def __str__(self):
        if self.eps == 0:
            return format_rational(self.std)
        eps_abs = abs(self.eps)
        eps_term = "eps" if eps_abs == 1 else f"{format_rational(eps_abs)}*eps"
        if self.std == 0:
            return eps_term if self.eps > 0 else f"-{eps_term}"
        op = "+" if self.eps > 0 else "-"
        return f"{format_rational(self.std)} {op} {eps_term}"


ZERO = EpsNum(0, 0)
EPS = EpsNum(0, 1)

_EPS_TERM_RE = re.compile(r"([+-]?)\s*(?:(\d+(?:\s*/\s*\d+)?)\s*\*?\s*)?(eps)?")


def parse_epsnum(text: str) -> EpsNum:
    """Parse ``a + b*eps``; either term may be omitted."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty number")
    std = Fraction(0)
    eps = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _EPS_TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed eps-number: {text!r}")
        sign, coef, is_eps = m.groups()
        if coef is None and is_eps is None:
            raise ValueError(f"malformed eps-number: {text!r}")
        if pos > 0 and not sign:
            raise ValueError(f"missing operator in {text!r}")
        value = parse_rational(coef) if coef is not None else Fraction(1)
        if sign == "-":
            value = -value
        if is_eps:
            eps += value
        else:
            std += value
        pos = m.end()
    return EpsNum(std, eps)


def eps_compare(x: EpsNum, y: EpsNum) -> int:
    """Return -1, 0 or 1 following the lexicographic order."""
    x, y = EpsNum.lift(x), EpsNum.lift(y)
    if x < y:
        return -1
    if x == y:
        return 0
    return 1


Number = Union[Fraction, EpsNum]


@total_ordering
class ExtVal:
    """A finite ordered number or ``+inf`` (``value is None``)."""

    __slots__ = ("value",)

    def __init__(self, value=None):
        if isinstance(value, int):
            value = Fraction(value)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ExtVal is immutable")

    @classmethod
    def finite(cls, value) -> "ExtVal":
        if value is None:
            raise ValueError("finite value required")
        return cls(value)

    @property
    def is_inf(self) -> bool:
        return self.value is None

    def __add__(self, other):
        if isinstance(other, ExtVal):
            if self.is_inf or other.is_inf:
                return POS_INF
            return ExtVal(self.value + other.value)
        if self.is_inf:
            return POS_INF
        return ExtVal(self.value + other)

    __radd__ = __add__

    def scale(self, r: Fraction) -> "ExtVal":
        if r <= 0:
            raise ValueError("only positive scaling preserves +inf")
        if self.is_inf:
            return POS_INF
        return ExtVal(self.value * r)

    def __eq__(self, other):
        if not isinstance(other, ExtVal):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return self.is_inf and other.is_inf
        return self.value == other.value

    def __lt__(self, other):
        if not isinstance(other, ExtVal):
            return NotImplemented
        if self.is_inf:
            return False
        if other.is_inf:
            return True
        return self.value < other.value

    def __hash__(self):
        return hash(("ExtVal", self.value))

    def __repr__(self):
        return "ExtVal(+inf)" if self.is_inf else f"ExtVal({self.value!s})"

    def __str__(self):
        return "+inf" if self.is_inf else str(self.value)


POS_INF = ExtVal(None)


def ext_strict_gt(x: ExtVal, y: ExtVal) -> bool:
    """Strict comparison with the convention ``+inf > +inf``."""
    if x.is_inf:
        return True
    if y.is_inf:
        return False
    return x.value > y.value
