"""Arbitrary-precision real scalars with an explicit precision tag.

``PrecReal`` wraps an ``mpmath.mpf`` together with the number of mantissa
bits it was produced at.  Arithmetic between two tagged values is carried
out at the larger of the two precisions, so precision never silently
degrades when operands of different accuracy meet.  Conversion from an
exact rational rounds once, to nearest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mpf, workprec
from mpmath.libmp import from_rational, round_nearest

from .errors import DomainError

DEFAULT_PRECISION = 128

Realish = Union["PrecReal", int, float, str, Fraction, mpf]


def mpf_from_rational(value: Fraction, precision: int) -> mpf:
    """Round an exact rational to ``precision`` bits, to nearest, in one step."""
    raw = from_rational(value.numerator, value.denominator, precision, round_nearest)
    return mpf(raw)


def to_mpf(x: Realish, precision: int = DEFAULT_PRECISION) -> mpf:
    """Coerce a scalar to ``mpf`` at the given working precision.

    Integers, mpf values and decimal strings convert with a single
    rounding; ``Fraction`` goes through :func:`mpf_from_rational`.
    """
    if isinstance(x, PrecReal):
        return x.value
    if isinstance(x, mpf):
        return x
    if isinstance(x, Fraction):
        return mpf_from_rational(x, precision)
    with workprec(precision):
        return mpf(x)


@dataclass(frozen=True)
class PrecReal:
    """A real number together with the mantissa precision (bits) it carries."""

    value: mpf
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.precision < 1:
            raise DomainError("precision must be a positive number of bits")
        v = self.value
        if not isinstance(v, mpf):
            v = to_mpf(v, self.precision)
        # normalize to the declared precision regardless of ambient context
        with workprec(self.precision):
            object.__setattr__(self, "value", +v)

    @classmethod
    def from_rational(cls, value: Fraction, precision: int = DEFAULT_PRECISION) -> "PrecReal":
        return cls(mpf_from_rational(Fraction(value), precision), precision)

    # -- arithmetic at the max of the operand precisions -----------------

    def _coerce(self, other: Realish) -> "PrecReal":
        if isinstance(other, PrecReal):
            return other
        prec = self.precision
        if isinstance(other, Fraction):
            return PrecReal.from_rational(other, prec)
        return PrecReal(to_mpf(other, prec), prec)

    def _binary(self, other: Realish, op) -> "PrecReal":
        other = self._coerce(other)
        prec = max(self.precision, other.precision)
        with workprec(prec):
            return PrecReal(op(self.value, other.value), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __pow__(self, other):
        return self._binary(other, lambda a, b: a ** b)

    def __neg__(self):
        return PrecReal(-self.value, self.precision)

    def __abs__(self):
        return PrecReal(abs(self.value), self.precision)

    # -- comparisons are exact on the stored values ----------------------

    def _cmp_value(self, other) -> mpf:
        return other.value if isinstance(other, PrecReal) else to_mpf(other, self.precision)

    def __eq__(self, other):
        return self.value == self._cmp_value(other)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"PrecReal({mpmath.nstr(self.value, 20)}, precision={self.precision})"

    def str_digits(self, significant: int = 30) -> str:
        """Decimal string with the requested number of significant digits."""
        return mpmath.nstr(self.value, significant, strip_zeros=False)
