# =============================================================================
# Multiprecision floats: value = mantissa * 2**exponent with a Python int
# mantissa. The representation is unique: the mantissa is odd (no trailing
# zero bit) except for zero, which is (0, 0).
#
# Python ints give us the arbitrary-precision mantissa for free; the only
# range limit left is the 32-bit exponent, checked after every operation.
# =============================================================================

import math
from fractions import Fraction
from meshcsg.errors import KernelRangeError
from meshcsg.kernel.sign import Sign
from meshcsg.kernel.interval import Interval
EXPONENT_MIN = -2 ** 31
EXPONENT_MAX = 2 ** 31 - 1


def _normalize(mantissa: int, exponent: int) -> tuple[int, int]:
    if mantissa == 0: return 0, 0
    trailing = (mantissa & -mantissa).bit_length() - 1
    if trailing:
        mantissa >>= trailing
        exponent += trailing
    if exponent < EXPONENT_MIN or exponent > EXPONENT_MAX:
        raise KernelRangeError(f'BigFloat: Exponent {exponent} is outside the 32-bit range.')
    return mantissa, exponent


class BigFloat:
    """
    Immutable exact binary number with an arbitrary-precision mantissa.

    Attributes:
        mantissa: int. Odd, or 0 for zero.
        exponent: int. Within the signed 32-bit range, 0 for zero.
    """
    __slots__ = ('mantissa', 'exponent', '_interval')

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        self.mantissa, self.exponent = _normalize(int(mantissa), int(exponent))
        self._interval = None


    @classmethod
    def from_double(cls, x: float) -> 'BigFloat':
        x = float(x)
        if not math.isfinite(x):
            raise KernelRangeError(f'BigFloat: Non-finite value {x} cannot be represented.')
        numerator, denominator = x.as_integer_ratio()
        return cls(numerator, 1 - denominator.bit_length())


    @classmethod
    def from_int(cls, n: int) -> 'BigFloat':
        return cls(n, 0)


    def __add__(self, other):
        return bigfloat_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return bigfloat_sub(self, _coerce(other))

    def __rsub__(self, other):
        return bigfloat_sub(_coerce(other), self)

    def __mul__(self, other):
        return bigfloat_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return BigFloat(-self.mantissa, self.exponent)


    def sign(self) -> Sign:
        return Sign.of(self.mantissa)


    def is_zero(self) -> bool:
        return self.mantissa == 0


    def interval(self) -> Interval:
        if self._interval is None:
            self._interval = bigfloat_to_interval(self)
        return self._interval


    def same_as(self, other: 'BigFloat') -> bool:
        return self.mantissa == other.mantissa and self.exponent == other.exponent


    def to_fraction(self) -> Fraction:
        if self.exponent >= 0: return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)


    def __float__(self):
        interval = self.interval()
        return interval.lo if interval.lo == interval.hi else float(self.to_fraction())


    def __eq__(self, other):
        return isinstance(other, BigFloat) and self.same_as(other)


    def __hash__(self):
        return hash((self.mantissa, self.exponent))


    def __repr__(self):
        return f'BigFloat({self.mantissa}, {self.exponent})'


def _coerce(value) -> BigFloat:
    if isinstance(value, BigFloat): return value
    if isinstance(value, int): return BigFloat.from_int(value)
    return BigFloat.from_double(value)


def _aligned(a: BigFloat, b: BigFloat) -> tuple[int, int, int]:
    exponent = min(a.exponent, b.exponent)
    return a.mantissa << (a.exponent - exponent), b.mantissa << (b.exponent - exponent), exponent


def bigfloat_add(a: BigFloat, b: BigFloat) -> BigFloat:
    if a.mantissa == 0: return b
    if b.mantissa == 0: return a
    ma, mb, exponent = _aligned(a, b)
    return BigFloat(ma + mb, exponent)


def bigfloat_sub(a: BigFloat, b: BigFloat) -> BigFloat:
    if b.mantissa == 0: return a
    ma, mb, exponent = _aligned(a, b)
    return BigFloat(ma - mb, exponent)


def bigfloat_mul(a: BigFloat, b: BigFloat) -> BigFloat:
    if a.mantissa == 0 or b.mantissa == 0: return BigFloat()
    return BigFloat(a.mantissa * b.mantissa, a.exponent + b.exponent)


def bigfloat_compare(a: BigFloat, b: BigFloat) -> Sign:
    """
    Sign of a - b. Signs first, then equality of the unique representation,
    then the position of the leading bit, and only then aligned mantissas.
    """
    sign_a, sign_b = Sign.of(a.mantissa), Sign.of(b.mantissa)
    if sign_a != sign_b: return Sign.of(sign_a - sign_b)
    if sign_a == Sign.ZERO: return Sign.ZERO
    if a.exponent == b.exponent and a.mantissa == b.mantissa: return Sign.ZERO

    top_a = a.exponent + abs(a.mantissa).bit_length()
    top_b = b.exponent + abs(b.mantissa).bit_length()
    if top_a != top_b:
        return Sign.of(top_a - top_b) * sign_a

    ma, mb, _ = _aligned(a, b)
    return Sign.of(ma - mb)


def bigfloat_to_interval(x: BigFloat) -> Interval:
    """
    Nearest-below double on both bounds, then one bound moved by 1 ulp away
    from zero when the truncation dropped bits. Magnitudes above the double
    range give an infinite bound.
    """
    if x.mantissa == 0: return Interval(0.0, 0.0)

    magnitude = abs(x.mantissa)
    extra = magnitude.bit_length() - 53
    exponent = x.exponent
    inexact = False
    if extra > 0:
        inexact = (magnitude & ((1 << extra) - 1)) != 0
        magnitude >>= extra
        exponent += extra

    try:
        truncated = math.ldexp(float(magnitude), exponent)
    except OverflowError:
        truncated = math.inf

    if truncated == math.inf:
        lo, hi = math.nextafter(math.inf, 0.0), math.inf
    elif math.ldexp(truncated, -exponent) != magnitude:
        # subnormal range: ldexp rounded, widen on both sides
        lo, hi = math.nextafter(truncated, 0.0), math.nextafter(truncated, math.inf)
    elif inexact:
        lo, hi = truncated, math.nextafter(truncated, math.inf)
    else:
        lo = hi = truncated

    if x.mantissa < 0: lo, hi = -hi, -lo
    return Interval(lo, hi)
