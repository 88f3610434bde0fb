import math
from meshcsg.kernel.sign import Sign
from meshcsg.kernel.eft import two_sum, two_prod

# A round-to-nearest sum or product is within half an ulp of the exact value,
# subnormals included, so one nextafter step outward bounds it. Point
# operands go through the error-free transforms and stay points when exact.
_next = math.nextafter
_INF = math.inf


class Interval:
    """
    Closed interval [lo, hi] of doubles with outward rounding.
    It is the filter in front of every exact predicate: the exact value it
    stands for always lies inside, so a sign read off the interval is certain
    as soon as zero is excluded.

    Attributes:
        lo: float. Lower bound.
        hi: float. Upper bound, lo <= hi.
    """
    __slots__ = ('lo', 'hi')

    def __init__(self, lo: float, hi: float = None):
        if hi is None: hi = lo
        assert lo <= hi, f'Interval: lower bound {lo} is above upper bound {hi}.'
        self.lo = lo
        self.hi = hi


    @classmethod
    def whole(cls) -> 'Interval':
        return cls(-math.inf, math.inf)


    def __add__(self, other: 'Interval') -> 'Interval':
        if not isinstance(other, Interval): other = Interval(float(other))
        if self.lo == self.hi and other.lo == other.hi: return _exact(*two_sum(self.lo, other.lo))
        return _outward(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__


    def __sub__(self, other: 'Interval') -> 'Interval':
        if not isinstance(other, Interval): other = Interval(float(other))
        if self.lo == self.hi and other.lo == other.hi: return _exact(*two_sum(self.lo, -other.lo))
        return _outward(self.lo - other.hi, self.hi - other.lo)


    def __rsub__(self, other) -> 'Interval':
        return Interval(float(other)) - self


    def __neg__(self) -> 'Interval':
        return Interval(-self.hi, -self.lo)


    def __mul__(self, other: 'Interval') -> 'Interval':
        if not isinstance(other, Interval): other = Interval(float(other))
        if not self.is_finite() or not other.is_finite():
            return Interval.whole()

        if self.lo == self.hi and other.lo == other.hi:
            if self.lo == 0.0 or other.lo == 0.0: return Interval(0.0)
            hi, lo = two_prod(self.lo, other.lo)
            if abs(hi) < 2.0 ** -969: return _outward(hi, hi)
            return _exact(hi, lo)
        a, b, c, d = self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi
        return _outward(min(a, b, c, d), max(a, b, c, d))

    __rmul__ = __mul__


    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


    def sign(self) -> Sign | None:
        """
        Certain sign of every value in the interval, or None if zero is an
        interior point or a bound while the other bound is not zero.
        """
        if self.lo > 0.0: return Sign.POSITIVE
        if self.hi < 0.0: return Sign.NEGATIVE
        if self.lo == 0.0 and self.hi == 0.0: return Sign.ZERO
        return None


    def contains(self, value) -> bool:
        """ Value can be a float, an int or a fractions.Fraction. """
        if not self.is_finite():
            return (self.lo == -math.inf or self.lo <= value) and (self.hi == math.inf or value <= self.hi)
        return self.lo <= value <= self.hi


    def width(self) -> float:
        return self.hi - self.lo


    def __repr__(self):
        return f'Interval({self.lo!r}, {self.hi!r})'


def _outward(lo: float, hi: float) -> Interval:
    if lo != lo or hi != hi: return Interval.whole()
    return Interval(_next(lo, -_INF), _next(hi, _INF))


def _exact(hi: float, lo: float) -> Interval:
    """ Interval of hi + lo from an error-free transform. """
    if lo == 0.0 and math.isfinite(hi): return Interval(hi)
    return _outward(hi, hi)
