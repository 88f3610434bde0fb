# =============================================================================
# Floating-point expansions: an exact number is an unevaluated sum of doubles
# whose significant bits do not overlap.
#
# Expansion.components is stored by decreasing magnitude, so the leading
# component carries the sign and approximates the whole value. The summation
# and scaling routines below walk the components by increasing magnitude,
# which is the natural order for zero-eliminating sums, and reverse at the end.
#
# Exactness holds as long as no product underflows or overflows. Both are
# detected and reported as KernelRangeError; the multiprecision kernel has no
# such limitation.
# =============================================================================

import math
from fractions import Fraction
from heapq import merge
from typing import Iterable, Sequence
from meshcsg.errors import KernelRangeError
from meshcsg.kernel.sign import Sign
from meshcsg.kernel.interval import Interval
from meshcsg.kernel.eft import two_sum, two_prod, add_down, add_up
TINY_PRODUCT = 2.0 ** -969


class Expansion:
    """
    Immutable exact number made of non-overlapping doubles.

    Attributes:
        components: tuple[float]. Decreasing magnitude. Zero is (0.0,).
    """
    __slots__ = ('components', '_interval')

    def __init__(self, components: Sequence[float] = (0.0,)):
        components = tuple(components)
        self.components = components if components else (0.0,)
        self._interval = None


    @classmethod
    def from_double(cls, x: float) -> 'Expansion':
        x = float(x)
        if not math.isfinite(x):
            raise KernelRangeError(f'Expansion: Non-finite value {x} cannot be represented.')
        return cls((x,))


    @classmethod
    def from_int(cls, n: int) -> 'Expansion':
        """ Any Python int, split into doubles of 53 bits. """
        sign = -1 if n < 0 else 1
        n = abs(n)
        increasing = []
        shift = 0
        while n:
            chunk = n & ((1 << 53) - 1)
            if chunk: increasing.append(sign * math.ldexp(float(chunk), shift))
            n >>= 53
            shift += 53
        if not increasing: return cls()
        return compress(cls(_checked(increasing[::-1])))


    ##################################################
    # Arithmetic.

    def __add__(self, other):
        return expansion_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return expansion_sub(self, _coerce(other))

    def __rsub__(self, other):
        return expansion_sub(_coerce(other), self)

    def __mul__(self, other):
        return expansion_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Expansion(tuple(-c for c in self.components))


    ##################################################
    # Queries.

    def sign(self) -> Sign:
        return expansion_sign(self)


    def is_zero(self) -> bool:
        return self.components[0] == 0.0


    def interval(self) -> Interval:
        if self._interval is None:
            self._interval = expansion_to_interval(self)
        return self._interval


    def same_as(self, other: 'Expansion') -> bool:
        """ Cheap equality: only single-component, bitwise-equal expansions. """
        return len(self.components) == 1 and len(other.components) == 1 \
            and self.components[0] == other.components[0]


    def to_fraction(self) -> Fraction:
        return sum((Fraction(c) for c in self.components), Fraction(0))


    def __float__(self):
        return math.fsum(self.components)


    def __len__(self):
        return len(self.components)


    def __repr__(self):
        return f'Expansion({list(self.components)})'


def _coerce(value) -> Expansion:
    if isinstance(value, Expansion): return value
    if isinstance(value, int): return Expansion.from_int(value)
    return Expansion.from_double(value)


def _checked(components: Iterable[float]) -> tuple:
    components = tuple(components)
    for c in components:
        if not math.isfinite(c):
            raise KernelRangeError('Expansion: Exponent overflow in exact computation. '
                                   'Please use the mpfloat kernel for this input.')
    return components


def _checked_two_prod(a: float, b: float) -> tuple[float, float]:
    """
    two_prod whose error term is guaranteed exact, KernelRangeError otherwise.
    """
    if a == 0.0 or b == 0.0: return 0.0, 0.0
    hi, lo = two_prod(a, b)
    if hi == 0.0 or abs(hi) < TINY_PRODUCT:
        raise KernelRangeError(f'Expansion: Exponent underflow in product {a!r} * {b!r}. '
                               'Please use the mpfloat kernel for this input.')
    if not math.isfinite(hi) or not math.isfinite(lo):
        raise KernelRangeError(f'Expansion: Exponent overflow in product {a!r} * {b!r}. '
                               'Please use the mpfloat kernel for this input.')
    return hi, lo


##################################################
# Component-level algorithms on increasing-magnitude lists.

def _sum_increasing(first: Iterable[float], second: Iterable[float]) -> list[float]:
    """
    Zero-eliminating sum of two increasing non-overlapping sequences.
    """
    merged = merge(first, second, key=abs)
    result = []
    accumulator = None
    for component in merged:
        if accumulator is None:
            accumulator = component
            continue
        accumulator, tail = two_sum(accumulator, component)
        if tail: result.append(tail)

    if accumulator is None: return [0.0]
    if accumulator or not result: result.append(accumulator)
    return result


def _scale_increasing(components: Sequence[float], scalar: float) -> list[float]:
    """
    Zero-eliminating product of an increasing expansion by one double.
    """
    accumulator, tail = _checked_two_prod(components[0], scalar)
    result = [tail] if tail else []
    for component in components[1:]:
        product, product_tail = _checked_two_prod(component, scalar)
        accumulator, tail = two_sum(accumulator, product_tail)
        if tail: result.append(tail)
        accumulator, tail = two_sum(product, accumulator)
        if tail: result.append(tail)

    if accumulator or not result: result.append(accumulator)
    return result


def _compress_once(components: list[float]) -> list[float]:
    """
    One two-pass sweep over an increasing list: the first pass from the top
    swallows components into a running sum, the second pass from the bottom
    renormalizes what survived.
    """
    m = len(components)
    if m < 2: return list(components)

    buffer = [0.0] * m
    bottom = m - 1
    accumulator = components[-1]
    for index in range(m - 2, -1, -1):
        accumulator, tail = two_sum(accumulator, components[index])
        if tail:
            buffer[bottom] = accumulator
            bottom -= 1
            accumulator = tail
    buffer[bottom] = accumulator

    result = []
    for index in range(bottom + 1, m):
        accumulator, tail = two_sum(buffer[index], accumulator)
        if tail: result.append(tail)
    if accumulator or not result: result.append(accumulator)
    return result


##################################################
# Public operations.

def expansion_add(e1: Expansion, e2: Expansion) -> Expansion:
    if e1.is_zero(): return e2
    if e2.is_zero(): return e1
    result = _sum_increasing(reversed(e1.components), reversed(e2.components))
    return Expansion(_checked(reversed(result)))


def expansion_sub(e1: Expansion, e2: Expansion) -> Expansion:
    return expansion_add(e1, -e2)


def expansion_mul(e1: Expansion, e2: Expansion) -> Expansion:
    if e1.is_zero() or e2.is_zero(): return Expansion()
    if len(e1) < len(e2): e1, e2 = e2, e1

    increasing = e1.components[::-1]
    result = [0.0]
    for scalar in reversed(e2.components):
        result = _sum_increasing(result, _scale_increasing(increasing, scalar))
    return Expansion(_checked(reversed(result)))


def compress(e: Expansion) -> Expansion:
    """
    Same value with as few components as the two-pass sweep can reach.
    The sweep is repeated until the component count stops decreasing,
    which makes compress idempotent.
    """
    increasing = list(reversed(e.components))
    while True:
        compressed = _compress_once(increasing)
        if len(compressed) >= len(increasing):
            break
        increasing = compressed
    if len(increasing) == len(e.components): return e
    return Expansion(reversed(increasing))


def expansion_sign(e: Expansion) -> Sign:
    return Sign.of(e.components[0])


def expansion_to_interval(e: Expansion) -> Interval:
    """
    Accumulate components from the largest with directed rounding and stop
    when the next one is below one ulp of the current bounds. The rest of
    the expansion is bounded by the sum of absolute values of what is left.
    """
    components = e.components
    lo = hi = components[0]
    for index in range(1, len(components)):
        component = components[index]
        if abs(component) < math.ulp(max(abs(lo), abs(hi))):
            remaining = math.fsum(abs(c) for c in components[index:])
            remaining = math.nextafter(remaining, math.inf)
            lo = add_down(lo, -remaining)
            hi = add_up(hi, remaining)
            break
        lo = add_down(lo, component)
        hi = add_up(hi, component)
    return Interval(lo, hi)
