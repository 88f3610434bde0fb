# =============================================================================
# Error-free transformations on IEEE-754 doubles.
#
# Python floats are binary64 with round-to-nearest-even, which is all these
# functions need. two_prod uses math.fma when the interpreter provides it
# (Python >= 3.13) and Dekker's splitting otherwise.
#
# Nothing in here checks for overflow or underflow. Callers that need exact
# results (the expansion kernel) validate what comes out.
# =============================================================================

import math

_FMA = getattr(math, 'fma', None)
SPLITTER = 134217729.0  # 2**27 + 1
INF = math.inf


def two_sum(a: float, b: float) -> tuple[float, float]:
    """
    Return (hi, lo) with hi = fl(a + b) and hi + lo = a + b exactly.
    """
    hi = a + b
    b_virtual = hi - a
    a_virtual = hi - b_virtual
    lo = (a - a_virtual) + (b - b_virtual)
    return hi, lo


def fast_two_sum(a: float, b: float) -> tuple[float, float]:
    """
    Same as two_sum, valid only when |a| >= |b|.
    """
    hi = a + b
    lo = b - (hi - a)
    return hi, lo


def split(a: float) -> tuple[float, float]:
    """
    Dekker's split of a into two non-overlapping 26-bit halves (high, low).
    """
    c = SPLITTER * a
    high = c - (c - a)
    return high, a - high


def two_prod(a: float, b: float) -> tuple[float, float]:
    """
    Return (hi, lo) with hi = fl(a * b) and hi + lo = a * b exactly,
    as long as no overflow or underflow happens.
    """
    hi = a * b
    if _FMA is not None:
        return hi, _FMA(a, b, -hi)

    a_high, a_low = split(a)
    b_high, b_low = split(b)
    err = hi - a_high * b_high
    err -= a_low * b_high
    err -= a_high * b_low
    return hi, a_low * b_low - err


##################################################
# Directed rounding built on top of the transforms above.

def add_down(a: float, b: float) -> float:
    hi, lo = two_sum(a, b)
    if not math.isfinite(hi): return -INF if hi != INF else math.nextafter(INF, 0.0)
    return math.nextafter(hi, -INF) if lo < 0.0 else hi


def add_up(a: float, b: float) -> float:
    hi, lo = two_sum(a, b)
    if not math.isfinite(hi): return INF if hi != -INF else math.nextafter(-INF, 0.0)
    return math.nextafter(hi, INF) if lo > 0.0 else hi

