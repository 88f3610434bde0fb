import math
from fractions import Fraction
import pytest
from meshcsg.errors import KernelRangeError, InvalidInput
from meshcsg.kernel import Sign, Interval, two_sum, two_prod, Expansion, compress, BigFloat, \
    bigfloat_compare, get_kernel, KERNELS


VALUES = [0.0, 1.0, -1.0, 0.1, -0.3, 1e16, 3.0e-8, -7.25, 2.0 ** 52 + 1, 1e-300, 123456.789]


def random_chain(rng, kernel, steps=12):
    """ Random +, -, * chain on doubles, evaluated in the kernel and with Fractions. """
    value = kernel.number(rng.uniform(-10, 10))
    oracle = value.to_fraction()
    for _ in range(steps):
        x = rng.choice([rng.uniform(-1e3, 1e3), rng.uniform(-1, 1) * 1e-5, float(rng.randint(-9, 9))])
        operation = rng.choice('+-*')
        if operation == '+':
            value, oracle = value + kernel.number(x), oracle + Fraction(x)
        elif operation == '-':
            value, oracle = value - kernel.number(x), oracle - Fraction(x)
        elif abs(oracle) < 1e20:
            value, oracle = value * kernel.number(x), oracle * Fraction(x)
    return value, oracle


def test_two_sum_and_two_prod_are_exact():
    for a in VALUES:
        for b in VALUES:
            s, e = two_sum(a, b)
            assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)
            if a == 0.0 or b == 0.0 or abs(a * b) < 1e-290: continue
            p, e = two_prod(a, b)
            assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_sign_algebra():
    assert Sign.POSITIVE * Sign.NEGATIVE == Sign.NEGATIVE
    assert -Sign.NEGATIVE == Sign.POSITIVE
    assert Sign.ZERO * Sign.POSITIVE == Sign.ZERO
    assert Sign.of(Fraction(-1, 3)) == Sign.NEGATIVE


def test_interval_contains_exact_result():
    a, b = Interval(0.1), Interval(0.2)
    assert (a + b).contains(Fraction(0.1) + Fraction(0.2))
    assert (a * b).contains(Fraction(0.1) * Fraction(0.2))
    assert (a - b).sign() == Sign.NEGATIVE
    assert Interval(-1.0, 1.0).sign() is None
    assert Interval(0.0, 0.0).sign() == Sign.ZERO


def test_interval_chains_contain_the_exact_value(rng):
    for _ in range(1000):
        x = rng.uniform(-10, 10)
        interval, oracle = Interval(x), Fraction(x)
        for _ in range(rng.randint(1, 16)):
            y = rng.choice([rng.uniform(-1e3, 1e3), rng.uniform(-1, 1) * 1e-5, 1e-300, float(rng.randint(-9, 9))])
            operation = rng.choice('+-*')
            if operation == '+': interval, oracle = interval + Interval(y), oracle + Fraction(y)
            elif operation == '-': interval, oracle = interval - Interval(y), oracle - Fraction(y)
            elif abs(oracle) < 1e20: interval, oracle = interval * Interval(y), oracle * Fraction(y)
            assert interval.contains(oracle)


def test_exact_interval_operations_stay_points():
    assert (Interval(3.0) * Interval(0.5)).width() == 0.0
    assert (Interval(0.1) - Interval(0.1)).sign() == Sign.ZERO
    assert (Interval(1e-200) * Interval(0.0)).sign() == Sign.ZERO
    underflow = Interval(1e-200) * Interval(1e-200)
    assert underflow.sign() is None and underflow.contains(Fraction(1e-200) ** 2)
    assert (Interval(0.1) * Interval(0.2)).width() > 0.0


def test_random_chains_match_fractions(kernel_name, rng):
    kernel = get_kernel(kernel_name)
    for _ in range(1000):
        value, oracle = random_chain(rng, kernel, steps=rng.randint(1, 24))
        assert value.to_fraction() == oracle
        assert value.sign() == Sign.of(oracle)
        assert value.interval().contains(oracle)


def test_cancellation_gives_exact_zero(kernel_name):
    kernel = get_kernel(kernel_name)
    a, b = kernel.number(0.1), kernel.number(0.2)
    total = a + b - kernel.number(0.3)
    assert total.sign() == Sign.POSITIVE  # 0.1 + 0.2 > 0.3 in doubles
    assert (a * b - b * a).is_zero()
    assert (a + b - b - a).sign() == Sign.ZERO


def test_expansion_components_are_decreasing():
    e = Expansion.from_double(1e16) + Expansion.from_double(1.0) + Expansion.from_double(1e-16)
    magnitudes = [abs(c) for c in e.components]
    assert magnitudes == sorted(magnitudes, reverse=True)
    assert e.to_fraction() == Fraction(1e16) + 1 + Fraction(1e-16)


def test_compress_is_idempotent(rng):
    kernel = get_kernel('expansion')
    for _ in range(20):
        value, _ = random_chain(rng, kernel)
        once = compress(value)
        twice = compress(once)
        assert once.to_fraction() == value.to_fraction()
        assert twice.components == once.components
        assert len(once) <= len(value)


def test_expansion_from_large_int():
    n = 3 ** 100
    assert Expansion.from_int(n).to_fraction() == n
    assert Expansion.from_int(-n).to_fraction() == -n


def test_expansion_underflow_raises():
    tiny = Expansion.from_double(1e-200)
    with pytest.raises(KernelRangeError):
        tiny * tiny


def test_expansion_overflow_raises():
    huge = Expansion.from_double(1e200)
    with pytest.raises(KernelRangeError):
        huge * huge


def test_non_finite_input_raises():
    with pytest.raises(KernelRangeError):
        Expansion.from_double(math.inf)
    with pytest.raises(KernelRangeError):
        BigFloat.from_double(math.nan)


def test_bigfloat_handles_tiny_products():
    tiny = BigFloat.from_double(1e-200)
    product = tiny * tiny
    assert product.to_fraction() == Fraction(1e-200) ** 2
    assert product.sign() == Sign.POSITIVE
    assert product.interval().lo == 0.0 and product.interval().hi > 0.0


def test_bigfloat_representation_is_unique():
    a = BigFloat(12, 0)
    assert (a.mantissa, a.exponent) == (3, 2)
    assert BigFloat.from_double(0.75) == BigFloat(3, -2)
    assert BigFloat.from_int(6) - BigFloat.from_double(6.0) == BigFloat()
    assert hash(BigFloat(8, 0)) == hash(BigFloat(1, 3))


def test_bigfloat_compare():
    values = [BigFloat.from_double(x) for x in (-3.5, -1e-9, 0.0, 1e-9, 2.0, 2.5, 1e30)]
    for i, a in enumerate(values):
        for j, b in enumerate(values):
            assert bigfloat_compare(a, b) == Sign.of(i - j)


def test_bigfloat_interval_is_tight_for_doubles():
    for x in VALUES:
        interval = BigFloat.from_double(x).interval()
        assert interval.lo == interval.hi == x


def test_mpfloat_normalize_is_unique():
    kernel = get_kernel('mpfloat')
    a = kernel.normalize(tuple(BigFloat.from_double(x) for x in (0.5, 1.0, -1.5, 2.0)))
    b = kernel.normalize(tuple(BigFloat.from_double(x) for x in (-1.0, -2.0, 3.0, -4.0)))
    assert a == b
    assert [c.to_fraction() for c in a] == [1, 2, -3, 4]


def test_get_kernel():
    assert set(KERNELS) == {'expansion', 'mpfloat'}
    assert get_kernel(KERNELS['mpfloat']) is KERNELS['mpfloat']
    with pytest.raises(InvalidInput):
        get_kernel('gmp')
