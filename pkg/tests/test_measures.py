import io
import random
from fractions import Fraction

import mpmath
import pytest
from scipy import stats

from fairbits.bitsource import BitStream, rho_b_enclosure
from fairbits.dyadic import Dyadic, DyadicInterval, Ordering, compare_strict
from fairbits.measures import (
    LazySample,
    PrecisionExhausted,
    ValidationError,
    cdf_from_table,
    dump_table_csv,
    gaussian_cdf_enclosure,
    load_table_csv,
    make_cantor,
    make_dirac,
    make_gaussian,
    make_uniform,
    sample_real,
)

from conftest import encloses, mpf

BUILTINS = {"uniform": make_uniform, "gaussian": make_gaussian, "cantor": make_cantor}


def point(q):
    return DyadicInterval.point(Dyadic.coerce(q))


def mids(xs):
    return [float(x.midpoint) for x in xs]


def test_uniform_is_the_binary_expansion():
    s = BitStream(4)
    r = sample_real(make_uniform(), s, 12)
    w = BitStream(4).take(r.bits_used)
    assert r.value.contains(rho_b_enclosure(w)) or rho_b_enclosure(w).contains(r.value)
    assert r.value.width <= Dyadic(1, -12)
    assert r.bits_used <= 12 + 2


def test_dirac_one_third():
    mu = make_dirac(Fraction(1, 3))
    for seed in range(20):
        for n in (0, 5, 40):
            r = sample_real(mu, BitStream(seed), n)
            assert encloses(r.value, mpmath.mpf(1) / 3)
            assert r.value.width <= Dyadic(1, -n)


def test_dirac_accepts_enclosure_function():
    from fairbits.dyadic import sqrt_enclosure
    mu = make_dirac(lambda n: sqrt_enclosure(point(2), n))
    r = sample_real(mu, BitStream(0), 30)
    assert encloses(r.value, mpmath.sqrt(2))


def test_gaussian_cdf_against_mpmath():
    rng = random.Random(1)
    for _ in range(300):
        x = Dyadic.coerce(round(rng.uniform(-9, 9), 6))
        n = rng.choice([8, 20, 40, 80])
        r = gaussian_cdf_enclosure(x, n)
        assert encloses(r, mpmath.ncdf(mpf(x)))
        assert r.width <= Dyadic(1, -n)


def test_gaussian_examples():
    g = make_gaussian()
    assert g.eval_lower(point(Fraction(1, 2)), 20).contains(Dyadic(0))
    t = Dyadic.coerce(0.975)
    r = g.eval_lower(point(t), 20)
    assert encloses(r, mpmath.sqrt(2) * mpmath.erfinv(2 * mpf(t) - 1))
    assert encloses(r, mpmath.mpf("1.959963984540054") + (mpf(t) - mpmath.mpf(0.975)) * 17)
    assert r.width <= Dyadic(1, -20)


def test_gaussian_extreme_quantiles():
    g = make_gaussian()
    for t in (Dyadic(1, -60), Dyadic((1 << 60) - 1, -60), Dyadic(1, -1000)):
        r = g.eval_lower(point(t), 10)
        assert mpmath.ncdf(mpf(r.lo)) <= mpf(t) <= mpmath.ncdf(mpf(r.hi))
        assert r.width <= Dyadic(1, -10)


def test_cantor_examples():
    c = make_cantor()
    half = point(Fraction(1, 2))
    assert c.eval_lower(half, 30).contains(Dyadic.coerce(0)) is False
    assert encloses(c.eval_lower(half, 30), mpmath.mpf(1) / 3)
    assert encloses(c.eval_upper(half, 30), mpmath.mpf(2) / 3)
    # binary digits b become ternary digits 2b
    t = point(Fraction(5, 16))            # 0.0101 -> 0.0202 (ternary), flat part
    assert encloses(c.eval_lower(t, 40), mpmath.mpf(0 * 27 + 2 * 9 + 0 * 3 + 1) / 81)
    assert encloses(c.eval_upper(t, 40), mpmath.mpf(2 * 9 + 0 * 3 + 2) / 81)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_semi_inverse_order_and_monotone(name):
    mu = BUILTINS[name]()
    prev_lo = prev_hi = None
    for k in range(1, 256):
        t = point(Dyadic(k, -8))
        lo, hi = mu.eval_lower(t, 16), mu.eval_upper(t, 16)
        assert compare_strict(lo, hi) is not Ordering.GT
        if prev_lo is not None:
            assert compare_strict(prev_lo, lo) is not Ordering.GT
            assert compare_strict(prev_hi, hi) is not Ordering.GT
        prev_lo, prev_hi = lo, hi


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_pushforward_ks(name):
    mu = BUILTINS[name]()
    s = BitStream(100)
    xs = mids(sample_real(mu, s.spawn(), 16).value for _ in range(3000))
    assert stats.kstest(xs, lambda x: [mu.cdf(v) for v in x]).pvalue > 0.001


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_bits_used_is_frugal(name):
    mu = BUILTINS[name]()
    s = BitStream(7)
    for n in (4, 16, 32):
        for _ in range(100):
            r = sample_real(mu, s.spawn(), n)
            assert r.value.width <= Dyadic(1, -n)
            assert r.bits_used <= 4 * n + 64


def test_lazy_sample_refines_consistently():
    z = LazySample(make_gaussian(), BitStream(3))
    coarse = z.enclosure(4)
    fine = z.enclosure(40)
    assert coarse.contains(fine)
    assert z.enclosure(10).contains(fine)


def test_precision_exhausted_on_flat_part():
    # the Cantor staircase is flat on [1/3, 2/3]; t = 1/2 exactly never shrinks
    with pytest.raises(PrecisionExhausted):
        sample_real(make_cantor(), BitStream.periodic("0", prefix="1"), 8, cap=64)


def test_negative_precision():
    with pytest.raises(ValueError):
        sample_real(make_uniform(), BitStream(0), -1)


# -- tables -----------------------------------------------------------------

def test_table_uniform():
    mu = cdf_from_table([(0, 0), (1, 1)])
    for k in range(1, 16):
        t = point(Fraction(k, 16))
        assert mu.eval_lower(t, 20).contains(Dyadic(k, -4))


def test_table_interpolation_example():
    mu = cdf_from_table([(0, 0), (1, Fraction(1, 2)), (2, 1)])
    assert mu.eval_lower(point(Fraction(3, 4)), 20).contains(Dyadic(3, -1))


def test_table_jump_and_flat():
    with pytest.raises(ValidationError):
        cdf_from_table([(5, 0), (5, 1)])
    delta = Dyadic(1, -10)
    mu = cdf_from_table([(Dyadic(5) - delta, 0), (5, 1)])
    assert compare_strict(mu.eval_lower(point(Fraction(1, 2)), 30), point(5)) is Ordering.LT
    flat = cdf_from_table([(0, 0), (1, Fraction(1, 2)), (3, Fraction(1, 2)), (4, 1)])
    half = point(Fraction(1, 2))
    assert flat.eval_lower(half, 20).contains(Dyadic(1))
    assert flat.eval_upper(half, 20).contains(Dyadic(3))


@pytest.mark.parametrize("rows, msg", [
    ([(0, 0), (0, 1)], "strictly"),
    ([(0, Fraction(1, 2)), (1, Fraction(1, 4)), (2, 1)], "decreases"),
    ([(0, 0), (1, Fraction(3, 4))], "last F"),
    ([(0, -1), (1, 1)], "outside"),
    ([("0.1", 0), (1, 1)], "row 0"),
    ([], "empty"),
])
def test_table_validation(rows, msg):
    with pytest.raises(ValidationError, match=msg):
        cdf_from_table(rows)


def test_table_csv_round_trip():
    mu = cdf_from_table([(1, Fraction(1, 3)), (Dyadic(3, -1), Fraction(1, 2)), (4, 1)],
                        metadata={"source": "test"})
    text = dump_table_csv(mu)
    back = load_table_csv(io.StringIO(text))
    assert back.xs == mu.xs and back.fs == mu.fs
    assert back.metadata == {"source": "test"}
    with pytest.raises(ValidationError):
        load_table_csv(io.StringIO("a,b\n0,0\n1,1\n"))


def test_table_sampling_ks():
    mu = cdf_from_table([(0, 0), (1, Fraction(1, 4)), (2, Fraction(3, 4)), (4, 1)])
    s = BitStream(31)
    xs = mids(sample_real(mu, s.spawn(), 16).value for _ in range(3000))
    assert stats.kstest(xs, lambda x: [mu.cdf(v) for v in x]).pvalue > 0.001
