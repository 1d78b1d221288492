import mpmath
import pytest

from fairbits.dyadic import Dyadic, DyadicInterval

mpmath.mp.prec = 300


def mpf(x):
    """Exact mpmath value of a Dyadic (or fraction-like)."""
    if isinstance(x, Dyadic):
        return mpmath.ldexp(mpmath.mpf(x.mantissa), x.exponent)
    q = x
    return mpmath.mpf(q.numerator) / q.denominator


def encloses(iv: DyadicInterval, value) -> bool:
    return mpf(iv.lo) <= value <= mpf(iv.hi)


@pytest.fixture
def mp():
    return mpmath
