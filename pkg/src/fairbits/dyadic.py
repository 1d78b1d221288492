"""Exact dyadic rationals and outward-rounded interval arithmetic.

A :class:`Dyadic` is ``mantissa * 2**exponent`` with an arbitrary-precision
integer mantissa.  Dyadics are closed under ``+``, ``-`` and ``*``, so interval
arithmetic on :class:`DyadicInterval` is exact for those operations.  Square
roots, logarithms, exponentials, division and ``sin(pi x)`` are evaluated in
fixed point on Python integers with explicit truncation bounds and returned as
outward-rounded enclosures.

Comparisons between enclosures are only semi-decidable; :func:`compare_strict`
reports ``OVERLAP`` when it cannot separate its arguments and leaves the
refine-and-retry loop to the caller (see :func:`precision_ladder`).
"""

from __future__ import annotations

import enum
import functools
import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterator, Tuple, Union

__all__ = [
    "Dyadic",
    "DyadicInterval",
    "Ordering",
    "DomainError",
    "UndecidedComparison",
    "DEFAULT_PRECISION_CAP",
    "add",
    "sub",
    "mul",
    "neg",
    "absolute",
    "hull",
    "compare_strict",
    "precision_ladder",
    "decide",
    "enclose",
    "sqrt_enclosure",
    "ln_enclosure",
    "exp_enclosure",
    "div_enclosure",
    "pi_enclosure",
    "sin_pi_enclosure",
]

DEFAULT_PRECISION_CAP = 256


class DomainError(ValueError):
    """Argument outside the domain of a real function."""


class UndecidedComparison(ArithmeticError):
    """A strict comparison stayed unresolved up to the precision cap."""


def _trailing_zeros(m: int) -> int:
    return (m & -m).bit_length() - 1


class Dyadic:
    """The exact rational ``mantissa * 2**exponent``.

    Instances are normalised so that the mantissa is odd, or zero with
    exponent 0; equal values therefore have equal fields.

    >>> Dyadic(12, -4)
    Dyadic(3, -2)
    >>> Dyadic(1, -1) + Dyadic(1, -2)
    Dyadic(3, -2)
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        if mantissa == 0:
            exponent = 0
        else:
            tz = _trailing_zeros(mantissa)
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    def __reduce__(self):
        return (Dyadic, (self.mantissa, self.exponent))

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, x: "DyadicLike") -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, Rational):
            return cls.from_fraction(Fraction(x))
        if isinstance(x, float):
            n, d = x.as_integer_ratio()
            return cls(n, -(d.bit_length() - 1))
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Dyadic")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        q = Fraction(q)
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(d.bit_length() - 1))

    _MANTISSA_EXP = re.compile(r"^\s*([+-]?\d+)\s*\*\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?\s*$")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"m*2^e"``, ``"p/q"`` with ``q`` a power of two, or a decimal.

        Decimal strings must denote dyadic values exactly (``"0.375"`` is
        accepted, ``"0.1"`` is not).
        """
        m = cls._MANTISSA_EXP.match(text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        return cls.from_fraction(Fraction(text.strip()))

    # -- conversion -------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, self.exponent) if abs(self.mantissa) < (1 << 1000) \
            else float(self.to_fraction())

    def scaled_floor(self, bits: int) -> int:
        """``floor(self * 2**bits)``."""
        s = self.exponent + bits
        return self.mantissa << s if s >= 0 else self.mantissa >> -s

    def scaled_ceil(self, bits: int) -> int:
        s = self.exponent + bits
        return self.mantissa << s if s >= 0 else -((-self.mantissa) >> -s)

    def shift(self, k: int) -> "Dyadic":
        """``self * 2**k``."""
        return Dyadic(self.mantissa, self.exponent + k)

    def __str__(self) -> str:
        return f"{self.mantissa}*2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def to_json(self) -> dict:
        return {"mantissa": self.mantissa, "exponent": self.exponent}

    @classmethod
    def from_json(cls, obj: dict) -> "Dyadic":
        return cls(int(obj["mantissa"]), int(obj["exponent"]))

    def to_decimal(self, digits: int = 20) -> str:
        with localcontext() as ctx:
            ctx.prec = digits
            if self.exponent >= 0:
                return str(+Decimal(self.mantissa << self.exponent))
            return str(Decimal(self.mantissa) / Decimal(1 << -self.exponent))

    # -- arithmetic -------------------------------------------------------

    def _align(self, other: "Dyadic") -> Tuple[int, int, int]:
        e = min(self.exponent, other.exponent)
        return (self.mantissa << (self.exponent - e),
                other.mantissa << (other.exponent - e), e)

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.mantissa >= 0 else Dyadic(-self.mantissa, self.exponent)

    def __bool__(self):
        return self.mantissa != 0

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    # -- comparison -------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            a, b, _ = self._align(other)
            return (a > b) - (a < b)
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            lhs = self.mantissa * q.denominator
            rhs = q.numerator
            if self.exponent >= 0:
                lhs <<= self.exponent
            else:
                rhs <<= -self.exponent
            return (lhs > rhs) - (lhs < rhs)
        if isinstance(other, float):
            return self._cmp(Dyadic.coerce(other))
        raise TypeError

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction()) if self.exponent < 0 else hash(self.mantissa << self.exponent)


DyadicLike = Union[Dyadic, int, Fraction, str]

ZERO = Dyadic(0)
ONE = Dyadic(1)


class Ordering(enum.Enum):
    LT = "LT"
    GT = "GT"
    OVERLAP = "OVERLAP"


class DyadicInterval:
    """Closed interval ``[lo, hi]`` with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: DyadicLike, hi: DyadicLike | None = None):
        lo = Dyadic.coerce(lo)
        hi = lo if hi is None else Dyadic.coerce(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicInterval is immutable")

    def __reduce__(self):
        return (DyadicInterval, (self.lo, self.hi))

    @classmethod
    def point(cls, x: DyadicLike) -> "DyadicInterval":
        return cls(x, x)

    @classmethod
    def from_scaled(cls, lo: int, hi: int, bits: int) -> "DyadicInterval":
        """The interval ``[lo, hi] * 2**-bits``."""
        return cls(Dyadic(lo, -bits), Dyadic(hi, -bits))

    def scaled(self, bits: int) -> Tuple[int, int]:
        """Outward-rounded integer endpoints at scale ``2**-bits``."""
        return self.lo.scaled_floor(bits), self.hi.scaled_ceil(bits)

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).shift(-1)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, DyadicInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def intersect(self, other: "DyadicInterval") -> "DyadicInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if hi < lo:
            raise ValueError("intervals are disjoint")
        return DyadicInterval(lo, hi)

    def __add__(self, other):
        other = _as_interval(other)
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_interval(other)
        return DyadicInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        if self.lo.mantissa >= 0 and other.lo.mantissa >= 0:
            return DyadicInterval(self.lo * other.lo, self.hi * other.hi)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return DyadicInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo)

    def __abs__(self):
        if self.lo.mantissa >= 0:
            return self
        if self.hi.mantissa <= 0:
            return -self
        return DyadicInterval(ZERO, max(-self.lo, self.hi))

    def shift(self, k: int) -> "DyadicInterval":
        return DyadicInterval(self.lo.shift(k), self.hi.shift(k))

    def __eq__(self, other):
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"DyadicInterval({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"

    def to_decimal(self, digits: int = 17) -> str:
        """Midpoint with an explicit half-width, e.g. ``"0.5 ± 0.0009765625"``."""
        rad = self.width.shift(-1)
        return f"{self.midpoint.to_decimal(digits)} ± {rad.to_decimal(4)}"

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "DyadicInterval":
        return cls(Dyadic.from_json(obj["lo"]), Dyadic.from_json(obj["hi"]))


def _as_interval(x) -> DyadicInterval:
    if isinstance(x, DyadicInterval):
        return x
    return DyadicInterval.point(Dyadic.coerce(x))


def add(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a + b


def sub(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a - b


def mul(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a * b


def neg(a: DyadicInterval) -> DyadicInterval:
    return -a


def absolute(a: DyadicInterval) -> DyadicInterval:
    return abs(a)


def hull(*xs: DyadicInterval) -> DyadicInterval:
    return DyadicInterval(min(x.lo for x in xs), max(x.hi for x in xs))


def compare_strict(a: DyadicInterval, b: DyadicInterval) -> Ordering:
    """Certified strict comparison; never blocks.

    ``LT`` iff ``a.hi < b.lo``, ``GT`` iff ``a.lo > b.hi``, otherwise
    ``OVERLAP`` (shared endpoints included).
    """
    if a.hi < b.lo:
        return Ordering.LT
    if a.lo > b.hi:
        return Ordering.GT
    return Ordering.OVERLAP


def precision_ladder(start: int = 4, cap: int = DEFAULT_PRECISION_CAP) -> Iterator[int]:
    """Yield ``start, 2*start, 4*start, ...`` and finally ``cap``."""
    n = max(1, start)
    while n < cap:
        yield n
        n *= 2
    yield cap


def decide(make: Callable[[int], Tuple[DyadicInterval, DyadicInterval]],
           start: int = 4, cap: int = DEFAULT_PRECISION_CAP) -> Ordering:
    """Refine ``make(n) -> (a, b)`` along the ladder until ``a`` and ``b`` separate.

    Raises :class:`UndecidedComparison` when the cap is reached.
    """
    for n in precision_ladder(start, cap):
        a, b = make(n)
        r = compare_strict(a, b)
        if r is not Ordering.OVERLAP:
            return r
    raise UndecidedComparison(f"comparison unresolved at precision cap 2^-{cap}")


def enclose(q, n: int) -> DyadicInterval:
    """Enclosure of an exact rational with width at most ``2**-n``.

    Dyadic inputs come back as degenerate intervals.
    """
    if isinstance(q, DyadicInterval):
        return q
    if isinstance(q, Dyadic):
        return DyadicInterval.point(q)
    q = Fraction(q)
    d = q.denominator
    if not d & (d - 1):
        return DyadicInterval.point(Dyadic.from_fraction(q))
    num = q.numerator << n
    lo = num // d
    return DyadicInterval.from_scaled(lo, lo + 1, n)


# ---------------------------------------------------------------------------
# Fixed-point kernels.  Every kernel returns integers (lo, hi) such that the
# exact value lies in [lo, hi] * 2**-w.


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _exp_taylor(r: int, w: int, up: bool) -> int:
    """Bound exp(r * 2**-w) for 0 <= r <= 2**(w-1)."""
    one = 1 << w
    total = one
    term = one
    k = 1
    if not up:
        while term:
            term = (term * r >> w) // k
            total += term
            k += 1
        return total
    while term > 1:
        term = -(((-term * r) >> w) // k)
        total += term
        k += 1
    # remaining tail is at most term * (1/2) / (1 - 1/2) <= term
    return total + term + 1


def _exp_point(x: Dyadic, w: int) -> Tuple[int, int]:
    negative = x.mantissa < 0
    ax = abs(x)
    # smallest s with ax * 2**-s <= 1/2
    s = max(0, ax.mantissa.bit_length() + ax.exponent + 1)
    g = s + 10 + (0 if negative else math.ceil(float(ax) * 1.4427) + 1)
    W = w + g
    r_lo = ax.scaled_floor(W - s)
    r_hi = ax.scaled_ceil(W - s)
    lo = _exp_taylor(r_lo, W, up=False)
    hi = _exp_taylor(r_hi, W, up=True)
    for _ in range(s):
        lo = lo * lo >> W
        hi = _ceil_div(hi * hi, 1 << W)
    if negative:
        lo, hi = (1 << (2 * W)) // hi, _ceil_div(1 << (2 * W), lo)
    return lo >> g, _ceil_div(hi, 1 << g)


def _atanh_series(num: int, den: int, w: int) -> Tuple[int, int]:
    """Bound atanh(num/den) for 0 <= num/den <= 1/3."""
    one = 1 << w
    z_lo = (num << w) // den
    z_hi = _ceil_div(num << w, den)
    z2_lo = z_lo * z_lo >> w
    z2_hi = _ceil_div(z_hi * z_hi, one)
    lo = hi = 0
    p_lo, p_hi = z_lo, z_hi
    k = 1
    while p_hi > 0:
        lo += p_lo // k
        hi += _ceil_div(p_hi, k)
        p_lo = p_lo * z2_lo >> w
        p_hi = _ceil_div(p_hi * z2_hi, one)
        k += 2
        if p_hi <= 1:
            # tail <= p_hi / k * 1/(1 - z^2) <= 2 * p_hi
            hi += 2 * p_hi + 1
            break
    return lo, hi


@functools.lru_cache(maxsize=64)
def _ln2_fx(w: int) -> Tuple[int, int]:
    W = w + 8
    lo, hi = _atanh_series(1, 3, W)
    return (2 * lo) >> 8, _ceil_div(2 * hi, 1 << 8)


def _ln_point(x: Dyadic, w: int) -> Tuple[int, int]:
    if x.mantissa <= 0:
        raise DomainError(f"ln of non-positive value {x}")
    m, e = x.mantissa, x.exponent
    k = m.bit_length() - 1 + e          # x = 2**k * y with 1 <= y < 2
    d = 1 << (m.bit_length() - 1)       # y = m / d
    g = 8 + abs(k).bit_length()
    W = w + g
    a_lo, a_hi = _atanh_series(m - d, m + d, W)
    l2_lo, l2_hi = _ln2_fx(W)
    if k >= 0:
        lo = k * l2_lo + 2 * a_lo
        hi = k * l2_hi + 2 * a_hi
    else:
        lo = k * l2_hi + 2 * a_lo
        hi = k * l2_lo + 2 * a_hi
    return lo >> g, _ceil_div(hi, 1 << g)


def _sqrt_point(x: Dyadic, w: int) -> Tuple[int, int]:
    if x.mantissa < 0:
        raise DomainError(f"sqrt of negative value {x}")
    n_lo = x.scaled_floor(2 * w)
    n_hi = x.scaled_ceil(2 * w)
    lo = math.isqrt(n_lo)
    r = math.isqrt(n_hi)
    hi = r if r * r == n_hi else r + 1
    return lo, hi


def _atan_inv(q: int, W: int) -> Tuple[int, int]:
    """atan(1/q) bounds via the alternating Gregory series."""
    total = 0
    p = (1 << W) // q
    q2 = q * q
    k = 0
    terms = 0
    while True:
        t = p // (2 * k + 1)
        if t == 0:
            break
        total += t if k % 2 == 0 else -t
        terms += 1
        p //= q2
        k += 1
    err = terms + 1
    return total - err, total + err


@functools.lru_cache(maxsize=64)
def _pi_fx(w: int) -> Tuple[int, int]:
    W = w + 16
    a_lo, a_hi = _atan_inv(5, W)
    b_lo, b_hi = _atan_inv(239, W)
    lo = 16 * a_lo - 4 * b_hi
    hi = 16 * a_hi - 4 * b_lo
    return lo >> 16, _ceil_div(hi, 1 << 16)


def _sin_taylor(theta: int, w: int) -> Tuple[int, int]:
    """Bound sin(theta * 2**-w) for 0 <= theta * 2**-w <= 1.6."""
    one = 1 << w
    t2 = theta * theta >> w
    term = theta
    total = theta
    k = 1
    while term:
        term = (term * t2 >> w) // ((2 * k) * (2 * k + 1))
        total += -term if k % 2 else term
        k += 1
    # each truncated term is off by at most 3k ulps; the omitted tail by less than 3k + 1
    err = 3 * k * k + 3 * k + 2
    return total - err, min(total + err, one)


def _sin_pi_point(x: Dyadic, w: int) -> Tuple[int, int]:
    # reduce x modulo 2 exactly
    two = Dyadic(2)
    q = x.scaled_floor(-1)          # floor(x / 2)
    y = x - two * q
    sign = 1
    if y >= 1:
        y = y - 1
        sign = -1
    if y > Dyadic(1, -1):
        y = 1 - y
    W = w + 16
    p_lo, p_hi = _pi_fx(W)
    th_lo = y.mantissa * p_lo
    th_hi = y.mantissa * p_hi
    if y.exponent >= 0:
        th_lo <<= y.exponent
        th_hi <<= y.exponent
    else:
        th_lo >>= -y.exponent
        th_hi = _ceil_div(th_hi, 1 << -y.exponent)
    lo, _ = _sin_taylor(th_lo, W)
    _, hi = _sin_taylor(th_hi, W)
    lo = max(lo, 0)
    lo, hi = lo >> 16, _ceil_div(hi, 1 << 16)
    if sign < 0:
        lo, hi = -hi, -lo
    return lo, hi


# ---------------------------------------------------------------------------
# Public enclosures.


def _monotone(point_fn, a: DyadicInterval, n: int) -> DyadicInterval:
    """Enclose an increasing function over ``a``; total endpoint slack below 2**-n."""
    w = n + 2
    for _ in range(16):
        lo, lo_up = point_fn(a.lo, w)
        if a.is_point():
            if _fits(lo, lo_up, w - n):
                return DyadicInterval.from_scaled(lo, lo_up, w)
        else:
            hi_down, hi = point_fn(a.hi, w)
            if _fits(0, (lo_up - lo) + (hi - hi_down), w - n):
                return DyadicInterval.from_scaled(lo, hi, w)
        w += 8
    raise ArithmeticError("enclosure failed to converge")


def _fits(lo: int, hi: int, bits: int) -> bool:
    return hi - lo <= (1 << bits)


def sqrt_enclosure(a: DyadicInterval, n: int) -> DyadicInterval:
    """Outward enclosure of ``sqrt`` over ``a`` (requires ``a.lo >= 0``)."""
    a = _as_interval(a)
    if a.lo.mantissa < 0:
        raise DomainError(f"sqrt of interval with negative part {a}")
    if a.is_point():
        # exact roots come back as points
        lo, hi = _sqrt_point(a.lo, n + 1)
        if lo == hi:
            return DyadicInterval.from_scaled(lo, hi, n + 1)
    return _monotone(_sqrt_point, a, n)


def ln_enclosure(a: DyadicInterval, n: int) -> DyadicInterval:
    a = _as_interval(a)
    if a.lo.mantissa <= 0:
        raise DomainError(f"ln of interval with non-positive part {a}")
    if a.is_point() and a.lo == ONE:
        return DyadicInterval.point(ZERO)
    return _monotone(_ln_point, a, n)


def exp_enclosure(a: DyadicInterval, n: int) -> DyadicInterval:
    a = _as_interval(a)
    if a.is_point() and a.lo.mantissa == 0:
        return DyadicInterval.point(ONE)
    return _monotone(_exp_point, a, n)


def div_enclosure(a: DyadicInterval, b: DyadicInterval, n: int) -> DyadicInterval:
    """Enclosure of ``{x / y : x in a, y in b}``; ``b`` must exclude 0."""
    a, b = _as_interval(a), _as_interval(b)
    if b.lo.mantissa <= 0 <= b.hi.mantissa:
        raise DomainError(f"division by interval containing zero {b}")
    w = n + 1
    fl, cl = [], []
    for x in (a.lo, a.hi):
        for y in (b.lo, b.hi):
            num = x.mantissa
            den = y.mantissa
            s = x.exponent - y.exponent + w
            if s >= 0:
                num <<= s
            else:
                den <<= -s
            if den < 0:
                num, den = -num, -den
            fl.append(num // den)
            cl.append(_ceil_div(num, den))
    return DyadicInterval.from_scaled(min(fl), max(cl), w)


def pi_enclosure(n: int) -> DyadicInterval:
    lo, hi = _pi_fx(n + 2)
    return DyadicInterval.from_scaled(lo, hi, n + 2)


def sin_pi_enclosure(a: DyadicInterval, n: int) -> DyadicInterval:
    """Enclosure of ``sin(pi * x)`` over ``a``.

    Point arguments are reduced exactly modulo 2; wider arguments use the
    Lipschitz bound ``|d/dx sin(pi x)| <= pi < 4`` around the midpoint.
    """
    a = _as_interval(a)
    w = n + 3
    mid = a.midpoint if not a.is_point() else a.lo
    lo, hi = _sin_pi_point(mid, w)
    r = DyadicInterval.from_scaled(lo, hi, w)
    if not a.is_point():
        rad = a.width.shift(1)          # 4 * (width / 2)
        r = DyadicInterval(r.lo - rad, r.hi + rad)
    lo = max(r.lo, Dyadic(-1))
    hi = min(r.hi, ONE)
    return DyadicInterval(lo, hi)
