"""Real distributions given by their lower and upper semi-inverse CDFs.

For a Borel probability measure ``mu`` on the reals with distribution function
``F(s) = mu((-inf, s])`` the two generalised inverses on ``(0, 1)`` are

* ``lower(t) = sup{ s : F(s) <  t }``   (left continuous)
* ``upper(t) = sup{ s : F(s) <= t }``   (right continuous)

Both push the uniform distribution forward onto ``mu``.  They agree except at
the countably many levels ``t`` where ``F`` has a flat stretch, which is what
makes inverse-transform sampling from fair bits work: the random ``t`` is
only known through a shrinking dyadic interval ``T``, and the sample is the
hull ``[lower(T.lo), upper(T.hi)]`` once that is narrow enough.
"""

from __future__ import annotations

import bisect
import csv
import functools
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from statistics import NormalDist
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .bitsource import BitStream
from .dyadic import (
    DEFAULT_PRECISION_CAP,
    Dyadic,
    DyadicInterval,
    UndecidedComparison,
    _ceil_div,
    _exp_point,
    _pi_fx,
    enclose,
)

__all__ = [
    "SemiInverseCDF",
    "RealSample",
    "LazySample",
    "ValidationError",
    "PrecisionExhausted",
    "sample_real",
    "make_uniform",
    "make_dirac",
    "make_gaussian",
    "make_cantor",
    "cdf_from_table",
    "load_table_csv",
    "dump_table_csv",
    "gaussian_cdf_enclosure",
    "parse_exact",
]


class ValidationError(ValueError):
    """Malformed distribution or weight data."""


class PrecisionExhausted(UndecidedComparison):
    """Sampling hit the precision cap; the caller should resample.

    Happens only when the uniform variate lands (up to the cap) on a level
    where the semi-inverses disagree, an event of probability zero.
    """


_STD = NormalDist()


def parse_exact(text: str) -> Fraction:
    """Parse ``"m*2^e"``, ``"p/q"`` or a decimal string as an exact rational."""
    text = text.strip()
    if "*" in text:
        return Dyadic.parse(text).to_fraction()
    return Fraction(text)


class SemiInverseCDF:
    """Base class; subclasses implement :meth:`lower` and :meth:`upper`.

    ``lower(T, n)`` encloses ``{F_<(t) : t in T}`` and ``upper(T, n)`` encloses
    ``{F_>(t) : t in T}`` for a dyadic interval ``T`` inside ``[0, 1]``; the
    enclosure may exceed the exact image by at most ``2**-n`` at each end.
    Values at ``t = 0`` and ``t = 1`` are the one-sided limits, so bounded
    distributions accept any ``T``.  Unbounded ones set ``bounded = False``
    and are only ever asked about ``T`` strictly inside ``(0, 1)``.
    """

    name = "abstract"
    bounded = True
    support_hint: Optional[DyadicInterval] = None

    def lower(self, t: DyadicInterval, n: int) -> DyadicInterval:
        raise NotImplementedError

    def upper(self, t: DyadicInterval, n: int) -> DyadicInterval:
        raise NotImplementedError

    # names used by the rest of the package and the docs
    def eval_lower(self, t: DyadicInterval, n: int) -> DyadicInterval:
        return self.lower(t, n)

    def eval_upper(self, t: DyadicInterval, n: int) -> DyadicInterval:
        return self.upper(t, n)

    def image(self, t: DyadicInterval, n: int) -> DyadicInterval:
        """Enclosure of every value either semi-inverse takes on ``t``."""
        return DyadicInterval(self.lower(t, n).lo, self.upper(t, n).hi)

    def worth_checking(self, a: int, k: int, n: int) -> bool:
        """Cheap guess whether ``[a, a+1] / 2**k`` can already give width ``2**-n``."""
        return True

    def cdf(self, x: float) -> float:
        """Floating-point distribution function, for statistics only."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True)
class RealSample:
    value: DyadicInterval
    precision: int
    bits_used: int


class LazySample:
    """One draw from ``mu`` whose enclosure can be refined on demand.

    The uniform variate is read from ``stream`` one bit at a time and only as
    far as the requested precision needs; asking again for a finer precision
    continues from the same bits, so all enclosures describe the same value.
    """

    __slots__ = ("mu", "stream", "a", "k", "best", "start")

    def __init__(self, mu: SemiInverseCDF, stream: BitStream):
        self.mu = mu
        self.stream = stream
        self.a = 0
        self.k = 0
        self.best: Optional[DyadicInterval] = None
        self.start = stream.consumed_count

    @property
    def bits_used(self) -> int:
        return self.k

    def _interior(self) -> bool:
        return 0 < self.a and self.a + 1 < (1 << self.k)

    def enclosure(self, n: int, cap: int = DEFAULT_PRECISION_CAP) -> DyadicInterval:
        best = self.best
        limit = Dyadic(1, -n)
        if best is not None and best.width <= limit:
            return best
        mu = self.mu
        while True:
            if (mu.bounded or self._interior()) and mu.worth_checking(self.a, self.k, n):
                t = DyadicInterval(Dyadic(self.a, -self.k), Dyadic(self.a + 1, -self.k))
                val = mu.image(t, n + 2)
                if best is not None:
                    val = val.intersect(best)
                best = val
                if val.width <= limit:
                    self.best = val
                    return val
            if self.k >= cap:
                self.best = best
                raise PrecisionExhausted(
                    f"{mu.name}: enclosure wider than 2^-{n} after {self.k} bits")
            self.a = (self.a << 1) | self.stream.next_bit()
            self.k += 1

    def refine(self, n: int, cap: int = DEFAULT_PRECISION_CAP) -> RealSample:
        v = self.enclosure(n, cap)
        return RealSample(v, n, self.k)


def sample_real(mu: SemiInverseCDF, s: BitStream, n: int,
                cap: int = DEFAULT_PRECISION_CAP) -> RealSample:
    """Inverse-transform sample of ``mu`` with an enclosure of width ``<= 2**-n``.

    Raises :class:`PrecisionExhausted` when ``cap`` bits do not suffice.
    """
    if n < 0:
        raise ValueError("precision must be non-negative")
    return LazySample(mu, s).refine(n, cap)


# ---------------------------------------------------------------------------
# Uniform and Dirac


class Uniform(SemiInverseCDF):
    name = "uniform"
    support_hint = DyadicInterval(0, 1)

    def lower(self, t, n):
        return t

    upper = lower

    def image(self, t, n):
        return t

    def cdf(self, x):
        return min(1.0, max(0.0, x))


def make_uniform() -> SemiInverseCDF:
    return Uniform()


RealLike = Union[Dyadic, int, Fraction, str, Callable[[int], DyadicInterval]]


class Dirac(SemiInverseCDF):
    """Point mass; both semi-inverses are the constant ``r``."""

    def __init__(self, r: RealLike):
        if callable(r):
            self._enc = r
            self._value = float(r(60).midpoint)
        else:
            q = parse_exact(r) if isinstance(r, str) else Fraction(r.to_fraction()
                                                                   if isinstance(r, Dyadic) else r)
            self._enc = functools.partial(enclose, q)
            self._value = float(q)
        self.name = f"dirac:{self._value!r}"
        e = self._enc(8)
        self.support_hint = e

    def lower(self, t, n):
        return self._enc(n)

    upper = lower

    def image(self, t, n):
        return self._enc(n)

    def cdf(self, x):
        return 1.0 if x >= self._value else 0.0


def make_dirac(r: RealLike) -> SemiInverseCDF:
    """Point mass at ``r``: an exact rational, a dyadic, or ``n -> enclosure``."""
    return Dirac(r)


# ---------------------------------------------------------------------------
# Gaussian


@functools.lru_cache(maxsize=64)
def _inv_sqrt_2pi_fx(w: int) -> Tuple[int, int]:
    W = w + 4
    p_lo, p_hi = _pi_fx(W)
    s_lo = math.isqrt((2 * p_lo) << W)
    s_hi = math.isqrt((2 * p_hi) << W) + 1
    lo = (1 << (2 * W)) // s_hi
    hi = _ceil_div(1 << (2 * W), s_lo)
    return lo >> 4, _ceil_div(hi, 1 << 4)


def _gauss_cdf_fx(x: Dyadic, q: int) -> Tuple[int, int]:
    """Bounds on Phi(x) at scale 2**-q.

    Uses Phi(x) = 1/2 + phi(x) * sum_k x^(2k+1) / (2k+1)!!, a series of
    positive terms, so lower and upper sums are just truncations with floors
    and ceilings plus a geometric tail bound.
    """
    ax = abs(x)
    xf = float(ax)
    g = 16 + math.ceil(0.73 * xf * xf) + int(xf * xf).bit_length()
    W = q + g
    one = 1 << W
    x2 = ax * ax
    e_lo, e_hi = _exp_point(-x2.shift(-1), W)
    c_lo, c_hi = _inv_sqrt_2pi_fx(W)
    phi_lo = e_lo * c_lo >> W
    phi_hi = _ceil_div(e_hi * c_hi, one)

    x_lo, x_hi = ax.scaled_floor(W), ax.scaled_ceil(W)
    x2_lo, x2_hi = x2.scaled_floor(W), x2.scaled_ceil(W)
    s_lo = t_lo = x_lo
    k = 1
    while t_lo:
        t_lo = (t_lo * x2_lo >> W) // (2 * k + 1)
        s_lo += t_lo
        k += 1
    s_hi = t_hi = x_hi
    k = 1
    while True:
        t_hi = -((((-t_hi * x2_hi) >> W)) // (2 * k + 1))
        s_hi += t_hi
        k += 1
        # ratio of the next terms is below x^2 / (2k+1) <= 1/2 from here on
        if t_hi <= 1 and x2_hi * 2 <= (2 * k + 1) * one:
            s_hi += t_hi + 1
            break

    prod_lo = phi_lo * s_lo >> W
    prod_hi = _ceil_div(phi_hi * s_hi, one)
    half = 1 << (W - 1)
    if x.mantissa >= 0:
        lo, hi = half + prod_lo, half + prod_hi
    else:
        lo, hi = half - prod_hi, half - prod_lo
    lo = max(lo, 0) >> g
    hi = min(_ceil_div(hi, 1 << g), 1 << q)
    return lo, hi


def gaussian_cdf_enclosure(x: Dyadic, n: int) -> DyadicInterval:
    """Certified enclosure of the standard normal CDF at a dyadic point."""
    x = Dyadic.coerce(x)
    q = n + 2
    lo, hi = _gauss_cdf_fx(x, q)
    return DyadicInterval.from_scaled(lo, hi, q)


def _float_t(t: Dyadic) -> Tuple[float, bool]:
    """``(min(t, 1-t), t > 1/2)`` as a float with full relative accuracy."""
    if t > Dyadic(1, -1):
        return float(Dyadic(1) - t), True
    return float(t), False


def _guess_quantile(t: Dyadic) -> float:
    u, flip = _float_t(t)
    if u <= 0.0:
        g = 40.0
        return g if flip else -g
    g = _STD.inv_cdf(u)
    return -g if flip else g


class Gaussian(SemiInverseCDF):
    """Standard normal; both semi-inverses equal the quantile function.

    Quantile bounds come from a floating-point guess that is then certified
    (and, at high precision, tightened by bisection) with the validated
    series for the CDF.
    """

    name = "gaussian"
    bounded = False

    def _bracket(self, t: Dyadic, p: int, side: int) -> Dyadic:
        """Certified bound on the quantile of ``t``: lower if ``side < 0`` else upper.

        While the floating-point guess is good to well below ``2**-p`` the
        first certified candidate is returned; otherwise a certified bracket
        is bisected down to width ``2**-p``.
        """
        g = _guess_quantile(t)
        delta = Dyadic(1, -(p + 2))
        margin = 4e-15 * (1.0 + abs(g))
        dens = math.exp(-0.5 * g * g) / math.sqrt(2 * math.pi)
        q = p + 6 + max(0, int(-math.log2(max(dens, 1e-300))))
        gd = Dyadic.coerce(g)
        step = delta + Dyadic.coerce(margin)

        def below(x: Dyadic) -> bool:
            return Dyadic(_gauss_cdf_fx(x, q)[1], -q) <= t

        def above(x: Dyadic) -> bool:
            return Dyadic(_gauss_cdf_fx(x, q)[0], -q) >= t

        s = step
        near = gd - s if side < 0 else gd + s
        while not (below(near) if side < 0 else above(near)):
            s = s.shift(1)
            near = gd - s if side < 0 else gd + s
            q += 2
        if s == step and margin <= float(delta):
            return near
        s = step
        far = gd + s if side < 0 else gd - s
        while not (above(far) if side < 0 else below(far)):
            s = s.shift(1)
            far = gd + s if side < 0 else gd - s
            q += 2
        lo, hi = (near, far) if side < 0 else (far, near)
        limit = Dyadic(1, -p)
        while hi - lo > limit:
            mid = (lo + hi).shift(-1)
            if below(mid):
                lo = mid
            elif above(mid):
                hi = mid
            else:
                q += 8
        return lo if side < 0 else hi

    def lower(self, t, n):
        return DyadicInterval(self._bracket(t.lo, n, -1), self._bracket(t.hi, n, +1))

    upper = lower
    image = lower

    def worth_checking(self, a, k, n):
        if k < n:
            return False
        t = (a + 0.5) / 2.0 ** k
        u = min(t, 1 - t)
        g = _STD.inv_cdf(u) if u > 0 else -40.0
        dens = math.exp(-0.5 * g * g) / math.sqrt(2 * math.pi)
        return 2.0 ** -k / max(dens, 1e-300) <= 0.7 * 2.0 ** -n

    def cdf(self, x):
        return 0.5 * math.erfc(-x / math.sqrt(2))


def make_gaussian() -> SemiInverseCDF:
    return Gaussian()


# ---------------------------------------------------------------------------
# Cantor


def _cantor_flat(t: Dyadic) -> Tuple[int, int, int]:
    """Ends ``(lo, hi, d)`` of ``{s : G(s) = t} = [lo/d, hi/d]`` for the Devil's staircase ``G``.

    A dyadic ``t = 0.v1`` (binary) in ``(0, 1)`` is the level of the removed
    middle third with ternary ends ``0.(2v)1`` and ``0.(2v)2``.
    """
    if t.mantissa <= 0:
        return 0, 0, 1
    if t.exponent >= 0:
        return 1, 1, 1
    m, k = t.mantissa, -t.exponent
    v = m >> 1
    tern = 0
    for i in range(k - 2, -1, -1):
        tern = 3 * tern + 2 * ((v >> i) & 1)
    return 3 * tern + 1, 3 * tern + 2, 3 ** k


def _ratio_floor(num: int, den: int, n: int) -> Dyadic:
    return Dyadic((num << n) // den, -n)


def _ratio_ceil(num: int, den: int, n: int) -> Dyadic:
    return Dyadic(-((-(num << n)) // den), -n)


class Cantor(SemiInverseCDF):
    """Cantor measure on [0, 1]: binary digits of ``t`` become ternary digits ``2b``."""

    name = "cantor"
    support_hint = DyadicInterval(0, 1)

    def lower(self, t, n):
        a, _, da = _cantor_flat(t.lo)
        b, _, db = _cantor_flat(t.hi)
        return DyadicInterval(_ratio_floor(a, da, n), _ratio_ceil(b, db, n))

    def upper(self, t, n):
        _, a, da = _cantor_flat(t.lo)
        _, b, db = _cantor_flat(t.hi)
        return DyadicInterval(_ratio_floor(a, da, n), _ratio_ceil(b, db, n))

    def image(self, t, n):
        a, _, da = _cantor_flat(t.lo)
        _, b, db = _cantor_flat(t.hi)
        return DyadicInterval(_ratio_floor(a, da, n), _ratio_ceil(b, db, n))

    def worth_checking(self, a, k, n):
        return k * 1.58 >= n

    def cdf(self, x):
        if x <= 0:
            return 0.0
        if x >= 1:
            return 1.0
        total, scale = 0.0, 0.5
        for _ in range(60):
            x *= 3
            d = int(x)
            x -= d
            if d == 1:
                return total + scale
            total += scale * (d // 2)
            scale /= 2
        return total


def make_cantor() -> SemiInverseCDF:
    return Cantor()


# ---------------------------------------------------------------------------
# Tabulated, piecewise-linear CDF


class TableCDF(SemiInverseCDF):
    """Distribution function interpolating linearly between table rows.

    Below the first row ``F = 0`` and the first row may carry a jump, so
    an atom at ``x_0`` is written as a first row ``(x_0, p)``.
    """

    def __init__(self, xs: Sequence[Dyadic], fs: Sequence[Fraction], name: str = "table",
                 metadata: Optional[dict] = None):
        self.xs = list(xs)
        self.fs = list(fs)
        self._xq = [x.to_fraction() for x in self.xs]
        self.name = name
        self.metadata = dict(metadata or {})
        self.support_hint = DyadicInterval(self.xs[0], self.xs[-1])

    def _interp(self, i: int, t: Fraction) -> Fraction:
        x0, x1 = self._xq[i - 1], self._xq[i]
        f0, f1 = self.fs[i - 1], self.fs[i]
        return x0 + (t - f0) * (x1 - x0) / (f1 - f0)

    def lower_exact(self, t: Fraction) -> Fraction:
        i = bisect.bisect_left(self.fs, t)
        if i == 0:
            return self._xq[0]
        if i == len(self.fs):
            return self._xq[-1]
        return self._interp(i, t)

    def upper_exact(self, t: Fraction) -> Fraction:
        i = bisect.bisect_right(self.fs, t)
        if i == 0:
            return self._xq[0]
        if i == len(self.fs):
            return self._xq[-1]
        return self._interp(i, t)

    def lower(self, t, n):
        return DyadicInterval(enclose(self.lower_exact(t.lo.to_fraction()), n).lo,
                              enclose(self.lower_exact(t.hi.to_fraction()), n).hi)

    def upper(self, t, n):
        return DyadicInterval(enclose(self.upper_exact(t.lo.to_fraction()), n).lo,
                              enclose(self.upper_exact(t.hi.to_fraction()), n).hi)

    def image(self, t, n):
        return DyadicInterval(enclose(self.lower_exact(t.lo.to_fraction()), n).lo,
                              enclose(self.upper_exact(t.hi.to_fraction()), n).hi)

    def cdf(self, x):
        xs = self._xf if hasattr(self, "_xf") else None
        if xs is None:
            xs = self._xf = [float(v) for v in self.xs]
            self._ff = [float(f) for f in self.fs]
        if x < xs[0]:
            return 0.0
        if x >= xs[-1]:
            return 1.0
        i = bisect.bisect_right(xs, x)
        x0, x1 = xs[i - 1], xs[i]
        f0, f1 = self._ff[i - 1], self._ff[i]
        return f0 + (x - x0) * (f1 - f0) / (x1 - x0)


def cdf_from_table(rows: Sequence[Tuple[object, object]], name: str = "table",
                   metadata: Optional[dict] = None) -> SemiInverseCDF:
    """Validate ``(x, F)`` rows and return the interpolating distribution.

    ``x`` must be dyadic and strictly increasing; ``F`` exact rationals,
    nondecreasing in ``[0, 1]`` and ending at 1.
    """
    if not rows:
        raise ValidationError("empty table")
    xs: List[Dyadic] = []
    fs: List[Fraction] = []
    for i, (x, f) in enumerate(rows):
        try:
            xd = Dyadic.parse(x) if isinstance(x, str) else Dyadic.coerce(x)
            fq = parse_exact(f) if isinstance(f, str) else Fraction(
                f.to_fraction() if isinstance(f, Dyadic) else f)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ValidationError(f"row {i}: {exc}") from exc
        if xs and not xd > xs[-1]:
            raise ValidationError(f"row {i}: x={xd} is not strictly greater than {xs[-1]}")
        if not 0 <= fq <= 1:
            raise ValidationError(f"row {i}: F={fq} outside [0, 1]")
        if fs and fq < fs[-1]:
            raise ValidationError(f"row {i}: F decreases from {fs[-1]} to {fq}")
        xs.append(xd)
        fs.append(fq)
    if fs[-1] != 1:
        raise ValidationError(f"last F is {fs[-1]}, expected 1")
    return TableCDF(xs, fs, name, metadata)


def load_table_csv(source: Union[str, Path, io.TextIOBase]) -> SemiInverseCDF:
    """Load a ``x,F`` CSV; ``# key: value`` comment lines become metadata."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        text = path.read_text()
        name = f"table:{path.name}"
    else:
        text = source.read()
        name = "table"
    meta = {}
    body = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            if ":" in s:
                k, v = s[1:].split(":", 1)
                meta[k.strip()] = v.strip()
            continue
        body.append(s)
    reader = csv.reader(body)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["x", "F"]:
        raise ValidationError(f"expected header 'x,F', got {header}")
    rows = [(r[0], r[1]) for r in reader if r]
    return cdf_from_table(rows, name=name, metadata=meta)


def _render_fraction(q: Fraction) -> str:
    d = q.denominator
    if not d & (d - 1):
        return str(Dyadic.from_fraction(q))
    return f"{q.numerator}/{d}"


def dump_table_csv(table: TableCDF, metadata: Optional[dict] = None) -> str:
    out = io.StringIO()
    for k, v in (metadata if metadata is not None else table.metadata).items():
        out.write(f"# {k}: {v}\n")
    out.write("x,F\n")
    for x, f in zip(table.xs, table.fs):
        out.write(f"{x},{_render_fraction(f)}\n")
    return out.getvalue()
