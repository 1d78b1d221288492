"""Reference constructions of Brownian motion and goodness-of-fit tests.

These are the independent yardsticks for :mod:`fairbits.wiener`: the
Lévy–Ciesielski (Schauder) series, the Karhunen–Loève sine series, the
scaled random walk, Kolmogorov–Smirnov tests, and the empirical tabulation
of the parameter ``c`` that ships as the default ``C`` distribution.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .bitsource import BitStream
from .dyadic import (
    Dyadic,
    DyadicInterval,
    div_enclosure,
    enclose,
    pi_enclosure,
    sin_pi_enclosure,
    sqrt_enclosure,
)
from .measures import LazySample, SemiInverseCDF, TableCDF, cdf_from_table, dump_table_csv, make_gaussian
from .wiener import ModulusFamily, compute_c, family

__all__ = [
    "schauder_hat",
    "levy_ciesielski",
    "karhunen_loeve",
    "donsker",
    "KSResult",
    "ks_test",
    "ks_2sample",
    "kolmogorov_sf",
    "EmpiricalCDF",
    "CDistribution",
    "estimate_c_distribution",
    "normal_cdf",
]

_GAUSS = make_gaussian()


def _dy(t) -> Dyadic:
    return t if isinstance(t, Dyadic) else Dyadic.coerce(t)


def _check_unit(ts: Sequence[Dyadic]) -> None:
    for t in ts:
        if t < Dyadic(0) or t > Dyadic(1):
            raise ValueError(f"time {t} outside [0, 1]")


# ---------------------------------------------------------------------------
# Schauder series


def schauder_hat(m: int, j: int, t: Dyadic) -> Dyadic:
    """The dyadic factor ``q`` of ``phi_{m,j}(t) = q * 2**((m-1)/2)``.

    The power of two is left out because it is irrational for even ``m``.
    Level ``m >= 1`` has hats
    ``j = 1..2**(m-1)`` supported on ``[(2j-2)/2**m, 2j/2**m]``.
    """
    if m < 1 or not 1 <= j <= 1 << (m - 1):
        raise ValueError(f"no hat at level {m}, index {j}")
    t = _dy(t)
    left = Dyadic(2 * j - 2, -m)
    centre = Dyadic(2 * j - 1, -m)
    right = Dyadic(2 * j, -m)
    if t <= left or t >= right:
        return Dyadic(0)
    return t - left if t <= centre else right - t


@lru_cache(maxsize=256)
def _pow2_half(e: int, P: int) -> DyadicInterval:
    """``2**(e/2)``."""
    if e % 2 == 0:
        return DyadicInterval.point(Dyadic(1, e // 2))
    return sqrt_enclosure(DyadicInterval.point(Dyadic(1, e)), P)


class _Coefficients:
    """Gaussian coefficients keyed by index, each on its own child stream."""

    def __init__(self, s: BitStream):
        self.base = s.spawn()
        self.draws: Dict[int, LazySample] = {}
        self._cache: Dict[Tuple[int, int], DyadicInterval] = {}

    def get(self, idx: int, P: int) -> DyadicInterval:
        v = self._cache.get((idx, P))
        if v is not None:
            return v
        z = self.draws.get(idx)
        if z is None:
            z = self.draws[idx] = LazySample(_GAUSS, self.base.child(idx))
        v = self._cache[idx, P] = z.enclosure(P)
        return v

    @property
    def bits_used(self) -> int:
        return sum(z.bits_used for z in self.draws.values())


def _refine(evaluate: Callable[[int], List[DyadicInterval]], P: int, n: int) -> List[DyadicInterval]:
    limit = Dyadic(1, -n)
    while True:
        out = [DyadicInterval.from_scaled(*v.scaled(P), P) for v in evaluate(P)]
        if all(v.width <= limit for v in out):
            return out
        P += 8


def levy_ciesielski(N: int, s: BitStream, ts: Sequence, n: int = 16) -> List[DyadicInterval]:
    """Partial sum ``R_0 t + sum_{m<=N} sum_j R_{m,j} phi_{m,j}(t)`` at each ``t``.

    Coefficients live on a substream spawned from ``s`` (so ``s`` advances):
    ``R_0`` on its child 1 and ``R_{m,j}`` on child ``2**(m-1) + j``.  Zero
    terms are skipped, so at ``t`` on the grid of depth ``k`` every
    ``N >= k`` gives bit-identical enclosures for equal input streams.
    """
    ts = [_dy(t) for t in ts]
    _check_unit(ts)
    R = _Coefficients(s)

    def evaluate(P: int) -> List[DyadicInterval]:
        out = []
        for t in ts:
            acc = DyadicInterval.point(Dyadic(0))
            if t.mantissa:
                acc = R.get(1, P) * t
            for m in range(1, N + 1):
                j = (t.to_fraction() * (1 << (m - 1))).__floor__() + 1
                if j > 1 << (m - 1):
                    continue
                q = schauder_hat(m, j, t)
                if q.mantissa == 0:
                    continue
                acc = acc + R.get((1 << (m - 1)) + j, P) * (_pow2_half(m - 1, P + 8) * q)
            out.append(acc)
        return out

    return _refine(evaluate, n + 4, n)


# ---------------------------------------------------------------------------
# Karhunen–Loève


@lru_cache(maxsize=65536)
def _kl_weight(k: int, t: Dyadic, P: int) -> DyadicInterval:
    """``sqrt(2) sin((k - 1/2) pi t) / ((k - 1/2) pi)``."""
    freq = Dyadic(2 * k - 1, -1)
    num = sin_pi_enclosure(DyadicInterval.point(freq * t), P + 4)
    num = num * sqrt_enclosure(DyadicInterval.point(Dyadic(2)), P + 4)
    den = pi_enclosure(P + 8) * freq
    return div_enclosure(num, den, P + 2)


def karhunen_loeve(N: int, s: BitStream, ts: Sequence, n: int = 16) -> List[DyadicInterval]:
    """Truncated sine series ``sqrt 2 sum_{k<=N} R_k sin((k-1/2) pi t)/((k-1/2) pi)``.

    ``R_k`` is drawn on child ``k`` of a substream spawned from ``s``.
    """
    ts = [_dy(t) for t in ts]
    _check_unit(ts)
    R = _Coefficients(s)

    def evaluate(P: int) -> List[DyadicInterval]:
        out = []
        for t in ts:
            acc = DyadicInterval.point(Dyadic(0))
            if t.mantissa:
                for k in range(1, N + 1):
                    acc = acc + R.get(k, P) * _kl_weight(k, t, P)
            out.append(acc)
        return out

    return _refine(evaluate, n + 4 + max(N, 1).bit_length() // 2, n)


# ---------------------------------------------------------------------------
# Random walk


def donsker(N: int, s: BitStream, ts: Sequence, n: int = 32) -> List[DyadicInterval]:
    """Scaled walk ``S_floor(N t) / sqrt(N)`` with fair +-1 steps.

    Values are exact (degenerate intervals) when ``sqrt(N)`` is a power of
    two and otherwise enclosures of width ``<= 2**-n``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    ts = [_dy(t) for t in ts]
    _check_unit(ts)
    steps = s.bits(N)
    r = math.isqrt(N)
    exact_root = r * r == N and not r & (r - 1)
    root = None if exact_root else sqrt_enclosure(DyadicInterval.point(Dyadic(N)), n + 8)
    out = []
    for t in ts:
        k = int((t.to_fraction() * N).__floor__())
        ups = (steps >> (N - k)).bit_count() if k else 0
        S = 2 * ups - k
        if exact_root:
            out.append(DyadicInterval.point(Dyadic(S, -(r.bit_length() - 1))))
        elif S == 0:
            out.append(DyadicInterval.point(Dyadic(0)))
        else:
            out.append(div_enclosure(DyadicInterval.point(Dyadic(S)), root, n))
    return out


# ---------------------------------------------------------------------------
# Kolmogorov–Smirnov


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    n: int

    def passes(self, alpha: float = 0.01) -> bool:
        return self.pvalue > alpha


def kolmogorov_sf(lam: float, terms: int = 2) -> float:
    """``P[K > lam]`` for the Kolmogorov distribution, from two-term series.

    Above ``lam = 1.18`` the alternating series
    ``2 sum (-1)^(k-1) exp(-2 k^2 lam^2)`` is used, below it the dual theta
    series for the CDF, ``sqrt(2 pi)/lam sum exp(-(2k-1)^2 pi^2 / (8 lam^2))``.
    With two terms either one is accurate to better than ``1e-9``.
    """
    if lam <= 0:
        return 1.0
    if lam >= 1.18:
        p = 2.0 * sum((-1) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
                      for k in range(1, terms + 1))
    else:
        a = math.pi ** 2 / (8.0 * lam * lam)
        p = 1.0 - math.sqrt(2.0 * math.pi) / lam * sum(math.exp(-(2 * k - 1) ** 2 * a)
                                                      for k in range(1, terms + 1))
    return min(1.0, max(0.0, p))


def _as_float(x) -> float:
    if isinstance(x, DyadicInterval):
        return float(x.midpoint)
    return float(x)


def _as_cdf(cdf) -> Callable[[float], float]:
    if isinstance(cdf, SemiInverseCDF):
        return cdf.cdf
    if callable(cdf):
        return cdf
    raise TypeError("cdf must be a SemiInverseCDF or a callable")


def ks_test(samples: Iterable, cdf) -> KSResult:
    """One-sample KS statistic against ``cdf`` with its asymptotic p-value.

    Samples may be dyadics, enclosures (their midpoints are used) or floats.
    """
    xs = sorted(_as_float(x) for x in samples)
    N = len(xs)
    if N < 20:
        raise ValueError(f"KS test needs at least 20 samples, got {N}")
    F = _as_cdf(cdf)
    D = 0.0
    for i, x in enumerate(xs):
        f = F(x)
        D = max(D, (i + 1) / N - f, f - i / N)
    rn = math.sqrt(N)
    return KSResult(D, kolmogorov_sf((rn + 0.12 + 0.11 / rn) * D), N)


def ks_2sample(a: Iterable, b: Iterable) -> KSResult:
    xa = sorted(_as_float(x) for x in a)
    xb = sorted(_as_float(x) for x in b)
    n, m = len(xa), len(xb)
    if min(n, m) < 20:
        raise ValueError("two-sample KS test needs at least 20 samples per side")
    D = 0.0
    for x in xa + xb:
        D = max(D, abs(bisect.bisect_right(xa, x) / n - bisect.bisect_right(xb, x) / m))
    re = math.sqrt(n * m / (n + m))
    return KSResult(D, kolmogorov_sf((re + 0.12 + 0.11 / re) * D), n + m)


def normal_cdf(var: float = 1.0) -> Callable[[float], float]:
    """Float CDF of ``N(0, var)``, for use with :func:`ks_test`."""
    sd = math.sqrt(var)
    return lambda x: 0.5 * math.erfc(-x / (sd * math.sqrt(2.0)))


class EmpiricalCDF:
    """Step CDF of a finite sample; heights are multiples of ``1/N``."""

    def __init__(self, samples: Iterable):
        self.values = sorted(samples)
        if not self.values:
            raise ValueError("empty sample")

    def __len__(self):
        return len(self.values)

    def __call__(self, x) -> Fraction:
        return Fraction(bisect.bisect_right(self.values, x), len(self.values))

    def rows(self) -> List[tuple]:
        """Distinct values with ``F(x) = #{v <= x} / N``."""
        N = len(self.values)
        out = []
        for i, v in enumerate(self.values):
            if i + 1 < N and self.values[i + 1] == v:
                continue
            out.append((v, Fraction(i + 1, N)))
        return out

    def median(self):
        return self.values[(len(self.values) - 1) // 2]


# ---------------------------------------------------------------------------
# Empirical distribution of c


@dataclass
class CDistribution:
    table: TableCDF
    estimates: list
    floor_rate: float

    def to_csv(self) -> str:
        return dump_table_csv(self.table)


def estimate_c_distribution(n_paths: int, depth: int, fam: Union[str, ModulusFamily], s: BitStream,
                            n: int = 16, seed_label: Optional[object] = None) -> CDistribution:
    """Tabulate ``c`` over Lévy–Ciesielski paths on the grid of the given depth.

    Each path uses ``N = depth`` series levels (exact on the grid) and
    contributes the upper end of its :func:`compute_c` enclosure.
    """
    if n_paths < 100:
        raise ValueError("need at least 100 paths")
    fam = family(fam)
    ts = [Dyadic(k, -depth) for k in range((1 << depth) + 1)]
    estimates = []
    for _ in range(n_paths):
        vals = levy_ciesielski(depth, s.spawn(), ts, n)
        estimates.append(compute_c(vals, fam, n))
    floors = sum(e.at_floor for e in estimates)
    rate = floors / n_paths
    if rate > 0.5:
        warnings.warn(f"{floors}/{n_paths} paths hit the floor C = 1; "
                      f"family {fam.family_id!r} looks mis-specified", RuntimeWarning, stacklevel=2)
    ecdf = EmpiricalCDF(e.hi for e in estimates)
    meta = {
        "kind": "empirical c distribution",
        "n_paths": n_paths,
        "depth": depth,
        "family": fam.family_id,
        "seed": seed_label if seed_label is not None else (s.seed if s.seed is not None else "unknown"),
        "precision": n,
        "floor_rate": f"{rate:.4f}",
    }
    table = cdf_from_table(ecdf.rows(), name=f"cdist:{fam.family_id}:d{depth}", metadata=meta)
    return CDistribution(table, estimates, rate)
