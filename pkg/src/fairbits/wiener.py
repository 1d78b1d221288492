"""Brownian paths on dyadic grids with a certified modulus of continuity.

Grid values are produced level by level.  Each new midpoint is drawn from
the Brownian-bridge law given its two neighbours and is kept only if
``|W(s) - W(t)| < omega(|s - t|, C)`` is certified for every value already
accepted; otherwise that single value is drawn again.  The comparison is
carried out on fixed-point integer enclosures and refined along the
precision ladder until it separates.

The reverse direction, :func:`compute_c`, recovers from grid values the
least parameter ``C >= 1`` for which ``omega(., C)`` dominates every grid
increment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bitsource import BitStream
from .dyadic import (
    DEFAULT_PRECISION_CAP,
    Dyadic,
    DyadicInterval,
    Ordering,
    UndecidedComparison,
    compare_strict,
    div_enclosure,
    enclose,
    exp_enclosure,
    hull,
    ln_enclosure,
    precision_ladder,
    sqrt_enclosure,
)
from .measures import LazySample, SemiInverseCDF, load_table_csv, make_gaussian

__all__ = [
    "ModulusFamily",
    "LevyModulus",
    "LevyTangentModulus",
    "family",
    "levy_omega",
    "binary_moc",
    "moc_table",
    "sample_c",
    "sample_path",
    "WienerPath",
    "Certificate",
    "CEstimate",
    "compute_c",
    "default_cdist",
    "PathRestartLimit",
]

ZERO = DyadicInterval.point(Dyadic(0))
# relative slack granted to float pre-screens before trusting their verdict
FLOAT_TOL = 1e-9
ONE = DyadicInterval.point(Dyadic(1))


class PathRestartLimit(RuntimeError):
    """Too many whole-path restarts; the family and ``C`` are probably incompatible."""


# ---------------------------------------------------------------------------
# Modulus families


class ModulusFamily:
    """A one-parameter family ``omega(h, c)`` of moduli of continuity."""

    family_id = "abstract"

    def omega(self, h: DyadicInterval, c: DyadicInterval, n: int) -> DyadicInterval:
        raise NotImplementedError

    def sup_omega(self, h: DyadicInterval, c: DyadicInterval, n: int) -> DyadicInterval:
        """Enclosure of ``sup {omega(x, c) : 0 <= x <= h}``.

        Equals ``omega(h, c)`` for families increasing in ``h``.
        """
        return self.omega(h, c, n)

    def omega_float(self, h: float, c: float) -> Optional[float]:
        """A float approximation with relative error below ``FLOAT_TOL``, or ``None``.

        Only used to skip exact evaluations whose outcome is not in doubt.
        """
        return None

    def __repr__(self):
        return f"{type(self).__name__}()"


def _iv(x) -> DyadicInterval:
    if isinstance(x, DyadicInterval):
        return x
    if isinstance(x, float):
        return DyadicInterval.point(Dyadic.coerce(x))
    return enclose(x if isinstance(x, Dyadic) else Fraction(x), 64)


@lru_cache(maxsize=8192)
def _neg_ln(h: DyadicInterval, w: int) -> DyadicInterval:
    return -ln_enclosure(h, w)


class LevyModulus(ModulusFamily):
    """The two-branch Lévy family.

    For ``h <= 1/(E c)`` the value is ``sqrt(2 c h ln(1/h))``; beyond that it
    continues linearly as ``y_c + (h - 1/(E c)) c ln(c) / y_c`` with
    ``y_c = sqrt(2 ln(E c) / c)``.  As written the two branches disagree at
    the branch point unless ``c = E``; enclosures that straddle it return
    the hull of both branches.
    """

    family_id = "levy"

    def _y(self, lnE_c: DyadicInterval, c: DyadicInterval, w: int) -> DyadicInterval:
        return sqrt_enclosure(div_enclosure(lnE_c.shift(1), c, w), w)

    @lru_cache(maxsize=256)
    def _consts(self, c: DyadicInterval, w: int):
        lnc = ln_enclosure(c, w)
        if lnc.lo.mantissa < 0:
            lnc = DyadicInterval(Dyadic(0), lnc.hi)
        lnE_c = lnc + 1
        b = exp_enclosure(-lnE_c, w)               # 1 / (E c)
        y = self._y(lnE_c, c, w)
        slope = div_enclosure(c * lnc, y, w)
        return b, y, slope

    def _left(self, h: DyadicInterval, c: DyadicInterval, w: int) -> DyadicInterval:
        v = (c * h * _neg_ln(h, w)).shift(1)
        if v.lo.mantissa < 0:
            v = DyadicInterval(Dyadic(0), v.hi)
        return sqrt_enclosure(v, w)

    def _right(self, h, consts) -> DyadicInterval:
        b, y, slope = consts
        return y + (h - b) * slope

    def _eval(self, h: DyadicInterval, c: DyadicInterval, w: int) -> DyadicInterval:
        consts = self._consts(c, w)
        b = consts[0]
        if h.lo.mantissa == 0:
            if h.is_point():
                return ZERO
            # (0, eps] sits on the increasing left branch
            eps = min(h.hi, b.lo)
            return hull(ZERO, self._eval(DyadicInterval(eps, h.hi), c, w))
        r = compare_strict(h, b)
        if r is Ordering.LT:
            return self._left(h, c, w)
        if r is Ordering.GT:
            return self._right(h, consts)
        return hull(self._left(h, c, w), self._right(h, consts))

    def omega(self, h, c, n: int) -> DyadicInterval:
        h, c = _iv(h), _iv(c)
        if h.lo.mantissa < 0 or h.hi > Dyadic(1):
            raise ValueError(f"h must lie in [0, 1], got {h}")
        if c.lo < Dyadic(1):
            raise ValueError(f"c must be >= 1, got {c}")
        limit = Dyadic(1, -n)
        w = n + 10
        for _ in range(6):
            r = self._eval(h, c, w)
            if r.width <= limit or not (h.is_point() and c.is_point()):
                return r
            w += 24
        return r

    def _y_float(self, c: float) -> float:
        return math.sqrt(2.0 * (math.log(c) + 1.0) / c)

    def omega_float(self, h: float, c: float) -> Optional[float]:
        if h <= 0.0:
            return 0.0
        b = math.exp(-1.0) / c
        if abs(h - b) <= 1e-6 * b:
            return None
        if h < b:
            return math.sqrt(2.0 * c * h * -math.log(h))
        y = self._y_float(c)
        return y + (h - b) * c * math.log(c) / y

    def sup_omega(self, h, c, n: int) -> DyadicInterval:
        h, c = _iv(h), _iv(c)
        r = self.omega(h, c, n)
        b = self._consts(c, n + 10)[0]
        if compare_strict(h, b) is Ordering.LT:
            return r
        # left branch peaks at the branch point, the right one is increasing
        peak = self.omega(DyadicInterval(min(b.lo, h.lo), min(b.hi, h.hi)), c, n)
        return DyadicInterval(max(r.lo, peak.lo), max(r.hi, peak.hi))


class LevyTangentModulus(LevyModulus):
    """Lévy family continued by its tangent at ``h = 1/(E c)``.

    Uses ``y_c = sqrt(2 ln(E c) / E)``, the left branch's value at the branch
    point, which makes ``omega`` continuous and increasing in both
    arguments.
    """

    family_id = "levy-tangent"

    def _y(self, lnE_c, c, w):
        return sqrt_enclosure(lnE_c.shift(1) * exp_enclosure(DyadicInterval.point(Dyadic(-1)), w), w)

    def _y_float(self, c: float) -> float:
        return math.sqrt(2.0 * (math.log(c) + 1.0) / math.e)

    def sup_omega(self, h, c, n):
        return self.omega(h, c, n)


_FAMILIES = {"levy": LevyModulus(), "levy-tangent": LevyTangentModulus()}


def family(name: Union[str, ModulusFamily] = "levy") -> ModulusFamily:
    """Look up a family by id (``"levy"`` or ``"levy-tangent"``)."""
    if isinstance(name, ModulusFamily):
        return name
    try:
        return _FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown modulus family {name!r}; known: {sorted(_FAMILIES)}")


def levy_omega(h, c, n: int) -> DyadicInterval:
    """Enclosure of the Lévy modulus ``omega(h, c)`` of width about ``2**-n``.

    >>> levy_omega(Dyadic(0), 1, 16)
    DyadicInterval(Dyadic(0, 0), Dyadic(0, 0))
    """
    return _FAMILIES["levy"].omega(h, c, n)


# ---------------------------------------------------------------------------
# Binary modulus


def _certified_below(fam: ModulusFamily, m: int, C: DyadicInterval, k: int, cap: int) -> bool:
    h = DyadicInterval.point(Dyadic(1, -m))
    bound = DyadicInterval.point(Dyadic(1, -k))
    try:
        for p in precision_ladder(k + 8, cap):
            r = compare_strict(fam.sup_omega(h, C, p), bound)
            if r is not Ordering.OVERLAP:
                return r is Ordering.LT
    except UndecidedComparison:
        pass
    return False


def moc_table(fam, C, levels: int, cap: int = DEFAULT_PRECISION_CAP,
              search_cap: int = 512) -> List[int]:
    """``[moc(0), ..., moc(levels)]`` in one upward sweep."""
    return list(_moc_table(family(fam), _iv(C), levels, cap, search_cap))


@lru_cache(maxsize=1024)
def _moc_table(fam: ModulusFamily, C: DyadicInterval, levels: int, cap: int,
               search_cap: int) -> Tuple[int, ...]:
    out = []
    m = 0
    for k in range(levels + 1):
        while not _certified_below(fam, m, C, k, cap):
            m += 1
            if m > search_cap:
                raise ArithmeticError(f"binary modulus search exceeded 2^-{search_cap} at n={k}")
        out.append(m)
    return tuple(out)


def binary_moc(fam, C, n: int, cap: int = DEFAULT_PRECISION_CAP, search_cap: int = 512) -> int:
    """Least ``m`` with ``omega(x, C) < 2**-n`` certified for all ``x <= 2**-m``.

    >>> binary_moc("levy", 1, 0)
    2
    """
    fam = family(fam)
    C = _iv(C)
    for m in range(search_cap + 1):
        if _certified_below(fam, m, C, n, cap):
            return m
    raise ArithmeticError(f"binary modulus search exceeded 2^-{search_cap}")


# ---------------------------------------------------------------------------
# The parameter C


def sample_c(cdist: SemiInverseCDF, s: BitStream, n: int,
             cap: int = DEFAULT_PRECISION_CAP) -> DyadicInterval:
    """Draw ``C`` from ``cdist`` as an enclosure of width ``<= 2**-n``."""
    v = LazySample(cdist, s).enclosure(n, cap)
    if v.lo < Dyadic(1):
        if v.hi < Dyadic(1):
            raise ValueError(f"{cdist.name}: drew C = {v} below 1")
        v = DyadicInterval(Dyadic(1), v.hi)
    return v


@lru_cache(maxsize=1)
def default_cdist() -> SemiInverseCDF:
    """The shipped empirical distribution of ``c`` for the Lévy family."""
    ref = resources.files("fairbits") / "data" / "levy_cdist_d6.csv"
    with resources.as_file(ref) as p:
        return load_table_csv(p)


class _Param:
    """Uniform access to ``C`` given as a number, an enclosure or a lazy draw."""

    def __init__(self, C, cap: int):
        self.lazy: Optional[LazySample] = None
        self.fixed: Optional[DyadicInterval] = None
        self.exact = None
        self.cap = cap
        if isinstance(C, LazySample):
            self.lazy = C
        elif isinstance(C, DyadicInterval):
            self.fixed = C
        elif isinstance(C, Dyadic):
            self.fixed = DyadicInterval.point(C)
        elif isinstance(C, float):
            self.fixed = DyadicInterval.point(Dyadic.coerce(C))
        else:
            q = Fraction(C)
            d = q.denominator
            if d & (d - 1):
                self.exact = q
            else:
                self.fixed = DyadicInterval.point(Dyadic.from_fraction(q))

    def at(self, p: int) -> DyadicInterval:
        if self.fixed is not None:
            return self.fixed
        if self.exact is not None:
            return enclose(self.exact, p)
        v = self.lazy.enclosure(p, self.cap)
        if v.lo < Dyadic(1):
            v = DyadicInterval(Dyadic(1), v.hi)
        return v

    @property
    def bits_used(self) -> int:
        return self.lazy.bits_used if self.lazy is not None else 0


# ---------------------------------------------------------------------------
# Paths


@dataclass
class Certificate:
    family: str
    C: Optional[DyadicInterval]
    moc: List[int]

    def to_json(self) -> dict:
        return {"family": self.family,
                "C": None if self.C is None else {"lo": str(self.C.lo), "hi": str(self.C.hi)},
                "moc": list(self.moc)}


@dataclass
class WienerPath:
    """Grid values ``values[k] ~ W(k / 2**depth)`` and their certificate."""

    depth: int
    values: List[DyadicInterval]
    cert: Certificate
    diagnostics: Dict[str, int] = field(default_factory=dict)

    @property
    def times(self) -> List[Dyadic]:
        return [Dyadic(k, -self.depth) for k in range(len(self.values))]

    def at(self, t) -> DyadicInterval:
        """The value at a grid time ``t``."""
        k = Dyadic.coerce(t).to_fraction() * (1 << self.depth)
        if k.denominator != 1 or not 0 <= k <= (1 << self.depth):
            raise KeyError(f"{t} is not on the grid of depth {self.depth}")
        return self.values[int(k)]

    def to_json(self) -> dict:
        d = self.depth
        return {
            "depth": d,
            "grid": "dyadic",
            "values": [{"t": f"{k}/2^{d}", "lo": str(v.lo), "hi": str(v.hi)}
                       for k, v in enumerate(self.values)],
            "cert": self.cert.to_json(),
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WienerPath":
        values = [DyadicInterval(Dyadic.parse(v["lo"]), Dyadic.parse(v["hi"]))
                  for v in obj["values"]]
        c = obj["cert"]
        C = None if c["C"] is None else DyadicInterval(Dyadic.parse(c["C"]["lo"]),
                                                        Dyadic.parse(c["C"]["hi"]))
        return cls(obj["depth"], values, Certificate(c["family"], C, list(c["moc"])),
                   dict(obj.get("diagnostics", {})))


def _sigma_fx(L: int, P: int) -> Tuple[int, int]:
    """``2**(-(L+1)/2)`` at scale ``2**-P``."""
    r = isqrt(1 << (2 * P - L - 1))
    return r, r if r * r == 1 << (2 * P - L - 1) else r + 1


def _floor_shift(x: int, k: int) -> int:
    return x >> k


def _ceil_shift(x: int, k: int) -> int:
    return -((-x) >> k)


class _PathSampler:
    def __init__(self, fam: ModulusFamily, C: Optional[_Param], s: BitStream, depth: int,
                 n: int, cap: int, max_attempts: int):
        self.fam = fam
        self.C = C
        self.s = s
        self.depth = depth
        self.grid = 1 << depth
        self.n = n
        self.cap = cap
        self.max_attempts = max_attempts
        self.P0 = n + 6 + depth.bit_length()
        self.gauss = make_gaussian()
        self.rejections = 0
        self.undecided = 0
        self.bits_discarded = 0
        self.z: Dict[int, LazySample] = {}
        self.vals: Dict[int, Dict[int, Tuple[int, int]]] = {}
        self.omegas: Dict[Tuple[int, int], Tuple[int, int]] = {}

    # fixed-point value of W(g / grid) at scale 2**-P
    def value(self, g: int, P: int) -> Tuple[int, int]:
        cache = self.vals.get(P)
        if cache is None:
            cache = self.vals[P] = {0: (0, 0)}
        v = cache.get(g)
        if v is not None:
            return v
        z = self.z[g].enclosure(P + 1, self.cap)
        zl, zh = z.scaled(P)
        if g == self.grid:
            v = (zl, zh)
        else:
            step = g & -g
            L = self.depth - step.bit_length() + 1
            al, ah = self.value(g - step, P)
            bl, bh = self.value(g + step, P)
            sl, sh = _sigma_fx(L, P)
            ps = (sl * zl, sl * zh, sh * zl, sh * zh)
            v = (((al + bl) >> 1) + _floor_shift(min(ps), P),
                 _ceil_shift(ah + bh, 1) + _ceil_shift(max(ps), P))
        cache[g] = v
        return v

    def omega_fx(self, lag: int, P: int) -> Tuple[int, int]:
        key = (lag, P)
        o = self.omegas.get(key)
        if o is None:
            h = DyadicInterval.point(Dyadic(lag, -self.depth))
            o = self.omegas[key] = self.fam.omega(h, self.C.at(P), P).scaled(P)
        return o

    def _forget(self, g: int) -> None:
        for cache in self.vals.values():
            cache.pop(g, None)

    def check(self, g: int, accepted: Sequence[int]) -> Optional[bool]:
        """True to accept, False to reject, None if undecided at the cap."""
        pending = list(accepted)
        try:
            for P in precision_ladder(self.P0, self.cap):
                gl, gh = self.value(g, P)
                still = []
                for t in pending:
                    tl, th = self.value(t, P)
                    dl = max(0, gl - th, tl - gh)
                    dh = max(gh - tl, th - gl)
                    ol, oh = self.omega_fx(abs(g - t), P)
                    if dl > oh:
                        return False
                    if dh >= ol:
                        still.append(t)
                if not still:
                    return True
                pending = still
        except UndecidedComparison:
            pass
        return None

    def draw_point(self, g: int, accepted: List[int]) -> bool:
        for _ in range(self.max_attempts):
            self._forget(g)
            self.z[g] = LazySample(self.gauss, self.s.spawn())
            if self.C is None:
                return True
            verdict = self.check(g, accepted)
            if verdict:
                return True
            self.bits_discarded += self.z[g].bits_used
            if verdict is None:
                self.undecided += 1
            else:
                self.rejections += 1
        return False

    def order(self) -> List[int]:
        out = [self.grid]
        for L in range(1, self.depth + 1):
            step = self.grid >> L
            out.extend(range(step, self.grid, 2 * step))
        return out

    def run(self) -> bool:
        accepted = [0]
        for g in self.order():
            if not self.draw_point(g, accepted):
                return False
            accepted.append(g)
        return True

    def finish(self) -> Tuple[List[DyadicInterval], int]:
        limit = 1 << 0
        P = self.P0
        while True:
            vals = [self.value(g, P) for g in range(self.grid + 1)]
            if all(hi - lo <= (limit << (P - self.n)) for lo, hi in vals):
                return [DyadicInterval.from_scaled(lo, hi, P) for lo, hi in vals], P
            P += 8

    @property
    def bits_used(self) -> int:
        return self.bits_discarded + sum(z.bits_used for z in self.z.values())


def _as_param(C, cap: int) -> Optional[_Param]:
    if C is None or (isinstance(C, float) and math.isinf(C)):
        return None
    return _Param(C, cap)


def sample_path(fam, C, s: BitStream, depth: int, n: int,
                cap: int = DEFAULT_PRECISION_CAP, max_attempts: int = 1000,
                max_restarts: int = 100, moc_levels: int = 8) -> WienerPath:
    """Sample ``W`` on the grid ``k / 2**depth`` with enclosures of width ``<= 2**-n``.

    ``C`` may be an exact number, a :class:`DyadicInterval`, a
    :class:`LazySample` (refined as needed), or ``None`` / ``math.inf`` to
    switch rejection off.  A value that fails its check is drawn again; a
    point that fails ``max_attempts`` times restarts the whole path.
    """
    if depth < 0 or n < 0:
        raise ValueError("depth and precision must be non-negative")
    fam = family(fam)
    param = _as_param(C, cap)
    restarts = 0
    rejections = undecided = bits = 0
    while True:
        sp = _PathSampler(fam, param, s, depth, n, cap, max_attempts)
        ok = sp.run()
        rejections += sp.rejections
        undecided += sp.undecided
        if ok:
            break
        bits += sp.bits_used
        restarts += 1
        if restarts > max_restarts:
            raise PathRestartLimit(f"no path accepted after {restarts} restarts")
    values, P = sp.finish()
    bits += sp.bits_used + (param.bits_used if param is not None else 0)
    if param is None:
        cert = Certificate(fam.family_id, None, [])
    else:
        Cenc = param.at(P)
        cert = Certificate(fam.family_id, Cenc, moc_table(fam, Cenc, moc_levels, cap))
    diag = {"rejections": rejections, "undecided": undecided, "restarts": restarts,
            "bits_used": bits}
    return WienerPath(depth, values, cert, diag)


# ---------------------------------------------------------------------------
# Recovering c from a path


@dataclass(frozen=True)
class CEstimate:
    """Enclosure of ``c`` with status flags.

    ``at_floor`` means the grid increments are dominated already at
    ``C = 1``; ``resolved`` is False when bisection stopped early because
    the value enclosures were too wide to decide.
    """

    interval: DyadicInterval
    at_floor: bool = False
    resolved: bool = True

    @property
    def lo(self) -> Dyadic:
        return self.interval.lo

    @property
    def hi(self) -> Dyadic:
        return self.interval.hi


def _grid_values(values) -> List[DyadicInterval]:
    if isinstance(values, WienerPath):
        return list(values.values)
    out = []
    for v in values:
        if isinstance(v, DyadicInterval):
            out.append(v)
        elif isinstance(v, Dyadic):
            out.append(DyadicInterval.point(v))
        else:
            out.append(enclose(Fraction(v), 64))
    return out


def _lag_extremes(vals: List[DyadicInterval], Q: int) -> Tuple[List[int], List[int]]:
    fx = [v.scaled(Q) for v in vals]
    N = len(fx) - 1
    mlo = [0] * (N + 1)
    mhi = [0] * (N + 1)
    for i in range(N + 1):
        il, ih = fx[i]
        for j in range(i + 1, N + 1):
            jl, jh = fx[j]
            lag = j - i
            dl = max(0, il - jh, jl - ih)
            dh = max(ih - jl, jh - il)
            if dl > mlo[lag]:
                mlo[lag] = dl
            if dh > mhi[lag]:
                mhi[lag] = dh
    return mlo, mhi


def compute_c(values, fam="levy", n: int = 16, max_c: int = 1 << 30) -> CEstimate:
    """Enclose the least ``C >= 1`` whose ``omega(., C)`` dominates the grid increments.

    ``values`` holds ``W(k / 2**d)`` for ``k = 0..2**d`` (or is a
    :class:`WienerPath`).  Only grid pairs are compared, so the result can
    only under-estimate ``c`` of the underlying continuous path.
    """
    fam = family(fam)
    vals = _grid_values(values)
    N = len(vals) - 1
    if N < 1 or N & (N - 1):
        raise ValueError(f"expected 2**d + 1 grid values, got {len(vals)}")
    depth = N.bit_length() - 1
    Q = n + 16 + depth
    mlo, mhi = _lag_extremes(vals, Q)
    lags = [lag for lag in range(1, N + 1)]

    scale = 2.0 ** -Q
    flo = [m * scale for m in mlo]
    fhi = [m * scale for m in mhi]

    def dominates(C: Dyadic) -> Optional[bool]:
        c = DyadicInterval.point(C)
        cf = float(C)
        undecided = False
        for lag in lags:
            of = fam.omega_float(lag / N, cf)
            if of is not None:
                if of * (1 + FLOAT_TOL) < flo[lag]:
                    return False
                if of * (1 - FLOAT_TOL) > fhi[lag]:
                    continue
            ol, oh = fam.omega(DyadicInterval.point(Dyadic(lag, -depth)), c, Q).scaled(Q)
            if oh < mlo[lag]:
                return False
            if ol <= mhi[lag]:
                undecided = True
        return None if undecided else True

    one = Dyadic(1)
    first = dominates(one)
    if first is True:
        return CEstimate(DyadicInterval.point(one), at_floor=True)
    lo = one
    hi = Dyadic(2)
    while True:
        r = dominates(hi)
        if r is True:
            break
        if r is False:
            lo = hi
        if hi > max_c:
            raise ArithmeticError(f"no C <= {max_c} dominates the grid increments")
        hi = hi * 2
    limit = Dyadic(1, -n)
    while hi - lo > limit:
        mid = (lo + hi).shift(-1)
        r = dominates(mid)
        if r is None:
            return CEstimate(DyadicInterval(lo, hi), resolved=False)
        if r:
            hi = mid
        else:
            lo = mid
    return CEstimate(DyadicInterval(lo, hi))
