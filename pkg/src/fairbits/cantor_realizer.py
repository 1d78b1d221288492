"""Pushing fair coin flips onto an arbitrary measure on Cantor space.

Order the words of length ``n`` lexicographically and give word ``w`` the
open interval

    I_w = ( sum_{v < w} g(v), sum_{v <= w} g(v) )

of length ``g(w)``.  The children ``I_w0`` and ``I_w1`` split ``I_w`` at
``L_w + g(w0)``.  An input sequence ``u`` determines the output bit at depth
``n + 1`` as soon as the dyadic interval of its known prefix lies strictly
inside one child.  Inputs whose binary value equals an interval end never
decide; there are countably many of them and :class:`StallError` reports
them once the input budget is spent.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from .bitsource import BitStream, Word, rho_b_enclosure, word
from .dyadic import DEFAULT_PRECISION_CAP, Dyadic, DyadicInterval, Ordering, compare_strict, enclose
from .measures import ValidationError, parse_exact

__all__ = [
    "CylinderWeights",
    "IntervalPartition",
    "StallError",
    "Realizer",
    "interval_partition",
    "push_bits",
    "load_weights_json",
]


class StallError(ArithmeticError):
    """The input prefix still straddles an interval end after the input budget.

    ``prefix`` is the input word read so far and ``endpoint`` the end of the
    candidate interval it could not be separated from.
    """

    def __init__(self, prefix: Word, endpoint, emitted: Word):
        self.prefix = prefix
        self.endpoint = endpoint
        self.emitted = emitted
        shown = "".join(map(str, prefix[:64])) + ("..." if len(prefix) > 64 else "")
        super().__init__(
            f"undecided after {len(prefix)} input bits ({shown}); "
            f"interval end {endpoint} lies in {rho_b_enclosure(prefix)}; "
            f"emitted {''.join(map(str, emitted)) or 'nothing'}")


WeightValue = Union[Fraction, DyadicInterval]


class CylinderWeights:
    """A Borel probability measure on Cantor space via its cylinder masses.

    Either an exact table (word -> rational) up to a fixed depth, or a
    function of the word returning an exact rational, or a function of
    ``(word, n)`` returning an enclosure of width ``<= 2**-n``.
    """

    def __init__(self, fn: Callable, exact: bool = True, depth: Optional[int] = None,
                 name: str = "weights"):
        self._fn = fn
        self.exact = exact
        self.depth = depth
        self.name = name

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_table(cls, table: Mapping, name: str = "table") -> "CylinderWeights":
        """Validate a finite table and wrap it.

        Keys are bit strings (``"01"``) or words; values exact rationals or
        strings like ``"1/3"``.  All words of the deepest length must be
        present; missing shorter words are filled in by summing children,
        present ones must match that sum exactly.
        """
        weights: Dict[Word, Fraction] = {}
        for k, v in table.items():
            w = word(k) if not isinstance(k, tuple) else k
            try:
                q = parse_exact(v) if isinstance(v, str) else Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"cylinder {_show(w)}: bad weight {v!r}") from exc
            if not 0 <= q <= 1:
                raise ValidationError(f"cylinder {_show(w)}: weight {q} outside [0, 1]")
            weights[w] = q
        depth = max((len(w) for w in weights), default=0)
        for w in itertools.product((0, 1), repeat=depth):
            if w not in weights:
                raise ValidationError(f"cylinder {_show(w)}: missing weight at depth {depth}")
        for n in range(depth - 1, -1, -1):
            for w in itertools.product((0, 1), repeat=n):
                s = weights[w + (0,)] + weights[w + (1,)]
                if w in weights and weights[w] != s:
                    raise ValidationError(
                        f"cylinder {_show(w)}: weight {weights[w]} != "
                        f"{weights[w + (0,)]} + {weights[w + (1,)]} of its children")
                weights[w] = s
        if weights[()] != 1:
            raise ValidationError(f"cylinder {_show(())}: total mass {weights[()]} != 1")

        def fn(w: Word) -> Fraction:
            try:
                return weights[w]
            except KeyError:
                raise ValidationError(f"cylinder {_show(w)}: deeper than table depth {depth}")

        g = cls(fn, exact=True, depth=depth, name=name)
        g.table = weights
        return g

    @classmethod
    def from_function(cls, fn: Callable[[Word], Fraction], name: str = "function"
                      ) -> "CylinderWeights":
        """Exact weights of unbounded depth, ``fn(word) -> rational``."""
        return cls(lambda w: Fraction(fn(w)), exact=True, name=name)

    @classmethod
    def from_enclosures(cls, fn: Callable[[Word, int], DyadicInterval], name: str = "enclosures"
                        ) -> "CylinderWeights":
        """Weights known only through enclosures ``fn(word, n)``."""
        return cls(fn, exact=False, name=name)

    @classmethod
    def fair(cls) -> "CylinderWeights":
        return cls(lambda w: Fraction(1, 1 << len(w)), exact=True, name="fair")

    # -- evaluation -------------------------------------------------------

    def weight(self, w: Word) -> Fraction:
        if not self.exact:
            raise TypeError("weights are only available as enclosures")
        return self._fn(tuple(w))

    def enclosure(self, w: Word, n: int) -> DyadicInterval:
        if self.exact:
            return enclose(self._fn(tuple(w)), n)
        return self._fn(tuple(w), n)

    def check(self, depth: int, n: int = 64) -> None:
        """Check consistency of all words up to ``depth``; raise on a violation."""
        for d in range(depth):
            for w in itertools.product((0, 1), repeat=d):
                if self.exact:
                    a, b, c = self.weight(w), self.weight(w + (0,)), self.weight(w + (1,))
                    if not (0 <= b and 0 <= c and a == b + c):
                        raise ValidationError(
                            f"cylinder {_show(w)}: weight {a} != {b} + {c} of its children")
                else:
                    a = self.enclosure(w, n)
                    s = self.enclosure(w + (0,), n) + self.enclosure(w + (1,), n)
                    if compare_strict(a, s) is not Ordering.OVERLAP:
                        raise ValidationError(
                            f"cylinder {_show(w)}: weight {a} incompatible with children sum {s}")
        root = self.enclosure((), n)
        if not root.contains(Dyadic(1)):
            raise ValidationError(f"cylinder {_show(())}: total mass {root} != 1")


def _show(w: Word) -> str:
    return "'" + "".join(map(str, w)) + "'" if w else "'' (root)"


def load_weights_json(source: Union[str, Path, dict]) -> CylinderWeights:
    """Load ``{"0": "1/3", "1": "2/3", ...}`` from a path, JSON text or dict."""
    if isinstance(source, dict):
        data = source
        name = "weights"
    else:
        p = Path(source)
        if p.exists():
            data = json.loads(p.read_text())
            name = p.name
        else:
            data = json.loads(str(source))
            name = "weights"
    if not isinstance(data, dict):
        raise ValidationError("weights JSON must be an object mapping bit strings to rationals")
    return CylinderWeights.from_table(data, name=name)


@dataclass(frozen=True)
class IntervalPartition:
    depth: int
    intervals: Dict[Word, Tuple[Fraction, Fraction]]

    def __getitem__(self, w) -> Tuple[Fraction, Fraction]:
        return self.intervals[word(w) if isinstance(w, str) else tuple(w)]

    def length(self, w) -> Fraction:
        a, b = self[w]
        return b - a


def interval_partition(g: CylinderWeights, n: int) -> IntervalPartition:
    """The open intervals ``I_w`` for all words of length ``n`` (exact weights)."""
    g.check(n)
    out: Dict[Word, Tuple[Fraction, Fraction]] = {}
    acc = Fraction(0)
    for w in itertools.product((0, 1), repeat=n):
        b = acc + g.weight(w)
        out[w] = (acc, b)
        acc = b
    return IntervalPartition(n, out)


class Realizer:
    """Lazily emits the output sequence ``F(u)`` for the input stream ``u``.

    Behaves like a :class:`BitStream` (``next_bit``, ``consumed_count``), so
    realizers compose with each other and with :func:`sample_real`.
    ``input_cap`` bounds the number of input bits read in total.
    """

    def __init__(self, g: CylinderWeights, s: BitStream, input_cap: int = DEFAULT_PRECISION_CAP):
        self.g = g
        self.s = s
        self.input_cap = input_cap
        self.out: List[int] = []
        self.prefix: List[int] = []
        self._a = 0
        self._k = 0
        # left end of I_out, exact
        self._left = Fraction(0)

    @property
    def consumed_count(self) -> int:
        return len(self.out)

    @property
    def input_bits(self) -> int:
        return self._k

    def _draw(self) -> None:
        b = self.s.next_bit()
        self.prefix.append(b)
        self._a = (self._a << 1) | b
        self._k += 1

    def next_bit(self) -> int:
        if self.g.exact:
            bit = self._next_exact()
        else:
            bit = self._next_enclosed()
        self.out.append(bit)
        return bit

    def _next_exact(self) -> int:
        w = tuple(self.out)
        left = self._left
        mid = left + self.g.weight(w + (0,))
        right = left + self.g.weight(w)
        ln, ld = left.numerator, left.denominator
        mn, md = mid.numerator, mid.denominator
        rn, rd = right.numerator, right.denominator
        while True:
            a, k = self._a, self._k
            lo_n = a * ld          # compare a / 2^k with left
            hi = (a + 1)
            # J = [a, a+1] / 2^k strictly inside (left, mid)?
            if lo_n > (ln << k) and hi * md < (mn << k):
                return 0
            if a * md > (mn << k) and hi * rd < (rn << k):
                self._left = mid
                return 1
            if k >= self.input_cap:
                raise StallError(tuple(self.prefix), self._straddled(left, mid, right), w)
            self._draw()

    def _straddled(self, *ends):
        j = rho_b_enclosure(self.prefix)
        for e in ends:
            if j.lo <= e <= j.hi:
                return e
        return ends[1]

    def _next_enclosed(self) -> int:
        w = tuple(self.out)
        g = self.g
        while True:
            k = self._k
            j = rho_b_enclosure(self.prefix)
            jlo, jhi = DyadicInterval.point(j.lo), DyadicInterval.point(j.hi)
            p = min(k + 8, self.input_cap)
            left = DyadicInterval.point(Dyadic(0))
            for i, b in enumerate(w):
                if b:
                    left = left + g.enclosure(w[:i] + (0,), p)
            mid = left + g.enclosure(w + (0,), p)
            right = left + g.enclosure(w, p)
            if (compare_strict(left, jlo) is Ordering.LT
                    and compare_strict(jhi, mid) is Ordering.LT):
                return 0
            if (compare_strict(mid, jlo) is Ordering.LT
                    and compare_strict(jhi, right) is Ordering.LT):
                return 1
            if k >= self.input_cap:
                raise StallError(tuple(self.prefix), mid, w)
            self._draw()

    def take(self, m: int) -> Word:
        while len(self.out) < m:
            self.next_bit()
        return tuple(self.out[:m])


def push_bits(g: CylinderWeights, s: BitStream, m: int,
              input_cap: int = DEFAULT_PRECISION_CAP) -> Word:
    """The first ``m`` output bits of the realizer for ``g`` on input ``s``.

    Input bits are read only as needed.  Raises :class:`StallError` if
    ``input_cap`` input bits do not separate the input from an interval end.
    """
    if m < 0:
        raise ValueError("output length must be non-negative")
    return Realizer(g, s, input_cap).take(m)
