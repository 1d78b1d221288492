"""Fair coin flips and the binary-expansion map onto [0, 1].

Seeded streams are counter based: block ``j`` of 512 bits is the keyed
BLAKE2b digest of ``j``, so any bit index is addressable without replaying
the prefix, and child streams derived from ``(key, k)`` never collide with
the parent's bit blocks (distinct ``person`` tags separate the key domains).
"""

from __future__ import annotations

import hashlib
import os
from typing import Iterable, Sequence, Tuple, Union

from .dyadic import Dyadic, DyadicInterval

__all__ = ["BitStream", "Word", "word", "rho_b_enclosure", "EntropyError"]

Word = Tuple[int, ...]

_BLOCK_BITS = 512
_BLOCK_BYTES = _BLOCK_BITS // 8
_SEED_MASK = (1 << 64) - 1


class EntropyError(OSError):
    """The operating system entropy source failed."""


def _digest(key: bytes, data: bytes, person: bytes, size: int = 32) -> bytes:
    return hashlib.blake2b(data, key=key, person=person, digest_size=size).digest()


def word(bits: Union[str, Iterable[int]]) -> Word:
    """Build a :data:`Word` from ``"0110"`` or an iterable of 0/1."""
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"not a binary word: {bits!r}")
    return out


def rho_b_enclosure(w: Sequence[int]) -> DyadicInterval:
    """Image of the cylinder ``w C`` under ``b -> sum b_j 2^(-j-1)``.

    >>> rho_b_enclosure((0, 1, 0, 0))
    DyadicInterval(Dyadic(1, -2), Dyadic(5, -4))
    """
    a = 0
    for b in w:
        a = (a << 1) | b
    n = len(w)
    return DyadicInterval(Dyadic(a, -n), Dyadic(a + 1, -n))


class BitStream:
    """A consumable source of fair bits.

    ``BitStream(seed)`` is deterministic; ``BitStream()`` reads the OS
    entropy pool.  :meth:`periodic` builds a deterministic stream repeating
    a fixed pattern, which is how exceptional inputs are fed to realizers.

    A stream is single-consumer.  :meth:`child` and :meth:`spawn` derive
    independent substreams that share no state with the parent.
    """

    __slots__ = ("_key", "_mode", "_pattern", "consumed_count", "_block", "_block_index",
                 "_spawned", "seed")

    def __init__(self, seed: int | None = None):
        self.consumed_count = 0
        self._block = 0
        self._block_index = -1
        self._spawned = 0
        self._pattern = None
        self.seed = seed
        if seed is None:
            self._mode = "entropy"
            self._key = _urandom(32)
        else:
            if not 0 <= seed <= _SEED_MASK:
                raise ValueError("seed must be an unsigned 64-bit integer")
            self._mode = "seeded"
            self._key = _digest(b"", seed.to_bytes(8, "little"), b"fairbits-root")

    @classmethod
    def _from_key(cls, key: bytes) -> "BitStream":
        s = cls.__new__(cls)
        s.consumed_count = 0
        s._block = 0
        s._block_index = -1
        s._spawned = 0
        s._pattern = None
        s.seed = None
        s._mode = "seeded"
        s._key = key
        return s

    @classmethod
    def periodic(cls, pattern: Union[str, Sequence[int]], prefix: Union[str, Sequence[int]] = ()
                 ) -> "BitStream":
        """Deterministic stream ``prefix`` followed by ``pattern`` repeated forever."""
        s = cls._from_key(b"")
        s._mode = "pattern"
        s._pattern = (word(prefix), word(pattern))
        if not s._pattern[1]:
            raise ValueError("empty pattern")
        return s

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def key(self) -> bytes:
        return self._key

    # -- drawing ----------------------------------------------------------

    def _load(self, j: int) -> int:
        if self._mode == "entropy":
            raw = _urandom(_BLOCK_BYTES)
        else:
            raw = _digest(self._key, j.to_bytes(16, "little"), b"fairbits-bits", _BLOCK_BYTES)
        return int.from_bytes(raw, "big")

    def bit_at(self, i: int) -> int:
        """Bit ``i`` of a seeded or pattern stream, without consuming anything."""
        if self._mode == "pattern":
            prefix, pat = self._pattern
            if i < len(prefix):
                return prefix[i]
            return pat[(i - len(prefix)) % len(pat)]
        if self._mode == "entropy":
            raise ValueError("entropy streams are not addressable")
        j, r = divmod(i, _BLOCK_BITS)
        block = self._load(j)
        return (block >> (_BLOCK_BITS - 1 - r)) & 1

    def next_bit(self) -> int:
        i = self.consumed_count
        if self._mode == "pattern":
            b = self.bit_at(i)
        else:
            j, r = divmod(i, _BLOCK_BITS)
            if j != self._block_index:
                self._block = self._load(j)
                self._block_index = j
            b = (self._block >> (_BLOCK_BITS - 1 - r)) & 1
        self.consumed_count = i + 1
        return b

    def bits(self, k: int) -> int:
        """Draw ``k`` bits at once, returned big-endian as an integer."""
        if k <= 0:
            return 0
        if self._mode == "pattern":
            out = 0
            for _ in range(k):
                out = (out << 1) | self.next_bit()
            return out
        i = self.consumed_count
        out = 0
        need = k
        while need:
            j, r = divmod(i, _BLOCK_BITS)
            if j != self._block_index:
                self._block = self._load(j)
                self._block_index = j
            take = min(need, _BLOCK_BITS - r)
            chunk = (self._block >> (_BLOCK_BITS - r - take)) & ((1 << take) - 1)
            out = (out << take) | chunk
            i += take
            need -= take
        self.consumed_count = i
        return out

    def take(self, k: int) -> Word:
        v = self.bits(k)
        return tuple((v >> (k - 1 - i)) & 1 for i in range(k))

    # -- substreams -------------------------------------------------------

    def child(self, k: int) -> "BitStream":
        """The ``k``-th derived substream; a pure function of ``(key, k)``."""
        if self._mode == "pattern":
            raise ValueError("pattern streams have no substreams")
        return BitStream._from_key(_digest(self._key, int(k).to_bytes(16, "little", signed=True),
                                           b"fairbits-child"))

    def spawn(self) -> "BitStream":
        """A fresh substream; successive calls yield ``child(0), child(1), ...``."""
        c = self.child(self._spawned)
        self._spawned += 1
        return c

    def replay(self) -> "BitStream":
        """A copy rewound to bit 0 (seeded and pattern streams only)."""
        if self._mode == "entropy":
            raise ValueError("entropy streams cannot be replayed")
        if self._mode == "pattern":
            return BitStream.periodic(self._pattern[1], self._pattern[0])
        return BitStream._from_key(self._key)

    def __repr__(self):
        return f"BitStream(mode={self._mode!r}, consumed={self.consumed_count})"


def _urandom(n: int) -> bytes:
    try:
        return os.urandom(n)
    except (OSError, NotImplementedError) as exc:
        raise EntropyError(f"OS entropy source failed: {exc}") from exc
