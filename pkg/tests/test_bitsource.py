import pytest
from scipy import stats

from fairbits.bitsource import BitStream, rho_b_enclosure, word
from fairbits.dyadic import Dyadic, DyadicInterval


def test_same_seed_same_bits():
    a, b = BitStream(0), BitStream(0)
    assert [a.next_bit() for _ in range(1000)] == [b.next_bit() for _ in range(1000)]
    assert BitStream(0).take(64) != BitStream(1).take(64)


def test_consumed_count():
    s = BitStream(3)
    for _ in range(17):
        s.next_bit()
    assert s.consumed_count == 17
    s.bits(100)
    assert s.consumed_count == 117


def test_bulk_draws_match_single_draws():
    a, b = BitStream(9), BitStream(9)
    singles = [a.next_bit() for _ in range(1500)]
    bulk = []
    for k in (1, 7, 500, 511, 481):
        v = b.bits(k)
        bulk.extend((v >> (k - 1 - i)) & 1 for i in range(k))
    assert bulk == singles
    assert [BitStream(9).bit_at(i) for i in range(0, 1500, 37)] == singles[::37]


def test_mean_of_bits():
    s = BitStream(12345)
    n = 100_000
    ones = bin(s.bits(n)).count("1")
    sigma = (0.25 / n) ** 0.5
    assert abs(ones / n - 0.5) <= 4 * sigma


def test_three_bit_blocks_chi_square():
    s = BitStream(2024)
    n = 99_999
    v = s.bits(n)
    counts = [0] * 8
    for i in range(n // 3):
        counts[(v >> (n - 3 * (i + 1))) & 7] += 1
    assert stats.chisquare(counts).pvalue > 0.001


def test_children_are_pure_and_distinct():
    s = BitStream(5)
    assert s.child(3).take(128) == BitStream(5).child(3).take(128)
    assert s.child(3).take(128) != s.child(4).take(128)
    assert s.child(0).take(128) != BitStream(5).take(128)
    # drawing from the parent does not affect children
    s.bits(1000)
    assert s.child(3).take(128) == BitStream(5).child(3).take(128)


def test_spawn_sequence_and_replay():
    s = BitStream(8)
    assert s.spawn().take(32) == BitStream(8).child(0).take(32)
    assert s.spawn().take(32) == BitStream(8).child(1).take(32)
    first = s.take(50)
    assert s.replay().take(50) == first


def test_periodic_stream():
    s = BitStream.periodic("01", prefix="1")
    assert s.take(7) == (1, 0, 1, 0, 1, 0, 1)
    assert s.replay().take(3) == (1, 0, 1)
    with pytest.raises(ValueError):
        s.child(0)


def test_entropy_mode():
    s = BitStream()
    assert s.mode == "entropy"
    assert len(s.take(100)) == 100 and s.consumed_count == 100
    with pytest.raises(ValueError):
        s.replay()
    assert s.child(1).mode == "seeded"


def test_seed_range():
    with pytest.raises(ValueError):
        BitStream(-1)
    with pytest.raises(ValueError):
        BitStream(1 << 64)
    BitStream((1 << 64) - 1)


@pytest.mark.parametrize("w, lo, hi", [
    ("", Dyadic(0), Dyadic(1)),
    ("1", Dyadic(1, -1), Dyadic(1)),
    ("0100", Dyadic(1, -2), Dyadic(5, -4)),
])
def test_rho_b_examples(w, lo, hi):
    assert rho_b_enclosure(word(w)) == DyadicInterval(lo, hi)


def test_rho_b_halving():
    s = BitStream(77)
    for n in range(12):
        w = s.take(n)
        whole = rho_b_enclosure(w)
        left, right = rho_b_enclosure(w + (0,)), rho_b_enclosure(w + (1,))
        assert whole.width == Dyadic(1, -n)
        assert left.lo == whole.lo and right.hi == whole.hi and left.hi == right.lo


def test_word_validation():
    assert word("0110") == (0, 1, 1, 0)
    with pytest.raises(ValueError):
        word("012")
