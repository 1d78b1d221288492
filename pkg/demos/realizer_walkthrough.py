"""Turning fair coin flips into a biased measure on bit sequences.

A measure on {0,1}^N is given by its cylinder weights.  Ordering the words
of each length lexicographically cuts [0, 1] into intervals of those
lengths; an input sequence emits output bit w as soon as the binary
interval of its prefix lands strictly inside the interval of w.  Inputs
that land exactly on a cut never decide.  This script prints the cuts for
a depth-2 table, a few pushes with their input cost, and the input that
stalls against the weight 1/3.

    python3 demos/realizer_walkthrough.py
"""

from fractions import Fraction

from fairbits.bitsource import BitStream
from fairbits.cantor_realizer import CylinderWeights, Realizer, StallError, interval_partition, push_bits

TABLE = {"00": Fraction(1, 6), "01": Fraction(1, 6), "10": Fraction(1, 3), "11": Fraction(1, 3)}


def main() -> None:
    g = CylinderWeights.from_table(TABLE)
    part = interval_partition(g, 2)
    print("word  interval")
    for w, (a, b) in part.intervals.items():
        print(f"{''.join(map(str, w))}    ({a}, {b})")

    print("\nseed  output  input bits read")
    for seed in range(6):
        r = Realizer(g, BitStream(seed))
        out = r.take(2)
        print(f"{seed:4d}  {''.join(map(str, out))}      {r.input_bits}")

    half = CylinderWeights.from_table({"0": Fraction(1, 3), "1": Fraction(2, 3)})
    try:
        push_bits(half, BitStream.periodic("01"), 1, input_cap=64)
    except StallError as exc:
        print(f"\ninput 0101... against the cut 1/3: {exc}")


if __name__ == "__main__":
    main()
