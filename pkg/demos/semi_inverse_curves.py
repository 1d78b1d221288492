"""Lower and upper semi-inverses of the built-in distributions.

Sampling works by feeding a uniform t through F_< (or F_>).  Where the two
differ the distribution has a gap in its support; where F_< is flat it has
an atom.  This script tabulates both on a grid of t so the shapes can be
plotted side by side:

    python3 demos/semi_inverse_curves.py > curves.csv

Columns: dist, t, lower, upper (decimal midpoints of 2^-24 enclosures).
"""

import csv
import sys
from fractions import Fraction

from fairbits.dyadic import Dyadic, DyadicInterval
from fairbits.measures import cdf_from_table, make_cantor, make_dirac, make_gaussian, make_uniform

DISTS = {
    "uniform": make_uniform(),
    "gaussian": make_gaussian(),
    "cantor": make_cantor(),
    "dirac(1/3)": make_dirac(Fraction(1, 3)),
    # atom of 1/4 at 0, no mass on (1, 2), linear pieces elsewhere
    "table": cdf_from_table([(0, Fraction(1, 4)), (1, Fraction(1, 2)), (2, Fraction(1, 2)), (3, 1)]),
}


def main(depth: int = 7) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["dist", "t", "lower", "upper"])
    for name, mu in DISTS.items():
        for k in range(1, 1 << depth):
            t = DyadicInterval.point(Dyadic(k, -depth))
            lo = mu.eval_lower(t, 24).midpoint
            hi = mu.eval_upper(t, 24).midpoint
            out.writerow([name, k / (1 << depth), f"{float(lo):.8f}", f"{float(hi):.8f}"])
    # the Cantor semi-inverses split exactly at t = 1/2: the middle third is skipped
    c = DISTS["cantor"]
    half = DyadicInterval.point(Dyadic(1, -1))
    print(f"cantor at t=1/2: lower {c.eval_lower(half, 24).to_decimal(8)}, "
          f"upper {c.eval_upper(half, 24).to_decimal(8)}", file=sys.stderr)


if __name__ == "__main__":
    main()
