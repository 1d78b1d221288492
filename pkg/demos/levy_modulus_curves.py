"""The two-branch Lévy modulus, as printed and with a tangent continuation.

For h up to 1/(E c) both families are sqrt(2 c h ln(1/h)).  Beyond it they
continue linearly from y_c.  With y_c = sqrt(2 ln(E c)/c) (the printed
form) the curve jumps at the branch point unless c = E; the tangent form
uses the left branch's own value there and stays continuous.

    python3 demos/levy_modulus_curves.py > omega.csv

Columns: family, c, h, omega_lo, omega_hi.  Stderr lists the jump at the
branch point for each c.
"""

import csv
import math
import sys
from fractions import Fraction

from fairbits.dyadic import Dyadic
from fairbits.wiener import family

CS = [Fraction(1), Fraction(2), Fraction(11, 4), Fraction(4), Fraction(8)]


def main(depth: int = 8) -> None:
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["family", "c", "h", "omega_lo", "omega_hi"])
    for fam_id in ("levy", "levy-tangent"):
        fam = family(fam_id)
        for c in CS:
            for k in range((1 << depth) + 1):
                v = fam.omega(Dyadic(k, -depth), c, 30)
                out.writerow([fam_id, float(c), k / (1 << depth), f"{float(v.lo):.9f}", f"{float(v.hi):.9f}"])
    for c in CS:
        b = 1 / (math.e * float(c))
        left = math.sqrt(2 * float(c) * b * math.log(1 / b))
        right = math.sqrt(2 * math.log(math.e * float(c)) / float(c))
        print(f"c = {float(c):5.2f}: branch point h = {b:.4f}, left value {left:.4f}, "
              f"printed y_c {right:.4f}, jump {right - left:+.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
