"""How rejection against omega(., C) shrinks the marginals of sampled paths.

Each path draws C from the shipped c-table and then grows a depth-6 grid
by Brownian-bridge midpoints, redrawing any value that would break
|W(s) - W(t)| < omega(|s - t|, C).  Since C is drawn before and apart from
W, accepted paths are Brownian paths conditioned on a random envelope, so
their spread sits below that of unconditioned Brownian motion.  The
Schauder series supplies the unconditioned reference.

    python3 demos/marginal_bias.py [paths] > bias.csv

Columns: source, t, variance, ks_pvalue_vs_normal.
"""

import csv
import sys
from fractions import Fraction

from fairbits.bitsource import BitStream
from fairbits.oracle import ks_test, levy_ciesielski, normal_cdf
from fairbits.wiener import default_cdist, sample_c, sample_path

TIMES = {Fraction(1, 4): 16, Fraction(1, 2): 32, Fraction(3, 4): 48, Fraction(1): 64}


def main(paths: int = 1000) -> None:
    root = BitStream(2024)
    cd = default_cdist()
    sampled = {t: [] for t in TIMES}
    reference = {t: [] for t in TIMES}
    rejections = 0
    for k in range(paths):
        sub = root.child(0).child(k)
        p = sample_path("levy", sample_c(cd, sub.child(0), 16), sub.child(1), 6, 16)
        rejections += p.diagnostics["rejections"]
        for t, i in TIMES.items():
            sampled[t].append(float(p.values[i].midpoint))
        for t, v in zip(TIMES, levy_ciesielski(6, root.child(1).child(k), list(TIMES))):
            reference[t].append(float(v.midpoint))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["source", "t", "variance", "ks_pvalue_vs_normal"])
    for source, data in (("sample_path", sampled), ("schauder", reference)):
        for t, xs in data.items():
            var = sum(x * x for x in xs) / len(xs)
            p = ks_test(xs, normal_cdf(float(t))).pvalue
            out.writerow([source, float(t), f"{var:.4f}", f"{p:.4g}"])
    print(f"{paths} paths, {rejections / paths:.1f} rejected draws per path on average",
          file=sys.stderr)


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 1000)
