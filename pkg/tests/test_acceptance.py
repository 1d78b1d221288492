"""The ten acceptance criteria at their stated sizes and tolerances.

Each ``acN`` returns ``(passed, detail)``.  Under pytest every criterion
prints one ``AC<N> PASS|FAIL`` line (even without ``-s``) and then asserts;
``python3 tests/test_acceptance.py`` runs them all and prints the lines only.
"""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import encloses, mpf  # noqa: E402
from fairbits.bitsource import BitStream  # noqa: E402
from fairbits.cantor_realizer import CylinderWeights, StallError, push_bits  # noqa: E402
from fairbits.dyadic import (  # noqa: E402
    DEFAULT_PRECISION_CAP,
    Dyadic,
    DyadicInterval,
    Ordering,
    compare_strict,
    precision_ladder,
)
from fairbits.measures import (  # noqa: E402
    cdf_from_table,
    make_cantor,
    make_dirac,
    make_gaussian,
    make_uniform,
    sample_real,
)
from fairbits.oracle import donsker, ks_2sample, ks_test, levy_ciesielski, normal_cdf  # noqa: E402
from fairbits.suites import certificate_violations, random_weight_table  # noqa: E402
from fairbits.wiener import binary_moc, compute_c, default_cdist, levy_omega, sample_c, sample_path  # noqa: E402

ALPHA = 0.01


def pt(q):
    return DyadicInterval.point(Dyadic.coerce(q))


def ac1():
    t0 = time.perf_counter()
    root = BitStream(101)
    worst = 0.0
    for ti in range(5):
        sub = root.child(ti)
        table = random_weight_table(random.Random(1000 + ti), 3)
        g = CylinderWeights.from_table(table)
        runs = 100_000
        counts = dict.fromkeys(table, 0)
        for k in range(runs):
            counts["".join(map(str, push_bits(g, sub.child(k), 3)))] += 1
        for w, p in table.items():
            p = float(p)
            if p in (0.0, 1.0):
                z = 0.0 if counts[w] == p * runs else math.inf
            else:
                z = abs(counts[w] / runs - p) / math.sqrt(p * (1 - p) / runs)
            worst = max(worst, z)
    elapsed = time.perf_counter() - t0
    return worst <= 4.0 and elapsed < 30, f"max |z| = {worst:.2f} over 5 tables x 1e5 runs, {elapsed:.1f}s"


def ac2():
    g = CylinderWeights.from_table({"0": Fraction(1, 3), "1": Fraction(2, 3)})
    rungs = list(precision_ladder(4, DEFAULT_PRECISION_CAP))
    stalled = 0
    for cap in rungs:
        try:
            push_bits(g, BitStream.periodic("01"), 1, input_cap=cap)
        except StallError:
            stalled += 1
    root = BitStream(102)
    finished = 0
    for k in range(1000):
        try:
            push_bits(g, root.child(k), 1)
            finished += 1
        except StallError:
            pass
    ok = stalled == len(rungs) and finished == 1000
    return ok, f"0101... stalled at {stalled}/{len(rungs)} rungs {rungs}; {finished}/1000 seeds finished"


def ac3():
    dists = {"uniform": make_uniform(), "gaussian": make_gaussian(), "cantor": make_cantor()}
    root = BitStream(103)
    tallies = {}
    for di, (name, mu) in enumerate(dists.items()):
        passes = 0
        for seed in range(20):
            sub = root.child(di).child(seed)
            xs = [sample_real(mu, sub.child(k), 16).value for k in range(10_000)]
            passes += ks_test(xs, mu).passes(ALPHA)
        tallies[name] = passes
    dirac_ok = True
    for r in (Fraction(1, 3), Fraction(-5, 7), Fraction(22, 7)):
        mu = make_dirac(r)
        sub = root.child(9)
        for k in range(200):
            v = sample_real(mu, sub.child(k), 24).value
            dirac_ok &= encloses(v, mpmath.mpf(r.numerator) / r.denominator)
    ok = all(p >= 19 for p in tallies.values()) and dirac_ok
    shown = ", ".join(f"{k} {v}/20" for k, v in tallies.items())
    return ok, f"KS passes: {shown}; Dirac enclosures {'all contain r' if dirac_ok else 'MISSED r'}"


def ac4():
    mus = {"uniform": make_uniform(), "gaussian": make_gaussian(), "cantor": make_cantor(),
           "dirac": make_dirac(Fraction(1, 3)),
           "table": cdf_from_table([(0, Fraction(1, 4)), (1, Fraction(1, 2)), (2, Fraction(1, 2)),
                                    (3, 1)])}
    bad = 0
    for mu in mus.values():
        prev = None
        for k in range(1, 256):
            t = pt(Dyadic(k, -8))
            lo, hi = mu.eval_lower(t, 16), mu.eval_upper(t, 16)
            bad += compare_strict(lo, hi) is Ordering.GT
            if prev is not None:
                bad += compare_strict(prev[0], lo) is Ordering.GT
                bad += compare_strict(prev[1], hi) is Ordering.GT
            prev = (lo, hi)
    return bad == 0, f"{bad} certified violations over {len(mus)} built-ins on the 2^8 grid"


def ac5():
    z = levy_omega(pt(0), pt(1), 16)
    q = levy_omega(pt(Fraction(1, 4)), pt(1), 16)
    ref = mpmath.mpf("0.83255")
    near = abs(mpf(q.midpoint) - ref) <= 2 ** -16
    exact = encloses(q, mpmath.sqrt(mpmath.log(4) / 2))
    m = binary_moc("levy", 1, 0)
    ok = z == pt(0) and exact and near and m == 2
    return ok, f"omega(0,1) = {z}; omega(1/4,1) = {q.to_decimal()}; binary_moc(1,0) = {m}"


def ac6():
    t0 = time.perf_counter()
    root = BitStream(106)
    viol = 0
    for k in range(1000):
        viol += certificate_violations(sample_path("levy", 2, root.child(k), 6, 16))
    elapsed = time.perf_counter() - t0
    return viol == 0 and elapsed < 60, f"{viol} violations over 1000 depth-6 paths (C = 2), {elapsed:.1f}s"


def ac7():
    cd = default_cdist()
    root = BitStream(107)
    times = {Fraction(1, 4): 16, Fraction(1, 2): 32, Fraction(3, 4): 48, Fraction(1): 64}
    got = {t: [] for t in times}
    for k in range(5000):
        sub = root.child(0).child(k)
        C = sample_c(cd, sub.child(0), 16)
        p = sample_path("levy", C, sub.child(1), 6, 16)
        for t, i in times.items():
            got[t].append(p.values[i])
    ref = {t: [] for t in list(times)[:3]}
    for k in range(5000):
        v = levy_ciesielski(10, root.child(1).child(k), list(ref))
        for t, x in zip(ref, v):
            ref[t].append(x)
    checks = [("KS W(1) vs N(0,1)", ks_test(got[Fraction(1)], normal_cdf(1.0))),
              ("KS W(1/2) vs N(0,1/2)", ks_test(got[Fraction(1, 2)], normal_cdf(0.5)))]
    for t in ref:
        checks.append((f"2-sample W({t}) vs Schauder", ks_2sample(got[t], ref[t])))
    var1 = sum(float(x.midpoint) ** 2 for x in got[Fraction(1)]) / 5000
    ok = all(r.passes(ALPHA) for _, r in checks)
    shown = "; ".join(f"{name} p={r.pvalue:.3g}" for name, r in checks)
    return ok, f"{shown}; sample Var W(1) = {var1:.3f}"


def ac8():
    root = BitStream(108)
    above = unresolved = 0
    worst = Dyadic(0)
    for k in range(1000):
        p = sample_path("levy", 2, root.child(k), 6, 16)
        r = compute_c(p, "levy", 16)
        above += compare_strict(r.interval, pt(2)) is Ordering.GT
        unresolved += not r.resolved
        worst = max(worst, r.lo)
    return above == 0, (f"{above}/1000 certifiably above C = 2; max lower end {float(worst):.4f}; "
                        f"{unresolved} bisections stopped early")


def ac9():
    root = BitStream(109)
    dk = [donsker(10_000, root.child(0).child(k), [1])[0] for k in range(10_000)]
    lc = [levy_ciesielski(10, root.child(1).child(k), [1])[0] for k in range(10_000)]
    rd, rl = ks_test(dk, normal_cdf(1.0)), ks_test(lc, normal_cdf(1.0))
    exact = True
    for depth in (3, 5, 7):
        ts = [Dyadic(k, -depth) for k in range((1 << depth) + 1)]
        for k in range(10):
            # the series spawns its coefficients from the stream, so each call gets a fresh copy
            def stream():
                return root.child(2).child(depth * 100 + k)
            ref = levy_ciesielski(depth, stream(), ts)
            exact &= all(levy_ciesielski(N, stream(), ts) == ref for N in (depth + 1, depth + 4))
    ok = rd.passes(ALPHA) and rl.passes(ALPHA) and exact
    return ok, f"donsker p={rd.pvalue:.3g}; schauder p={rl.pvalue:.3g}; grid exactness {exact}"


CLI_RUNS = [
    ["--seed", "10", "sample-real", "--dist", "gaussian", "--precision", "24", "--count", "20"],
    ["--seed", "10", "sample-real", "--dist", "cantor", "--count", "20", "--format", "csv"],
    ["--seed", "10", "push", "--weights", '{"00":"1/8","01":"3/8","10":"1/4","11":"1/4"}',
     "--depth", "2", "--count", "20"],
    ["--seed", "10", "sample-path", "--depth", "5", "--count", "3"],
    ["--seed", "10", "sample-path", "--depth", "4", "--c-dist", "dirac:3", "--emit", "csv"],
    ["--seed", "10", "oracle", "schauder", "--n", "6", "--t", "1/4,1/2,1", "--count", "5"],
    ["--seed", "10", "oracle", "kl", "--n", "16", "--t", "1/2,1", "--count", "5"],
    ["--seed", "10", "oracle", "donsker", "--n", "1000", "--t", "1/2,1", "--count", "5"],
    ["--seed", "10", "estimate-cdist", "--paths", "100", "--depth", "3"],
    ["--seed", "10", "validate", "--suite", "realizer", "--size", "500"],
    ["--seed", "10", "--threads", "2", "sample-real", "--dist", "uniform", "--count", "8"],
]


def ac10():
    differ = []
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "fairbits", *argv], capture_output=True)
                for _ in range(2)]
        if outs[0].stdout != outs[1].stdout or outs[0].returncode != outs[1].returncode \
                or outs[0].returncode != 0:
            differ.append(argv[2])
    return not differ, f"{len(CLI_RUNS) - len(differ)}/{len(CLI_RUNS)} invocations byte-identical" + (
        f"; differing: {differ}" if differ else "")


CRITERIA = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10]


def _line(fn, ok, detail):
    return f"{fn.__name__.upper():5s} {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("fn", CRITERIA, ids=[f.__name__ for f in CRITERIA])
def test_criterion(fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(fn, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(fn, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
