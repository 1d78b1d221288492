"""Scaled-down statistical self-checks behind ``fairbits validate``.

Each suite takes a root :class:`BitStream` and returns a JSON-ready report
``{"suite", "tests": [...], "passed"}``; a test entry carries its statistic,
p-value or count, and a boolean verdict.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Dict, List

from .bitsource import BitStream
from .cantor_realizer import CylinderWeights, StallError, push_bits
from .dyadic import Dyadic, DyadicInterval, Ordering, compare_strict
from .measures import make_cantor, make_gaussian, make_uniform, sample_real
from .oracle import donsker, ks_2sample, ks_test, levy_ciesielski, normal_cdf
from .wiener import compute_c, default_cdist, family, sample_c, sample_path

__all__ = ["marginals", "certificates", "realizer", "SUITES", "certificate_violations",
           "moc_violations", "random_weight_table"]


def _entry(name: str, passed: bool, **fields) -> dict:
    out = {"name": name, "passed": bool(passed)}
    for k, v in fields.items():
        out[k] = round(v, 6) if isinstance(v, float) else v
    return out


def _report(suite: str, tests: List[dict]) -> dict:
    return {"suite": suite, "tests": tests, "passed": all(t["passed"] for t in tests)}


def _ks_entry(name: str, samples, cdf, alpha: float) -> dict:
    r = ks_test(samples, cdf)
    return _entry(name, r.pvalue > alpha, statistic=r.statistic, pvalue=r.pvalue, n=r.n)


def marginals(s: BitStream, size: int = 2000, alpha: float = 0.01, precision: int = 16) -> dict:
    tests = []
    for i, (label, mu) in enumerate((("uniform", make_uniform()), ("gaussian", make_gaussian()),
                                     ("cantor", make_cantor()))):
        sub = s.child(i)
        xs = [sample_real(mu, sub.child(k), precision).value for k in range(size)]
        tests.append(_ks_entry(f"sample-real:{label}", xs, mu, alpha))

    paths = max(20, size // 4)
    sub = s.child(10)
    cd = default_cdist()
    w1, wh = [], []
    for k in range(paths):
        ps = sub.child(k)
        C = sample_c(cd, ps.child(0), precision)
        p = sample_path("levy", C, ps.child(1), 6, precision)
        w1.append(p.values[-1])
        wh.append(p.values[32])
    tests.append(_ks_entry("sample-path:W(1)", w1, normal_cdf(1.0), alpha))
    tests.append(_ks_entry("sample-path:W(1/2)", wh, normal_cdf(0.5), alpha))

    sub = s.child(11)
    lc = [levy_ciesielski(10, sub.child(k), [Dyadic(1, -1)], precision)[0] for k in range(paths)]
    r = ks_2sample(wh, lc)
    tests.append(_entry("two-sample:path-vs-schauder:W(1/2)", r.pvalue > alpha,
                        statistic=r.statistic, pvalue=r.pvalue, n=r.n))

    sub = s.child(12)
    lc1 = [levy_ciesielski(10, sub.child(k), [1], precision)[0] for k in range(size)]
    tests.append(_ks_entry("schauder:W(1)", lc1, normal_cdf(1.0), alpha))
    sub = s.child(13)
    dk = [donsker(10_000, sub.child(k), [1])[0] for k in range(size)]
    tests.append(_ks_entry("donsker:W(1)", dk, normal_cdf(1.0), alpha))
    return _report("marginals", tests)


def certificate_violations(path, n: int = 24) -> int:
    """Grid pairs whose increment certifiably exceeds ``omega(|s - t|, C)``."""
    fam = family(path.cert.family)
    C = path.cert.C
    vals = path.values
    N = len(vals) - 1
    omegas = [None] + [fam.omega(DyadicInterval.point(Dyadic(k, -path.depth)), C, n)
                       for k in range(1, N + 1)]
    bad = 0
    for i in range(N + 1):
        for j in range(i + 1, N + 1):
            if compare_strict(abs(vals[j] - vals[i]), omegas[j - i]) is Ordering.GT:
                bad += 1
    return bad


def moc_violations(path) -> int:
    """Pairs with ``|s - t| <= 2**-moc(k)`` but ``|W(s) - W(t)| > 2**-k`` certified."""
    vals = path.values
    N = len(vals) - 1
    bad = 0
    for k, m in enumerate(path.cert.moc):
        bound = DyadicInterval.point(Dyadic(1, -k))
        if m > path.depth:
            continue
        max_lag = 1 << (path.depth - m)
        for i in range(N + 1):
            for j in range(i + 1, min(N, i + max_lag) + 1):
                if compare_strict(abs(vals[j] - vals[i]), bound) is Ordering.GT:
                    bad += 1
    return bad


def certificates(s: BitStream, size: int = 200, depth: int = 6, C: int = 2,
                 precision: int = 16) -> dict:
    viol = moc_bad = above = 0
    for k in range(size):
        p = sample_path("levy", C, s.child(k), depth, precision)
        viol += certificate_violations(p)
        moc_bad += moc_violations(p)
        if compute_c(p, "levy", precision).lo > Dyadic(C):
            above += 1
    return _report("certificates", [
        _entry("certificate-soundness", viol == 0, violations=viol, paths=size),
        _entry("moc-consistency", moc_bad == 0, violations=moc_bad, paths=size),
        _entry("compute-c-round-trip", above == 0, exceeded=above, paths=size, C=C),
    ])


def random_weight_table(rng: random.Random, depth: int = 3, denominator: int = 64) -> Dict[str, Fraction]:
    """Random consistent weights on all words of ``depth`` with a fixed denominator."""
    cuts = sorted(rng.randint(0, denominator) for _ in range((1 << depth) - 1))
    edges = [0] + cuts + [denominator]
    return {"".join(map(str, w)): Fraction(edges[i + 1] - edges[i], denominator)
            for i, w in enumerate(itertools.product((0, 1), repeat=depth))}


def realizer(s: BitStream, size: int = 10_000, depth: int = 3, tables: int = 2) -> dict:
    tests = []
    for ti in range(tables):
        sub = s.child(ti)
        rng = random.Random(sub.bits(64))
        table = random_weight_table(rng, depth)
        g = CylinderWeights.from_table(table)
        counts = {w: 0 for w in table}
        for k in range(size):
            counts["".join(map(str, push_bits(g, sub.child(k), depth)))] += 1
        worst = 0.0
        for w, p in table.items():
            p = float(p)
            sd = math.sqrt(max(p * (1 - p), 1e-300) / size)
            z = abs(counts[w] / size - p) / sd if p not in (0.0, 1.0) else (
                0.0 if counts[w] == p * size else math.inf)
            worst = max(worst, z)
        tests.append(_entry(f"pushforward:table{ti}", worst <= 4.0, max_sigma=worst, runs=size))
    g = CylinderWeights.from_table({"0": Fraction(1, 3), "1": Fraction(2, 3)})
    stalled_all = True
    for cap in (4, 8, 16, 32, 64):
        try:
            push_bits(g, BitStream.periodic("01"), 1, input_cap=cap)
            stalled_all = False
        except StallError:
            pass
    tests.append(_entry("partiality-witness:0101...", stalled_all))
    return _report("realizer", tests)


SUITES = {"marginals": marginals, "certificates": certificates, "realizer": realizer}
