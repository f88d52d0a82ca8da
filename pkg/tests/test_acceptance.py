"""Acceptance suite: one PASS/FAIL line per criterion.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
which prints the same lines.  All comparisons are exact.
"""

from __future__ import annotations

import itertools
import sys
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from toricmld.fan import make_fan, stellar_subdivide
from toricmld.logpair import make_pair, mld_closed_point, mld_orbit, product_pair, pullback_boundary, report
from toricmld.snc import MINUS_INFINITY, SncPoint, blowup_divergence, check_hypothesis, make_snc_pair, snc_mld
from toricmld.verify import (
    GenConfig,
    check_bound,
    check_bound_literal,
    check_lsc,
    check_nonsingularity_criterion,
    check_product,
    check_resolution_oracle,
    check_smooth_closed_form,
    check_strata,
    check_witness,
    compare_snc_toric,
    gen_pairs,
    random_snc_pair,
    rngs,
)

BUDGET = 60.0


def single(rays, boundary):
    rank = len(rays[0])
    return make_pair(make_fan(rank, [rays]), dict(zip(rays, boundary)))


@lru_cache(maxsize=None)
def corpus():
    """210 pairs of rank 2..4: 50 random-boundary and 20 empty-boundary per rank."""
    out = []
    for rank in (2, 3, 4):
        out += gen_pairs(GenConfig(rank=rank, seed=1000 + rank, count=50))
        out += gen_pairs(GenConfig(rank=rank, seed=2000 + rank, count=20, coefficient_mode="zero-boundary"))
    return tuple(out)


@lru_cache(maxsize=None)
def resolution_corpus():
    out = []
    for rank, count in ((2, 34), (3, 33), (4, 33)):
        out += gen_pairs(GenConfig(rank=rank, seed=3000 + rank, count=count))
    return tuple(out)


def _sweep(check, pairs):
    total = 0
    for p in pairs:
        total += len(check(p).violations)
    return total


# -- criteria -----------------------------------------------------------------


def criterion_1():
    bad = []
    for r in range(2, 11):
        p = single([(1, 0), (1, r)], [0, 0])
        top = p.fan.maximal_cones[0]
        if mld_orbit(p, top)[0] != 1 or mld_closed_point(p, top) != 1:
            bad.append(r)
    return not bad, f"A_(r-1), r = 2..10: a_sigma = closed-point mld = 1; failures {bad}"


def criterion_2():
    # terminal cyclic quotient 1/r(1,-1,1); for r = 2 this is the cone
    # (1,0,0), (0,1,0), (-1,-1,2) up to a change of basis
    values = {}
    for r in range(2, 8):
        p = single([(1, 0, 0), (0, 1, 0), (-1, 1, r)], [0, 0, 0])
        values[r] = mld_orbit(p, p.fan.maximal_cones[0])[0]
    q = single([(1, 0, 0), (0, 1, 0), (-1, -1, 2)], [0, 0, 0])
    ok = all(v == 1 + Fraction(1, r) for r, v in values.items())
    ok = ok and mld_orbit(q, q.fan.maximal_cones[0])[0] == Fraction(3, 2)
    shown = ", ".join(f"{r}:{v}" for r, v in values.items())
    return ok, f"terminal quotients of index r: a_sigma = 1 + 1/r ({shown})"


def criterion_2_note():
    """The cone with third ray (-1,-1,r) is 1/r(1,1,1); it is terminal only for r = 2."""
    values = {}
    for r in range(2, 8):
        p = single([(1, 0, 0), (0, 1, 0), (-1, -1, r)], [0, 0, 0])
        values[r] = mld_orbit(p, p.fan.maximal_cones[0])[0]
    ok = all(v == 1 + Fraction(1, r) for r, v in values.items())
    shown = ", ".join(f"{r}:{v}" for r, v in values.items())
    return ok, f"1/r(1,1,1) read literally: a_sigma = 3/r ({shown}); equals 1 + 1/r only at r = 2"


def criterion_3():
    n = _sweep(check_smooth_closed_form, corpus())
    return n == 0, f"{len(corpus())} pairs, smooth cones a_sigma = sum a_i: {n} violations"


def criterion_4():
    n = _sweep(check_lsc, corpus())
    return n == 0, f"{len(corpus())} pairs, all face pairs: {n} violations"


def criterion_5():
    n = _sweep(check_bound_literal, corpus())
    return n == 0, (
        f"{len(corpus())} pairs, 0 <= a_sigma <= dim and (a_sigma = dim iff all a_i = 1) on every cone: "
        f"{n} violations (singular cones with all a_i = 1, e.g. A1 with a_sigma = 1)"
    )


def criterion_5_restricted():
    n = _sweep(check_bound, corpus())
    return n == 0, (
        f"{len(corpus())} pairs, 0 <= a_sigma <= dim, a_sigma = dim => all a_i = 1, "
        f"converse when a_sigma > dim - 1: {n} violations"
    )


def criterion_6():
    n = _sweep(check_nonsingularity_criterion, corpus())
    return n == 0, f"{len(corpus())} pairs, a_sigma > dim - 1 => smooth: {n} violations"


def criterion_7():
    n = _sweep(check_resolution_oracle, resolution_corpus())
    return n == 0, f"{len(resolution_corpus())} pairs resolved, {n} mismatches"


def criterion_8():
    n = _sweep(check_witness, corpus())
    return n == 0, f"{len(corpus())} pairs, every nonzero cone blown up at its witness: {n} mismatches"


def criterion_9():
    pairs = gen_pairs(GenConfig(rank=2, seed=4002, count=20)) + gen_pairs(GenConfig(rank=3, seed=4003, count=20))
    n = 0
    for p, q in zip(pairs[:20], pairs[20:]):
        n += len(check_product(p, q).violations)
    a1 = single([(1, 0), (1, 2)], [0, 0])
    pq = product_pair(a1, a1)
    top = mld_orbit(pq, pq.fan.maximal_cones[0])[0]
    return n == 0 and top == 2, f"20 products (rank 2 x rank 3): {n} violations; A1 x A1 top cone {top}"


def criterion_10():
    n = _sweep(check_strata, corpus())
    spectrum = report(single([(1, 0), (1, 2)], [0, 0])).spectrum
    ok = n == 0 and spectrum == (1, 2)
    return ok, f"{len(corpus())} reports: {n} bad stratifications; A1 spectrum {{{', '.join(map(str, spectrum))}}}"


def _slack_exhaustive():
    checks = bad = 0
    for m in range(0, 7):
        grid = (Fraction(0), Fraction(1)) if m == 6 else (Fraction(0), Fraction(1, 2), Fraction(1))
        n = max(m, 1)
        subsets = [frozenset(s) for k in range(m + 1) for s in itertools.combinations(range(m), k)]
        for a in itertools.product(grid, repeat=m):
            p = make_snc_pair(n, a)
            for j in subsets:
                for k in subsets:
                    if not k <= j:
                        continue
                    diff = j - k
                    expected = sum((a[i] for i in diff), Fraction(0)) - len(diff)
                    for cj in {len(j), n}:
                        for ck in {len(k), cj}:
                            if ck > cj or ck < len(k):
                                continue
                            s = check_hypothesis(p, SncPoint(j, cj), SncPoint(k, ck))
                            checks += 1
                            if s != expected or s > 0:
                                bad += 1
    return checks, bad


def criterion_11():
    mismatches = 0
    streams = rngs(5011, 50)
    for rng in streams:
        p = random_snc_pair(rng, max_components=5, max_dim=5)
        mismatches += len(compare_snc_toric(p, rng))
    checks, bad = _slack_exhaustive()
    return mismatches == 0 and bad == 0, (
        f"50 toric realizations: {mismatches} mismatches; slack a_J - |J| <= 0 over {checks} "
        f"specialisations with |I| <= 6: {bad} failures"
    )


def _toric_tower(a_e, a_e1, k):
    """a(E_{k+1}) computed by explicit stellar subdivisions of the plane.

    E is the ray (1,0) and a second divisor D is the ray (0,1) with
    a(D) = a(E_1) - a(E), so that E_1 = (1,1).  Blowing up E ∩ E_j adds
    (j+1, 1).
    """
    fan = make_fan(2, [[(1, 0), (0, 1)]])
    p = make_pair(fan, {(1, 0): 1 - a_e, (0, 1): 1 - (a_e1 - a_e)}, check_range=False)
    for j in range(1, k + 2):
        sub = stellar_subdivide(p.fan, (j, 1))
        p = make_pair(sub.target, pullback_boundary(p, sub.target), check_range=False)
    return p.a((k + 1, 1))


def criterion_12():
    grid_e = [Fraction(x, 2) for x in range(-5, 5)]
    grid_e1 = [Fraction(x, 3) for x in range(-4, 6)]
    bad = 0
    for a_e, a_e1 in itertools.product(grid_e, grid_e1):
        values = [blowup_divergence(a_e, a_e1, k) for k in range(1, 7)]
        for k, v in enumerate(values, 1):
            if v != k * a_e + a_e1 or v != _toric_tower(a_e, a_e1, k):
                bad += 1
        if a_e < 0 and not all(x > y for x, y in zip(values, values[1:])):
            bad += 1
    # negative a_E at a codim-2 point gives -inf
    p = make_snc_pair(2, [Fraction(-1, 2)])
    ok = bad == 0 and snc_mld(p, SncPoint([0], 2)) is MINUS_INFINITY
    return ok, f"{len(grid_e) * len(grid_e1)} (a_E, a_E1) values, k = 1..6, checked against toric blow-ups: {bad} failures"


CRITERIA = [
    ("1", criterion_1),
    ("2", criterion_2),
    ("2-note", criterion_2_note),
    ("3", criterion_3),
    ("4", criterion_4),
    ("5", criterion_5),
    ("5-restricted", criterion_5_restricted),
    ("6", criterion_6),
    ("7", criterion_7),
    ("8", criterion_8),
    ("9", criterion_9),
    ("10", criterion_10),
    ("11", criterion_11),
    ("12", criterion_12),
]
# statements that are false as worded; they print FAIL and are expected to
KNOWN_FALSE = {
    "2-note": "1/r(1,1,1) is not terminal for r >= 3; its mld is 3/r",
    "5": "a_sigma = dim sigma fails on singular cones whose rays all have a_i = 1",
}


def evaluate(name, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < BUDGET
    line = f"{'PASS' if ok and in_time else 'FAIL'}  criterion {name:<8} {detail} [{elapsed:.1f}s]"
    return ok and in_time, line


def _params():
    for name, fn in CRITERIA:
        marks = [pytest.mark.xfail(strict=True, reason=KNOWN_FALSE[name])] if name in KNOWN_FALSE else []
        yield pytest.param(name, fn, id=name, marks=marks)


@pytest.mark.parametrize("name, fn", list(_params()))
def test_criterion(name, fn, capsys):
    ok, line = evaluate(name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def main() -> int:
    failed = 0
    for name, fn in CRITERIA:
        ok, line = evaluate(name, fn)
        print(line, flush=True)
        failed += not ok and name not in KNOWN_FALSE
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
