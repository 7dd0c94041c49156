"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

import os
import random
import sys
import time

import pytest

from overpartlab import verify as vf
from overpartlab.combinatorics import ParameterSet
from overpartlab.series import bilateral_theta, triple_product

JOBS = max(1, min(8, os.cpu_count() or 1))

TITLES = {
    1: "d=e=1 overpartition Gordon theorem, n <= 30",
    2: "d=e=2 parity theorem, all three displays, order 30",
    3: "product formulas for (d,e) in (3,3),(4,4),(4,2),(6,3)",
    4: "barred class independent of f, order 15",
    5: "count recurrences for n <= 20",
    6: "claimed solutions at x=0 and at index 0, order 25",
    7: "termwise identities for n = 0..4, order 25",
    8: "bijection round trips, weight <= 20",
    9: "partition readings and difference identities, n <= 20",
    10: "Euler, theta vs triple product, mutation detection",
}
BUDGET_S = {1: 60, 2: 120, 3: 600}


def _line(tag, ok, detail, capsys=None):
    text = f"acceptance {tag}: {'PASS' if ok else 'FAIL'} - {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + text)
    else:
        print(text)


def _summarize(reports):
    bad = [r for r in reports if r.status in ("fail", "error")]
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped", "error")}
    detail = ", ".join(f"{k} {v}" for k, v in counts.items() if v)
    if bad:
        r = bad[0]
        p = r.spec.params
        m = r.first_mismatch or {}
        detail += (f"; first failure {r.spec.check_name} (d,k,a,e,f)=({p.d},{p.k},{p.a},{p.e},{p.f})"
                   f" {m.get('label', r.notes[:80])} x^{m.get('x_deg')} q^{m.get('q_deg')}"
                   f" expected {m.get('expected')} got {m.get('actual')}")
    return not bad and counts["pass"] > 0, detail


def run_criterion(c):
    t0 = time.perf_counter()
    reports = vf.run_all(vf.grid_for(c), jobs=JOBS)
    elapsed = time.perf_counter() - t0
    ok, detail = _summarize(reports)
    detail = f"{TITLES[c]}; {detail}; {elapsed:.1f}s"
    if c in BUDGET_S and elapsed > BUDGET_S[c]:
        ok = False
        detail += f" (over the {BUDGET_S[c]}s budget)"
    return ok, detail


def run_criterion_10():
    ok, detail = run_criterion(10)
    rng = random.Random(20261014)
    theta_bad = []
    for _ in range(10):
        M = rng.randint(2, 30)
        L = rng.randint(1, M - 1)
        if not bilateral_theta(M, -L, 50).agrees_with(triple_product(L, M, 50), 50):
            theta_bad.append((L, M))
    missed = []
    p_sample = {
        "main_theorem_u": (ParameterSet(3, 1, 1, 3, 2), 15, 12),
        "main_theorem_ubar": (ParameterSet(3, 1, 1, 3, 2), 15, 12),
        "lemma_adjustment": (ParameterSet(2, 1, 1, 2, 2), 10, None),
        "functional_equations": (ParameterSet(2, 1, 1, 2, 1), 10, 10),
        "initial_conditions": (ParameterSet(2, 1, 1, 2, 2), 10, None),
        "term_identities": (ParameterSet(2, 1, 1, 2, 2), 12, None),
        "corollary_identities": (ParameterSet(2, 2, 1, 2, 1), 12, None),
        "euler_jtp": (ParameterSet(2, 1, 0, 2, 2), 20, None),
        "regression_d1_gordon": (ParameterSet(1, 2, 1, 1, 1), 15, None),
        "regression_d2_ssy": (ParameterSet(2, 1, 1, 2, 2), 15, None),
        "bijection_roundtrip": (ParameterSet(2, 1, 1, 2, 1), 10, 10),
        "oracle_vs_claimed_series": (ParameterSet(2, 1, 1, 2, 2), 10, None),
    }
    for name, (p, order, w) in p_sample.items():
        clean = vf.run_check(vf.CheckSpec(name, p, order, w))
        for idx in range(clean.comparisons):
            for side in ("expected", "actual"):
                mut = vf.Mutation(idx, side, 0, 2, 1)
                if vf.run_check(vf.CheckSpec(name, p, order, w, mutation=mut)).status != "fail":
                    missed.append((name, idx, side))
    ok = ok and not theta_bad and not missed
    detail += f"; theta tuples failing {theta_bad or 'none'}; undetected mutations {missed or 'none'}"
    return ok, detail


def run_oracle_invariant():
    reports = vf.run_all(vf.oracle_grid(), jobs=JOBS)
    ok, detail = _summarize(reports)
    return ok, "enumeration equals claimed series in x and q, order 15; " + detail


@pytest.mark.parametrize("criterion", range(1, 10))
def test_acceptance_criterion(criterion, capsys):
    ok, detail = run_criterion(criterion)
    _line(criterion, ok, detail, capsys)
    assert ok, detail


def test_acceptance_criterion_10(capsys):
    ok, detail = run_criterion_10()
    _line(10, ok, detail, capsys)
    assert ok, detail


def test_oracle_vs_series_invariant(capsys):
    ok, detail = run_oracle_invariant()
    _line("invariant", ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for c in range(1, 10):
        results.append(run_criterion(c))
        _line(c, *results[-1])
    results.append(run_criterion_10())
    _line(10, *results[-1])
    results.append(run_oracle_invariant())
    _line("invariant", *results[-1])
    sys.exit(0 if all(ok for ok, _ in results) else 1)
