"""Acceptance gate: one test per verification suite, with wall-time budgets.

Each test runs the corresponding suite from splitgrad.verify at the default
seed, prints a single PASS/FAIL line, and fails if any check inside the
suite fails or the suite exceeds its budget (run with -s to see the lines).
"""

import time

from splitgrad.verify import DEFAULT_SEED, run_suite


def _run(number, suite, budget):
    t0 = time.monotonic()
    results = run_suite(suite, seed=DEFAULT_SEED)
    elapsed = time.monotonic() - t0
    n_ok = sum(r.passed for r in results)
    ok = n_ok == len(results)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d} ({suite}): "
          f"{n_ok}/{len(results)} checks in {elapsed:.2f}s")
    assert ok, "failing checks: " + "; ".join(
        f"{r.name} [{r.detail}]" for r in results if not r.passed)
    if budget is not None:
        assert elapsed < budget, f"{suite} took {elapsed:.2f}s, budget {budget}s"


def test_criterion_01_nesterov_split():
    _run(1, "nesterov-split", 1.0)


def test_criterion_02_constructions():
    _run(2, "constructions", 5.0)


def test_criterion_03_ode():
    _run(3, "ode", 10.0)


def test_criterion_04_energy():
    _run(4, "energy", 5.0)


def test_criterion_05_rate():
    _run(5, "rate", 5.0)


def test_criterion_06_assumption_exact():
    _run(6, "assumption-exact", 1.0)


def test_criterion_07_threshold_scan():
    _run(7, "threshold-scan", 5.0)


def test_criterion_08_lemmas():
    _run(8, "lemmas", 10.0)


def test_criterion_09_fixed_points():
    _run(9, "fixed-points", None)


def test_criterion_10_tables():
    _run(10, "tables", 60.0)


def test_criterion_11_symplectic():
    _run(11, "symplectic", None)
