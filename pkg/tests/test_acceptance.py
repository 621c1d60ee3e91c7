"""Acceptance battery: every pinned criterion at its stated tolerance.

The battery runs once per session; each test prints its pass/fail line
and asserts the verdict. Known issue: the frozen-Hamiltonian peak window
(C05) expects a 7-9 MHz excess, but the shipped drive family tops out
just under 5 MHz, so that single check reports FAIL; see the README.
"""

import pytest

from sta_workbench.acceptance import run_all


@pytest.fixture(scope="module")
def battery():
    return {r.cid: r for r in run_all()}


def report(result):
    print(
        f"[{'PASS' if result.passed else 'FAIL'}] {result.cid} {result.name}: "
        f"measured = {result.measured:.6g}, tolerance {result.tolerance}"
        + (f" ({result.detail})" if result.detail else "")
    )
    return f"{result.measured:.6g} vs {result.tolerance}; {result.detail}"


def test_c01_work_conservation(battery):
    r = battery["C01"]
    assert r.passed, report(r)
    report(r)


def test_c02_fluctuation_inequality(battery):
    r = battery["C02"]
    assert r.passed, report(r)
    report(r)


def test_c03_qgt_equality(battery):
    r = battery["C03"]
    assert r.passed, report(r)
    report(r)


def test_c04_t2_collapse(battery):
    r = battery["C04"]
    assert r.passed, report(r)
    report(r)


def test_c05_frozen_hamiltonian(battery):
    r = battery["C05"]
    assert r.passed, report(r)
    report(r)


def test_c06_frozen_population(battery):
    r = battery["C06"]
    assert r.passed, report(r)
    report(r)


def test_c07_qgt_oracle(battery):
    r = battery["C07"]
    assert r.passed, report(r)
    report(r)


def test_c08_estimator_consistency(battery):
    r = battery["C08"]
    assert r.passed, report(r)
    report(r)


def test_c09_eigenbasis_identity(battery):
    r = battery["C09"]
    assert r.passed, report(r)
    report(r)


def test_c10_dissipative_ordering(battery):
    r = battery["C10"]
    assert r.passed, report(r)
    report(r)


def test_c11_propagator_convergence(battery):
    r = battery["C11"]
    assert r.passed, report(r)
    report(r)
