"""Acceptance criteria 1-10, one test per criterion (summary printed at session end)."""

from __future__ import annotations

import time
from itertools import product
from math import comb

import pytest

import oracles
from kneser import (
    Coloring,
    KneserParams,
    SolveBudget,
    exact_chromatic,
    extract_witness,
    homomorphism_lower_bound,
    is_proper,
    m_colorable,
    theorem1_lower_bound,
    verify_homomorphism,
    verify_tucker,
    verify_witness,
    windowed_coloring_s0,
)
from kneser.cli import run
from kneser.reduction import ReductionPlan
from kneser.tucker import TuckerInstance

BUDGET = SolveBudget(max_nodes=10**7)


def grid_1():
    for r, s, k in product((2, 3), (0, 1), (1, 2, 3)):
        if not k > s:
            continue
        n = r * (k - 1) + 1
        while comb(n, k) <= 56:
            if n >= k:
                yield KneserParams(n, k, r, s)
            n += 1


@pytest.fixture(scope="module")
def certified():
    """Exact chromatic numbers on the first grid, climbing from one color."""
    out = {}
    began = time.perf_counter()
    for params in grid_1():
        out[params] = exact_chromatic(params, BUDGET, start=1)
    return out, time.perf_counter() - began


def test_criterion_01_lower_bound_never_exceeds_chi(certified):
    certified, elapsed = certified
    assert elapsed < 300
    violations = []
    for params, res in certified.items():
        assert res.status == "chi_found", f"{params.label()} ran out of budget"
        assert res.start == 1
        assert is_proper(params, res.witness)[0]
        if res.chi < theorem1_lower_bound(params):
            violations.append((params.label(), res.chi))
    print(f"criterion 1: {len(certified)} instances, {len(violations)} violations")
    assert violations == []


def test_criterion_02_equality_for_s0(certified):
    certified, _ = certified
    checked = 0
    for params, res in certified.items():
        n, k, r, s = params.n, params.k, params.r, params.s
        if s != 0 or n < r * k:
            continue
        target = oracles.ceil_frac(n - r * (k - 1), r - 1)
        assert res.chi == target, params.label()
        col = windowed_coloring_s0(params)
        assert col.num_used <= target
        assert is_proper(params, col)[0], params.label()
        checked += 1
    assert certified[KneserParams(5, 2, 2, 0)].chi == 3
    assert certified[KneserParams(6, 2, 2, 0)].chi == 4
    assert certified[KneserParams(7, 2, 3, 0)].chi == 2
    print(f"criterion 2: {checked} instances at equality")


def test_criterion_03_complete_hypergraph():
    for r in (2, 3, 4):
        for n in range(1, 13):
            res = exact_chromatic(KneserParams(n, 1, r, 0), BUDGET, start=1)
            assert res.chi == oracles.ceil_frac(n, r - 1), (n, r)


def test_criterion_04_two_bounds_on_2N_N():
    for N in (2, 3, 4):
        for s in range(1, N):
            p = KneserParams(2 * N, N, 2, s)
            assert theorem1_lower_bound(p) == 2 * s + 2
            assert homomorphism_lower_bound(p) == s + 2
    p = KneserParams(4, 2, 2, 1)
    res = exact_chromatic(p, BUDGET, start=1)
    assert res.chi == 6 > theorem1_lower_bound(p) == 4


TUCKER_INSTANCES = [(2, 5, 2, 0), (2, 6, 2, 0), (2, 5, 2, 1), (3, 5, 2, 0), (3, 6, 2, 0)]


def test_criterion_05_tucker_conditions():
    began = time.perf_counter()
    for p, n, k, s in TUCKER_INSTANCES:
        params = KneserParams(n, k, p, s)
        res = exact_chromatic(params, BUDGET, start=1)
        report = verify_tucker(TuckerInstance(p, params, res.witness))
        d = report.to_dict()
        assert d["equivariance"] == d["cond2"] == d["cond3"] == "pass", d
        assert report.conclusion["holds"]
        assert d["C"] >= oracles.ceil_frac(n - p * (k - s - 1), p - 1)
        if (p, n, k, s) == (2, 5, 2, 0):
            assert d["C"] == 3
            assert d["conclusion"]["lhs"] == 2 + 3 * 1 == d["conclusion"]["rhs"] == 5
    assert time.perf_counter() - began < 600


def test_criterion_06_negative_control():
    params = KneserParams(5, 2, 2, 0)
    mono = Coloring.from_list([1] * params.num_vertices, 1)
    report = verify_tucker(TuckerInstance(2, params, mono, diagnostic=True))
    assert not report.condition3.passed
    chain = report.condition3.witness["chain"]
    F = [frozenset(step["F"]) for step in chain]
    assert len(F) == 2 and all(len(f) == 2 for f in F)
    assert not F[0] & F[1]
    assert report.condition3.witness["colors"] == [1, 1]
    assert m_colorable(params, 2, BUDGET) is None


def test_criterion_07_padding_homomorphism():
    for src, pad in (((5, 2, 2), 1), ((7, 3, 2), 1), ((6, 1, 3), 1)):
        n, k, r = src
        check = verify_homomorphism(KneserParams(n, k, r, 0), KneserParams(n + pad, k + pad, r, pad))
        assert check.passed and check.counterexample is None
        assert check.edges_checked > 0


def _plan_cells():
    """(plan, n) for r1, r2 in {2,3}, t <= 6, k <= 3, s < k and every n with t = bound - 1."""
    for r1, r2, t, k in product((2, 3), (2, 3), range(1, 7), (1, 2, 3)):
        for s in range(k):
            r = r1 * r2
            lo = max(r * (k - 1) + 1, r * (k - s - 1) + t * (r - 1) + 1)
            hi = r * (k - s - 1) + (t + 1) * (r - 1)
            for n in range(lo, hi + 1):
                assert oracles.ceil_frac(n - r * (k - s - 1), r - 1) - 1 == t
                yield ReductionPlan(r1, r2, t, k, s), n


def test_criterion_08_reduction():
    p9 = KneserParams(9, 1, 4, 0)
    mod2 = Coloring.from_list([e % 2 + 1 for e in range(1, 10)], 2)
    for method in ("auto", "reduction"):
        rep = extract_witness(p9, 2, 2, mod2, 2, method=method)
        assert verify_witness(p9, mod2, rep.edge) and len(rep.edge) == 4
    p13 = KneserParams(13, 1, 4, 0)
    for colors in product((1, 2, 3), repeat=4):
        col = Coloring.from_list([colors[e % 4] for e in range(13)], 3)
        for method in ("auto", "reduction"):
            rep = extract_witness(p13, 2, 2, col, 3, method=method)
            assert verify_witness(p13, col, rep.edge)

    failures = {}
    cells = 0
    for plan, n in _plan_cells():
        cells += 1
        chain = plan.size_chain(n)
        for name in ("m_identity", "inner", "outer", "outer_identity"):
            if not chain[name]:
                failures.setdefault(name, []).append((plan.r1, plan.r2, plan.t, plan.k, plan.s, n))
    summary = {k: (len(v), v[:4]) for k, v in failures.items()}
    print(f"criterion 8: {cells} plans, size-chain failures {summary}")
    assert not failures, f"size-chain assertions fail on {cells} plans: {summary}"


def test_criterion_09_oracle_equivalence():
    instances = 0
    for n in range(1, 11):
        for k in range(1, n + 1):
            if comb(n, k) > 10:
                continue
            for s, r in product(range(k), (2, 3, 4, 5)):
                params = KneserParams(n, k, r, s)
                for m in range(1, 5):
                    got = m_colorable(params, m, BUDGET)
                    want = oracles.colorable(n, k, r, s, m)
                    assert (got is not None) == want, (params.label(), m)
                    if got is not None:
                        assert is_proper(params, got)[0]
                    instances += 1
    print(f"criterion 9: {instances} (instance, m) pairs agree")


def test_criterion_10_sweep_determinism(tmp_path, capsys):
    cache = str(tmp_path / "cache.jsonl")
    argv = ["sweep", "--n", "1..56", "--k", "1..3", "--r", "2,3", "--s", "0,1",
            "--cache", cache, "-v"]
    assert run(argv) == 0
    first = capsys.readouterr()
    assert run(argv) == 0
    second = capsys.readouterr()
    assert first.out == second.out
    assert "solver nodes: 0" in second.err
    rows = first.out.strip().splitlines()[1:]
    assert len(rows) == len(list(grid_1()))
