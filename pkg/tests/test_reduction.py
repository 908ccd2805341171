import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from kneser import (
    BudgetExceeded,
    Coloring,
    Edge,
    KneserParams,
    KSubset,
    ParameterError,
    StructuralError,
    derived_m,
    extract_witness,
    theorem1_lower_bound,
    verify_witness,
)
from kneser.core import vertex_masks
from kneser.reduction import ReductionPlan, induced_color, plan_for, smallest_prime_factor


@given(st.integers(2, 7), st.integers(1, 20), st.integers(1, 6), st.data())
def test_m_formula(r1, t, k, data):
    s = data.draw(st.integers(0, k - 1))
    m = derived_m(r1, t, k, s)
    assert m == (r1 - 1) * t + r1 * (k - s - 1) + 1 == (r1 - 1) * (t - 1) + r1 * (k - s)


@given(st.sampled_from([2, 3, 5]), st.sampled_from([2, 3, 5]), st.integers(1, 4),
       st.integers(0, 3), st.integers(0, 40))
def test_outer_condition_always_holds(r1, r2, k, s, extra):
    """n >= (r2-1)(t-1) + r2*m for every n the plan applies to."""
    if s >= k:
        return
    r = r1 * r2
    n = r * (k - 1) + 1 + extra
    plan = plan_for(n, k, s, r1, r2)
    if plan.t < 1:
        return
    chain = plan.size_chain(n)
    assert chain["m_identity"] and chain["outer"] and chain["outer_identity"]
    assert chain["inner"] == ((r1 - 1) * plan.t >= r1 * s)


def test_smallest_prime_factor():
    assert [smallest_prime_factor(r) for r in (2, 3, 4, 6, 9, 15, 49, 97)] == [2, 3, 2, 2, 3, 3, 7, 97]


def test_induced_color_single_class():
    A = KSubset.of(range(1, 7))
    col = Coloring.from_list([2] * 15, 2)
    color, members = induced_color(A, col, 3, 2, 0, 6)
    assert color == 2 and len(members) == 3
    assert sum(len(b) for b in members) == 6 and len(set().union(*map(set, members))) == 6


@given(st.lists(st.integers(1, 3), min_size=15, max_size=15))
@settings(max_examples=50)
def test_induced_color_three_colors_on_six(colors):
    col = Coloring.from_list(colors, 3)
    A = KSubset.of(range(1, 7))
    color, (b1, b2) = induced_color(A, col, 2, 2, 0, 6)
    index = {m: i for i, m in enumerate(vertex_masks(6, 2))}
    assert b1.meet(b2) == 0
    assert colors[index[b1.mask]] == colors[index[b2.mask]] == color


def test_induced_color_none():
    col = Coloring.from_list([1, 2, 3, 4, 5, 6], 6)
    with pytest.raises(StructuralError):
        induced_color(KSubset.of([1, 2, 3, 4]), col, 2, 2, 0, 4)


def mod_coloring(params, t):
    return Coloring.from_list([min(c) % t + 1 for c in oracles.vertices(params.n, params.k)], t)


def random_coloring(params, t, seed):
    rng = np.random.default_rng(seed)
    return Coloring.from_list(rng.integers(1, t + 1, params.num_vertices).tolist(), t)


def desk_cells():
    for r, k, s in product((4, 6), (1, 2), (0, 1)):
        if s >= k:
            continue
        for n in range(r * (k - 1) + 1, 16):
            params = KneserParams(n, k, r, s)
            t = theorem1_lower_bound(params) - 1
            if t >= 1:
                yield params, t


def test_desk_grid_characterization():
    """Extraction succeeds exactly when m >= r1(k-1)+1; otherwise the size check stops it."""
    outcomes = {"ok": 0, "structural": 0}
    for params, t in desk_cells():
        for r1 in sorted({smallest_prime_factor(params.r), params.r // smallest_prime_factor(params.r)}):
            r2 = params.r // r1
            inner = ReductionPlan(r1, r2, t, params.k, params.s).size_chain(params.n)["inner"]
            for col in (mod_coloring(params, t), random_coloring(params, t, params.n)):
                if inner:
                    rep = extract_witness(params, r1, r2, col, t, method="reduction")
                    assert verify_witness(params, col, rep.edge)
                    assert all(rep.checks.values())
                    outcomes["ok"] += 1
                else:
                    with pytest.raises(StructuralError, match="inner"):
                        extract_witness(params, r1, r2, col, t, method="reduction")
                    outcomes["structural"] += 1
    assert outcomes["ok"] > 50 and outcomes["structural"] > 0


def test_witness_parents_and_cross_meets():
    params = KneserParams(11, 2, 4, 0)
    col = random_coloring(params, 2, 5)
    rep = extract_witness(params, 2, 2, col, 2)
    assert rep.m == 5
    for b, a in zip(rep.edge.members, rep.parents):
        assert b.mask & ~a.mask == 0 and len(a) == rep.m
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) == {"params", "r1", "r2", "t", "m", "edge", "color", "parents", "checks"}
    assert all(d["checks"].values())


def test_composite_second_factor():
    params = KneserParams(15, 1, 8, 0)
    col = random_coloring(params, 2, 3)
    rep = extract_witness(params, 2, 4, col, 2, method="reduction")
    assert len(rep.edge) == 8 and verify_witness(params, col, rep.edge)


def test_examples_and_preconditions():
    p9 = KneserParams(9, 1, 4, 0)
    mod2 = Coloring.from_list([e % 2 + 1 for e in range(1, 10)], 2)
    rep = extract_witness(p9, 2, 2, mod2, 2)
    assert rep.edge.as_lists() == [[1], [3], [5], [7]]
    mod3 = Coloring.from_list([e % 3 + 1 for e in range(1, 10)], 3)
    with pytest.raises(ParameterError, match="t=3"):
        extract_witness(p9, 2, 2, mod3, 3)
    with pytest.raises(ParameterError):
        extract_witness(p9, 2, 3, mod2, 2)
    with pytest.raises(ParameterError):
        extract_witness(p9, 2, 2, mod3, 2)
    with pytest.raises(ParameterError):
        extract_witness(p9, 2, 2, mod2, 2, method="magic")


def test_budget():
    params = KneserParams(15, 2, 4, 0)
    col = random_coloring(params, theorem1_lower_bound(params) - 1, 0)
    with pytest.raises(BudgetExceeded):
        extract_witness(params, 2, 2, col, col.m, max_subsets=3)


def test_verify_witness_negatives():
    params = KneserParams(6, 2, 3, 0)
    col = Coloring.from_list([1] * 14 + [2], 2)
    good = Edge.of([KSubset.of([1, 2]), KSubset.of([3, 4]), KSubset.of([5, 6])])
    assert not verify_witness(params, col, good)  # {5,6} is the last vertex, color 2
    ok = Edge.of([KSubset.of([1, 2]), KSubset.of([3, 4]), KSubset.of([3, 5])])
    assert not verify_witness(params, col, ok)  # {3,4} and {3,5} share an element
    uniform = Coloring.from_list([1] * 15, 1)
    assert verify_witness(params, uniform, good)
    assert not verify_witness(params, uniform, Edge.of(list(good.members)[:2]))
