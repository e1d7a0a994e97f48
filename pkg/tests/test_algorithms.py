import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import Y6, build, fixture_a, fixture_c, fixture_d, pairs
from hmatch.algorithms import (
    compute_cutoff,
    construct_er_nw,
    k_admissible,
    k_cutoff,
    k_spda,
    lexicographic_rule,
    query_ceiling,
    run_algorithm,
    update_cutoff,
)
from hmatch.core import Matching
from hmatch.feasibility import Capacities
from hmatch.generator import GenConfig, generate_instance, make_rng
from hmatch.properties import is_cnw, is_er_k, is_fair, is_nw_k

MIDRUN_Y = pairs(4, (1, 1), (2, 2), (3, 2))


@pytest.mark.parametrize("s, c, expected", [(4, 3, False), (3, 3, True)])
def test_k_admissible_fixture_d_midrun(s, c, expected):
    assert k_admissible(fixture_d(), MIDRUN_Y, s - 1, c - 1, 1) is expected


def test_k_admissible_envy_bound():
    # Three students want the single college; s3 would have two enviers above her.
    inst = build([[1], [1], [1]], [[1, 2, 3]], Capacities((3,)))
    y = Matching.empty(3)
    assert k_admissible(inst, y, 2, 0, 2)
    assert not k_admissible(inst, y, 2, 0, 1)
    assert k_admissible(inst, y, 0, 0, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_k_admissible_matches_definition(seed):
    rng = make_rng(seed)
    inst = oracles.random_instance(rng)
    y = oracles.random_matching(rng, inst)
    for s in inst.students:
        for c in inst.student_prefs[s]:
            moved = y.moved(s, c)
            for k in range(inst.n_students + 1):
                expected = oracles.feasible(inst, moved.assignment) and len(oracles.envied_by(inst, moved, s)) <= k
                assert k_admissible(inst, y, s, c, k) is expected


@pytest.mark.parametrize("c, expected", [(0, 2), (1, 4)])
def test_compute_cutoff_fixture_c(c, expected):
    assert compute_cutoff(fixture_c(), pairs(3, (1, 2), (2, 1)), c) == expected


def test_compute_cutoff_empty_matching():
    inst = fixture_d()
    for c in inst.colleges:
        assert compute_cutoff(inst, Matching.empty(4), c) == 5


@pytest.mark.parametrize(
    "y, c, expected",
    [
        (pairs(4, (1, 1), (2, 1)), 1, 3),
        (pairs(4, (1, 1), (2, 2), (3, 2)), 2, 2),
        (pairs(4, *Y6), 3, 5),
    ],
)
def test_update_cutoff_fixture_d(y, c, expected):
    assert update_cutoff(fixture_d(), y, c - 1, 5) == expected


def test_update_cutoff_bottoms_out_at_one():
    inst = build([[1], [1]], [[1, 2]], Capacities((2,)))
    assert update_cutoff(inst, pairs(2, (1, 1), (2, 1)), 0, 3) == 1


def test_fixture_d_trace():
    result = k_cutoff(fixture_d(), 1)
    assert result.matching == pairs(4, *Y6)
    assert result.cutoffs == (2, 2, 5)
    assigns = [(ev.student + 1, ev.college + 1) for ev in result.trace.events if ev.kind == "assign"]
    assert assigns == [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)]
    changes = [
        (ev.college + 1, ev.previous, ev.value)
        for ev in result.trace.events
        if ev.kind == "cutoff" and ev.previous != ev.value
    ]
    assert changes == [(1, 5, 3), (2, 5, 2), (1, 3, 2)]
    first = result.trace.events[0]
    assert first.kind == "examine" and first.college == 0


def test_fixture_d_spda_agrees():
    a, b = k_cutoff(fixture_d(), 1), k_spda(fixture_d(), 1)
    assert a.matching == b.matching and a.cutoffs == b.cutoffs


@pytest.mark.parametrize("algorithm", ["cutoff", "spda", "alg1"])
def test_fixture_a_fair_cnw(algorithm):
    inst = fixture_a()
    y = run_algorithm(inst, 0, algorithm)
    assert is_fair(inst, y) and is_cnw(inst, y)


def test_fixture_a_alg1_k1():
    inst = fixture_a()
    y = construct_er_nw(inst, 1)
    assert is_er_k(inst, y, 1) and is_nw_k(inst, y, 1)


def test_no_acceptable_contracts():
    inst = build([[], []], [[1, 2]], Capacities((2,)))
    for name in ("cutoff", "spda", "alg1"):
        assert run_algorithm(inst, 0, name) == Matching.empty(2)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        run_algorithm(fixture_a(), 0, "gale-shapley")


def test_selection_rule_injection():
    inst = fixture_d()
    y = construct_er_nw(inst, 1, lexicographic_rule)
    assert is_er_k(inst, y, 1) and is_nw_k(inst, y, 1)

    def bad_rule(instance, matching, candidates):
        return (3, 0)

    with pytest.raises(ValueError):
        construct_er_nw(inst, 1, bad_rule)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_selection_rule_still_er_nw(seed):
    rng = make_rng(seed)
    inst = oracles.random_instance(rng)

    def pick(instance, matching, candidates):
        return candidates[int(rng.integers(len(candidates)))]

    k = int(rng.integers(0, inst.n_students + 1))
    y = construct_er_nw(inst, k, pick)
    assert oracles.er_k(inst, y, k) and oracles.nw_k(inst, y, k)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["cutoff", "spda"]))
def test_trace_invariants(seed, algorithm):
    rng = make_rng(seed)
    inst = oracles.random_instance(rng)
    k = int(rng.integers(0, inst.n_students + 1))
    result = (k_cutoff if algorithm == "cutoff" else k_spda)(inst, k)
    trace = result.trace
    n = inst.n_students

    assert trace.replay(n) == result.matching
    assert oracles.er_k(inst, result.matching, k) and oracles.nw_k(inst, result.matching, k)

    assignment = [None] * n
    last_cutoff = [n + 1] * inst.n_colleges
    reassignments = 0
    for ev in trace.events:
        if ev.kind == "assign":
            assert oracles.strictly_prefers(inst, ev.student, ev.college, assignment[ev.student])
            assert ev.previous == assignment[ev.student]
            assignment[ev.student] = ev.college
            reassignments += 1
            current = Matching(tuple(assignment))
            assert oracles.feasible(inst, assignment)
            assert oracles.er_k(inst, current, k)
        elif ev.kind == "cutoff":
            assert ev.previous == last_cutoff[ev.college]
            assert ev.value <= ev.previous
            assert ev.value == compute_cutoff(inst, Matching(tuple(assignment)), ev.college)
            last_cutoff[ev.college] = ev.value
    assert tuple(last_cutoff) == result.cutoffs
    assert reassignments <= n * inst.n_colleges
    assert trace.oracle_queries <= query_ceiling(inst)


def test_trace_jsonl():
    trace = k_cutoff(fixture_d(), 1).trace
    lines = trace.to_jsonl().splitlines()
    assert len(lines) == len(trace.events)
    first = json.loads(lines[0])
    assert first == {"kind": "examine", "college": 0}
    assert [m.pairs() for m in trace.matchings(4)][-1] == pairs(4, *Y6).pairs()


@pytest.mark.parametrize("phi_s, phi_c", [(0.7, 0.5), (0.9, 0.9)])
def test_generated_market_query_ceiling(phi_s, phi_c):
    inst = generate_instance(GenConfig(200, 10, phi_s, phi_c, seed=3))
    for k in (0, 10, 199):
        result = k_cutoff(inst, k)
        assert result.trace.oracle_queries < query_ceiling(inst)
        assert is_er_k(inst, result.matching, k) and is_nw_k(inst, result.matching, k)
