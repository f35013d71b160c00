import random

import pytest
from hypothesis import given, strategies as st

from oracles import canonical_by_definition, hat_by_definition, true_stages_by_definition
from stagewise.approximations import (Axiom, CanonicalApproximation, MockCEOperator,
                                      MockHaltingSet, build_canonical, extended_horizon,
                                      hat_enumeration, limit_strings, settling_stage,
                                      true_stages)
from stagewise.errors import NotPrefixFreeLimit
from worlds import random_world


def world(events, horizon=8):
    return MockHaltingSet(tuple(events), horizon)


def test_halting_set_validation():
    with pytest.raises(ValueError):
        world([(2, 1), (2, 3)])
    with pytest.raises(ValueError):
        world([(1, 1), (2, 1)])
    with pytest.raises(ValueError):
        world([(0, 1)])
    h = world([(1, 4), (3, 2)])
    assert h.at(2) == {4} and h.entered_at(3) == {2} and h.final == {2, 4}


def test_empty_operator_enumerates_nothing():
    h = world([(1, 0)])
    assert all(hat_enumeration(MockCEOperator(), h, s) == set() for s in range(9))


def test_flicker_out_when_number_enters():
    w = MockCEOperator((Axiom("1", required_out={3}, appearance=1),))
    h = world([(5, 3)])
    present = [s for s in range(9) if "1" in hat_enumeration(w, h, s)]
    assert present == [1, 2, 3, 4]


def test_delay_when_number_below_use_enters():
    w = MockCEOperator((Axiom("0", required_in={1}, required_out={4}, appearance=5),))
    h = world([(2, 1), (5, 3), (7, 9)])
    assert "0" not in hat_enumeration(w, h, 5)
    assert "0" in hat_enumeration(w, h, 6)
    # a number above the use does not delay
    assert "0" in hat_enumeration(w, h, 7)


@pytest.mark.parametrize("events, want", [
    ([(1, 3), (2, 1), (3, 2)], {2, 3}),
    ([(1, 0)], {1}),
    ([(1, 1), (2, 2), (3, 3)], {1, 2, 3}),
    ([], set()),
])
def test_true_stages_examples(events, want):
    assert true_stages(world(events)) == want
    assert true_stages_by_definition(events) == want


def test_unconditional_axiom():
    w = MockCEOperator((Axiom("01", appearance=2),))
    h = world([], 4)
    # enumerated from its appearance stage ...
    assert [s for s in range(5) if hat_enumeration(w, h, s)] == [2, 3, 4]
    ca = build_canonical(w, h)
    # ... but V_s only holds strings shorter than s
    assert ca.at(1).members() == [] and ca.at(2).members() == []
    assert all(ca.at(s).members() == ["01"] for s in range(3, ca.horizon + 1))
    assert ca.limit_set.members() == ["01"]


def test_flickering_membership():
    w = MockCEOperator((Axiom("1", required_out={3}, appearance=1),))
    h = world([(4, 3)])
    ca = build_canonical(w, h)
    assert [s for s in range(ca.horizon + 1) if "1" in ca.at(s)] == [2, 3]
    assert len(ca.limit_set) == 0


def test_empty_operator_canonical():
    ca = build_canonical(MockCEOperator(), world([(1, 2)], 3))
    assert all(len(v) == 0 for v in ca.stages) and len(ca.limit_set) == 0


def test_not_prefix_free_limit():
    w = MockCEOperator((Axiom("0"), Axiom("01")))
    with pytest.raises(NotPrefixFreeLimit):
        build_canonical(w, world([]))


def test_settling_and_from_sets():
    ca = CanonicalApproximation.from_sets([[], ["1"], ["0"], ["0"]])
    assert ca.limit_set.members() == ["0"]
    assert ca.true_stages == {0, 2, 3}
    assert settling_stage(ca, "0") == 2 and settling_stage(ca, "01") == 2
    assert settling_stage(ca, "1") is None
    assert ca.at(10).members() == ["0"] and ca.at(-1).members() == []


@given(st.integers(0, 10 ** 6))
def test_canonical_matches_definition(seed):
    w, h, raw, events = random_world(random.Random(seed))
    try:
        ca = build_canonical(w, h)
    except NotPrefixFreeLimit:
        return
    n = ca.horizon
    assert n == extended_horizon(w, h)
    want = canonical_by_definition(raw, events, n)
    assert [set(v) for v in ca.stages] == want
    for s in range(n + 1):
        assert hat_enumeration(w, h, s) == hat_by_definition(raw, events, s)
    assert ca.true_stages == {t for t in true_stages_by_definition(events) if t <= n}


@given(st.integers(0, 10 ** 6))
def test_true_stage_law(seed):
    w, h, _, _ = random_world(random.Random(seed))
    ca = build_canonical(w, h)
    for s in ca.true_stages:
        assert ca.at(s) <= ca.limit_set
    for sigma in ca.limit_set:
        s0 = settling_stage(ca, sigma)
        assert s0 is not None and s0 <= ca.horizon
    for s, v in enumerate(ca.stages):
        assert all(len(x) < s for x in v)
    assert set(ca.limit_set) == limit_strings(w, h)
