import random

import pytest
from hypothesis import given, strategies as st

from oracles import cylinder_union_at, frac, minimal, prefix_free, strings, weight
from stagewise.errors import CapacityExceeded, NonMonotoneTarget, PrefixConflict
from stagewise.measure_core import ONE, Dyadic, compatible
from stagewise.prefix_sets import (AllocationRequest, PrefixFreeSet, kc_allocate,
                                   minimal_strings, set_measure)
from strategies import prefix_free_families

D = Dyadic.parse


def test_insert_examples():
    s = PrefixFreeSet.of(["00"]).insert("01")
    assert s.members() == ["00", "01"] and s.weight == D("1/2^1")
    with pytest.raises(PrefixConflict):
        PrefixFreeSet.of(["01"]).insert("0")
    with pytest.raises(PrefixConflict):
        PrefixFreeSet.of(["0"]).insert("01")
    with pytest.raises(PrefixConflict):
        PrefixFreeSet.of(["0"]).insert("0")
    lam = PrefixFreeSet().insert("")
    assert lam.weight == ONE and "" in lam


def test_insert_is_persistent():
    a = PrefixFreeSet.of(["0"])
    b = a.insert("10")
    assert a.members() == ["0"] and b.members() == ["0", "10"]
    assert a <= b and not b <= a


@pytest.mark.parametrize("given_, want", [
    ({"0", "01", "11"}, ["0", "11"]),
    (set(), []),
    ({"010", "0", "0110"}, ["0"]),
])
def test_minimal_strings_examples(given_, want):
    assert minimal_strings(given_).members() == want


@pytest.mark.parametrize("family, want", [(["0", "10"], "3/2^2"), ([], "0"),
                                          (strings(4), "1")])
def test_set_measure_examples(family, want):
    assert set_measure(PrefixFreeSet.of(family)) == D(want)


def test_text_form():
    s = PrefixFreeSet.of(["10", "0"])
    assert s.to_text() == "0\n10\n"
    assert PrefixFreeSet.from_text(s.to_text()) == s
    assert PrefixFreeSet.of([""]).to_text() == "λ\n"
    assert PrefixFreeSet.from_text("λ\n") == PrefixFreeSet.of([""])


def test_queries():
    s = PrefixFreeSet.of(["01", "110"])
    assert s.prefix_of("0111") == "01" and s.prefix_of("10") is None
    assert s.has_prefix_of("1101") and not s.has_prefix_of("11")
    assert s.compatible_member("1") == "110"


def test_least_free():
    s = PrefixFreeSet.of(["0"])
    assert s.least_free(2) == "10"
    assert s.least_free(2, blocked=["10"]) == "11"
    assert PrefixFreeSet().least_free(3, blocked=["00"]) == "010"
    assert PrefixFreeSet.of(["0", "1"]).least_free(1) is None


# -- Kraft-Chaitin ---------------------------------------------------------------

def test_kc_half_outside_00():
    # greedy allocation takes the single string "1"; the measure and the
    # incompatibility with 00 are what the contract fixes
    (s,) = kc_allocate(AllocationRequest("00", (D("1/2^1"),)))
    assert set_measure(s) == D("1/2^1")
    assert all(not compatible(x, "00") for x in s)
    assert s.members() == ["1"]


def test_kc_capacity_and_monotone_errors():
    with pytest.raises(CapacityExceeded):
        kc_allocate(AllocationRequest("0", (D("3/2^2"),)))
    with pytest.raises(CapacityExceeded):
        kc_allocate(AllocationRequest("0", (D("1/2^1"),)))
    with pytest.raises(NonMonotoneTarget):
        kc_allocate(AllocationRequest("0", (D("1/2^2"), D("1/2^3"))))


def test_kc_two_stages():
    s1, s2 = kc_allocate(AllocationRequest("00", (D("1/2^2"), D("3/2^3"))))
    assert set_measure(s1) == D("1/2^2") and set_measure(s2) == D("3/2^3")
    assert s1 <= s2
    assert s1.members() == ["01"] and s2.members() == ["01", "100"]


def test_kc_needs_splitting():
    # with 000 taken and 10 reserved no string of length 1 is free, so the
    # next 1/2 is placed as two quarters
    s1, s2 = kc_allocate(AllocationRequest("10", (D("1/2^3"), D("5/2^3"))))
    assert s1.members() == ["000"]
    assert s2.members() == ["000", "01", "11"]
    assert s2.weight == D("5/2^3")


@st.composite
def requests(draw):
    rho = draw(st.text(alphabet="01", min_size=1, max_size=4))
    k = draw(st.integers(1, 9))
    cap = 2 ** k - 2 ** (k - len(rho)) if k >= len(rho) else 0
    if cap <= 0:
        k = len(rho) + 1
        cap = 2 ** k - 2 ** (k - len(rho))
    nums = sorted(draw(st.lists(st.integers(0, cap - 1), min_size=1, max_size=6)))
    return rho, [Dyadic(n, k) for n in nums]


@given(requests())
def test_kc_invariants(req):
    rho, targets = req
    sets = kc_allocate(AllocationRequest(rho, tuple(targets)))
    for i, (s, t) in enumerate(zip(sets, targets)):
        members = list(s)
        assert frac(s.weight) == weight(members) == frac(t)
        assert prefix_free(members)
        assert all(not compatible(x, rho) for x in members)
        if i:
            assert sets[i - 1] <= s


@given(prefix_free_families())
def test_cached_weight_matches_recomputed(family):
    s = PrefixFreeSet.of(family)
    assert s.check_cache()
    assert s.recompute_weight() == s.weight
    assert frac(s.weight) == weight(family)
    assert sorted(s) == sorted(family)


@given(st.lists(st.text(alphabet="01", max_size=6), max_size=10))
def test_minimal_strings_properties(raw):
    m = minimal_strings(raw)
    assert set(m) == minimal(raw)
    assert minimal_strings(m) == m
    assert cylinder_union_at(list(m), 10) == cylinder_union_at(raw, 10)


def test_kc_battery_random():
    rng = random.Random(7)
    for _ in range(100):
        rho = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
        k = rng.randint(len(rho) + 1, 10)
        cap = 2 ** k - 2 ** (k - len(rho))
        nums = sorted(rng.randrange(cap) for _ in range(rng.randint(1, 8)))
        targets = [Dyadic(n, k) for n in nums]
        sets = kc_allocate(AllocationRequest(rho, tuple(targets)))
        assert [frac(s.weight) for s in sets] == [frac(t) for t in targets]
