import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tstruct import filtration as fl
from tstruct.errors import NotSpecializationClosedError, SpaceMismatchError, TStructError
from tstruct.filtration import ThomasonFiltration
from tstruct.spectral_poset import SpecSpace, chain, enumerate_posets

X = chain("eta", "m")
ALL = X.points


def values(phi, lo=-4, hi=4):
    return {n: set(phi(n)) for n in range(lo, hi + 1)}


def test_standard():
    phi = fl.standard(X, ["m"])
    assert all(phi(n) == {"m"} for n in range(-5, 1))
    assert all(phi(n) == set() for n in range(1, 6))


def test_constant_empty():
    phi = fl.constant(X, [])
    assert all(not phi(n) for n in range(-5, 6))


def test_tilting():
    phi = fl.tilting(X, ALL, ["m"], 0, 2)
    assert phi(-1) == set(ALL)
    assert phi(0) == phi(2) == {"m"}
    assert phi(3) == set()


def test_tilting_needs_containment():
    with pytest.raises(TStructError):
        fl.tilting(X, ["m"], ALL, 0, 1)


def test_value_must_be_spcl():
    with pytest.raises(NotSpecializationClosedError):
        fl.constant(X, ["eta"])


def test_must_decrease():
    with pytest.raises(TStructError):
        ThomasonFiltration(X, ["m"], [(0, ALL)])


def test_shift_examples():
    Z = ["m"]
    phi = fl.shift(fl.standard(X, Z), 1)
    assert phi(-1) == {"m"} and phi(0) == set()
    assert fl.shift(fl.constant(X, Z), 7) == fl.constant(X, Z)
    psi = fl.tilting(X, ALL, Z, -1, 1)
    assert fl.shift(psi, 0) == psi
    assert fl.shift(fl.shift(psi, 3), -3) == psi


def test_truncate_below_examples():
    Z = ALL
    assert fl.truncate_below(fl.standard(X, Z), 0) == fl.standard(X, Z)
    assert fl.truncate_below(fl.standard(X, Z), 1) == fl.constant(X, [])
    got = fl.truncate_below(fl.tilting(X, ALL, ["m"], 0, 2), 1)
    assert values(got) == {n: ({"m"} if n <= 2 else set()) for n in range(-4, 5)}


def test_restrict_examples():
    Z = {"m"}
    r = fl.restrict(fl.standard(X), Z)
    assert r == fl.standard(X.subspace(Z), Z)
    empty = fl.restrict(fl.standard(X), set())
    assert len(empty.space) == 0 and not empty(0)
    assert fl.localize(fl.standard(X), "eta") == fl.restrict(fl.standard(X), X.generalization_neighborhood("eta").points)


def test_predicates_examples():
    Z = ALL
    assert fl.is_eventually_vanishing(fl.standard(X, Z))
    assert not fl.is_eventually_vanishing(fl.constant(X, Z))
    assert fl.leq(fl.standard(X, Z), fl.constant(X, Z))
    assert not fl.leq(fl.constant(X, Z), fl.standard(X, Z))


def test_leq_needs_same_space():
    with pytest.raises(SpaceMismatchError):
        fl.leq(fl.standard(X), fl.standard(chain("a", "b")))


def test_weak_cousin_examples():
    assert fl.is_weak_cousin_across(fl.standard(X), ALL)
    assert not fl.is_weak_cousin_across(fl.constant(X, ["m"]), ALL)
    assert fl.is_weak_cousin_across(fl.constant(X, ["m"]), ["m"])
    assert fl.is_weak_cousin(fl.standard(X))


def test_restricts_to_bounded_coherent_examples():
    assert fl.restricts_to_bounded_coherent(fl.standard(X, ["m"]), ["m"])
    assert not fl.restricts_to_bounded_coherent(fl.constant(X, ["m"]), ALL)
    assert fl.restricts_to_bounded_coherent(fl.constant(X, ["m"]), [])


def test_restricts_to_perf_examples():
    Y = chain("eta", "m", regular=["eta"])
    assert not fl.restricts_to_perf(fl.standard(Y, ["m"]), ["m"])
    assert fl.restricts_to_perf(fl.constant(Y, ["m"]), ["m"])
    R = chain("eta", "m")
    assert fl.restricts_to_perf(fl.standard(R, ["m"]), ["m"])


def test_restricts_to_perf_per_component():
    # two closed points, one regular: the regular one may vary, the other must be constant
    Y = SpecSpace(["a", "b"], regular=["a"])
    phi = ThomasonFiltration(Y, ["a", "b"], [(1, ["b"])])  # a drops out, b constant
    assert fl.restricts_to_perf(phi, ["a", "b"])
    psi = ThomasonFiltration(Y, ["a", "b"], [(1, ["a"])])  # b drops out
    assert not fl.restricts_to_perf(psi, ["a", "b"])


def test_classify_keys():
    out = fl.classify(fl.constant(X, ["m"]), ALL)
    assert out["weak_cousin"] is False and out["restricts_db_coh"] is False
    assert out["components"][0]["points"] == ["eta", "m"]


def test_json_parse_and_round_trip():
    raw = {"low_tail": ["eta", "m"], "steps": [{"at": 0, "value": ["m"]}], "high_tail": []}
    phi = ThomasonFiltration.from_json(raw, X)
    assert phi(-1) == set(ALL) and phi(0) == {"m"} and phi(1) == set()
    assert ThomasonFiltration.from_json(json.dumps(phi.to_json()), X) == phi


def test_canonical_form_merges_equal_values():
    a = ThomasonFiltration(X, ALL, [(0, ALL), (1, ["m"]), (2, ["m"]), (3, [])])
    b = ThomasonFiltration(X, ALL, [(1, ["m"]), (3, [])])
    assert a == b and a.steps == b.steps


def test_enumerate_filtrations_count():
    # chain of two points: spcl sets {}, {m}, {eta,m}; change points in [0,1]
    fs = list(fl.enumerate_filtrations(X, 0, 1))
    assert len(fs) == len(set(fs)) == 10


spaces = enumerate_posets(3)


@st.composite
def filtrations(draw):
    space = draw(st.sampled_from(spaces))
    spcl = sorted(space.spcl_subsets(), key=lambda s: (-len(s), sorted(s)))
    low = draw(st.sampled_from(spcl))
    cur, steps = low, []
    for n in range(draw(st.integers(-3, 0)), draw(st.integers(0, 3))):
        cur = draw(st.sampled_from([s for s in spcl if s <= cur]))
        steps.append((n, cur))
    return ThomasonFiltration(space, low, steps)


@settings(max_examples=150, deadline=None)
@given(filtrations(), st.integers(-3, 3), st.integers(-3, 3))
def test_shift_and_restrict_laws(phi, s, k):
    assert all(fl.shift(phi, s)(n) == phi(n + s) for n in range(-6, 7))
    assert fl.shift(fl.shift(phi, s), -s) == phi
    assert all(phi(n + 1) <= phi(n) for n in range(-6, 7))
    t = fl.truncate_below(phi, k)
    assert all(t(i) == (phi(k) if i <= k else phi(i)) for i in range(-6, 7))
    for S in phi.space.spcl_subsets():
        for T in phi.space.spcl_subsets():
            assert fl.restrict(fl.restrict(phi, S), S & T) == fl.restrict(phi, S & T)
        assert fl.shift(fl.restrict(phi, S), s) == fl.restrict(fl.shift(phi, s), S)


@settings(max_examples=150, deadline=None)
@given(filtrations())
def test_json_round_trip_property(phi):
    assert ThomasonFiltration.from_json(phi.to_json(), phi.space) == phi


@settings(max_examples=100, deadline=None)
@given(filtrations())
def test_weak_cousin_remark(phi):
    for Z in phi.space.spcl_subsets():
        assert fl.is_weak_cousin_across(phi, Z) == fl.is_weak_cousin(fl.restrict(phi, Z))
