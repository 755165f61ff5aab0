import json

import pytest

from tstruct.errors import NotSpecializationClosedError, TStructError, UnknownPointError
from tstruct.spectral_poset import SpecSpace, antichain, chain, enumerate_posets


@pytest.fixture
def boolean():
    return SpecSpace(
        ["(0)", "(x)", "(y)", "(x,y)"],
        [("(0)", "(x)"), ("(0)", "(y)"), ("(x)", "(x,y)"), ("(y)", "(x,y)")],
    )


def test_closure_examples(boolean):
    S = chain("eta", "m")
    assert S.closure({"eta"}) == {"eta", "m"}
    assert S.closure({"m"}) == {"m"}
    assert boolean.closure({"(x)"}) == {"(x)", "(x,y)"}


def test_direct_generalizations_examples(boolean):
    assert chain("a", "b", "c").direct_generalizations("c") == {"b"}
    assert boolean.direct_generalizations("(x,y)") == {"(x)", "(y)"}
    assert antichain("a", "b").direct_generalizations("a") == frozenset()


def test_connected_components_examples(boolean):
    assert antichain("m1", "m2").connected_components({"m1", "m2"}) == [{"m1"}, {"m2"}]
    Z = {"(x)", "(y)", "(x,y)"}
    assert boolean.connected_components(Z) == [Z]
    assert boolean.connected_components(set()) == []


def test_components_need_spcl(boolean):
    with pytest.raises(NotSpecializationClosedError):
        boolean.connected_components({"(x)"})


def test_generalization_neighborhood_examples(boolean):
    C = chain("a", "b", "c")
    assert C.generalization_neighborhood("b") == chain("a", "b")
    assert len(boolean.generalization_neighborhood("(0)")) == 1
    assert boolean.generalization_neighborhood("(x,y)") == boolean


def test_unknown_point():
    with pytest.raises(UnknownPointError):
        chain("a", "b").direct_generalizations("z")
    with pytest.raises(UnknownPointError):
        SpecSpace(["a"], [("a", "b")])


def test_cycle_rejected():
    with pytest.raises(TStructError):
        SpecSpace(["a", "b"], [("a", "b"), ("b", "a")])


def test_closure_idempotent_and_monotone():
    for X in enumerate_posets(4):
        subsets = [frozenset(p for i, p in enumerate(X.points) if m >> i & 1) for m in range(1 << len(X))]
        for S in subsets:
            c = X.closure(S)
            assert X.closure(c) == c and S <= c
            for T in subsets:
                if S <= T:
                    assert c <= X.closure(T)


def test_direct_generalizations_generate_order():
    for X in enumerate_posets(4):
        for q in X.points:
            direct = X.direct_generalizations(q)
            strict = X.generalizations(q) - {q}
            assert direct <= strict
            reach, todo = set(), [q]
            while todo:
                for p in X.direct_generalizations(todo.pop()):
                    if p not in reach:
                        reach.add(p)
                        todo.append(p)
            assert reach == strict


def test_components_partition():
    for X in enumerate_posets(4):
        for Z in X.spcl_subsets():
            comps = X.connected_components(Z)
            assert frozenset().union(*comps) == Z if comps else not Z
            assert sum(len(c) for c in comps) == len(Z)
            for i, a in enumerate(comps):
                for b in comps[i + 1:]:
                    assert not any(X.specializes(p, q) or X.specializes(q, p) for p in a for q in b)


def test_neighborhood_idempotent():
    for X in enumerate_posets(4):
        for p in X.points:
            N = X.generalization_neighborhood(p)
            assert N.generalization_neighborhood(p) == N


def test_poset_counts():
    # unlabeled posets on 1..4 points: 1, 2, 5, 16
    sizes = [len(X) for X in enumerate_posets(4)]
    assert [sizes.count(n) for n in range(1, 5)] == [1, 2, 5, 16]


def test_json_round_trip():
    raw = '{"points":[{"id":"m","regular":false,"height":1},{"id":"eta"}],"covers":[["eta","m"]]}'
    X = SpecSpace.from_json(raw)
    assert X.regular == {"eta"}
    assert X.specializes("eta", "m")
    assert SpecSpace.from_json(json.dumps(X.to_json())) == X


def test_spcl_subsets_are_down_closed():
    X = chain("a", "b", "c")
    assert set(X.spcl_subsets()) == {frozenset(), frozenset("c"), frozenset("bc"), frozenset("abc")}
