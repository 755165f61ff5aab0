import json
import random

import pytest

from tstruct.complexes import (
    FINITE,
    INFINITE,
    UNKNOWN,
    ChainMap,
    FreeChainMap,
    FreeComplex,
    as_mod,
    cech,
    cohomology,
    cone,
    dual,
    is_perfect,
    koszul,
    perfectness,
    residue_field,
    shift,
    tensor,
    tensor_free_mod,
    unit_complex,
)
from tstruct.errors import ChainMapError, IllegalInversionError, NotHomogeneousError, RingMismatchError
from tstruct.graded_rings import GradedTerm, cross, poly, trunc
from tstruct.truncation import local_cohomology_with_map, std_truncate_with_map
from tstruct.verify import random_complex

W10 = "-10:10"


def mult_x(ring, k=1):
    src = FreeComplex(ring, {0: [((k,), ())]})
    tgt = unit_complex(ring)
    return FreeChainMap(src, tgt, {0: [[1]]})


def dims(report, n):
    return {d: k for d, k in report.h(n).dims.items() if k}


def test_cone_of_x_poly1():
    C = cone(mult_x(poly(1)))
    assert sorted(C.degrees()) == [-1, 0]
    rep = cohomology(C)
    assert rep.nonzero_degrees() == [0]
    assert dims(rep, 0) == {(0,): 1}
    assert rep.h(0).support == {"(x)"}


def test_cone_of_x_trunc2():
    rep = cohomology(cone(mult_x(trunc(2))))
    assert dims(rep, 0) == {(0,): 1}
    # the kernel of x on R(-1) is spanned by x times the generator, in internal degree 2
    assert dims(rep, -1) == {(2,): 1}


def test_shift_zero_and_signs():
    K = koszul(poly(1), ["x"])
    assert shift(K, 0) == K
    S = shift(K, 1)
    assert sorted(S.degrees()) == [-2, -1]
    assert S.diff(-2).coeffs == [[-c for c in row] for row in K.diff(-1).coeffs]
    assert cohomology(S).nonzero_degrees() == [-1]


def test_koszul_examples():
    rep = cohomology(koszul(poly(2), ["x", "y"]), "-3:3,-3:3")
    assert rep.nonzero_degrees() == [0]
    assert dims(rep, 0) == {(0, 0): 1}
    assert rep.h(0).support == {"(x,y)"}
    r1 = cohomology(koszul(poly(1), ["x"]))
    assert r1.nonzero_degrees() == [0] and r1.h(0).support == {"(x)"} and r1.h(0).fg == FINITE
    rt = cohomology(koszul(trunc(2), ["x"]))
    assert rt.nonzero_degrees() == [-1, 0]
    assert sum(dims(rt, -1).values()) == sum(dims(rt, 0).values()) == 1


def test_koszul_rejects_non_monomial():
    with pytest.raises(NotHomogeneousError):
        koszul(poly(1), ["x+1"])


def test_cech_examples():
    C1 = cech(poly(1), ["x"])
    assert [(n, [sorted(s.inverted) for s in C1.term(n).summands]) for n in sorted(C1.degrees())] == \
        [(0, [[]]), (1, [[0]])]
    C2 = cech(poly(2), ["x", "y"])
    assert [len(C2.term(n)) for n in sorted(C2.degrees())] == [1, 2, 1]
    assert {s.inverted for s in C2.term(2).summands} == {frozenset({0, 1})}
    Ct = cech(trunc(2), ["x"])
    assert sorted(Ct.degrees()) == [0]


def test_cech_rejects_illegal():
    with pytest.raises(IllegalInversionError):
        GradedTerm(cross(), [((0, 0), (0, 1))])


def test_local_cohomology_poly1():
    rep = cohomology(cech(poly(1), ["x"]), W10)
    assert rep.nonzero_degrees() == [1]
    h1 = rep.h(1)
    assert all(h1.dims[(d,)] == (1 if d <= -1 else 0) for d in range(-10, 11))
    assert cohomology(cech(poly(1), ["x"])).h(1).fg == INFINITE


def test_local_cohomology_poly2():
    rep = cohomology(cech(poly(2), ["x", "y"]), "-4:4,-4:4")
    assert rep.nonzero_degrees() == [2]
    h2 = rep.h(2).dims
    assert all(h2[(a, b)] == (1 if a <= -1 and b <= -1 else 0) for a in range(-4, 5) for b in range(-4, 5))


def test_cech_depth():
    for n in (1, 2):
        R = poly(n)
        rep = cohomology(cech(R, [[1 if j == i else 0 for j in range(n)] for i in range(n)]))
        assert rep.nonzero_degrees() == [n]


def test_zero_complex():
    Z = FreeComplex(poly(1), {})
    rep = cohomology(Z)
    assert rep.nonzero_degrees() == [] and rep.all_finite()


def test_window_too_small_is_unknown():
    rep = cohomology(cech(poly(1), ["x"]), "0:1")
    assert rep.h(1).fg == UNKNOWN
    assert cohomology(cech(poly(1), ["x"]), "-1:1").h(1).fg == INFINITE


def test_dual_of_koszul():
    rep = cohomology(dual(koszul(poly(2), ["x", "y"])))
    assert rep.nonzero_degrees() == [2]
    assert dims(rep, 2) == {(-1, -1): 1}


def test_d_squared_checked():
    R = poly(1)
    t = [((0,), ())]
    with pytest.raises(ChainMapError):
        FreeComplex(R, {0: t, 1: [((-1,), ())], 2: [((-2,), ())]}, {0: [[1]], 1: [[1]]})


def test_chain_map_checked():
    R = poly(1)
    K = koszul(R, ["x"])
    with pytest.raises(ChainMapError):
        FreeChainMap(K, unit_complex(R), {0: [[1]], -1: []})  # would need to kill d


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        tensor(unit_complex(poly(1)), unit_complex(trunc(2)))


def test_complex_json_round_trip():
    K = koszul(cross(), ["x"])
    data = json.loads(json.dumps(K.to_json()))
    assert data["schema"] == "tstruct/complex@1"
    assert FreeComplex.from_json(data) == K


def test_complex_json_spec_shape():
    raw = {"ring": {"field": "Q", "family": {"poly": 1}},
           "terms": {"-1": [{"twist": [1], "inverted": []}], "0": [{"twist": [0], "inverted": []}]},
           "diffs": {"-1": [[{"c": "1", "mono": [1]}]]}}
    K = FreeComplex.from_json(raw)
    assert cohomology(K).h(0).support == {"(x)"}


def test_perfectness_examples():
    for R in (poly(1), poly(2), trunc(2), cross()):
        gens = [[1 if j == i else 0 for j in range(R.ngens)] for i in range(R.ngens)]
        assert is_perfect(koszul(R, gens))
        assert is_perfect(unit_complex(R))
    rep = perfectness(residue_field(trunc(2)))
    assert not rep.perfect and rep.certificate["period"] == 1
    rep = perfectness(residue_field(cross()))
    assert not rep.perfect and rep.certificate["period"] == 2
    assert is_perfect(as_mod(koszul(cross(), ["x", "y"])))
    assert not is_perfect(cech(poly(1), ["x"]))


def test_perfectness_trunc3_period_two():
    rep = perfectness(residue_field(trunc(3)))
    assert not rep.perfect and rep.certificate["period"] == 2


def _alternating(E, F, C, window):
    rE, rF, rC = (cohomology(X, window) for X in (E, F, C))
    degs = set(rE.degrees) | set(rF.degrees) | set(rC.degrees)
    for d in rE.window.degrees():
        total = 0
        for i in degs:
            total += (-1) ** (i % 2) * (rE.h(i).dims.get(d, 0) - rF.h(i).dims.get(d, 0) + rC.h(i).dims.get(d, 0))
        assert total == 0, d


@pytest.mark.parametrize("ring", [poly(1), trunc(2), cross()], ids=["poly1", "trunc2", "cross"])
def test_cone_long_exact_sequence(ring):
    rng = random.Random(3)
    V = ring.skeleton().points
    for _ in range(12):
        E = as_mod(random_complex(ring, rng))
        maps = [std_truncate_with_map(E, rng.randint(-2, 1), "<=")[1]]
        Vset = ring.skeleton().closure({rng.choice(V)})
        maps.append(local_cohomology_with_map(E, Vset)[1])
        for f in maps:
            C = cone(f)
            box = C.box
            window = [(a, b) for a, b in zip(box.lo, box.hi)]
            _alternating(f.source, f.target, C, window)


def test_tensor_support_inside():
    for R in (poly(1), poly(2), cross()):
        pts = R.skeleton().points
        for p in pts:
            for q in pts:
                Kp = koszul(R, [[1 if j in R.prime_vars(p) and j == i else 0 for j in range(R.ngens)]
                                for i in sorted(R.prime_vars(p))])
                Kq = koszul(R, [[1 if j == i else 0 for j in range(R.ngens)] for i in sorted(R.prime_vars(q))])
                T = tensor(Kp, Kq)
                sE = set().union(*[r.support for r in cohomology(Kp).degrees.values()])
                sT = set().union(*[r.support for r in cohomology(T).degrees.values()])
                assert sT <= sE


def test_tensor_free_mod_matches_free_tensor():
    R = poly(2)
    C = cech(R, ["x", "y"])
    a = cohomology(tensor(C, unit_complex(R)), "-3:3,-3:3")
    b = cohomology(tensor_free_mod(C, as_mod(unit_complex(R))), "-3:3,-3:3")
    assert a.agrees_with(b)


def test_mod_chain_map_checked():
    E = as_mod(koszul(poly(1), ["x"]))
    T, inc = std_truncate_with_map(E, 0, "<=")
    assert isinstance(inc, ChainMap)
    inc.check()
