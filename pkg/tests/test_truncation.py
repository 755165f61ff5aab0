import random

import pytest

from tstruct import filtration as fl
from tstruct.complexes import (
    FINITE,
    INFINITE,
    FreeChainMap,
    FreeComplex,
    as_mod,
    cohomology,
    cone,
    direct_sum,
    koszul,
    residue_field,
    shift,
    unit_complex,
)
from tstruct.errors import SpaceMismatchError, UnsupportedError
from tstruct.graded_rings import cross, poly, trunc
from tstruct.spectral_poset import chain
from tstruct.truncation import (
    filtration_of_generators,
    generator_family,
    hom_vanishing,
    ideal_generators,
    in_aisle,
    in_coaisle,
    local_cohomology,
    std_truncate,
    tau,
    tau_geq,
    tau_leq,
)
from tstruct.verify import random_complex, random_filtration

P1 = poly(1)
T2 = trunc(2)


def nonzero(report, n):
    return {d: k for d, k in report.h(n).dims.items() if k}


def test_std_truncate_examples():
    K = koszul(P1, ["x"])
    rep = cohomology(std_truncate(K, 0, ">="))
    assert rep.nonzero_degrees() == [0] and rep.h(0).support == {"(x)"}
    assert cohomology(std_truncate(unit_complex(P1), -1, "<=")).nonzero_degrees() == []
    x = FreeChainMap(FreeComplex(T2, {0: [((1,), ())]}), unit_complex(T2), {0: [[1]]})
    rep = cohomology(std_truncate(cone(x), 0, ">="))
    assert rep.nonzero_degrees() == [0] and nonzero(rep, 0) == {(0,): 1}


def test_std_truncate_keeps_one_side():
    rng = random.Random(5)
    for R in (P1, T2, cross()):
        for _ in range(8):
            E = as_mod(random_complex(R, rng))
            n = rng.randint(-2, 2)
            full = cohomology(E)
            lo = cohomology(std_truncate(E, n, "<="))
            hi = cohomology(std_truncate(E, n, ">="))
            assert lo.agrees_with(full, degrees=range(-6, n + 1))
            assert hi.agrees_with(full, degrees=range(n, 7))
            assert all(i <= n for i in lo.nonzero_degrees()) and all(i >= n for i in hi.nonzero_degrees())


def test_local_cohomology_examples():
    rep = cohomology(local_cohomology(unit_complex(P1), {"(x)"}), "-10:10")
    assert rep.nonzero_degrees() == [1]
    assert all(rep.h(1).dims[(d,)] == (1 if d <= -1 else 0) for d in range(-10, 11))
    rep = cohomology(local_cohomology(unit_complex(T2), {"(x)"}))
    assert rep.agrees_with(cohomology(unit_complex(T2)))
    rep = cohomology(local_cohomology(unit_complex(poly(2)), {"(x,y)"}), "-3:3,-3:3")
    assert rep.nonzero_degrees() == [2]
    assert {d for d, k in rep.h(2).dims.items() if k} == {(a, b) for a in range(-3, 0) for b in range(-3, 0)}


def test_local_cohomology_idempotent():
    for R in (P1, poly(2), cross()):
        S = R.skeleton()
        for V in S.spcl_subsets():
            once = local_cohomology(unit_complex(R), V)
            twice = local_cohomology(once, V)
            assert cohomology(once).agrees_with(cohomology(twice))


def test_ideal_generators():
    S = cross().skeleton()
    # xy = 0, so the whole skeleton needs no inversion at all
    assert ideal_generators(cross(), S.points) is None
    assert ideal_generators(cross(), {"(x,y)"}) == [(0, 1), (1, 0)]
    assert ideal_generators(P1, set()) == []
    assert ideal_generators(P1, P1.skeleton().points) is None
    assert ideal_generators(P1, {"(x)"}) == [(1,)]


def test_in_aisle_examples():
    S = T2.skeleton()
    k = residue_field(T2)
    std = fl.standard(S, {"(x)"})
    assert in_aisle(std, k)
    assert not in_aisle(fl.shift(std, 1), k)  # the aisle of D^{<=-1}
    V = P1.skeleton()
    E = local_cohomology(unit_complex(P1), {"(x)"})
    assert in_aisle(fl.constant(V, {"(x)"}), E)


def test_in_coaisle_examples():
    S = T2.skeleton()
    k = residue_field(T2)
    std = fl.standard(S)
    assert not in_coaisle(std, shift(k, 1))
    assert in_coaisle(std, shift(k, -1))
    Rx = FreeComplex(P1, {0: [((0,), (0,))]})
    assert in_coaisle(fl.constant(P1.skeleton(), {"(x)"}), Rx)


def test_hom_vanishing_matches_examples():
    S = T2.skeleton()
    k = residue_field(T2)
    std = fl.standard(S)
    assert not hom_vanishing(std, shift(k, 1))
    assert hom_vanishing(std, shift(k, -1))


def test_space_mismatch():
    with pytest.raises(SpaceMismatchError):
        in_aisle(fl.standard(chain("a", "b")), unit_complex(P1))


def test_tau_constant_vx():
    phi = fl.constant(P1.skeleton(), {"(x)"})
    tri = tau(phi, unit_complex(P1))
    a = cohomology(tri.A)
    b = cohomology(tri.B)
    assert a.nonzero_degrees() == [1] and a.h(1).fg == INFINITE and a.h(1).support == {"(x)"}
    assert b.nonzero_degrees() == [0] and b.h(0).support == {"(0)", "(x)"} and b.h(0).fg == INFINITE
    assert a.agrees_with(cohomology(local_cohomology(unit_complex(P1), {"(x)"})))
    assert tri.aisle_certificate()["pass"] and tri.coaisle_certificate()["pass"]
    tri.check_maps()
    rep = tri.report("-10:10")
    assert rep["schema"] == "tstruct/triangle@1"
    assert rep["A"]["degrees"]["1"]["fg"] == INFINITE


def test_tau_standard_is_std_truncation():
    rng = random.Random(9)
    for R in (P1, T2, cross()):
        phi = fl.standard(R.skeleton())
        for _ in range(6):
            E = as_mod(random_complex(R, rng))
            assert cohomology(tau_leq(phi, E)).agrees_with(cohomology(std_truncate(E, 0, "<=")))
            assert cohomology(tau_geq(phi, E)).agrees_with(cohomology(std_truncate(E, 1, ">=")))


def test_tau_empty_filtration():
    phi = fl.constant(cross().skeleton(), [])
    E = koszul(cross(), ["x"])
    tri = tau(phi, E)
    assert cohomology(tri.A).nonzero_degrees() == []
    assert cohomology(tri.B).agrees_with(cohomology(E))


@pytest.mark.parametrize("ring", [P1, T2, cross()], ids=["poly1", "trunc2", "cross"])
def test_triangle_contracts_and_degree_bounds(ring):
    rng = random.Random(21)
    S = ring.skeleton()
    for _ in range(15):
        E = as_mod(random_complex(ring, rng))
        phi = random_filtration(S, rng)
        tri = tau(phi, E)
        assert in_aisle(phi, tri.A) and in_coaisle(phi, tri.B)
        low = cohomology(E).nonzero_degrees()
        if low:
            j = low[0]
            assert all(i >= j for i in cohomology(tri.A).nonzero_degrees())
            assert all(i >= j for i in cohomology(tri.B).nonzero_degrees())


def test_support_preservation():
    rng = random.Random(4)
    R = cross()
    S = R.skeleton()
    Z = S.closure({"(x)"})
    for _ in range(10):
        E = koszul(R, ["x"]) if rng.random() < 0.5 else shift(koszul(R, ["x", "y"]), rng.randint(-1, 1))
        phi = random_filtration(S, rng)
        full = tau(phi, E)
        psi = fl.ThomasonFiltration(S, phi.low_tail & Z, [(t, v & Z) for t, v in phi.steps])
        part = tau(psi, E)
        assert cohomology(full.A).agrees_with(cohomology(part.A))
        assert cohomology(full.B).agrees_with(cohomology(part.B))


def test_splitting_over_disjoint_supports():
    rng = random.Random(8)
    R = cross()
    S = R.skeleton()
    # (x) and (y) are disjoint closed sets once the closed point is excluded; use K(x,y) and R_y localizations
    E1 = FreeComplex(R, {0: [((0, 0), (0,))]})  # R_x, supported away from (y)
    E2 = FreeComplex(R, {0: [((0, 0), (1,))]})  # R_y
    for _ in range(10):
        phi = random_filtration(S, rng)
        whole = tau(phi, direct_sum(E1, E2))
        parts = [tau(phi, E1), tau(phi, E2)]
        for side in ("A", "B"):
            a = cohomology(getattr(whole, side))
            p1, p2 = (cohomology(getattr(t, side)) for t in parts)
            for n in set(a.nonzero_degrees()) | set(p1.nonzero_degrees()) | set(p2.nonzero_degrees()):
                assert a.h(n).support == p1.h(n).support | p2.h(n).support
                for d in a.window.degrees():
                    assert a.h(n).dims.get(d, 0) == p1.h(n).dims.get(d, 0) + p2.h(n).dims.get(d, 0)


def test_filtration_of_generators_examples():
    S1 = P1.skeleton()
    assert filtration_of_generators(P1, [koszul(P1, ["x"])]) == fl.standard(S1, {"(x)"})
    assert filtration_of_generators(P1, [unit_complex(P1)]) == fl.standard(S1)
    P2 = poly(2)
    S2 = P2.skeleton()
    phi = filtration_of_generators(P2, [koszul(P2, ["x"]), shift(koszul(P2, ["y"]), -1)])
    Vx, Vy = S2.closure({"(x)"}), S2.closure({"(y)"})
    assert phi(0) == Vx | Vy and phi(-3) == Vx | Vy
    assert phi(1) == Vy and phi(2) == set()


def test_generator_family_needs_vanishing():
    with pytest.raises(UnsupportedError):
        generator_family(P1, fl.constant(P1.skeleton(), {"(x)"}))


def test_generators_lie_in_aisle():
    for R in (P1, T2, cross()):
        for phi in fl.enumerate_filtrations(R.skeleton(), -1, 1):
            if not fl.is_eventually_vanishing(phi):
                continue
            for G in generator_family(R, phi):
                assert in_aisle(phi, G)


def test_truncation_in_residue_field_case():
    S = T2.skeleton()
    K = koszul(T2, ["x"])
    for n in (0, 1, 2):
        phi = fl.shift(fl.standard(S), -n)
        rep = cohomology(tau_geq(phi, shift(K, -n), 0))
        assert rep.nonzero_degrees() == [n]
        assert nonzero(rep, n) and sum(nonzero(rep, n).values()) == 1 and rep.h(n).fg == FINITE
