"""Standard and filtration truncations with aisle / co-aisle certificates.

For a filtration ``phi`` on the skeleton of a ring, ``tau(phi, E)`` returns
a triangle ``A -> E -> B`` with ``A`` in the aisle (every ``H^i(A)`` is
supported in ``phi(i)``) and ``B`` in the co-aisle.  The co-aisle test is
the local-cohomology criterion: for every distinct value ``V = phi(n)``
(with ``n`` the largest index carrying it), ``H^j(R Gamma_V B) = 0`` for
all ``j <= n``.  :func:`hom_vanishing` is an independent oracle for it.

The construction walks the distinct values of ``phi`` from the largest set
(smallest index) to the smallest.  At each value it splits off
``tau^{<= n} R Gamma_V`` of what is left via a cone; the leftover is the
co-aisle part, and the aisle part is the fiber of ``E -> B``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import (
    ChainMap,
    FreeComplex,
    ModComplex,
    as_mod,
    cech,
    cohomology,
    cone_inclusion,
    dual,
    fiber_projection,
    identity_map,
    koszul,
    mod_cone,
    quotient,
    shift,
    submodule,
    tensor_free_mod,
)
from .errors import SpaceMismatchError, TStructError, UnsupportedError
from .filtration import ThomasonFiltration, is_eventually_vanishing, shift as shift_filtration
from .graded_rings import GradedRing
from .linalg import identity, matmul, transpose, zeros

SCHEMA_TRIANGLE = "tstruct/triangle@1"

LE, GE = "<=", ">="


def _side(side: str) -> str:
    s = side.strip().lower()
    if s in ("<=", "le", "leq", "≤"):
        return LE
    if s in (">=", "ge", "geq", "≥"):
        return GE
    raise TStructError(f"truncation side must be <= or >=, got {side!r}")


# -- standard truncation -----------------------------------------------------

def std_truncate_with_map(E, n: int, side: str):
    """Smart truncation together with its canonical map.

    ``<=``: the subcomplex ``... -> E^{n-1} -> ker d^n`` and its inclusion into E.
    ``>=``: the quotient ``coker d^{n-1} -> E^{n+1} -> ...`` and the projection from E.
    """
    E = as_mod(E)
    side = _side(side)
    ring = E.ring
    F = ring.field
    box = E.box
    if side == LE:
        K = submodule(E.term(n), {d: E.cycles(n, d) for d in box.degrees()})
        terms = {j: M for j, M in E.terms.items() if j < n}
        terms[n] = K.module
        diffs = {j: E.diffs[j] for j in E.diffs if j < n - 1}
        if n - 1 in E.diffs:
            diffs[n - 1] = {d: matmul(K.coords[d], E.diff(n - 1, d), F, E.dim(n, d)) for d in box.degrees()}
        T = ModComplex(ring, box, terms, diffs)
        comps = {j: {d: identity(E.dim(j, d), F) for d in box.degrees()} for j in T.degrees() if j < n}
        comps[n] = {d: _cols(K.basis[d], E.dim(n, d), F) for d in box.degrees()}
        return T, ChainMap(T, E, comps)
    images = {}
    for d in box.degrees():
        D = E.diff(n - 1, d)
        images[d] = transpose(D, E.dim(n - 1, d)) if E.dim(n, d) else []
    Q = quotient(E.term(n), images)
    terms = {j: M for j, M in E.terms.items() if j > n}
    terms[n] = Q.module
    diffs = {j: E.diffs[j] for j in E.diffs if j > n}
    if n in E.diffs:
        diffs[n] = {d: matmul(E.diff(n, d), _cols(Q.section[d], E.dim(n, d), F), F, E.dim(n, d)) for d in box.degrees()}
    T = ModComplex(ring, box, terms, diffs)
    comps = {j: {d: identity(E.dim(j, d), F) for d in box.degrees()} for j in T.degrees() if j > n}
    comps[n] = {d: Q.proj[d] if Q.proj[d] else zeros(Q.module.dims[d], E.dim(n, d), F) for d in box.degrees()}
    return T, ChainMap(E, T, comps)


def _cols(cols, length, F):
    if not cols:
        return zeros(length, 0, F)
    return [list(r) for r in zip(*cols)]


def std_truncate(E, n: int, side: str) -> ModComplex:
    return std_truncate_with_map(E, n, side)[0]


# -- local cohomology -----------------------------------------------------------

def _check_space(ring: GradedRing, phi_or_space):
    space = phi_or_space.space if isinstance(phi_or_space, ThomasonFiltration) else phi_or_space
    if space != ring.skeleton():
        raise SpaceMismatchError("filtration must live on the skeleton of the ring")


def ideal_generators(ring: GradedRing, V) -> list | None:
    """Monomial generators of an ideal whose vanishing locus is the closed set V.

    Returns None when that ideal is zero or contains no nonzero element to
    invert (V is then everything and local cohomology is the identity).
    """
    space = ring.skeleton()
    V = space.require_spcl(V)
    if not V:
        return []
    mins = [ring.prime_vars(p) for p in space.minimal_points(V)]
    if any(not T for T in mins):
        return None
    gens = set()
    for choice in itertools.product(*[sorted(T) for T in mins]):
        u = [0] * ring.ngens
        for k in choice:
            u[k] += 1
        u = tuple(u)
        if ring.monomial_status(u, ()) == "ok":
            gens.add(u)
    minimal = sorted(g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens))
    return minimal or None


def local_cohomology_with_map(E, V):
    """R Gamma_V(E) with its canonical map to E."""
    E = as_mod(E)
    ring = E.ring
    gens = ideal_generators(ring, V)
    if gens is None:
        return E, identity_map(E)
    if not gens:
        Z = ModComplex(ring, E.box, {}, {})
        return Z, ChainMap(Z, E, {})
    C = cech(ring, [list(g) for g in gens])
    return tensor_free_mod(C, E, with_projection=True)


def local_cohomology(E, Z) -> ModComplex:
    """R Gamma_Z(E) as Cech complex (x) E; Z is a closed subset of the skeleton."""
    return local_cohomology_with_map(E, Z)[0]


# -- membership ---------------------------------------------------------------------

def aisle_violations(phi: ThomasonFiltration, E) -> list:
    E = as_mod(E)
    _check_space(E.ring, phi)
    rep = cohomology(E)
    return [(i, sorted(r.support - phi(i))) for i, r in sorted(rep.degrees.items()) if not r.support <= phi(i)]


def in_aisle(phi: ThomasonFiltration, E) -> bool:
    """supp H^i(E) is contained in phi(i) for every i."""
    return not aisle_violations(phi, E)


def coaisle_violations(phi: ThomasonFiltration, E) -> list:
    E = as_mod(E)
    _check_space(E.ring, phi)
    out = []
    for n, V in phi.distinct_steps():
        G = local_cohomology(E, V)
        for j in G.degrees():
            if (n is None or j <= n) and any(G.h_dims(j).values()):
                out.append({"step": n, "value": sorted(V), "degree": j})
    return out


def in_coaisle(phi: ThomasonFiltration, E) -> bool:
    """H^j(R Gamma_{phi(n)} E) = 0 for j <= n, for each distinct value of phi."""
    return not coaisle_violations(phi, E)


def hom_vanishing(phi: ThomasonFiltration, E, shifts=range(5)) -> bool:
    """Oracle for the co-aisle: Hom(K(p)[j - n], E) = 0 in every internal degree,
    for p in phi(n) and j in ``shifts``; all shifts when phi(n) is the high tail."""
    E = as_mod(E)
    ring = E.ring
    _check_space(ring, phi)
    cache = {}
    for n, V in phi.distinct_steps():
        for p in sorted(V):
            if p not in cache:
                K = koszul(ring, [_var(ring, k) for k in sorted(ring.prime_vars(p))])
                cache[p] = tensor_free_mod(dual(K), E)
            H = cache[p]
            degs = H.degrees() if n is None else [n - j for j in shifts]
            for m in degs:
                if m in H.terms and any(H.h_dims(m).values()):
                    return False
    return True


def _var(ring, k):
    u = [0] * ring.ngens
    u[k] = 1
    return u


# -- filtration truncation -------------------------------------------------------------

@dataclass
class TruncationTriangle:
    phi: ThomasonFiltration
    A: ModComplex
    E: ModComplex
    B: ModComplex
    a_to_e: ChainMap
    e_to_b: ChainMap

    def aisle_certificate(self) -> dict:
        v = aisle_violations(self.phi, self.A)
        return {"criterion": "supp H^i(A) in phi(i)", "pass": not v, "violations": v}

    def coaisle_certificate(self) -> dict:
        v = coaisle_violations(self.phi, self.B)
        return {"criterion": "H^j(R Gamma_phi(n) B) = 0 for j <= n", "pass": not v, "violations": v}

    def check_maps(self) -> None:
        self.a_to_e.check()
        self.e_to_b.check()

    def report(self, window=None) -> dict:
        return {
            "schema": SCHEMA_TRIANGLE,
            "filtration": self.phi.to_json(),
            "A": cohomology(self.A, window).to_json(),
            "E": cohomology(self.E, window).to_json(),
            "B": cohomology(self.B, window).to_json(),
            "aisle_certificate": self.aisle_certificate(),
            "coaisle_certificate": self.coaisle_certificate(),
        }


def tau(phi: ThomasonFiltration, E) -> TruncationTriangle:
    """Truncation triangle of E for the t-structure of phi."""
    E = as_mod(E)
    _check_space(E.ring, phi)
    B = E
    g = identity_map(E)
    for n, V in phi.distinct_steps():
        G, pi = local_cohomology_with_map(B, V)
        if n is None:
            A_j, h = G, pi
        else:
            A_j, inc = std_truncate_with_map(G, n, LE)
            h = inc.then(pi)
        if A_j.is_zero() or A_j.is_acyclic():
            continue
        C = mod_cone(h)
        g = g.then(cone_inclusion(h, C))
        B = C
    A, p = fiber_projection(g)
    return TruncationTriangle(phi, A, E, B, p, g)


def tau_leq(phi: ThomasonFiltration, E) -> ModComplex:
    """tau^{<=0}_phi(E)."""
    return tau(phi, E).A


def tau_geq(phi: ThomasonFiltration, E, k: int = 1) -> ModComplex:
    """tau^{>=k}_phi(E): the co-aisle part of E for the filtration n -> phi(n + 1 - k)."""
    return tau(shift_filtration(phi, 1 - k), E).B


# -- the dictionary -------------------------------------------------------------------

def filtration_of_generators(ring: GradedRing, generators) -> ThomasonFiltration:
    """phi(i) = union over generators P and j >= i of supp H^j(P)."""
    space = ring.skeleton()
    pieces = []
    for P in generators:
        rep = cohomology(P)
        for j, r in rep.degrees.items():
            if r.fg == "UNKNOWN":
                raise UnsupportedError("support of a generator could not be decided")
            if r.support:
                pieces.append((j, r.support))
    if not pieces:
        return ThomasonFiltration(space, ())
    lo = min(j for j, _ in pieces)
    hi = max(j for j, _ in pieces)

    def value(i):
        out = set()
        for j, s in pieces:
            if j >= i:
                out |= s
        return frozenset(out)

    return ThomasonFiltration(space, value(lo), [(i, value(i)) for i in range(lo + 1, hi + 2)])


def generator_family(ring: GradedRing, phi: ThomasonFiltration) -> list[FreeComplex]:
    """K(p)[-n] for each minimal point p of each distinct value phi(n)."""
    _check_space(ring, phi)
    if not is_eventually_vanishing(phi):
        raise UnsupportedError("generator families are built for eventually vanishing filtrations")
    space = phi.space
    out = []
    for n, V in phi.distinct_steps():
        for p in space.minimal_points(V):
            K = koszul(ring, [_var(ring, k) for k in sorted(ring.prime_vars(p))])
            out.append(shift(K, -n))
    return out
