"""Executable checks of the structural statements, as pass/fail suites.

Every suite returns a :class:`SuiteReport`.  Suites are deterministic
functions of their parameters and seed; ``wall_time`` is the only field
that varies between runs and is left out of :meth:`SuiteReport.digest`.

Each suite accepts a ``mutation`` argument naming a deliberately broken
variant of the code under test; with it the suite must not PASS (it
FAILs on the default cases).  ``MUTATIONS`` lists them.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import filtration as fl
from .complexes import (
    INFINITE,
    FreeComplex,
    ModComplex,
    as_mod,
    cech,
    cohomology,
    direct_sum,
    koszul,
    perfectness,
    residue_field,
    shift,
    tensor,
    tensor_free_mod,
    unit_complex,
)
from .errors import TStructError
from .filtration import ThomasonFiltration
from .graded_rings import GradedRing, cross, poly, trunc
from .spectral_poset import SpecSpace, enumerate_posets
from .truncation import tau_geq, tau_leq

SCHEMA_SUITE = "tstruct/suite@1"
PASS, FAIL, INCONCLUSIVE, SKIP = "PASS", "FAIL", "INCONCLUSIVE", "SKIP"


@dataclass
class SuiteReport:
    suite: str
    anchor: str
    params: dict
    seed: int | None = None
    cases: int = 0
    skipped: int = 0
    inconclusive: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        if self.failures:
            return FAIL
        if self.inconclusive:
            return INCONCLUSIVE
        if self.cases and self.skipped == self.cases:
            return SKIP
        return PASS

    def fail(self, **witness):
        self.failures.append(witness)

    def to_json(self, include_time: bool = True) -> dict:
        out = {
            "schema": SCHEMA_SUITE,
            "suite": self.suite,
            "anchor": self.anchor,
            "status": self.status,
            "params": self.params,
            "seed": self.seed,
            "cases": self.cases,
            "skipped": self.skipped,
            "inconclusive": self.inconclusive,
            "failures": self.failures,
            "notes": self.notes,
        }
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_json(include_time=False), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def worker_count() -> int:
    raw = os.environ.get("TSTRUCT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise TStructError(f"TSTRUCT_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(8, os.cpu_count() or 1))


def _timed(fn):
    def run(*args, **kw):
        t = time.perf_counter()
        rep = fn(*args, **kw)
        rep.wall_time = time.perf_counter() - t
        return rep

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    run.__wrapped__ = fn
    return run


# ---------------------------------------------------------------------------
# locality of the weak Cousin condition
# ---------------------------------------------------------------------------

def _definitional_weak_cousin_across(phi: ThomasonFiltration, Z) -> bool:
    """Weak Cousin across Z straight from the definition: a direct generalization
    is a strict specialization p ~> q with no third point in between."""
    space = phi.space
    pts = space.points
    Z = frozenset(Z)
    lo, hi = (phi.steps[0][0] - 1, phi.steps[-1][0] + 1) if phi.steps else (0, 0)
    for q in Z:
        for p in Z:
            if p == q or not space.specializes(p, q):
                continue
            if any(s not in (p, q) and space.specializes(p, s) and space.specializes(s, q) for s in pts):
                continue
            for n in range(lo, hi + 1):
                if q in phi(n) and p not in phi(n - 1):
                    return False
    return True


def _all_generalizations(space, q):
    return space.generalizations(q) - {q}


def _locality_predicate(mutation):
    if mutation == "all_generalizations":
        return lambda phi, Z: fl._weak_cousin(phi, Z, _all_generalizations)
    if mutation is not None:
        raise TStructError(f"unknown mutation {mutation!r} for the locality suite")
    return fl.is_weak_cousin_across


def _locality_chunk(args):
    space_json, lo, hi, mutation = args
    space = SpecSpace.from_json(space_json)
    pred = _locality_predicate(mutation)
    spcl = space.spcl_subsets()
    nbhd = {s: space.generalization_neighborhood(s) for s in space.points}
    cases, failures = 0, []
    for phi in fl.enumerate_filtrations(space, lo, hi, spcl):
        local = {s: fl.restrict(phi, nbhd[s].points) for s in space.points}
        for Z in spcl:
            cases += 1
            whole = pred(phi, Z)
            pointwise = all(pred(local[s], Z & frozenset(nbhd[s].points)) for s in Z)
            remark = pred(fl.restrict(phi, Z), Z) if Z else True
            truth = _definitional_weak_cousin_across(phi, Z)
            if not (whole == pointwise == remark == truth):
                failures.append(
                    {
                        "space": space.to_json(),
                        "filtration": phi.to_json(),
                        "Z": sorted(Z),
                        "across_Z": whole,
                        "pointwise_local": pointwise,
                        "on_subspace": remark,
                        "definition": truth,
                    }
                )
                if len(failures) >= 5:
                    return cases, failures
    return cases, failures


@_timed
def suite_poset_locality(max_points: int = 5, step_window=(-3, 3), mutation: str | None = None,
                         workers: int | None = None) -> SuiteReport:
    """Weak Cousin across Z is local on Z: it holds iff it holds on every generalization
    neighbourhood of a point of Z, iff phi & Z is weak Cousin on the subspace Z.

    Exhaustive over all posets up to isomorphism with at most ``max_points``
    points and all filtrations whose change points lie in ``step_window``.
    Each verdict is also compared with a brute-force reading of the definition.
    """
    lo, hi = step_window
    rep = SuiteReport(
        "locality",
        "weak Cousin across Z is local, and equals weak Cousin of the restriction to Z",
        {"max_points": max_points, "step_window": [lo, hi], "mutation": mutation},
    )
    jobs = [(s.to_json(), lo, hi, mutation) for s in enumerate_posets(max_points)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_locality_chunk, jobs))
    else:
        results = [_locality_chunk(j) for j in jobs]
    for cases, failures in results:
        rep.cases += cases
        rep.failures.extend(failures)
    rep.notes["posets"] = len(jobs)
    return rep


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------

def _var(ring, k):
    u = [0] * ring.ngens
    u[k] = 1
    return u


def probe_koszul(ring: GradedRing, point: str) -> FreeComplex:
    return koszul(ring, [_var(ring, k) for k in sorted(ring.prime_vars(point))])


def random_complex(ring: GradedRing, rng: random.Random) -> FreeComplex:
    """Small bounded complex: sums and tensors of Koszul complexes at skeleton primes,
    localizations of R, all shifted into degrees about [-2, 1]."""
    pts = list(ring.skeleton().points)
    z = (0,) * ring.ngens
    legal_S = [frozenset({k}) for k in range(ring.ngens) if ring.legal_inverted({k})]

    def piece():
        r = rng.random()
        if r < 0.55:
            return probe_koszul(ring, rng.choice(pts))
        if r < 0.7 and legal_S:
            return FreeComplex(ring, {0: [(z, rng.choice(legal_S))]})
        if r < 0.85:
            return tensor(probe_koszul(ring, rng.choice(pts)), probe_koszul(ring, rng.choice(pts)))
        return unit_complex(ring)

    E = shift(piece(), rng.randint(-1, 2))
    if rng.random() < 0.5:
        E = direct_sum(E, shift(piece(), rng.randint(-1, 2)))
    return E


def random_filtration(space: SpecSpace, rng: random.Random, lo: int = -2, hi: int = 2) -> ThomasonFiltration:
    spcl = space.spcl_subsets()
    cur = rng.choice(spcl)
    low = cur
    steps = []
    for n in range(lo, hi + 1):
        if rng.random() < 0.5:
            cur = rng.choice([s for s in spcl if s <= cur])
        steps.append((n, cur))
    return ThomasonFiltration(space, low, steps)


def _random_above(space, rng, floor, length):
    """Random decreasing chain of ``length`` spcl sets, all containing ``floor``."""
    spcl = [s for s in space.spcl_subsets() if floor <= s]
    cur = rng.choice(spcl)
    out = [cur]
    for _ in range(length - 1):
        cur = rng.choice([s for s in spcl if s <= cur])
        out.append(cur)
    return out


def _random_below(space, rng, ceiling, length):
    spcl = [s for s in space.spcl_subsets() if s <= ceiling]
    cur = ceiling
    out = []
    for _ in range(length):
        cur = rng.choice([s for s in spcl if s <= cur])
        out.append(cur)
    return out


def _lowest_degree(E) -> int | None:
    degs = cohomology(E).nonzero_degrees()
    return degs[0] if degs else None


# ---------------------------------------------------------------------------
# agreement of truncations
# ---------------------------------------------------------------------------

def _truncate_below(mutation):
    if mutation == "truncate_below_off_by_one":
        return lambda phi, k: fl.truncate_below(phi, k + 1)
    if mutation is not None:
        raise TStructError(f"unknown mutation {mutation!r} for the truncation agreement suite")
    return fl.truncate_below


@_timed
def suite_truncation_agreement(ring: GradedRing, trials: int = 50, seed: int = 7,
                               mutation: str | None = None) -> SuiteReport:
    """Filtrations that agree from some index on give the same truncation of objects
    whose cohomology starts there; agreement on a strip [a, b] gives the same
    cohomology in degrees [a, b] for objects in degrees >= a.

    Per trial: one random complex E and three checks (truncating the filtration
    below k; a second filtration agreeing from j on; one agreeing on a strip).
    Trials whose complex is acyclic are skipped, as are deliberately
    out-of-range indices (one trial in eight picks k above the cohomology of E).
    """
    rng = random.Random(seed)
    space = ring.skeleton()
    cut = _truncate_below(mutation)
    rep = SuiteReport(
        "truncation_agreement",
        "filtrations agreeing from an index on, or on a strip, give matching truncations",
        {"ring": ring.to_json(), "trials": trials, "mutation": mutation},
        seed=seed,
    )
    for t in range(trials):
        E = random_complex(ring, rng)
        phi = random_filtration(space, rng)
        low = _lowest_degree(E)
        rep.cases += 1
        if low is None:
            rep.skipped += 1
            continue
        E = as_mod(E)
        base = cohomology(tau_leq(phi, E))
        # truncating the filtration below k
        r = rng.random()
        k = low + 1 if r < 0.125 else (low - 1 if r < 0.3 else low)
        if k > low:
            rep.skipped += 1
        else:
            other = cohomology(tau_leq(cut(phi, k), E))
            if not base.agrees_with(other):
                rep.fail(trial=t, check="truncate_below", k=k, filtration=phi.to_json(),
                         expected=base.to_json(), actual=other.to_json())
        # agreement from j on
        j = low - rng.randint(0, 1)
        below = _random_above(space, rng, phi(j), 3)
        psi = ThomasonFiltration(space, below[0], [(j - 2, below[1]), (j - 1, below[2])] +
                                 [(n, phi(n)) for n in range(j, max(j, phi.window()[1]) + 2)])
        if cut(psi, j) != cut(phi, j):
            rep.fail(trial=t, check="agree_from_j", reason="truncated filtrations differ", j=j)
        else:
            other = cohomology(tau_leq(psi, E))
            if not base.agrees_with(other):
                rep.fail(trial=t, check="agree_from_j", j=j, filtration=phi.to_json(), other=psi.to_json(),
                         expected=base.to_json(), actual=other.to_json())
        # agreement on a strip
        a = low - rng.randint(0, 1)
        b = a + rng.randint(0, 2)
        above = _random_below(space, rng, phi(b), 2)
        below = _random_above(space, rng, phi(a), 2)
        psi = ThomasonFiltration(space, below[0], [(a - 1, below[1])] + [(n, phi(n)) for n in range(a, b + 1)] +
                                 [(b + 1, above[0]), (b + 2, above[1])])
        other = cohomology(tau_leq(psi, E))
        if not base.agrees_with(other, degrees=range(a, b + 1)):
            rep.fail(trial=t, check="agree_on_strip", strip=[a, b], filtration=phi.to_json(), other=psi.to_json(),
                     expected=base.to_json(), actual=other.to_json())
    return rep


# ---------------------------------------------------------------------------
# top local cohomology
# ---------------------------------------------------------------------------

def named_complex(ring: GradedRing, name) -> FreeComplex:
    """``R`` or a Koszul quotient such as ``R/(x)`` or ``R/(x,y)``; complexes pass through."""
    if isinstance(name, FreeComplex):
        return name
    s = str(name).replace(" ", "")
    if s == "R":
        return unit_complex(ring)
    if s.startswith("R/(") and s.endswith(")"):
        names = [v for v in s[3:-1].split(",") if v]
        return koszul(ring, names)
    raise TStructError(f"unknown complex {name!r}; use R or R/(x,...)")


def _max_ideal_cech(ring: GradedRing, mutation) -> FreeComplex:
    C = cech(ring, [_var(ring, k) for k in range(ring.ngens)])
    if mutation == "cech_drops_top_term":
        top = max(C.terms)
        terms = {n: t for n, t in C.terms.items() if n != top}
        diffs = {n: m for n, m in C.diffs.items() if n + 1 != top and n != top}
        return FreeComplex(C.ring, terms, diffs)
    if mutation is not None:
        raise TStructError(f"unknown mutation {mutation!r} for the top local cohomology suite")
    return C


def _support_dim(ring: GradedRing, supp) -> int:
    return max((ring.dim_quotient(p) for p in supp), default=-1)


@_timed
def suite_A2(ring: GradedRing, F="R", window=(-10, 10), mutation: str | None = None) -> SuiteReport:
    """For F with top cohomology in degree n and support of dimension r:
    H^{n+r}_m(F) agrees degreewise with H^r_m(H^n F), and is not finitely generated."""
    E = named_complex(ring, F)
    rep = SuiteReport(
        "A2",
        "top local cohomology of F equals that of its top cohomology module, and is not finitely generated",
        {"ring": ring.to_json(), "F": str(F), "window": list(window), "mutation": mutation},
    )
    C = _max_ideal_cech(ring, mutation)
    M = as_mod(E)
    coh = cohomology(M)
    degs = coh.nonzero_degrees()
    rep.cases = 1
    if not degs:
        rep.skipped = 1
        rep.notes["reason"] = "F is acyclic"
        return rep
    n = degs[-1]
    r = _support_dim(ring, frozenset().union(*(coh.h(j).support for j in degs)))
    if r < 1:
        rep.skipped = 1
        rep.notes["reason"] = f"support of F has dimension {r}, the statement needs positive dimension"
        return rep
    if _support_dim(ring, coh.h(n).support) != r:
        rep.skipped = 1
        rep.notes["reason"] = "top cohomology does not carry the dimension of the support"
        return rep
    top = M.cohomology_module(n).module
    Hn = ModComplex(ring, M.box, {0: top}, {})
    one = tensor_free_mod(C, M)
    two = tensor_free_mod(C, Hn)
    win = [window] * ring.ngens if isinstance(window[0], int) else window
    a = cohomology(one, win).h(n + r)
    b = cohomology(two, win).h(r)
    fa = cohomology(one).h(n + r).fg
    fb = cohomology(two).h(r).fg
    dims = {",".join(map(str, d)): k for d, k in sorted(a.dims.items())}
    rep.notes.update({"n": n, "r": r, "degree": n + r, "dims": dims, "fg": fa, "fg_module": fb})
    if {d: k for d, k in a.dims.items() if k} != {d: k for d, k in b.dims.items() if k}:
        rep.fail(check="degreewise", route_complex=a.to_json(), route_module=b.to_json())
    if fa != INFINITE or fb != INFINITE:
        rep.fail(check="not finitely generated", fg_complex=fa, fg_module=fb)
    return rep


# ---------------------------------------------------------------------------
# non-regular rings
# ---------------------------------------------------------------------------

def finite_length_dims(M: ModComplex, n: int) -> dict | None:
    """Degreewise dims of H^n(M) when it has finite length, else None."""
    dims = M.h_dims(n)
    box = M.box
    for d, k in dims.items():
        if k and any(x in (a, b) for x, a, b in zip(d, box.lo, box.hi)):
            return None
    return {d: k for d, k in dims.items() if k}


@_timed
def suite_nonregular(ring: GradedRing, shifts=(0, 1, 2), mutation: str | None = None) -> SuiteReport:
    """Over a non-regular ring: the residue field is not perfect; truncating K(m)[-n]
    for a filtration whose last nonempty value is {m} at index n leaves k in degree n,
    so the t-structure does not restrict to perfect complexes; over CROSS, a filtration
    constant at {m} on a long enough interval truncates a shift of K((x)) to a
    non-perfect complex."""
    if ring.is_regular:
        raise TStructError("suite_nonregular needs a non-regular ring")
    if mutation not in (None, "treat_as_regular"):
        raise TStructError(f"unknown mutation {mutation!r} for the non-regular suite")
    assume = mutation == "treat_as_regular"
    space = ring.skeleton()
    m = ring.maximal_ideal()
    rep = SuiteReport(
        "nonregular",
        "a non-regular local ring admits no nonconstant filtration restricting to perfect complexes",
        {"ring": ring.to_json(), "shifts": list(shifts), "mutation": mutation},
    )
    # (a) the residue field
    rep.cases += 1
    pk = perfectness(residue_field(ring), assume_regular=assume)
    rep.notes["residue_field"] = pk.to_json()
    want = 1 if (ring.family == "trunc" and ring.param == 2) else (2 if ring.family == "cross" else None)
    if pk.perfect:
        rep.fail(check="residue field", reason="residue field reported perfect")
    elif want is not None and pk.certificate.get("period") != want:
        rep.fail(check="residue field", reason="unexpected period", expected=want, certificate=pk.certificate)
    # (b) the largest-step filtration
    K = probe_koszul(ring, m)
    for n in shifts:
        rep.cases += 1
        phi = fl.shift(fl.standard(space, [m]), -n)
        B = tau_geq(phi, shift(K, -n), 0)
        degs = cohomology(B).nonzero_degrees()
        dims = finite_length_dims(B, n) if degs == [n] else None
        total = sum(dims.values()) if dims is not None else None
        verdict = perfectness(B, assume_regular=assume)
        rep.notes[f"tau_geq0_K(m)[{-n}]"] = {"degrees": degs, "total_dim": total, "perfect": verdict.perfect}
        if total != 1:
            rep.fail(check="residue field in truncation", n=n, degrees=degs, total_dim=total)
        if verdict.perfect:
            rep.fail(check="residue field in truncation", n=n, reason="truncation reported perfect")
    # (c) a long interval at {m} over CROSS
    if ring.family == "cross":
        q = ring.prime_name([0])
        Kq = probe_koszul(ring, q)
        hq = cohomology(Kq).nonzero_degrees()
        width = hq[-1] - hq[0]
        a = 0
        length = width + 2
        phi = fl.explicit(space, space.points, [(a, [m]), (a + length, [])])
        witnesses = []
        for s in range(-a - length - 2, -a + 4):
            rep.cases += 1
            A = tau_leq(phi, shift(Kq, s))
            if not perfectness(A, assume_regular=assume).perfect:
                witnesses.append(s)
        rep.notes["interval"] = {"probe": q, "width": width, "start": a, "length": length, "witness_shifts": witnesses}
        if not witnesses:
            rep.fail(check="long interval", reason="every truncated shift was perfect", width=width, length=length)
    return rep


# ---------------------------------------------------------------------------
# classification predicates against homological evidence
# ---------------------------------------------------------------------------

def _probe_family(ring: GradedRing, Z, shifts) -> list:
    space = ring.skeleton()
    base = [(f"K{p}", probe_koszul(ring, p)) for p in sorted(Z)]
    if frozenset(Z) == space.points:
        base.insert(0, ("R", unit_complex(ring)))
    return [(name, s) for name, _ in base for s in shifts], dict(base)


@_timed
def suite_classification(ring: GradedRing, step_window=(-1, 1), mutation: str | None = None) -> SuiteReport:
    """Restriction predicates against truncations of probes (R, K(p) for p in Z, shifts).

    A predicate that holds must give finitely generated (resp. perfect)
    truncations on every probe; one that fails must be witnessed by some probe,
    otherwise the case is INCONCLUSIVE.
    """
    if mutation not in (None, "swap_corollary_cases"):
        raise TStructError(f"unknown mutation {mutation!r} for the classification suite")
    space = ring.skeleton()
    lo, hi = step_window
    shifts = list(range(-hi - 2, -lo + 3))
    rep = SuiteReport(
        "classification",
        "restriction to bounded coherent complexes is weak Cousin; restriction to perfect complexes "
        "is weak Cousin on regular components and constancy elsewhere",
        {"ring": ring.to_json(), "step_window": [lo, hi], "probe_shifts": shifts, "mutation": mutation},
    )
    regular_flag = mutation != "swap_corollary_cases"
    Zs = [Z for Z in space.spcl_subsets() if Z]
    n_phi = 0
    for phi in fl.enumerate_filtrations(space, lo, hi):
        n_phi += 1
        evidence = {}

        def probe(name, s, base):
            key = (name, s)
            if key not in evidence:
                A = tau_leq(phi, shift(base[name], s))
                fg = cohomology(A).all_finite()
                perf = fg and perfectness(A).perfect
                evidence[key] = (fg, perf)
            return evidence[key]

        for Z in Zs:
            probes, base = _probe_family(ring, Z, shifts)
            for kind, pred in (
                ("bounded_coherent", fl.restricts_to_bounded_coherent(phi, Z)),
                ("perf", fl.restricts_to_perf(phi, Z, regular_case_is_weak_cousin=regular_flag)),
            ):
                rep.cases += 1
                idx = 0 if kind == "bounded_coherent" else 1
                bad = None
                for name, s in probes:
                    if not probe(name, s, base)[idx]:
                        bad = (name, s)
                        break
                case = {"filtration": phi.to_json(), "Z": sorted(Z), "restriction": kind, "predicate": pred}
                if pred and bad is not None:
                    rep.fail(**case, witness={"probe": bad[0], "shift": bad[1]})
                elif not pred and bad is None:
                    rep.inconclusive.append(case)
    rep.notes["filtrations"] = n_phi
    return rep


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

MUTATIONS = {
    "locality": "all_generalizations",
    "truncation_agreement": "truncate_below_off_by_one",
    "a2": "cech_drops_top_term",
    "nonregular": "treat_as_regular",
    "classification": "swap_corollary_cases",
}

SUITES = ("locality", "truncation_agreement", "a2", "nonregular", "classification")


def _mutation_for(name, mutation):
    if mutation is None or mutation == "none":
        return None
    if mutation == "default":
        return MUTATIONS[name]
    return mutation


def run_suite(name: str, seed: int = 7, mutation: str | None = None, max_points: int = 5,
              step_window=(-3, 3)) -> list[SuiteReport]:
    """Run a suite (or ``all``) on its standard cases.

    ``mutation="default"`` runs each suite with its registered mutation.
    ``max_points`` and ``step_window`` bound the locality sweep.
    """
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, seed, mutation, max_points, step_window))
        return out
    if name not in SUITES:
        raise TStructError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    mu = _mutation_for(name, mutation)
    if name == "locality":
        return [suite_poset_locality(max_points, tuple(step_window), mutation=mu)]
    if name == "truncation_agreement":
        return [suite_truncation_agreement(poly(1), 50, seed, mu), suite_truncation_agreement(cross(), 25, seed, mu)]
    if name == "a2":
        return [suite_A2(poly(1), "R", mutation=mu), suite_A2(poly(2), "R/(x)", mutation=mu),
                suite_A2(poly(2), "R", mutation=mu)]
    if name == "nonregular":
        return [suite_nonregular(trunc(2), mutation=mu), suite_nonregular(cross(), mutation=mu)]
    return [suite_classification(R, mutation=mu) for R in (poly(1), trunc(2), cross())]


def overall_status(reports) -> str:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS
