"""Thomason filtrations on finite spectral spaces and the classification predicates.

A filtration is stored by its change points: ``phi(n)`` equals ``low_tail``
for ``n`` below the first change point, then the value of the most recent
change point, so the high tail is simply the last value.  Canonical form
merges equal neighbours, which makes structural equality coincide with
equality of the underlying functions Z -> Spcl.
"""

from __future__ import annotations

import json
from typing import Callable, Iterable

from .errors import NotSpecializationClosedError, SpaceMismatchError, TStructError
from .spectral_poset import SpclSubset, SpecSpace


class ThomasonFiltration:
    __slots__ = ("space", "low_tail", "steps")

    def __init__(self, space: SpecSpace, low_tail: Iterable[str], steps: Iterable[tuple[int, Iterable[str]]] = ()):
        low = space.require_spcl(low_tail)
        canon = []
        prev = low
        for n, value in sorted(((int(n), frozenset(v)) for n, v in steps), key=lambda t: t[0]):
            value = space.require_spcl(value)
            if canon and canon[-1][0] == n:
                raise TStructError(f"duplicate change point {n}")
            if not value <= prev:
                raise TStructError(
                    f"filtration must decrease: phi({n}) = {sorted(value)} is not contained in {sorted(prev)}"
                )
            if value != prev:
                canon.append((n, value))
            prev = value
        self.space = space
        self.low_tail = low
        self.steps = tuple(canon)

    # -- evaluation ----------------------------------------------------
    @property
    def high_tail(self) -> SpclSubset:
        return self.steps[-1][1] if self.steps else self.low_tail

    def __call__(self, n: int) -> SpclSubset:
        value = self.low_tail
        for t, v in self.steps:
            if t > n:
                break
            value = v
        return value

    def breakpoints(self) -> list[int]:
        return [t for t, _ in self.steps]

    def window(self) -> tuple[int, int]:
        """Integers [a, b] such that phi is constant below a and above b."""
        if not self.steps:
            return (0, 0)
        return (self.steps[0][0] - 1, self.steps[-1][0])

    def values(self, lo: int, hi: int) -> list[SpclSubset]:
        return [self(n) for n in range(lo, hi + 1)]

    def distinct_steps(self) -> list[tuple[int | None, SpclSubset]]:
        """Nonempty values paired with the largest index carrying them (None for +infinity),
        ordered by increasing index."""
        out = []
        vals = [self.low_tail] + [v for _, v in self.steps]
        ends = [t - 1 for t, _ in self.steps] + [None]
        for v, end in zip(vals, ends):
            if v:
                out.append((end, v))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ThomasonFiltration)
            and self.space == other.space
            and self.low_tail == other.low_tail
            and self.steps == other.steps
        )

    def __hash__(self):
        return hash((self.low_tail, self.steps))

    def __repr__(self):
        st = ", ".join(f"{t}: {sorted(v)}" for t, v in self.steps)
        return f"ThomasonFiltration(low={sorted(self.low_tail)}, steps={{{st}}})"

    # -- serialization -------------------------------------------------
    def to_json(self, space_ref: str | None = None) -> dict:
        out = {}
        if space_ref is not None:
            out["space"] = space_ref
        out["low_tail"] = sorted(self.low_tail)
        out["steps"] = [{"at": t, "value": sorted(v)} for t, v in self.steps]
        out["high_tail"] = sorted(self.high_tail)
        return out

    @classmethod
    def from_json(cls, data, space: SpecSpace) -> "ThomasonFiltration":
        """Parse the file format.  A ``high_tail`` differing from the last listed value
        takes over right after the last listed index."""
        if isinstance(data, str):
            data = json.loads(data)
        low = frozenset(map(str, data.get("low_tail", [])))
        steps = [(int(s["at"]), frozenset(map(str, s["value"]))) for s in data.get("steps", [])]
        steps.sort(key=lambda t: t[0])
        if "high_tail" in data:
            high = frozenset(map(str, data["high_tail"]))
            last = steps[-1][1] if steps else low
            if high != last:
                at = steps[-1][0] + 1 if steps else 0
                steps.append((at, high))
        return cls(space, low, steps)


# -- constructors ---------------------------------------------------------

def constant(space: SpecSpace, Z: Iterable[str]) -> ThomasonFiltration:
    return ThomasonFiltration(space, Z)


def standard(space: SpecSpace, Z: Iterable[str] | None = None) -> ThomasonFiltration:
    """n -> Z for n <= 0 and the empty set above."""
    Z = space.points if Z is None else Z
    return ThomasonFiltration(space, Z, [(1, ())])


def tilting(space: SpecSpace, W: Iterable[str], Z: Iterable[str], k1: int, k2: int) -> ThomasonFiltration:
    W, Z = space.require_spcl(W), space.require_spcl(Z)
    if not Z <= W:
        raise TStructError("tilting needs Z contained in W")
    if k1 > k2:
        raise TStructError("tilting needs k1 <= k2")
    return ThomasonFiltration(space, W, [(k1, Z), (k2 + 1, ())])


def explicit(space: SpecSpace, low_tail, steps, high_tail=None) -> ThomasonFiltration:
    data = {"low_tail": sorted(low_tail), "steps": [{"at": n, "value": sorted(v)} for n, v in steps]}
    if high_tail is not None:
        data["high_tail"] = sorted(high_tail)
    return ThomasonFiltration.from_json(data, space)


def construct(space: SpecSpace, kind: str, **kw) -> ThomasonFiltration:
    builders = {"constant": constant, "standard": standard, "tilting": tilting, "explicit": explicit}
    if kind not in builders:
        raise TStructError(f"unknown filtration kind {kind!r}")
    return builders[kind](space, **kw)


# -- operations -------------------------------------------------------------

def shift(phi: ThomasonFiltration, s: int) -> ThomasonFiltration:
    """n -> phi(n + s)."""
    return ThomasonFiltration(phi.space, phi.low_tail, [(t - s, v) for t, v in phi.steps])


def truncate_below(phi: ThomasonFiltration, k: int) -> ThomasonFiltration:
    """Constant at phi(k) for indices <= k, phi itself above."""
    return ThomasonFiltration(phi.space, phi(k), [(t, v) for t, v in phi.steps if t > k])


def restrict(phi: ThomasonFiltration, S: Iterable[str]) -> ThomasonFiltration:
    S = frozenset(S)
    sub = phi.space.subspace(S)
    return ThomasonFiltration(sub, phi.low_tail & S, [(t, v & S) for t, v in phi.steps])


def localize(phi: ThomasonFiltration, p: str) -> ThomasonFiltration:
    """phi restricted to the generalizations of p."""
    return restrict(phi, phi.space.generalizations(p))


def intersection(phi: ThomasonFiltration) -> SpclSubset:
    return phi.high_tail


def union(phi: ThomasonFiltration) -> SpclSubset:
    return phi.low_tail


def is_eventually_vanishing(phi: ThomasonFiltration) -> bool:
    return not phi.high_tail


def is_constant_on(phi: ThomasonFiltration, S: Iterable[str]) -> bool:
    """(phi & S)(n) is S for all n, or empty for all n."""
    S = frozenset(S)
    for p in S:
        phi.space._check(p)
    return S <= phi.high_tail or not (S & phi.low_tail)


def _same_space(phi, psi):
    if phi.space != psi.space:
        raise SpaceMismatchError("filtrations live on different spaces")


def leq(phi: ThomasonFiltration, psi: ThomasonFiltration) -> bool:
    _same_space(phi, psi)
    idx = sorted({t for t, _ in phi.steps} | {t for t, _ in psi.steps})
    probes = [idx[0] - 1] + idx if idx else [0]
    return all(phi(n) <= psi(n) for n in probes)


def _pair_indices(phi: ThomasonFiltration) -> list[int]:
    """Indices n whose pairs (phi(n-1), phi(n)) exhaust all pairs that occur."""
    if not phi.steps:
        return [0]
    a, b = phi.steps[0][0], phi.steps[-1][0]
    return list(range(a - 1, b + 2))


def _weak_cousin(phi, Z, generalizations_of):
    space = phi.space
    Zs = space.require_spcl(Z)
    for n in _pair_indices(phi):
        now, before = phi(n) & Zs, phi(n - 1)
        for q in now:
            for p in generalizations_of(space, q):
                if p in Zs and p not in before:
                    return False
    return True


def _direct(space, q):
    return space.direct_generalizations(q)


def is_weak_cousin_across(phi: ThomasonFiltration, Z: Iterable[str] | None = None) -> bool:
    """Every direct generalization p ~> q inside Z with q in phi(n) has p in phi(n-1)."""
    Z = phi.space.points if Z is None else Z
    return _weak_cousin(phi, Z, _direct)


def is_weak_cousin(phi: ThomasonFiltration) -> bool:
    return is_weak_cousin_across(phi, phi.space.points)


def restricts_to_bounded_coherent(phi: ThomasonFiltration, Z: Iterable[str]) -> bool:
    """Criterion for the t-structure to restrict to bounded coherent complexes supported on Z."""
    return is_weak_cousin_across(phi, Z)


def restricts_to_perf(
    phi: ThomasonFiltration,
    Z: Iterable[str],
    weak_cousin: Callable = None,
    regular_case_is_weak_cousin: bool = True,
) -> bool:
    """Per connected component Z_t: weak Cousin on phi & Z_t when Z_t is regular,
    constant on Z_t otherwise.

    The keyword arguments exist for mutation testing only.
    """
    weak_cousin = weak_cousin or (lambda f: is_weak_cousin(f))
    space = phi.space
    for comp in space.connected_components(Z):
        regular = comp <= space.regular
        if regular == regular_case_is_weak_cousin:
            if not weak_cousin(restrict(phi, comp)):
                return False
        elif not is_constant_on(phi, comp):
            return False
    return True


def classify(phi: ThomasonFiltration, Z: Iterable[str]) -> dict:
    """All predicates at once, as reported by the CLI."""
    space = phi.space
    Z = space.require_spcl(Z)
    comps = space.connected_components(Z)
    return {
        "weak_cousin": is_weak_cousin(phi),
        "weak_cousin_across_z": is_weak_cousin_across(phi, Z),
        "restricts_db_coh": restricts_to_bounded_coherent(phi, Z),
        "restricts_perf": restricts_to_perf(phi, Z),
        "eventually_vanishing": is_eventually_vanishing(phi),
        "components": [
            {
                "points": sorted(c),
                "regular": c <= space.regular,
                "constant": is_constant_on(phi, c),
                "weak_cousin": is_weak_cousin(restrict(phi, c)),
            }
            for c in comps
        ],
    }


def enumerate_filtrations(space: SpecSpace, lo: int, hi: int, spcl=None):
    """Every filtration whose change points lie in [lo, hi].

    Such a filtration is a decreasing chain low >= phi(lo) >= ... >= phi(hi).
    """
    spcl = space.spcl_subsets() if spcl is None else spcl
    by_size = sorted(spcl, key=len, reverse=True)
    length = hi - lo + 2

    def chains(prefix):
        if len(prefix) == length:
            yield prefix
            return
        last = prefix[-1] if prefix else None
        for S in by_size:
            if last is None or S <= last:
                yield from chains(prefix + [S])

    for ch in chains([]):
        yield ThomasonFiltration(space, ch[0], [(lo + i, v) for i, v in enumerate(ch[1:])])


__all__ = [
    "ThomasonFiltration",
    "NotSpecializationClosedError",
    "classify",
    "constant",
    "construct",
    "enumerate_filtrations",
    "explicit",
    "intersection",
    "is_constant_on",
    "is_eventually_vanishing",
    "is_weak_cousin",
    "is_weak_cousin_across",
    "leq",
    "localize",
    "restrict",
    "restricts_to_bounded_coherent",
    "restricts_to_perf",
    "shift",
    "standard",
    "tilting",
    "truncate_below",
    "union",
]
