"""Finite spectral spaces: finite posets under specialization.

A pair ``(p, q)`` in the specialization relation means ``q`` lies in the
closure of ``p`` (written ``p ~> q``).  Specialization-closed subsets are
represented as plain ``frozenset`` objects of point identifiers; every
operation that needs one validates it against its space.
"""

from __future__ import annotations

import itertools
import json
from typing import Iterable, Mapping

from .errors import NotSpecializationClosedError, TStructError, UnknownPointError

SpclSubset = frozenset


class SpecSpace:
    """Immutable finite poset with regular-locus marks and optional heights."""

    __slots__ = ("points", "regular", "heights", "_below", "_above", "_covers_up", "_index")

    def __init__(
        self,
        points: Iterable[str],
        covers: Iterable[tuple[str, str]] = (),
        regular: Iterable[str] | None = None,
        heights: Mapping[str, int] | None = None,
    ):
        pts = tuple(sorted(set(points)))
        index = {p: i for i, p in enumerate(pts)}
        below = {p: {p} for p in pts}
        for p, q in covers:
            for x in (p, q):
                if x not in index:
                    raise UnknownPointError(x)
            below[p].add(q)
        # transitive closure (Floyd-Warshall style over a tiny set)
        changed = True
        while changed:
            changed = False
            for p in pts:
                extra = set()
                for q in below[p]:
                    extra |= below[q]
                if not extra <= below[p]:
                    below[p] |= extra
                    changed = True
        for p in pts:
            for q in below[p]:
                if q != p and p in below[q]:
                    raise TStructError(f"specialization is not antisymmetric: {p} <-> {q}")
        self.points = pts
        self._index = index
        self._below = {p: frozenset(v) for p, v in below.items()}
        above = {p: set() for p in pts}
        for p in pts:
            for q in below[p]:
                above[q].add(p)
        self._above = {p: frozenset(v) for p, v in above.items()}
        covers_up = {}
        for q in pts:
            strict = self._above[q] - {q}
            covers_up[q] = frozenset(
                p for p in strict if not any(s != p and s in strict and s in self._below[p] for s in strict)
            )
        self._covers_up = covers_up
        self.regular = frozenset(pts if regular is None else regular)
        for p in self.regular:
            if p not in index:
                raise UnknownPointError(p)
        if heights is not None:
            heights = {p: int(h) for p, h in heights.items()}
            for p in heights:
                if p not in index:
                    raise UnknownPointError(p)
            for p in pts:
                for q in self._below[p]:
                    if q != p and p in heights and q in heights and heights[q] <= heights[p]:
                        raise TStructError(f"heights must increase along {p} ~> {q}")
            heights = dict(sorted(heights.items()))
        self.heights = heights

    # -- basic queries -------------------------------------------------
    def __contains__(self, p):
        return p in self._index

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, SpecSpace)
            and self.points == other.points
            and self._below == other._below
            and self.regular == other.regular
        )

    def __hash__(self):
        return hash((self.points, self.covers()))

    def __repr__(self):
        return f"SpecSpace(points={list(self.points)}, covers={sorted(self.covers())})"

    def _check(self, p):
        if p not in self._index:
            raise UnknownPointError(p)

    def _check_all(self, S):
        for p in S:
            self._check(p)

    def specializes(self, p: str, q: str) -> bool:
        """True when ``p ~> q``, i.e. ``q`` is in the closure of ``p``."""
        self._check(p)
        self._check(q)
        return q in self._below[p]

    def covers(self) -> frozenset:
        return frozenset((p, q) for q in self.points for p in self._covers_up[q])

    def specializations(self, p: str) -> frozenset:
        self._check(p)
        return self._below[p]

    def generalizations(self, q: str) -> frozenset:
        self._check(q)
        return self._above[q]

    # -- operations ------------------------------------------------------
    def closure(self, S: Iterable[str]) -> SpclSubset:
        out = set()
        for p in S:
            self._check(p)
            out |= self._below[p]
        return frozenset(out)

    def is_spcl(self, S: Iterable[str]) -> bool:
        S = frozenset(S)
        self._check_all(S)
        return all(self._below[p] <= S for p in S)

    def require_spcl(self, S: Iterable[str]) -> SpclSubset:
        S = frozenset(S)
        if not self.is_spcl(S):
            raise NotSpecializationClosedError(f"{sorted(S)} is not specialization-closed")
        return S

    def direct_generalizations(self, q: str) -> frozenset:
        self._check(q)
        return self._covers_up[q]

    def minimal_points(self, S: Iterable[str]) -> list[str]:
        """Generic points of S: those not a specialization of another point of S."""
        S = frozenset(S)
        self._check_all(S)
        return sorted(p for p in S if not any(o != p and p in self._below[o] for o in S))

    def connected_components(self, Z: Iterable[str]) -> list[SpclSubset]:
        Z = self.require_spcl(Z)
        remaining = set(Z)
        comps = []
        while remaining:
            start = min(remaining)
            comp, stack = {start}, [start]
            while stack:
                p = stack.pop()
                for q in (self._below[p] | self._above[p]) & remaining:
                    if q not in comp:
                        comp.add(q)
                        stack.append(q)
            remaining -= comp
            comps.append(frozenset(comp))
        return sorted(comps, key=min)

    def subspace(self, S: Iterable[str]) -> "SpecSpace":
        S = frozenset(S)
        self._check_all(S)
        covers = [(p, q) for p in S for q in self._below[p] & S if q != p]
        heights = None if self.heights is None else {p: h for p, h in self.heights.items() if p in S}
        return SpecSpace(S, covers, self.regular & S, heights)

    def generalization_neighborhood(self, p: str) -> "SpecSpace":
        """Finite model of the local scheme at ``p``: all generalizations of ``p``."""
        self._check(p)
        return self.subspace(self._above[p])

    def spcl_subsets(self) -> list[SpclSubset]:
        """Every specialization-closed subset, in a deterministic order."""
        out = []
        for r in range(len(self.points) + 1):
            for combo in itertools.combinations(self.points, r):
                S = frozenset(combo)
                if all(self._below[p] <= S for p in S):
                    out.append(S)
        return out

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        pts = []
        for p in self.points:
            entry = {"id": p, "regular": p in self.regular}
            if self.heights is not None and p in self.heights:
                entry["height"] = self.heights[p]
            pts.append(entry)
        return {"points": pts, "covers": [list(c) for c in sorted(self.covers())]}

    @classmethod
    def from_json(cls, data) -> "SpecSpace":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            raw = data["points"]
        except (KeyError, TypeError) as exc:
            raise TStructError("poset JSON needs a 'points' list") from exc
        ids, regular, heights = [], [], {}
        for entry in raw:
            if isinstance(entry, str):
                entry = {"id": entry}
            pid = str(entry["id"])
            ids.append(pid)
            if entry.get("regular", True):
                regular.append(pid)
            if "height" in entry:
                heights[pid] = entry["height"]
        covers = [tuple(map(str, c)) for c in data.get("covers", [])]
        for c in covers:
            if len(c) != 2:
                raise TStructError(f"cover must be a pair, got {list(c)}")
        return cls(ids, covers, regular, heights or None)


def chain(*names: str, regular: Iterable[str] | None = None) -> SpecSpace:
    """The chain ``names[0] ~> names[1] ~> ...``."""
    return SpecSpace(names, list(zip(names, names[1:])), regular)


def antichain(*names: str) -> SpecSpace:
    return SpecSpace(names)


def enumerate_posets(max_points: int) -> list[SpecSpace]:
    """All finite posets with 1..max_points points, one per isomorphism class.

    Points are named "0", "1", ...; the returned spaces are fully regular.
    """
    out = []
    for n in range(1, max_points + 1):
        names = [str(i) for i in range(n)]
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        seen = set()
        for mask in range(1 << len(pairs)):
            rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
            if any((j, i) in rel for i, j in rel):
                continue
            if any((i, k) not in rel for i, j in rel for j2, k in rel if j == j2 and i != k):
                continue
            canon = min(
                tuple(sorted((perm[i], perm[j]) for i, j in rel)) for perm in itertools.permutations(range(n))
            )
            if canon in seen:
                continue
            seen.add(canon)
            out.append(SpecSpace(names, [(names[i], names[j]) for i, j in canon]))
    return out
