"""The three supported monomial rings, their graded free terms and matrices,
and finitely determined graded modules.

Every ring here is finely graded: coordinate ``i`` of a multidegree is the
exponent of variable ``i``, so each graded piece of a (localized) free
summand is spanned by at most one monomial.  Linear algebra therefore runs
degree by degree over the base field.

A :class:`FDModule` is a graded module that is *finitely determined*: it
is stored on a box ``lo <= d <= hi`` and is constant outside, meaning
``M_d = M_clip(d)`` with identity multiplication maps between equal
clipped degrees.  Localized free modules, their subquotients, and all
complexes the package builds have this shape, which turns questions such
as "is this cohomology module finitely generated" into finite checks.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import IllegalInversionError, NotHomogeneousError, TStructError
from .linalg import QQ, Field, column_profile, identity, kernel, matmul, rank, transpose, zeros
from .spectral_poset import SpecSpace

Degree = tuple


class GradedRing:
    """POLY(n) = k[x_1..x_n], TRUNC(e) = k[x]/(x^e) or CROSS = k[x,y]/(xy)."""

    __slots__ = ("field", "family", "param", "variables", "_skeleton")

    def __init__(self, family: str, param: int | None = None, field: Field = QQ):
        family = family.lower()
        if family == "poly":
            if not param or param < 1:
                raise TStructError("POLY(n) needs n >= 1")
            names = ("x", "y") if param <= 2 else tuple(f"x{i + 1}" for i in range(param))
            self.variables = names[:param]
        elif family == "trunc":
            if not param or param < 1:
                raise TStructError("TRUNC(e) needs e >= 1")
            self.variables = ("x",)
        elif family == "cross":
            param = None
            self.variables = ("x", "y")
        else:
            raise TStructError(f"unknown ring family {family!r}")
        self.field = field
        self.family = family
        self.param = param
        self._skeleton = None

    @property
    def ngens(self) -> int:
        return len(self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, GradedRing)
            and (self.family, self.param, self.field) == (other.family, other.param, other.field)
        )

    def __hash__(self):
        return hash((self.family, self.param, self.field))

    def __repr__(self):
        fam = {"poly": f"POLY({self.param})", "trunc": f"TRUNC({self.param})", "cross": "CROSS"}[self.family]
        return f"{fam} over {self.field!r}"

    @property
    def skeleton_faithful(self) -> bool:
        return self.family != "poly" or self.param == 1

    @property
    def is_regular(self) -> bool:
        return self.family == "poly" or (self.family == "trunc" and self.param == 1)

    # -- monomial legality ---------------------------------------------
    def legal_inverted(self, S) -> bool:
        S = frozenset(S)
        if self.family == "trunc":
            return not S or self.param == 0
        if self.family == "cross":
            return len(S) <= 1
        return True

    def monomial_status(self, u, S) -> str:
        """'ok' when x^u is a nonzero element of the localization R_S, 'zero' when it
        vanishes there, 'invalid' when it would need an inverse outside S."""
        S = frozenset(S)
        if any(u[i] < 0 and i not in S for i in range(len(u))):
            return "invalid"
        if not self.legal_inverted(S):
            return "zero"
        if self.family == "trunc":
            return "ok" if u[0] < self.param else "zero"
        if self.family == "cross":
            a, b = u
            if 0 in S:
                return "ok" if b == 0 else "zero"
            if 1 in S:
                return "ok" if a == 0 else "zero"
            return "ok" if a == 0 or b == 0 else "zero"
        return "ok"

    def legal(self, u, S) -> bool:
        return self.monomial_status(u, S) == "ok"

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise TStructError(f"{self!r} has no variable {name!r}") from None

    def margin(self) -> int:
        return self.param if self.family == "trunc" else 1

    # -- skeleton --------------------------------------------------------
    def prime_name(self, T) -> str:
        T = sorted(T)
        return "(" + ",".join(self.variables[i] for i in T) + ")" if T else "(0)"

    def prime_vars(self, name: str) -> frozenset:
        inner = name.strip()[1:-1]
        if inner == "0":
            return frozenset()
        return frozenset(self.var_index(v.strip()) for v in inner.split(","))

    def skeleton(self) -> SpecSpace:
        """Poset of homogeneous (monomial) primes with heights and regular marks."""
        if self._skeleton is not None:
            return self._skeleton
        n = self.ngens
        if self.family == "poly":
            primes = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
            height = {T: len(T) for T in primes}
            regular = primes
        elif self.family == "trunc":
            primes = [frozenset({0})]
            height = {primes[0]: 0}
            regular = primes if self.param == 1 else []
        else:
            primes = [frozenset({0}), frozenset({1}), frozenset({0, 1})]
            height = {primes[0]: 0, primes[1]: 0, primes[2]: 1}
            regular = primes[:2]
        covers = [
            (self.prime_name(P), self.prime_name(Q))
            for P in primes
            for Q in primes
            if P < Q and len(Q) == len(P) + 1
        ]
        self._skeleton = SpecSpace(
            [self.prime_name(P) for P in primes],
            covers,
            [self.prime_name(P) for P in regular],
            {self.prime_name(P): h for P, h in height.items()},
        )
        return self._skeleton

    def dim_quotient(self, point: str) -> int:
        """Krull dimension of R/P for a skeleton prime P."""
        T = self.prime_vars(point)
        if self.family == "poly":
            return self.ngens - len(T)
        if self.family == "trunc":
            return 0
        return 1 if len(T) == 1 else 0

    def maximal_ideal(self) -> str:
        return self.prime_name(range(self.ngens))

    # -- parsing -----------------------------------------------------------
    def parse_monomial(self, text) -> tuple:
        """Exponent vector of a monomial written as 'x^2*y', 'xy', '1', or a list."""
        if isinstance(text, (list, tuple)):
            if len(text) != self.ngens:
                raise TStructError(f"exponent vector {list(text)} has wrong length for {self!r}")
            return tuple(int(a) for a in text)
        s = str(text).replace(" ", "").replace("*", "")
        if "+" in s or any(c == "-" and (k == 0 or s[k - 1] != "^") for k, c in enumerate(s)):
            raise NotHomogeneousError(f"{text!r} is not a monomial")
        exps = [0] * self.ngens
        if s in ("", "1"):
            return tuple(exps)
        names = sorted(self.variables, key=len, reverse=True)
        i = 0
        while i < len(s):
            for v in names:
                if s.startswith(v, i):
                    i += len(v)
                    power = 1
                    if i < len(s) and s[i] == "^":
                        j = i + 1
                        while j < len(s) and (s[j].isdigit() or (j == i + 1 and s[j] == "-")):
                            j += 1
                        power = int(s[i + 1 : j])
                        i = j
                    exps[self.var_index(v)] += power
                    break
            else:
                raise NotHomogeneousError(f"cannot parse monomial {text!r}")
        return tuple(exps)

    def format_monomial(self, u) -> str:
        parts = []
        for v, a in zip(self.variables, u):
            if a == 1:
                parts.append(v)
            elif a:
                parts.append(f"{v}^{a}")
        return "*".join(parts) or "1"

    # -- JSON --------------------------------------------------------------
    def to_json(self) -> dict:
        fam = "cross" if self.family == "cross" else {self.family: self.param}
        return {"field": self.field.to_json(), "family": fam}

    @classmethod
    def from_json(cls, data) -> "GradedRing":
        if isinstance(data, str):
            data = json.loads(data)
        f = data.get("field", "Q")
        if f == "Q":
            field = QQ
        elif isinstance(f, dict) and "fp" in f:
            field = Field(int(f["fp"]))
        else:
            raise TStructError(f"unknown field {f!r}")
        fam = data.get("family")
        if fam == "cross" or fam == {"cross": None}:
            return cls("cross", field=field)
        if isinstance(fam, dict) and len(fam) == 1:
            (name, param), = fam.items()
            return cls(name, int(param), field)
        raise TStructError(f"unknown ring family {fam!r}")


def poly(n: int, field: Field = QQ) -> GradedRing:
    return GradedRing("poly", n, field)


def trunc(e: int, field: Field = QQ) -> GradedRing:
    return GradedRing("trunc", e, field)


def cross(field: Field = QQ) -> GradedRing:
    return GradedRing("cross", None, field)


# -- free terms and matrices ----------------------------------------------------

@dataclass(frozen=True)
class Summand:
    """R_S(-a): generator in degree ``twist``, variables in ``inverted`` made invertible."""

    twist: tuple
    inverted: frozenset = frozenset()

    def to_json(self, ring):
        return {"twist": list(self.twist), "inverted": [ring.variables[i] for i in sorted(self.inverted)]}


class GradedTerm:
    """Finite direct sum of twisted, optionally localized free rank-one modules."""

    __slots__ = ("ring", "summands")

    def __init__(self, ring: GradedRing, summands=()):
        out = []
        for s in summands:
            if not isinstance(s, Summand):
                tw, inv = s
                s = Summand(tuple(int(a) for a in tw), frozenset(inv))
            if len(s.twist) != ring.ngens:
                raise TStructError(f"twist {s.twist} has wrong arity for {ring!r}")
            if not ring.legal_inverted(s.inverted):
                raise IllegalInversionError(
                    f"cannot invert {[ring.variables[i] for i in sorted(s.inverted)]} in {ring!r}"
                )
            out.append(s)
        self.ring = ring
        self.summands = tuple(out)

    def __len__(self):
        return len(self.summands)

    def __eq__(self, other):
        return isinstance(other, GradedTerm) and self.ring == other.ring and self.summands == other.summands

    def __repr__(self):
        return f"GradedTerm({[(s.twist, sorted(s.inverted)) for s in self.summands]})"

    def graded_piece_dim(self, d) -> int:
        d = tuple(d)
        if len(d) != self.ring.ngens:
            raise TStructError(f"degree {d} has wrong arity for {self.ring!r}")
        return sum(
            1 for s in self.summands if self.ring.legal(tuple(x - a for x, a in zip(d, s.twist)), s.inverted)
        )

    def is_free_finite(self) -> bool:
        return all(not s.inverted for s in self.summands)

    def to_json(self):
        return [s.to_json(self.ring) for s in self.summands]


def graded_piece_dim(term: GradedTerm, d) -> int:
    return term.graded_piece_dim(d)


class GradedMatrix:
    """Degree-homogeneous map between graded terms.

    In the fine grading the monomial of entry (i, j) is forced to be
    ``twist(source j) - twist(target i)``, so only the scalar is stored.
    Entries whose monomial vanishes in the target are reduced to zero.
    """

    __slots__ = ("source", "target", "coeffs")

    def __init__(self, source: GradedTerm, target: GradedTerm, coeffs):
        ring = source.ring
        if target.ring != ring:
            raise TStructError("matrix between terms over different rings")
        F = ring.field
        m, n = len(target), len(source)
        C = zeros(m, n, F)
        for i in range(m):
            for j in range(n):
                c = F(coeffs[i][j]) if coeffs else F.zero
                if not c:
                    continue
                u = self.monomial_of(source, target, i, j)
                S_src, S_tgt = source.summands[j].inverted, target.summands[i].inverted
                status = ring.monomial_status(u, S_tgt)
                if status == "invalid" or (status == "ok" and not S_src <= S_tgt):
                    raise TStructError(
                        f"entry ({i},{j}) = {ring.format_monomial(u)} is not a module map "
                        f"R_{sorted(S_src)} -> R_{sorted(S_tgt)}"
                    )
                if status == "ok":
                    C[i][j] = c
        self.source = source
        self.target = target
        self.coeffs = C

    @staticmethod
    def monomial_of(source, target, i, j):
        return tuple(a - b for a, b in zip(source.summands[j].twist, target.summands[i].twist))

    @property
    def shape(self):
        return (len(self.target), len(self.source))

    def is_zero(self):
        return all(not c for row in self.coeffs for c in row)

    def compose(self, first: "GradedMatrix") -> "GradedMatrix":
        """self o first."""
        ring = self.source.ring
        F = ring.field
        A, B = self.coeffs, first.coeffs
        m, k, n = len(self.target), len(self.source), len(first.source)
        out = zeros(m, n, F)
        for i in range(m):
            for j in range(n):
                s = F.zero
                for l in range(k):
                    if A[i][l] and B[l][j]:
                        s += A[i][l] * B[l][j]
                out[i][j] = F.normalize(s)
        return GradedMatrix(first.source, self.target, out)

    def entry(self, i, j):
        c = self.coeffs[i][j]
        return c, self.monomial_of(self.source, self.target, i, j)

    def to_json(self):
        ring = self.source.ring
        F = ring.field
        return [
            [{"c": F.encode(self.coeffs[i][j]), "mono": list(self.monomial_of(self.source, self.target, i, j))}
             for j in range(len(self.source))]
            for i in range(len(self.target))
        ]

    def degreewise(self, d):
        """Matrix of the induced k-linear map on degree-d pieces (rows: target basis)."""
        ring = self.source.ring
        src = [j for j, s in enumerate(self.source.summands) if ring.legal(_sub(d, s.twist), s.inverted)]
        tgt = [i for i, s in enumerate(self.target.summands) if ring.legal(_sub(d, s.twist), s.inverted)]
        return [[self.coeffs[i][j] for j in src] for i in tgt], len(src)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def solve_degreewise(matrix: GradedMatrix, d):
    """(rank, kernel basis, image basis) of the degree-d piece of ``matrix``."""
    F = matrix.source.ring.field
    M, ncols = matrix.degreewise(tuple(d))
    r = rank(M, F) if M and ncols else 0
    ker = kernel(M, F, ncols)
    cols = transpose(M, ncols) if M else [[] for _ in range(ncols)]
    img = [cols[c] for c in column_profile(cols, F, len(M))] if M else []
    return r, ker, img


# -- finitely determined modules ---------------------------------------------------

class Box:
    """Integer box lo <= d <= hi (inclusive), one interval per grading coordinate."""

    __slots__ = ("lo", "hi", "_degrees")

    def __init__(self, lo, hi):
        self.lo = tuple(lo)
        self.hi = tuple(hi)
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {lo}..{hi}")
        self._degrees = None

    def __eq__(self, other):
        return isinstance(other, Box) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Box({self.lo}, {self.hi})"

    def clip(self, d):
        return tuple(min(max(x, a), b) for x, a, b in zip(d, self.lo, self.hi))

    def degrees(self):
        if self._degrees is None:
            self._degrees = list(itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi))))
        return self._degrees

    def contains_box(self, other: "Box") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def hull(self, other: "Box") -> "Box":
        return Box(tuple(map(min, self.lo, other.lo)), tuple(map(max, self.hi, other.hi)))

    def shifted(self, a) -> "Box":
        return Box(tuple(x + y for x, y in zip(self.lo, a)), tuple(x + y for x, y in zip(self.hi, a)))


def hull(boxes):
    boxes = list(boxes)
    out = boxes[0]
    for b in boxes[1:]:
        out = out.hull(b)
    return out


def _step(d, i):
    return d[:i] + (d[i] + 1,) + d[i + 1 :]


class FDModule:
    """Finitely determined graded module stored on a box.

    ``dims[d]`` is the dimension of the degree-d piece for d in the box and
    ``acts[i][d]`` the matrix of multiplication by variable i from degree d
    to d + e_i (only stored when d + e_i is still inside the box).
    """

    __slots__ = ("ring", "box", "dims", "acts", "_paths")

    def __init__(self, ring: GradedRing, box: Box, dims: dict, acts: list):
        self.ring = ring
        self.box = box
        self.dims = dims
        self.acts = acts
        self._paths = {}

    def __repr__(self):
        nz = {d: n for d, n in self.dims.items() if n}
        return f"FDModule({self.box}, nonzero={nz})"

    def dim(self, d) -> int:
        return self.dims[self.box.clip(d)]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def act(self, i, d):
        c = self.box.clip(d)
        if c[i] == self.box.hi[i] or d[i] < self.box.lo[i]:
            return identity(self.dims[c], self.ring.field)
        return self.acts[i][c]

    def path(self, src, tgt):
        """Composite multiplication map M_src -> M_tgt (requires src <= tgt)."""
        a, b = self.box.clip(src), self.box.clip(tgt)
        key = (a, b)
        got = self._paths.get(key)
        if got is not None:
            return got
        F = self.ring.field
        if any(x > y for x, y in zip(a, b)):
            raise TStructError(f"no multiplication path from {src} to {tgt}")
        M = identity(self.dims[a], F)
        cur = a
        for i in range(len(a)):
            while cur[i] < b[i]:
                nxt = _step(cur, i)
                M = matmul(self.acts[i][cur], M, F, self.dims[cur])
                cur = nxt
        self._paths[key] = M
        return M

    def rebox(self, box: Box) -> "FDModule":
        if box == self.box:
            return self
        if not box.contains_box(self.box):
            raise ValueError("rebox needs a containing box")
        dims = {d: self.dim(d) for d in box.degrees()}
        acts = [{} for _ in self.box.lo]
        for d in box.degrees():
            for i in range(len(d)):
                if d[i] < box.hi[i]:
                    acts[i][d] = self.act(i, d)
        return FDModule(self.ring, box, dims, acts)

    def check(self) -> None:
        """Raise unless the variable actions commute."""
        F = self.ring.field
        for d in self.box.degrees():
            for i in range(len(d)):
                for j in range(i + 1, len(d)):
                    if d[i] < self.box.hi[i] and d[j] < self.box.hi[j]:
                        a = matmul(self.act(j, _step(d, i)), self.act(i, d), F, self.dims[d])
                        b = matmul(self.act(i, _step(d, j)), self.act(j, d), F, self.dims[d])
                        if a != b:
                            raise TStructError(f"actions of {i},{j} do not commute at {d}")

    @classmethod
    def zero(cls, ring, box):
        return cls(ring, box, {d: 0 for d in box.degrees()}, [
            {d: [] for d in box.degrees() if d[i] < box.hi[i]} for i in range(ring.ngens)
        ])

    @classmethod
    def free(cls, ring: GradedRing, twist=None, inverted=frozenset(), box: Box | None = None) -> "FDModule":
        """R_S(-a) on a box that contains its stability margin."""
        n = ring.ngens
        twist = tuple(twist or (0,) * n)
        if box is None:
            box = free_box(ring, twist)
        F = ring.field
        dims = {}
        for d in box.degrees():
            dims[d] = 1 if ring.legal(_sub(d, twist), inverted) else 0
        acts = [{} for _ in range(n)]
        for d in box.degrees():
            for i in range(n):
                if d[i] < box.hi[i]:
                    e = _step(d, i)
                    if not dims[e]:
                        acts[i][d] = []
                    else:
                        acts[i][d] = [[F.one] * dims[d]]
        return cls(ring, box, dims, acts)

    @staticmethod
    def direct_sum(mods: list["FDModule"]) -> "FDModule":
        ring = mods[0].ring
        box = mods[0].box
        F = ring.field
        dims = {d: sum(m.dims[d] for m in mods) for d in box.degrees()}
        acts = [{} for _ in box.lo]
        for i in range(len(box.lo)):
            for d in box.degrees():
                if d[i] >= box.hi[i]:
                    continue
                e = _step(d, i)
                M = zeros(dims[e], dims[d], F)
                r = c = 0
                for m in mods:
                    blk = m.acts[i][d]
                    for a in range(m.dims[e]):
                        for b in range(m.dims[d]):
                            M[r + a][c + b] = blk[a][b]
                    r += m.dims[e]
                    c += m.dims[d]
                acts[i][d] = M
        return FDModule(ring, box, dims, acts)

    def localize_shift(self, S, twist, box: Box) -> "FDModule":
        """(M tensor R_S(-a)) on ``box``: degree d reads M at d - a with S-coordinates
        pushed to the top stable layer."""
        S = frozenset(S)
        hi = self.box.hi

        def src(d):
            return tuple(hi[i] if i in S else d[i] - twist[i] for i in range(len(d)))

        dims = {d: self.dim(src(d)) for d in box.degrees()}
        acts = [{} for _ in box.lo]
        F = self.ring.field
        for d in box.degrees():
            for i in range(len(d)):
                if d[i] < box.hi[i]:
                    if i in S:
                        acts[i][d] = identity(dims[d], F)
                    else:
                        acts[i][d] = self.act(i, src(d))
        return FDModule(self.ring, box, dims, acts)


def free_box(ring: GradedRing, twist) -> Box:
    m = ring.margin()
    return Box(tuple(a - 1 for a in twist), tuple(a + m for a in twist))


def unit_box(ring: GradedRing) -> Box:
    return free_box(ring, (0,) * ring.ngens)


@lru_cache(maxsize=None)
def unit_module(ring: GradedRing) -> FDModule:
    return FDModule.free(ring)


def residue_field_module(ring: GradedRing) -> FDModule:
    """k = R / (all variables), concentrated in degree 0."""
    box = unit_box(ring)
    zero = (0,) * ring.ngens
    dims = {d: 1 if d == zero else 0 for d in box.degrees()}
    acts = [{} for _ in range(ring.ngens)]
    for d in box.degrees():
        for i in range(ring.ngens):
            if d[i] < box.hi[i]:
                e = _step(d, i)
                acts[i][d] = zeros(dims[e], dims[d], ring.field)
    return FDModule(ring, box, dims, acts)
