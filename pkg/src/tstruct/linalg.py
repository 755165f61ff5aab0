"""Exact dense linear algebra over Q (fractions) and F_p (word-size ints).

Matrices are lists of rows. Every routine is exact; nothing is ever rounded.
Sizes in this package are tiny (graded pieces of monomial modules), so plain
Gaussian elimination is the right tool.
"""

from __future__ import annotations

from fractions import Fraction


class Field:
    """Either the rationals (``p is None``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ValueError(f"F_p needs a prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def normalize(self, x):
        return x if self.p is None else x % self.p

    def to_json(self):
        return "Q" if self.p is None else {"fp": self.p}

    def encode(self, x) -> str:
        """String form used in JSON payloads."""
        if self.p is None:
            return str(x)
        return str(int(x))


QQ = Field()


def zeros(m, n, field):
    z = field.zero
    return [[z] * n for _ in range(m)]


def identity(n, field):
    I = zeros(n, n, field)
    for i in range(n):
        I[i][i] = field.one
    return I


def matmul(A, B, field, inner=None):
    """Product A*B; ``inner`` is the shared dimension (needed when it is 0)."""
    if inner is None:
        inner = len(B)
    m = len(A)
    n = len(B[0]) if B else 0
    if inner == 0 or m == 0 or n == 0:
        return zeros(m, n, field)
    p = field.p
    out = []
    Bt = list(zip(*B))
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        if not nz:
            out.append([field.zero] * n)
            continue
        new = []
        for col in Bt:
            s = 0
            for k, a in nz:
                b = col[k]
                if b:
                    s += a * b
            new.append(s % p if p is not None else Fraction(s))
        out.append(new)
    return out


def matvec(A, v, field):
    p = field.p
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        out.append(s % p if p is not None else Fraction(s))
    return out


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def is_zero_matrix(A):
    return all(not x for row in A for x in row)


def rref(A, field, ncols=None):
    """Reduced row echelon form. Returns (R, pivot_columns); A is not modified."""
    R = [list(r) for r in A]
    m = len(R)
    n = len(R[0]) if R else (ncols or 0)
    p = field.p
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = field.inv(R[r][c])
        row = R[r]
        if p is None:
            R[r] = row = [x * inv for x in row]
        else:
            R[r] = row = [(x * inv) % p for x in row]
        for i in range(m):
            if i != r:
                f = R[i][c]
                if f:
                    if p is None:
                        R[i] = [a - f * b for a, b in zip(R[i], row)]
                    else:
                        R[i] = [(a - f * b) % p for a, b in zip(R[i], row)]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, field):
    if not A or not A[0]:
        return 0
    return len(rref(A, field)[1])


def kernel(A, field, ncols):
    """Basis of {v : A v = 0} as a list of column vectors of length ``ncols``."""
    if ncols == 0:
        return []
    if not A:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(A, field, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, c in enumerate(piv):
            v[c] = field.normalize(-R[i][f])
        basis.append(v)
    return basis


def column_profile(cols, field, length):
    """Indices of a maximal independent subset of ``cols`` chosen greedily left to right."""
    if not cols:
        return []
    M = transpose(cols)  # rows = coordinates, columns = vectors
    return rref(M, field, len(cols))[1]


def inverse(A, field):
    n = len(A)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, field, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def left_inverse(cols, field, length):
    """Given independent column vectors, a matrix L with L @ [cols] = I.

    Built from an invertible square submatrix on a row-rank profile.
    """
    k = len(cols)
    if k == 0:
        return []
    A = transpose(cols)  # length x k
    rows = column_profile([list(r) for r in A], field, k)  # independent rows of A
    sub = [A[r] for r in rows]
    subinv = inverse(sub, field)
    L = zeros(k, length, field)
    for i in range(k):
        for j, r in enumerate(rows):
            L[i][r] = subinv[i][j]
    return L


def complement(sub_cols, space_cols, field, length):
    """Vectors among ``space_cols`` completing ``sub_cols`` (assumed independent, contained
    in span(space_cols)) to a basis of span(space_cols)."""
    allc = list(sub_cols) + list(space_cols)
    prof = column_profile(allc, field, length)
    ns = len(sub_cols)
    return [allc[i] for i in prof if i >= ns]
