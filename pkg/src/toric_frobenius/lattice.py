"""Exact integer linear algebra.

Smith normal form with unimodular transforms, integer kernels and integer
solving. Everything is done with Python ints, so there is no overflow and no
floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build a matrix from a list of rows.

        ``cols`` is only needed for matrices with zero rows.
        """
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols = [other.col(j) for j in range(other.cols)]
            return IntMatrix.from_rows(
                [[_dot(self.row(i), c) for c in cols] for i in range(self.rows)],
                cols=other.cols,
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(_dot(self.row(i), vec) for i in range(self.rows))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.to_lists())

    def rank(self) -> int:
        return len(smith_normal_form(self).invariant_factors)

    def __repr__(self):
        return f"IntMatrix({self.to_lists()!r})"


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` in Smith form.

    ``U_inv`` and ``V_inv`` are the exact inverses of ``U`` and ``V``; they are
    tracked alongside the elimination because inverting over Z after the fact
    is wasteful.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _choose_pivot(S: list[list[int]], t: int) -> Optional[tuple[int, int]]:
    # smallest nonzero |entry|, ties broken by lowest row then lowest column
    best = None
    for i in range(t, len(S)):
        row = S[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form of an arbitrary integer matrix.

    Returns unimodular ``U`` (rows x rows) and ``V`` (cols x cols) with
    ``U @ A @ V == S``, where ``S`` is diagonal with nonnegative entries
    ``d_1 | d_2 | ...`` and zeros last. The output is a deterministic function
    of ``A``.
    """
    m, n = A.rows, A.cols
    S = A.to_lists()
    U = IntMatrix.identity(m).to_lists()
    Ui = IntMatrix.identity(m).to_lists()
    V = IntMatrix.identity(n).to_lists()
    Vi = IntMatrix.identity(n).to_lists()

    # Row op on S is mirrored on U (left) and inverted on Ui (right);
    # column ops likewise on V and Vi.
    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        pivot = _choose_pivot(S, t)
        if pivot is None:
            break
        i, j = pivot
        swap_rows(t, i)
        swap_cols(t, j)
        p = S[t][t]
        clean = True
        for k in range(t + 1, m):
            if S[k][t]:
                add_row(k, t, -(S[k][t] // p))
                clean = clean and S[k][t] == 0
        for k in range(t + 1, n):
            if S[t][k]:
                add_col(k, t, -(S[t][k] // p))
                clean = clean and S[t][k] == 0
        if not clean:
            continue
        bad_row = next(
            (k for k in range(t + 1, m) if any(S[k][l] % p for l in range(t + 1, n))),
            None,
        )
        if bad_row is not None:
            add_row(t, bad_row, 1)
            continue
        if p < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1

    factors = tuple(S[k][k] for k in range(min(m, n)) if S[k][k] != 0)
    return SmithDecomposition(
        U=IntMatrix.from_rows(U, cols=m),
        S=IntMatrix.from_rows(S, cols=n),
        V=IntMatrix.from_rows(V, cols=n),
        invariant_factors=factors,
        U_inv=IntMatrix.from_rows(Ui, cols=m),
        V_inv=IntMatrix.from_rows(Vi, cols=n),
    )


def kernel_basis(A: IntMatrix) -> list[tuple[int, ...]]:
    """Saturated basis of ``{x in Z^cols : A x = 0}``.

    These are the trailing columns of ``V`` in the Smith decomposition, so the
    basis extends to a basis of Z^cols.
    """
    snf = smith_normal_form(A)
    return [snf.V.col(j) for j in range(snf.rank, A.cols)]


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer solution of ``A x = b``, or None if there is none."""
    b = tuple(int(x) for x in b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    snf = smith_normal_form(A)
    c = snf.U @ b
    y = [0] * A.cols
    for i, d in enumerate(snf.invariant_factors):
        if c[i] % d:
            return None
        y[i] = c[i] // d
    if any(c[snf.rank:]):
        return None
    return snf.V @ y


def hermite_rows(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of a full-row-rank integer matrix.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``. Only unimodular row operations are used.
    """
    H = [list(r) for r in rows]
    if not H:
        return H
    ncols = len(H[0])
    prow = 0
    for col in range(ncols):
        if prow == len(H):
            break
        while True:
            nz = [k for k in range(prow, len(H)) if H[k][col]]
            if not nz:
                break
            k = min(nz, key=lambda k: (abs(H[k][col]), k))
            H[prow], H[k] = H[k], H[prow]
            p = H[prow][col]
            done = True
            for k in range(prow + 1, len(H)):
                if H[k][col]:
                    q = H[k][col] // p
                    H[k] = [a - q * b for a, b in zip(H[k], H[prow])]
                    done = done and H[k][col] == 0
            if done:
                break
        if prow < len(H) and H[prow][col]:
            if H[prow][col] < 0:
                H[prow] = [-a for a in H[prow]]
            p = H[prow][col]
            for k in range(prow):
                q = H[k][col] // p
                if q:
                    H[k] = [a - q * b for a, b in zip(H[k], H[prow])]
            prow += 1
    return H


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    """Exact inverse of a square integer matrix with determinant +-1."""
    n = A.rows
    if A.cols != n:
        raise ValueError("not square")
    M = [[Fraction(x) for x in A.row(i)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = []
    for r in range(n):
        row = M[r][n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return IntMatrix.from_rows(out, cols=n)


def content(v: Iterable[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
