"""Smith normal form over the integers, with transforms, and a sparse
rank/torsion routine for large boundary matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.errors import StructuralError


def as_int_rows(A) -> list[list[int]]:
    arr = np.asarray(A, dtype=object)
    if arr.ndim != 2:
        raise StructuralError("integer matrix must be two-dimensional")
    return [[int(x) for x in row] for row in arr]


def int_matrix(rows, nrows: int | None = None, ncols: int | None = None) -> np.ndarray:
    """Object-dtype matrix of Python ints; explicit shape for empty cases."""
    rows = list(rows)
    if not rows or (ncols == 0):
        return np.zeros((nrows if nrows is not None else len(rows), ncols or 0), dtype=object)
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            arr[i, j] = int(x)
    return arr


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise StructuralError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


@dataclass(frozen=True)
class SNFResult:
    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


class _Reducer:
    """In-place diagonalization keeping U, V and their inverses in step."""

    def __init__(self, rows: list[list[int]], ncols: int, transforms: bool):
        self.D = rows
        self.m = len(rows)
        self.n = ncols
        self.tf = transforms
        if transforms:
            self.U = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.Ui = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.V = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
            self.Vi = [[int(i == j) for j in range(self.n)] for i in range(self.n)]

    # row_i += c * row_j
    def add_row(self, i, j, c):
        D = self.D
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        if self.tf:
            self.U[i] = [a + c * b for a, b in zip(self.U[i], self.U[j])]
            for r in self.Ui:
                r[j] -= c * r[i]

    def swap_rows(self, i, j):
        D = self.D
        D[i], D[j] = D[j], D[i]
        if self.tf:
            self.U[i], self.U[j] = self.U[j], self.U[i]
            for r in self.Ui:
                r[i], r[j] = r[j], r[i]

    def neg_row(self, i):
        self.D[i] = [-a for a in self.D[i]]
        if self.tf:
            self.U[i] = [-a for a in self.U[i]]
            for r in self.Ui:
                r[i] = -r[i]

    # col_i += c * col_j
    def add_col(self, i, j, c):
        for r in self.D:
            r[i] += c * r[j]
        if self.tf:
            for r in self.V:
                r[i] += c * r[j]
            self.Vi[j] = [a - c * b for a, b in zip(self.Vi[j], self.Vi[i])]

    def swap_cols(self, i, j):
        for r in self.D:
            r[i], r[j] = r[j], r[i]
        if self.tf:
            for r in self.V:
                r[i], r[j] = r[j], r[i]
            self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def run(self):
        D, m, n = self.D, self.m, self.n
        for t in range(min(m, n)):
            best = None
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    a = row[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                return
            _, i, j = best
            if i != t:
                self.swap_rows(i, t)
            if j != t:
                self.swap_cols(j, t)
            while True:
                changed = False
                for i in range(t + 1, m):
                    if D[i][t]:
                        self.add_row(i, t, -(D[i][t] // D[t][t]))
                        if D[i][t]:
                            self.swap_rows(i, t)
                            changed = True
                for j in range(t + 1, n):
                    if D[t][j]:
                        self.add_col(j, t, -(D[t][j] // D[t][t]))
                        if D[t][j]:
                            self.swap_cols(j, t)
                            changed = True
                if changed:
                    continue
                p = D[t][t]
                bad = next((i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))), None)
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if D[t][t] < 0:
                self.neg_row(t)


def smith_normal_form(A, check: bool = True) -> SNFResult:
    """U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...

    The identity U·A·V = D (and U·U⁻¹ = 1, V·V⁻¹ = 1) is re-verified by exact
    multiplication unless ``check`` is false.
    """
    arr = np.asarray(A, dtype=object)
    if arr.ndim != 2:
        raise StructuralError("integer matrix must be two-dimensional")
    m, n = arr.shape
    red = _Reducer([[int(x) for x in row] for row in arr], n, transforms=True)
    red.run()
    res = SNFResult(
        _to_arr(red.D, m, n), _to_arr(red.U, m, m), _to_arr(red.V, n, n), _to_arr(red.Ui, m, m), _to_arr(red.Vi, n, n)
    )
    if check:
        verify_snf(arr, res)
    return res


def _to_arr(rows, m, n):
    out = zeros(m, n)
    for i in range(m):
        for j in range(n):
            out[i, j] = rows[i][j]
    return out


def verify_snf(A, res: SNFResult) -> None:
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    if not np.array_equal(matmul(matmul(res.U, A), res.V), res.D):
        raise AssertionError("U·A·V != D")
    if not (np.array_equal(matmul(res.U, res.U_inv), eye(m)) and np.array_equal(matmul(res.V, res.V_inv), eye(n))):
        raise AssertionError("transforms are not unimodular")
    d = res.diagonal
    for i in range(m):
        for j in range(n):
            if i != j and res.D[i, j] != 0:
                raise AssertionError("D is not diagonal")
    nz = [x for x in d if x]
    if any(x < 0 for x in d) or any(b % a for a, b in zip(nz, nz[1:])) or d[len(nz):] != [0] * (len(d) - len(nz)):
        raise AssertionError("diagonal fails the divisibility chain")


def dense_divisors(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of a dense matrix, no transforms kept."""
    red = _Reducer([list(r) for r in rows], ncols, transforms=False)
    red.run()
    return [abs(red.D[i][i]) for i in range(min(red.m, ncols)) if red.D[i][i]]


def sparse_divisors(columns: list[dict[int, int]], nrows: int) -> list[int]:
    """Nonzero invariant factors of a sparse matrix given as column dicts.

    Unit pivots are eliminated sparsely first; the (usually tiny) remainder
    goes through dense reduction.
    """
    cols = {c: dict(col) for c, col in enumerate(columns) if col}
    rows: dict[int, set[int]] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    units = 0
    while True:
        pivot = None
        best = None
        for c, col in cols.items():
            for r, a in col.items():
                if a in (1, -1):
                    cost = (len(col) - 1) * (len(rows[r]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (r, c)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        r, c = pivot
        pcol = cols.pop(c)
        u = pcol[r]
        for r2 in pcol:
            rows[r2].discard(c)
        for c2 in list(rows[r]):
            col2 = cols[c2]
            factor = col2[r] * u  # u = ±1, so u⁻¹ = u
            for r2, a in pcol.items():
                v = col2.get(r2, 0) - factor * a
                if v:
                    if r2 not in col2:
                        rows[r2].add(c2)
                    col2[r2] = v
                elif r2 in col2:
                    del col2[r2]
                    rows[r2].discard(c2)
            if not col2:
                del cols[c2]
        del rows[r]
        units += 1
    live_rows = sorted(r for r, cs in rows.items() if cs)
    live_cols = sorted(cols)
    rest = []
    if live_rows and live_cols:
        ri = {r: i for i, r in enumerate(live_rows)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for j, c in enumerate(live_cols):
            for r, a in cols[c].items():
                dense[ri[r]][j] = a
        rest = dense_divisors(dense, len(live_cols))
    return [1] * units + sorted(rest, key=lambda x: x)
