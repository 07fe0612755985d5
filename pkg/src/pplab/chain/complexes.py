"""Finitely presented abelian groups and bounded chain complexes of them."""
from __future__ import annotations

from functools import cached_property
from typing import Mapping

import numpy as np

from ..core.errors import StructuralError
from .snf import SNFResult, int_matrix, matmul, smith_normal_form, sparse_divisors, zeros


def hstack(mats, nrows: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return zeros(nrows, 0)
    return np.concatenate(mats, axis=1)


def format_group(rank: int, torsion) -> str:
    parts = []
    if rank:
        parts.append("Z" if rank == 1 else f"Z^{rank}")
    parts.extend(f"Z/{t}" for t in torsion)
    return " + ".join(parts) if parts else "0"


class FPAbelianGroup:
    """Z^gens / (column span of ``relations``)."""

    def __init__(self, gens: int, relations=None):
        if gens < 0:
            raise StructuralError("negative generator count")
        self.gens = gens
        if relations is None:
            relations = zeros(gens, 0)
        rel = np.asarray(relations, dtype=object)
        if rel.ndim != 2 or rel.shape[0] != gens:
            raise StructuralError(f"relation matrix must have {gens} rows")
        self.relations = rel

    @classmethod
    def from_invariants(cls, rank: int, torsion=()) -> "FPAbelianGroup":
        g = rank + len(torsion)
        rel = zeros(g, len(torsion))
        for i, t in enumerate(torsion):
            rel[rank + i, i] = t
        return cls(g, rel)

    @cached_property
    def snf(self) -> SNFResult:
        return smith_normal_form(self.relations)

    @cached_property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        d = [x for x in self.snf.diagonal if x]
        return self.gens - len(d), tuple(x for x in d if x > 1)

    @property
    def rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants[1]

    def is_zero(self) -> bool:
        return self.invariants == (0, ())

    def is_free(self) -> bool:
        return self.relations.shape[1] == 0

    def isomorphic(self, other: "FPAbelianGroup") -> bool:
        return self.invariants == other.invariants

    def in_relations(self, vectors) -> bool:
        """True iff every column of ``vectors`` lies in the relation lattice."""
        if self.gens == 0:
            return True
        V = np.asarray(vectors, dtype=object).reshape(self.gens, -1)
        if V.shape[1] == 0 or not V.any():
            return True
        if self.relations.shape[1] == 0:
            return False
        s = self.snf
        W = matmul(s.U, V)
        diag = s.diagonal
        for i in range(self.gens):
            d = diag[i] if i < len(diag) else 0
            for x in W[i]:
                if (d == 0 and x != 0) or (d and x % d):
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, FPAbelianGroup)
            and self.gens == other.gens
            and np.array_equal(self.relations, other.relations)
        )

    def __hash__(self):
        return hash((self.gens, self.relations.shape))

    def __str__(self):
        return format_group(*self.invariants)

    def __repr__(self):
        return f"FPAbelianGroup({self})"


class ChainComplexFP:
    """C_lo, ..., C_hi with differentials d_k: C_k -> C_{k-1} (homological grading).

    ``diffs[k]`` has shape (gens of C_{k-1}, gens of C_k).
    """

    def __init__(self, groups: Mapping[int, FPAbelianGroup], diffs: Mapping[int, object] | None = None, check=True):
        groups = {k: g for k, g in groups.items() if g.gens}
        if groups:
            self.lo, self.hi = min(groups), max(groups)
        else:
            self.lo, self.hi = 0, 0
        self.groups = {k: groups.get(k, FPAbelianGroup(0)) for k in range(self.lo, self.hi + 1)}
        self.diffs = {}
        diffs = dict(diffs or {})
        for k in range(self.lo + 1, self.hi + 1):
            shape = (self.gens(k - 1), self.gens(k))
            m = diffs.pop(k, None)
            m = zeros(*shape) if m is None else np.asarray(m, dtype=object).reshape(shape)
            self.diffs[k] = m
        for k, m in diffs.items():
            if np.asarray(m, dtype=object).any():
                raise StructuralError(f"differential at degree {k} leaves the degree range")
        if check:
            self.check()

    @property
    def engine(self):
        from .engine import CHAIN

        return CHAIN

    def gens(self, k: int) -> int:
        g = self.groups.get(k)
        return g.gens if g else 0

    def group(self, k: int) -> FPAbelianGroup:
        return self.groups.get(k) or FPAbelianGroup(0)

    def rel(self, k: int) -> np.ndarray:
        return self.group(k).relations

    def d(self, k: int) -> np.ndarray:
        m = self.diffs.get(k)
        return m if m is not None else zeros(self.gens(k - 1), self.gens(k))

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def check(self) -> None:
        for k in self.degrees:
            if not self.group(k - 1).in_relations(matmul(self.d(k), self.rel(k))):
                raise StructuralError(f"differential at degree {k} does not respect relations")
            if not self.group(k - 2).in_relations(matmul(self.d(k - 1), self.d(k))):
                raise StructuralError(f"d∘d != 0 at degree {k}")

    def is_free(self) -> bool:
        return all(g.is_free() for g in self.groups.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.group(k).rank for k in self.degrees)

    def _key(self):
        return (
            self.lo,
            self.hi,
            tuple((g.gens, tuple(map(tuple, g.relations)), g.relations.shape) for g in self.groups.values()),
            tuple(tuple(map(tuple, self.d(k))) for k in self.degrees),
        )

    def __eq__(self, other):
        return self is other or (isinstance(other, ChainComplexFP) and self._key() == other._key())

    def __hash__(self):
        return hash((self.lo, self.hi, tuple(self.gens(k) for k in self.degrees)))

    def __repr__(self):
        body = ", ".join(f"{k}: {self.gens(k)}" for k in self.degrees)
        return f"ChainComplexFP({{{body}}})"


class ChainMap:
    def __init__(self, dom: ChainComplexFP, cod: ChainComplexFP, mats: Mapping[int, object], check=True):
        self.dom = dom
        self.cod = cod
        self.mats = {}
        for k in sorted(set(dom.degrees) | set(mats)):
            shape = (cod.gens(k), dom.gens(k))
            m = mats.get(k)
            m = zeros(*shape) if m is None else np.asarray(m, dtype=object).reshape(shape)
            if shape[0] and shape[1]:
                self.mats[k] = m
        if check:
            self.check()

    @property
    def engine(self):
        from .engine import CHAIN

        return CHAIN

    def mat(self, k: int) -> np.ndarray:
        m = self.mats.get(k)
        return m if m is not None else zeros(self.cod.gens(k), self.dom.gens(k))

    def check(self) -> None:
        for k in self.dom.degrees:
            if not self.cod.group(k).in_relations(matmul(self.mat(k), self.dom.rel(k))):
                raise StructuralError(f"map does not respect relations at degree {k}")
            diff = matmul(self.cod.d(k), self.mat(k)) - matmul(self.mat(k - 1), self.dom.d(k))
            if not self.cod.group(k - 1).in_relations(diff):
                raise StructuralError(f"map does not commute with differentials at degree {k}")

    def __repr__(self):
        return f"ChainMap({self.dom!r} -> {self.cod!r})"


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------
def _kernel_basis(M: np.ndarray) -> np.ndarray:
    """Columns spanning the integer kernel of M."""
    n = M.shape[1]
    if M.shape[0] == 0:
        return int_matrix([[int(i == j) for j in range(n)] for i in range(n)], n, n)
    s = smith_normal_form(M)
    return s.V[:, s.rank:]


def _homology_with_relations(C: ChainComplexFP, k: int) -> FPAbelianGroup:
    g = C.gens(k)
    M = hstack([C.d(k), C.rel(k - 1)], C.gens(k - 1))
    K = _kernel_basis(M)[:g, :]
    s = smith_normal_form(K)
    r = s.rank
    diag = s.diagonal[:r]
    N = hstack([C.d(k + 1), C.rel(k)], g)
    W = matmul(s.U, N)[:r, :]
    coords = zeros(r, N.shape[1])
    for i in range(r):
        for j in range(N.shape[1]):
            q, rem = divmod(W[i, j], diag[i])
            if rem:
                raise AssertionError("boundary outside the cycle lattice")
            coords[i, j] = q
    return FPAbelianGroup(r, coords)


def _sparse_columns(M: np.ndarray) -> list[dict[int, int]]:
    return [{i: int(M[i, j]) for i in range(M.shape[0]) if M[i, j]} for j in range(M.shape[1])]


def free_homology(sizes: Mapping[int, int], boundary_cols: Mapping[int, list], degrees) -> dict[int, tuple]:
    """(rank, torsion) per degree of a complex of free groups given sparsely.

    ``boundary_cols[k]`` lists the columns of d_k: C_k -> C_{k-1} as dicts.
    """
    divs = {}

    def divisors(k):
        if k not in divs:
            cols = boundary_cols.get(k, [])
            divs[k] = sparse_divisors(cols, sizes.get(k - 1, 0)) if cols else []
        return divs[k]

    out = {}
    for k in degrees:
        rank = sizes.get(k, 0) - len(divisors(k)) - len(divisors(k + 1))
        out[k] = (rank, tuple(d for d in divisors(k + 1) if d > 1))
    return out


def complex_homology(C: ChainComplexFP) -> dict[int, FPAbelianGroup]:
    """H_k for every degree of C."""
    C.check()
    if C.is_free():
        sizes = {k: C.gens(k) for k in C.degrees}
        cols = {k: _sparse_columns(C.d(k)) for k in C.degrees}
        table = free_homology(sizes, cols, C.degrees)
        return {k: FPAbelianGroup.from_invariants(*table[k]) for k in C.degrees}
    return {k: _homology_with_relations(C, k) for k in C.degrees}


def homology_invariants(C: ChainComplexFP) -> dict[int, tuple]:
    return {k: h.invariants for k, h in complex_homology(C).items()}
