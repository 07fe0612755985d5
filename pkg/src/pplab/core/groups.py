"""Finite permutation groups stored by full composition table."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import StructuralError

Perm = tuple


def compose_perms(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[x] for x in b)


def invert_perm(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class FinGroup:
    """A finite group of permutations of ``range(degree)``.

    Elements are sorted lexicographically, so the identity is always index 0.
    ``mult[a][b]`` is the index of ``a∘b`` (apply ``b`` first).
    """

    def __init__(self, perms: Iterable[Perm], name: str | None = None):
        elements = sorted(set(tuple(p) for p in perms))
        if not elements:
            raise StructuralError("a group needs at least one element")
        degree = len(elements[0])
        if any(len(p) != degree or sorted(p) != list(range(degree)) for p in elements):
            raise StructuralError("elements must be permutations of a common degree")
        self.degree = degree
        self.elements: tuple[Perm, ...] = tuple(elements)
        self.name = name or f"G{len(elements)}"
        self._index = {p: i for i, p in enumerate(self.elements)}
        if self.elements[0] != tuple(range(degree)):
            raise StructuralError("identity missing")
        # table scan doubles as the closure check; associativity is inherited from
        # permutation composition, inverses exist once the set is closed and finite
        mult = []
        for a in self.elements:
            row = []
            for b in self.elements:
                c = compose_perms(a, b)
                if c not in self._index:
                    raise StructuralError(f"{self.name} not closed: {a}∘{b}")
                row.append(self._index[c])
            mult.append(tuple(row))
        self.mult = tuple(mult)
        self.inv = tuple(self._index[invert_perm(a)] for a in self.elements)

    identity = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Perm) -> int:
        return self._index[tuple(perm)]

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __repr__(self):
        return f"FinGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FinGroup) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def check_axioms(self) -> None:
        """Re-verify associativity, identity and inverses on the stored table."""
        n = self.order
        m = self.mult
        for a in range(n):
            if m[0][a] != a or m[a][0] != a:
                raise StructuralError("identity law fails")
            if m[a][self.inv[a]] != 0:
                raise StructuralError("inverse law fails")
            for b in range(n):
                for c in range(n):
                    if m[m[a][b]][c] != m[a][m[b][c]]:
                        raise StructuralError("associativity fails")


def symmetric_group(n: int) -> FinGroup:
    if n < 1:
        raise StructuralError("symmetric_group needs n >= 1 (n = 0 is excluded)")
    return FinGroup(itertools.permutations(range(n)), name=f"S{n}")


def _block_product(blocks: Sequence[FinGroup]) -> list[Perm]:
    out = []
    for combo in itertools.product(*(g.elements for g in blocks)):
        perm = []
        shift = 0
        for g, p in zip(blocks, combo):
            perm.extend(x + shift for x in p)
            shift += g.degree
        out.append(tuple(perm))
    return out


def group_product(groups: Sequence[FinGroup]) -> FinGroup:
    """Direct product acting blockwise on the disjoint union of the degrees."""
    if not groups:
        raise StructuralError("group_product needs a nonempty list")
    name = "×".join(g.name for g in groups)
    return FinGroup(_block_product(groups), name=name)


def multi_symmetric_group(ns: Sequence[int]) -> FinGroup:
    """Σ_n := ∏ Σ_{n_i} acting on Σ n_i positions, block i contiguous.

    Components equal to zero contribute nothing; the multi-index must not be
    all zero.
    """
    if any(k < 0 for k in ns) or sum(ns) == 0:
        raise StructuralError(f"multi-index {tuple(ns)} must be nonnegative and nonzero")
    blocks = [symmetric_group(k) for k in ns if k > 0]
    g = FinGroup(_block_product(blocks))
    g.name = "×".join(f"S{k}" for k in ns)
    return g


def cyclic_group(n: int) -> FinGroup:
    gen = tuple((i + 1) % n for i in range(n))
    return generated_group([gen], degree=n, name=f"C{n}")


def generated_group(gens: Iterable[Perm], degree: int, name: str | None = None) -> FinGroup:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perms(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return FinGroup(seen, name=name)


@dataclass(frozen=True)
class Subgroup:
    """An injective homomorphism ``H -> G`` given by an index table."""

    sub: FinGroup
    group: FinGroup
    embedding: tuple[int, ...]

    def __post_init__(self):
        H, G, e = self.sub, self.group, self.embedding
        if len(e) != H.order:
            raise StructuralError("embedding table has wrong length")
        if len(set(e)) != len(e):
            raise StructuralError("embedding is not injective")
        for a in range(H.order):
            for b in range(H.order):
                if e[H.mult[a][b]] != G.mult[e[a]][e[b]]:
                    raise StructuralError(f"embedding is not a homomorphism at ({a}, {b})")

    @property
    def index(self) -> int:
        return self.group.order // self.sub.order

    @cached_property
    def image(self) -> frozenset:
        return frozenset(self.embedding)

    @cached_property
    def left_cosets(self) -> tuple[tuple[int, ...], ...]:
        """Cosets gH as sorted tuples, ordered by their least element.

        The first entry of each coset is its lexicographically least element,
        used as the coset representative.
        """
        G = self.group
        seen = set()
        out = []
        for g in G:
            if g in seen:
                continue
            coset = tuple(sorted(G.mult[g][h] for h in self.embedding))
            seen.update(coset)
            out.append(coset)
        return tuple(out)

    def decompose(self, g: int) -> tuple[int, int]:
        """Write ``g = r·h`` with r the least coset representative; return (coset no., h in H)."""
        G = self.group
        for c, coset in enumerate(self.left_cosets):
            if g in coset:
                r = coset[0]
                hg = G.mult[G.inv[r]][g]
                return c, self.embedding.index(hg)
        raise AssertionError("unreachable")


def subgroup_of(group: FinGroup, perms: Iterable[Perm]) -> Subgroup:
    """Subgroup generated by ``perms`` inside ``group``."""
    H = generated_group(perms, group.degree)
    return Subgroup(H, group, tuple(group.index(p) for p in H.elements))


def identity_subgroup(group: FinGroup) -> Subgroup:
    return Subgroup(FinGroup([tuple(range(group.degree))], name="1"), group, (0,))


def whole_subgroup(group: FinGroup) -> Subgroup:
    return Subgroup(group, group, tuple(range(group.order)))


def all_subgroups(group: FinGroup) -> list[Subgroup]:
    """Every subgroup generated by at most two elements (all of them for |G| <= 7)."""
    found = {}
    for a in group:
        for b in group:
            if b < a:
                continue
            sub = subgroup_of(group, [group.elements[a], group.elements[b]])
            found.setdefault(sub.sub.elements, sub)
    return [found[k] for k in sorted(found, key=lambda k: (len(k), k))]


def young_subgroup(group_ns: Sequence[int], ks: Sequence[int]) -> Subgroup:
    """Σ_{n-k} × Σ_k inside Σ_n for multi-indices, positions laid out per block
    as ``n_i - k_i`` ones followed by ``k_i`` twos."""
    G = multi_symmetric_group(group_ns)
    pieces = []
    for n, k in zip(group_ns, ks):
        if not 0 <= k <= n:
            raise StructuralError(f"need 0 <= k <= n, got k={tuple(ks)}, n={tuple(group_ns)}")
        pieces.extend([n - k, k])
    sym = [symmetric_group(p) if p else None for p in pieces]
    perms = []
    for combo in itertools.product(*((s.elements if s else ((),)) for s in sym)):
        perm = []
        shift = 0
        for p, piece in zip(combo, pieces):
            perm.extend(x + shift for x in p)
            shift += piece
        perms.append(tuple(perm))
    H = FinGroup(perms, name="×".join(f"S{p}" for p in pieces))
    return Subgroup(H, G, tuple(G.index(p) for p in H.elements))
