"""Finite sets with the cartesian product: the brute-force oracle engine."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from scipy.cluster.hierarchy import DisjointSet

from .engine import Coequalizer, Coproduct, Engine
from .errors import EngineMismatch, StructuralError


def quotient_labels(n: int, pairs) -> tuple[list[int], int]:
    """Class label per element of range(n) for the equivalence generated by
    ``pairs``; classes are numbered by their least element."""
    ds = DisjointSet(range(n))
    for a, b in pairs:
        ds.merge(a, b)
    label = {}
    out = []
    for x in range(n):
        root = ds[x]
        if root not in label:
            label[root] = len(label)
        out.append(label[root])
    return out, len(label)


@dataclass(frozen=True)
class FinSet:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise StructuralError("negative size")

    @property
    def engine(self) -> "FinSetEngine":
        return FINSET

    def __repr__(self):
        return f"FinSet({self.size})"


@dataclass(frozen=True)
class FinSetMap:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(x) for x in self.table))
        if len(self.table) != self.dom.size:
            raise StructuralError(f"image table has length {len(self.table)}, domain has {self.dom.size}")
        if any(not 0 <= x < self.cod.size for x in self.table):
            raise StructuralError("image table entry out of range")

    @property
    def engine(self) -> "FinSetEngine":
        return FINSET

    def __call__(self, x: int) -> int:
        return self.table[x]


def finset_is_mono(f: FinSetMap) -> bool:
    return len(set(f.table)) == len(f.table)


def finset_is_iso(f: FinSetMap) -> bool:
    return finset_is_mono(f) and f.dom.size == f.cod.size


class FinSetEngine(Engine):
    name = "finset"

    # elements of a product X_0 × ... × X_{k-1} are numbered in mixed radix,
    # first factor most significant
    @staticmethod
    def split(sizes: Sequence[int], x: int) -> tuple[int, ...]:
        out = []
        for s in reversed(sizes):
            x, r = divmod(x, s)
            out.append(r)
        return tuple(reversed(out))

    @staticmethod
    def join(sizes: Sequence[int], xs: Sequence[int]) -> int:
        v = 0
        for s, x in zip(sizes, xs):
            v = v * s + x
        return v

    def _check(self, *xs):
        for x in xs:
            if not isinstance(x, (FinSet, FinSetMap)):
                raise EngineMismatch(f"finset engine got {type(x).__name__}")

    def identity(self, X):
        return FinSetMap(X, X, tuple(range(X.size)))

    def compose(self, g, f):
        self._check(g, f)
        if f.cod != g.dom:
            raise StructuralError(f"cannot compose: {f.cod} vs {g.dom}")
        return FinSetMap(f.dom, g.cod, tuple(g.table[x] for x in f.table))

    def equal(self, f, g):
        self._check(f, g)
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def is_mono(self, f):
        return finset_is_mono(f)

    def is_iso(self, f):
        return finset_is_iso(f)

    def inverse(self, f):
        if not finset_is_iso(f):
            raise StructuralError("map is not invertible")
        table = [0] * f.cod.size
        for x, y in enumerate(f.table):
            table[y] = x
        return FinSetMap(f.cod, f.dom, tuple(table))

    def find_isomorphism(self, X, Y):
        return self.identity(X) if X.size == Y.size else None

    def same_object(self, X, Y):
        return X == Y

    def initial(self):
        return FinSet(0)

    def initial_map(self, X):
        return FinSetMap(FinSet(0), X, ())

    def coproduct(self, objs):
        objs = list(objs)
        self._check(*objs)
        offsets = [0]
        for X in objs:
            offsets.append(offsets[-1] + X.size)
        S = FinSet(offsets[-1])
        legs = [FinSetMap(X, S, tuple(range(o, o + X.size))) for X, o in zip(objs, offsets)]
        return Coproduct(self, objs, S, legs, data=offsets)

    def copair(self, coprod, maps, target):
        table = []
        for X, f in zip(coprod.objs, maps):
            if f.dom != X or f.cod != target:
                raise StructuralError("copairing maps do not match the summands")
            table.extend(f.table)
        return FinSetMap(coprod.obj, target, table)

    def coequalizer(self, f, g):
        self._check(f, g)
        if f.dom != g.dom or f.cod != g.cod:
            raise StructuralError("coequalizer needs a parallel pair")
        labels, k = quotient_labels(f.cod.size, zip(f.table, g.table))
        Q = FinSet(k)
        return Coequalizer(self, f, g, Q, FinSetMap(f.cod, Q, labels))

    def coequalizer_factor(self, coeq, h):
        table = [None] * coeq.obj.size
        for x, c in enumerate(coeq.proj.table):
            table[c] = h.table[x]
        return FinSetMap(coeq.obj, h.cod, table)

    def coinvariants(self, action):
        from .engine import Coinvariants

        X = action.obj
        pairs = [(x, m.table[x]) for m in action.maps for x in range(X.size)]
        labels, k = quotient_labels(X.size, pairs)
        Q = FinSet(k)
        proj = FinSetMap(X, Q, labels)

        def factor(h):
            table = [None] * k
            for x, c in enumerate(labels):
                table[c] = h.table[x]
            return FinSetMap(Q, h.cod, table)

        return Coinvariants(self, action, Q, proj, factor)

    def acts_freely(self, action):
        return all(
            m.table[x] != x for g, m in enumerate(action.maps) if g != action.group.identity for x in range(action.obj.size)
        )

    # -- monoidal structure -------------------------------------------------
    def unit(self):
        return FinSet(1)

    def tensor(self, objs):
        self._check(*objs)
        return FinSet(math.prod(X.size for X in objs))

    def tensor_maps(self, maps):
        self._check(*maps)
        dsz = [f.dom.size for f in maps]
        csz = [f.cod.size for f in maps]
        table = [
            self.join(csz, [f.table[x] for f, x in zip(maps, xs)])
            for xs in itertools.product(*(range(s) for s in dsz))
        ]
        return FinSetMap(self.tensor([f.dom for f in maps]), self.tensor([f.cod for f in maps]), table)

    def permute(self, objs, perm):
        objs = list(objs)
        sizes = [X.size for X in objs]
        out_sizes = [0] * len(objs)
        for i, p in enumerate(perm):
            out_sizes[p] = sizes[i]
        table = []
        for xs in itertools.product(*(range(s) for s in sizes)):
            ys = [0] * len(xs)
            for i, p in enumerate(perm):
                ys[p] = xs[i]
            table.append(self.join(out_sizes, ys))
        return FinSetMap(self.tensor(objs), FinSet(math.prod(out_sizes)), table)

    def flatten(self, groups):
        X = self.tensor([self.tensor(g) for g in groups])
        return self.identity(X)

    def projection(self, objs, i):
        sizes = [X.size for X in objs]
        P = self.tensor(objs)
        return FinSetMap(P, objs[i], [self.split(sizes, x)[i] for x in range(P.size)])

    def pairing(self, maps):
        dom = maps[0].dom
        sizes = [f.cod.size for f in maps]
        return FinSetMap(
            dom, FinSet(math.prod(sizes)), [self.join(sizes, [f.table[x] for f in maps]) for x in range(dom.size)]
        )

    # -- mono-mode hooks (subobjects of a fixed ambient object) -------------
    def image_cells(self, f):
        return set(f.table)

    def subobject(self, X, cells):
        cells = sorted(cells)
        S = FinSet(len(cells))
        return S, FinSetMap(S, X, cells)

    def lift(self, h, m):
        """The unique k with m∘k = h, for m mono."""
        inv = {y: x for x, y in enumerate(m.table)}
        try:
            return FinSetMap(h.dom, m.dom, [inv[y] for y in h.table])
        except KeyError:
            raise StructuralError("map does not factor through the subobject") from None

    def cell_image(self, f, cell):
        return f.table[cell]

    def preimage_table(self, mono):
        return {y: x for x, y in enumerate(mono.table)}

    def eval_cell(self, f, cell):
        return f.table[cell]

    def assemble(self, dom, cod, images):
        return FinSetMap(dom, cod, [images[x] for x in range(dom.size)])

    def cells(self, X):
        return range(X.size)


FINSET = FinSetEngine()


def finset_product(X: FinSet, Y: FinSet):
    """X × Y with its two projections."""
    P = FINSET.tensor([X, Y])
    return P, FINSET.projection([X, Y], 0), FINSET.projection([X, Y], 1)
