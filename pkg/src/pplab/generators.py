"""Seeded random instances: finite sets, subcomplexes of simplices, maps."""
from __future__ import annotations

import itertools
import random

from .core.finset import FinSet, FinSetMap
from .sset.cells import labelled_inclusion, map_by_vertices
from .sset.simplicial import SSet, sset_from_vertex_lists


def random_finset_map(rng: random.Random, max_size: int = 3, injective: bool = False, dom: int | None = None) -> FinSetMap:
    a = dom if dom is not None else rng.randint(0, max_size)
    if injective:
        b = rng.randint(max(a, 1) if a else 0, max(max_size, a))
        table = tuple(rng.sample(range(b), a))
    else:
        b = rng.randint(1 if a else 0, max_size) if max_size else 0
        if a and not b:
            b = 1
        table = tuple(rng.randrange(b) for _ in range(a))
    return FinSetMap(FinSet(a), FinSet(b), table)


def random_injective_chain(rng: random.Random, max_size: int = 3) -> tuple[FinSetMap, FinSetMap]:
    """X0 ↪ X1 ↪ X2 with |X2| <= max_size."""
    c = rng.randint(1, max_size)
    b = rng.randint(0, c)
    a = rng.randint(0, b)
    v0 = FinSetMap(FinSet(a), FinSet(b), tuple(rng.sample(range(b), a)))
    v1 = FinSetMap(FinSet(b), FinSet(c), tuple(rng.sample(range(c), b)))
    return v0, v1


# ---------------------------------------------------------------------------
# simplicial sets
# ---------------------------------------------------------------------------
def _closure(faces_sets) -> set:
    out = set()
    for s in faces_sets:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            out.update(itertools.combinations(s, r))
    return out


def _complex(simplices: set) -> SSet:
    by_dim = {}
    for s in sorted(simplices):
        by_dim.setdefault(len(s) - 1, []).append(s)
    return sset_from_vertex_lists(by_dim)


def _cells(simplices) -> int:
    return len(simplices)


def random_complex_simplices(rng: random.Random, max_cells: int = 10, max_vertex: int = 3) -> set:
    """Vertex-set simplices of a random nonempty subcomplex of Δ^max_vertex."""
    for _ in range(100):
        m = rng.randint(min(1, max_vertex), max_vertex)
        tops = []
        for _ in range(rng.randint(1, 3)):
            size = rng.randint(1, m + 1)
            tops.append(tuple(sorted(rng.sample(range(m + 1), size))))
        sims = _closure(tops)
        if _cells(sims) <= max_cells:
            return sims
    return {(0,)}


def random_complex(rng: random.Random, max_cells: int = 10, max_vertex: int = 3) -> SSet:
    return _complex(random_complex_simplices(rng, max_cells, max_vertex))


def random_subcomplex_simplices(rng: random.Random, simplices: set, allow_empty: bool = True) -> set:
    pool = sorted(simplices)
    if not pool:
        return set()
    picks = [s for s in pool if rng.random() < 0.35]
    if not picks and not allow_empty:
        picks = [rng.choice(pool)]
    return _closure(picks)


def random_sset_mono(rng: random.Random, max_cells: int = 10, max_vertex: int = 3):
    """A random inclusion of subcomplexes of a simplex."""
    big = random_complex_simplices(rng, max_cells, max_vertex)
    small = random_subcomplex_simplices(rng, big)
    return labelled_inclusion(_complex(small), _complex(big))


def random_sset_chain(rng: random.Random, max_cells: int = 10, max_vertex: int = 3):
    """Composable inclusions X0 ↪ X1 ↪ X2 of subcomplexes."""
    top = random_complex_simplices(rng, max_cells, max_vertex)
    mid = random_subcomplex_simplices(rng, top, allow_empty=False)
    low = random_subcomplex_simplices(rng, mid)
    X0, X1, X2 = _complex(low), _complex(mid), _complex(top)
    return labelled_inclusion(X0, X1), labelled_inclusion(X1, X2)


def random_sset_map(rng: random.Random, max_cells: int = 10, max_vertex: int = 3):
    """A random order-preserving vertex map between subcomplexes (often not mono)."""
    src = random_complex_simplices(rng, max_cells, max_vertex)
    verts = sorted({v for s in src for v in s})
    m = rng.randint(0, max_vertex)
    fn = {}
    last = 0
    for v in verts:
        last = rng.randint(last, m)
        fn[v] = last
    image = {tuple(sorted({fn[v] for v in s})) for s in src}
    extra = random_complex_simplices(rng, max_cells, m) if rng.random() < 0.5 else set()
    tgt = _closure(image) | {s for s in extra if all(v <= m for v in s)}
    X, Y = _complex(src), _complex(tgt)
    return map_by_vertices(X, Y, lambda i: fn[X.labels[0][i][0]])


def random_sset_arrow(rng: random.Random, max_cells: int = 10, mono_bias: float = 0.5, max_vertex: int = 3):
    if rng.random() < mono_bias:
        return random_sset_mono(rng, max_cells, max_vertex)
    return random_sset_map(rng, max_cells, max_vertex)
