"""Standard simplicial sets: simplices, boundaries, horns, the parameter
object for horn contractions, discrete sets and the nerve model of EΣn."""
from __future__ import annotations

import itertools

from ..core.actions import GroupAction
from ..core.errors import StructuralError
from ..core.finset import FinSet, FinSetMap
from ..core.groups import symmetric_group
from .simplicial import SimplicialMap, SSet, nondeg, sset_from_vertex_lists


def _subsets(m: int, keep):
    out = {}
    for size in range(1, m + 2):
        for s in itertools.combinations(range(m + 1), size):
            if keep(s):
                out.setdefault(size - 1, []).append(s)
    return out


def simplex(m: int) -> SSet:
    if m < 0:
        raise StructuralError("simplex dimension must be nonnegative")
    return sset_from_vertex_lists(_subsets(m, lambda s: True))


def boundary(m: int) -> SSet:
    if m < 0:
        raise StructuralError("boundary dimension must be nonnegative")
    return sset_from_vertex_lists(_subsets(m, lambda s: len(s) <= m))


def horn(m: int, k: int) -> SSet:
    if m < 1 or not 0 <= k <= m:
        raise StructuralError(f"horn needs m >= 1 and 0 <= k <= m, got m={m}, k={k}")
    opposite = tuple(v for v in range(m + 1) if v != k)
    return sset_from_vertex_lists(_subsets(m, lambda s: len(s) <= m and s != opposite))


def two_horn_parameter() -> SSet:
    """Nerve of the poset 0 -> 1 <- 2 (vertices 0, 1, 2; edges 0→1 and 2→1)."""
    return sset_from_vertex_lists({0: [(0,), (1,), (2,)], 1: [(0, 1), (2, 1)]})


def generate_cell(kind: str, m: int = 0, k: int | None = None) -> SSet:
    if kind == "simplex":
        return simplex(m)
    if kind == "boundary":
        return boundary(m)
    if kind == "horn":
        if k is None:
            raise StructuralError("horn needs a face index")
        return horn(m, k)
    if kind == "two_horn_Lambda":
        return two_horn_parameter()
    raise StructuralError(f"unknown cell kind {kind!r}")


def labelled_inclusion(sub: SSet, ambient: SSet) -> SimplicialMap:
    """Inclusion of a vertex-labelled complex into another by matching labels."""
    index = [{lab: i for i, lab in enumerate(level)} for level in ambient.labels]
    try:
        images = [[nondeg(k, index[k][lab]) for lab in level] for k, level in enumerate(sub.labels)]
    except (KeyError, IndexError):
        raise StructuralError("labelled complex is not contained in the ambient one") from None
    return SimplicialMap(sub, ambient, images)


def cell_inclusion(kind: str, m: int, k: int | None = None) -> SimplicialMap:
    """The standard inclusion of a boundary or horn into Δ^m."""
    return labelled_inclusion(generate_cell(kind, m, k), simplex(m))


def vertex_map(cod: SSet, v: int, dom: SSet | None = None) -> SimplicialMap:
    """Constant map onto vertex v (from Δ⁰ unless ``dom`` is given)."""
    dom = dom if dom is not None else simplex(0)
    return SimplicialMap(dom, cod, [[(tuple([0] * (k + 1)), 0, v)] * c for k, c in enumerate(dom.counts)])


def map_by_vertices(dom: SSet, cod: SSet, vertex_fn) -> SimplicialMap:
    """The simplicial map into a vertex-labelled ordered complex determined by
    its value on vertices.  ``vertex_fn`` takes a vertex index of ``dom`` and
    returns a vertex label (an int) of ``cod``."""
    index = [{lab: i for i, lab in enumerate(level)} for level in cod.labels]
    images = []
    for k, c in enumerate(dom.counts):
        row = []
        for i in range(c):
            seq = [vertex_fn(v) for v in dom.vertices_of(nondeg(k, i))]
            if any(a > b for a, b in zip(seq, seq[1:])):
                raise StructuralError(f"vertex rule is not order preserving on ({k},{i}): {seq}")
            distinct = tuple(sorted(set(seq)))
            d = len(distinct) - 1
            if distinct not in index[d]:
                raise StructuralError(f"{distinct} is not a simplex of the codomain")
            theta = tuple(distinct.index(x) for x in seq)
            row.append((theta, d, index[d][distinct]))
        images.append(row)
    return SimplicialMap(dom, cod, images)


def discrete(X: FinSet) -> SSet:
    return SSet([[()] * X.size] if X.size else [])


def discrete_map(f: FinSetMap) -> SimplicialMap:
    return SimplicialMap(discrete(f.dom), discrete(f.cod), [[nondeg(0, y) for y in f.table]] if f.dom.size else [])


def esigma_skeleton(n: int, N: int) -> GroupAction:
    """N-skeleton of the nerve model of EΣn: k-simplices are (k+1)-tuples of
    group elements, nondegenerate when consecutive entries differ; Σn acts
    diagonally by left multiplication."""
    if n < 1 or N < 0:
        raise StructuralError("esigma_skeleton needs n >= 1 and N >= 0")
    G = symmetric_group(n)
    per = []
    for k in range(N + 1):
        level = [t for t in itertools.product(range(G.order), repeat=k + 1) if all(a != b for a, b in zip(t, t[1:]))]
        per.append(sorted(level))
    index = [{t: i for i, t in enumerate(level)} for level in per]

    def normal(t):
        keep = [0] + [v for v in range(1, len(t)) if t[v] != t[v - 1]]
        red = tuple(t[v] for v in keep)
        theta = []
        c = -1
        for v in range(len(t)):
            if v == 0 or t[v] != t[v - 1]:
                c += 1
            theta.append(c)
        return (tuple(theta), len(red) - 1, index[len(red) - 1][red])

    faces = []
    for k, level in enumerate(per):
        if k == 0:
            faces.append([()] * len(level))
        else:
            faces.append([tuple(normal(t[:j] + t[j + 1 :]) for j in range(k + 1)) for t in level])
    X = SSet(faces, labels=per)
    maps = []
    for g in G:
        images = [[nondeg(k, index[k][tuple(G.mult[g][a] for a in t)]) for t in level] for k, level in enumerate(per)]
        maps.append(SimplicialMap(X, X, images, check=False))
    return GroupAction(G, X, maps, check=False)


def circle() -> SSet:
    """One vertex and one nondegenerate edge."""
    return SSet([[()], [(((0,), 0, 0), ((0,), 0, 0))]])


__all__ = [
    "boundary",
    "cell_inclusion",
    "circle",
    "discrete",
    "discrete_map",
    "esigma_skeleton",
    "generate_cell",
    "horn",
    "labelled_inclusion",
    "map_by_vertices",
    "simplex",
    "two_horn_parameter",
    "vertex_map",
]
