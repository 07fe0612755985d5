"""Homotopies parametrized by a simplicial set with two marked vertices."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core.errors import StructuralError
from ..core.verdict import Verdict
from .cells import horn, labelled_inclusion, map_by_vertices, simplex, two_horn_parameter, vertex_map
from .engine import SSET
from .simplicial import SimplicialMap, SSet, identity_map


@dataclass
class HomotopyWitness:
    """H: P × X -> Y with H(p0, -) = f0 and H(p1, -) = f1.

    ``preserves`` lists pairs of monos (A ↪ X, B ↪ Y) with H(P × A) ⊂ B.
    """

    param: SSet
    p0: int
    p1: int
    source: SSet
    target: SSet
    H: SimplicialMap
    f0: SimplicialMap
    f1: SimplicialMap
    preserves: list = field(default_factory=list)

    def endpoint(self, p: int) -> SimplicialMap:
        e = SSET
        sect = e.pairing([vertex_map(self.param, p, self.source), identity_map(self.source)])
        return e.compose(self.H, sect)


def _first_difference(f: SimplicialMap, g: SimplicialMap):
    for k, (a, b) in enumerate(zip(f.images, g.images)):
        for i, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return (k, i)
    return None


def verify_homotopy(w: HomotopyWitness) -> Verdict:
    e = SSET
    P, X, Y = w.param, w.source, w.target
    if not (w.H.dom == e.tensor([P, X]) and w.H.cod == Y):
        raise StructuralError("homotopy must be a map P × X -> Y")
    if not (w.f0.dom == X and w.f1.dom == X and w.f0.cod == Y and w.f1.cod == Y):
        raise StructuralError("endpoint maps must be maps X -> Y")
    try:
        w.H.check()
    except StructuralError as exc:
        return Verdict("homotopy", False, [], {"invalid_map": str(exc)})
    for which, p, f in ((0, w.p0, w.f0), (1, w.p1, w.f1)):
        got = w.endpoint(p)
        if not e.equal(got, f):
            cell = _first_difference(got, f)
            return Verdict("homotopy", False, [], {"endpoint": which, "param_vertex": p, "simplex": cell})
    for n, (a, b) in enumerate(w.preserves):
        restricted = e.compose(w.H, e.tensor_maps([identity_map(P), a]))
        allowed = e.image_cells(b)
        for k, level in enumerate(restricted.images):
            for i, (_, d, j) in enumerate(level):
                if (d, j) not in allowed:
                    return Verdict("homotopy", False, [], {"constraint": n, "simplex": (k, i), "image": (d, j)})
    return Verdict("homotopy", True, [], {"param_cells": P.counts, "source_cells": X.counts})


def horn_contraction_rule(m: int, k: int):
    """(0,i) ↦ i, (1,i) ↦ max(k,i), (2,i) ↦ k."""

    def rule(p, i):
        return (i, max(k, i), k)[p]

    return rule


def homotopy_from_rule(m: int, k: int, rule) -> HomotopyWitness:
    """H: Λ × Δ^m -> Δ^m from a vertex rule, claimed to run from the identity
    to the constant map at k and to preserve the horn."""
    if m < 1 or not 0 <= k <= m:
        raise StructuralError(f"invalid horn data m={m}, k={k}")
    P = two_horn_parameter()
    D = simplex(m)
    prod = SSET.tensor([P, D])
    data = SSET.product_data([P, D])
    vert = {}
    for v, comps in enumerate(data.comps[0]):
        vert[v] = (comps[0][2], comps[1][2])
    H = map_by_vertices(prod, D, lambda v: rule(*vert[v]))
    const = vertex_map(D, k, D)
    incl = labelled_inclusion(horn(m, k), D)
    return HomotopyWitness(P, 0, 2, D, D, H, identity_map(D), const, [(incl, incl)])


def build_horn_contraction(m: int, k: int) -> HomotopyWitness:
    return homotopy_from_rule(m, k, horn_contraction_rule(m, k))


def constant_homotopy(f: SimplicialMap, param: SSet | None = None, p0: int = 0, p1: int | None = None) -> HomotopyWitness:
    P = param if param is not None else two_horn_parameter()
    p1 = p1 if p1 is not None else P.count(0) - 1
    H = SSET.compose(f, SSET.projection([P, f.dom], 1))
    return HomotopyWitness(P, p0, p1, f.dom, f.cod, H, f, f)
