"""Instance-level verifiers for symmetric flatness, h-monoidality,
symmetroidality and power cofibrations, plus the standard finite examples
(BΣ2, the sign representation counterexample in chain complexes, strict
versus homotopy pushouts).
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .chain.complexes import ChainComplexFP, FPAbelianGroup, complex_homology
from .chain.engine import CHAIN, sign_action_power
from .core.actions import EquivariantArrow, GroupAction, arrow_coinvariants, coinvariants, trivially_acted
from .core.errors import EquivarianceError, StructuralError
from .core.finset import FinSet, FinSetMap
from .core.groups import multi_symmetric_group
from .core.verdict import Verdict, jsonable
from .pushout import (
    ArrowSquare,
    MultiIndex,
    coinv_pp,
    flat_family,
    identity_square,
    is_cocartesian,
    pp_map,
    pp_multi,
    square_pushout,
    tensor_coinv,
)
from .sset.cells import cell_inclusion, circle, esigma_skeleton, horn, simplex, two_horn_parameter, vertex_map
from .sset.engine import SSET, fixed_cells
from .sset.homology import homology_strings, is_homology_iso
from .sset.homotopy import HomotopyWitness, build_horn_contraction, verify_homotopy
from .sset.simplicial import SimplicialMap, SSet, nondeg


@dataclass
class CheckReport:
    suite: str
    seed: int | None
    instances: list = field(default_factory=list)

    def add(self, inputs: dict, verdicts: Sequence[Verdict], millis: float | None = None):
        self.instances.append({"inputs": inputs, "verdicts": list(verdicts), "millis": millis})

    @property
    def passed(self) -> bool:
        return all(v.passed for inst in self.instances for v in inst["verdicts"])

    def to_json(self, timings: bool = False) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "pass": self.passed, "instances": []}
        for inst in self.instances:
            row = {"inputs": jsonable(inst["inputs"]), "verdicts": [v.to_json() for v in inst["verdicts"]]}
            if timings and inst["millis"] is not None:
                row["millis"] = f"{inst['millis']:.1f}"
            out["instances"].append(row)
        return jsonable(out)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = 1000 * (time.perf_counter() - self.start)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------
def mono_verdict(claim: str, f, flags=()) -> Verdict:
    """Is f mono?  A failure names a collapsed or repeated cell."""
    e = f.engine
    if e.is_mono(f):
        return Verdict(claim, True, list(flags), {"dom_cells": _counts(f.dom), "cod_cells": _counts(f.cod)})
    seen = {}
    for cell in e.cells(f.dom):
        y = e.cell_image(f, cell)
        if y is None:
            return Verdict(claim, False, list(flags), {"degenerate_image_of": cell})
        if y in seen:
            return Verdict(claim, False, list(flags), {"cells_with_same_image": [seen[y], cell], "image": y})
        seen[y] = cell
    return Verdict(claim, False, list(flags), {})


def _counts(X):
    return list(X.counts) if isinstance(X, SSet) else getattr(X, "size", None)


def is_horn_inclusion(f) -> tuple[int, int] | None:
    """(m, k) if f is the standard inclusion of a horn into Δ^m."""
    if not isinstance(f, SimplicialMap) or not SSET.is_mono(f):
        return None
    m = f.cod.dim
    if f.cod != simplex(m):
        return None
    for k in range(m + 1):
        H = horn(m, k)
        if f.dom == H and SSET.image_cells(f) == SSET.image_cells(cell_inclusion("horn", m, k)):
            return m, k
    return None


def _homology_padded(X: SSet, upto: int) -> list[str]:
    top = min(upto, X.dim + 1)
    out = homology_strings(X, top) if top >= 0 else []
    return out + ["0"] * (upto + 1 - len(out))


# ---------------------------------------------------------------------------
# power contraction
# ---------------------------------------------------------------------------
def param_end_swap() -> SimplicialMap:
    """The automorphism of the horn parameter exchanging its two ends."""
    P = two_horn_parameter()
    return SimplicialMap(P, P, [[nondeg(0, 2), nondeg(0, 1), nondeg(0, 0)], [nondeg(1, 1), nondeg(1, 0)]])


@dataclass
class PowerContraction:
    witness: HomotopyWitness
    quotient_arrow: Any
    collapse_factors: bool


def build_power_contraction(y: EquivariantArrow, horns: Sequence[tuple[int, int]], n, diagonal: Sequence | None = None) -> PowerContraction:
    """Contract y ⊞_Σ v^{⊞n} for v the horn inclusions, using the horn
    contraction in each tensor factor and the diagonal of the parameter.

    ``diagonal`` optionally replaces the components of the diagonal
    P -> P^N by other endomorphisms of P (a non-equivariant choice is
    rejected)."""
    n = MultiIndex(n)
    if len(horns) != len(n):
        raise StructuralError("one horn per block of n is required")
    e = SSET
    family = [cell_inclusion("horn", m, k) for m, k in horns]
    res = coinv_pp(y, family, n)
    eq = res.equivariant
    G = eq.group
    P = two_horn_parameter()
    flat_horns = flat_family(list(horns), n)
    N = n.total
    diag = list(diagonal) if diagonal is not None else [e.identity(P)] * N
    if len(diag) != N:
        raise StructuralError("diagonal needs one component per tensor factor")
    contractions = [build_horn_contraction(m, k) for m, k in flat_horns]
    D = [simplex(m) for m, _ in flat_horns]
    Y1 = y.arrow.cod
    Dn = e.tensor(D)
    X = e.tensor([Y1, Dn])
    assert X == eq.arrow.cod
    pP = e.projection([P, X], 0)
    pX = e.projection([P, X], 1)
    pY = e.compose(e.projection([Y1, Dn], 0), pX)
    pDn = e.compose(e.projection([Y1, Dn], 1), pX)
    comps = []
    consts = []
    for i, (w, Di) in enumerate(zip(contractions, D)):
        pDi = pDn if N == 1 else e.compose(e.projection(D, i), pDn)
        comps.append(e.compose(w.H, e.pairing([e.compose(diag[i], pP), pDi])))
        consts.append(w.f1)
    H_big = e.pairing([pY, e.pairing(comps)])
    # equivariance of the big homotopy for the diagonal action
    idP = e.identity(P)
    for g in G:
        act = eq.cod_action.maps[g]
        if not e.equal(e.compose(H_big, e.tensor_maps([idP, act])), e.compose(act, H_big)):
            raise EquivarianceError(f"homotopy is not equivariant at group element {g}")
    # descend to coinvariants: P × X_G = (P × X)_G since P carries the trivial action
    q_cod = res.quotient.cod
    Q1 = q_cod.obj
    reps = _orbit_reps(q_cod.proj)
    PQ = e.tensor([P, Q1])
    pq_data = e.product_data([P, Q1])
    px_data = e.product_data([P, X])
    images = []
    for level in pq_data.comps:
        row = []
        for cP, cQ in level:
            t, d, i = cQ
            lifted = (t, d, reps[(d, i)])
            s = px_data.element((cP, lifted))
            row.append(q_cod.proj(H_big(s)))
        images.append(row)
    HQ = SimplicialMap(PQ, Q1, images, check=True)
    # the collapsed endpoint, computed independently of HQ
    Dn_to_pt = e.pairing([e.compose(c, e.projection(D, i) if N > 1 else e.identity(Dn)) for i, c in enumerate(consts)])
    collapse_big = e.pairing([e.projection([Y1, Dn], 0), e.compose(Dn_to_pt, e.projection([Y1, Dn], 1))])
    f1 = q_cod.factor(e.compose(q_cod.proj, collapse_big))
    q = res.arrow
    witness = HomotopyWitness(P, 0, 2, Q1, Q1, HQ, e.identity(Q1), f1, [(q, q)])
    factors = set(e.image_cells(f1)) <= set(e.image_cells(q))
    return PowerContraction(witness, q, factors)


def _orbit_reps(proj: SimplicialMap) -> dict:
    reps = {}
    for k, level in enumerate(proj.images):
        for i, (_, d, j) in enumerate(level):
            reps.setdefault((d, j), i)
    return reps


# ---------------------------------------------------------------------------
# symmetricity checks
# ---------------------------------------------------------------------------
def check_symmetroidal_instance(y: EquivariantArrow, family: Sequence, n, acyclic: bool = False, upto: int | None = None) -> Verdict:
    n = MultiIndex(n)
    e = y.engine
    for f in family:
        if not e.is_mono(f):
            raise StructuralError("family members must be monomorphisms")
    res = coinv_pp(y, family, n)
    mono = mono_verdict("symmetroidal-mono", res.arrow)
    parts = {"mono": mono.to_json()}
    passed = mono.passed
    flags = []
    if acyclic:
        horns = [is_horn_inclusion(f) for f in family]
        if any(h is None for h in horns):
            raise StructuralError("the acyclic variant needs horn inclusions")
        pc = build_power_contraction(y, horns, n)
        hv = verify_homotopy(pc.witness)
        top = upto if upto is not None else res.arrow.cod.dim
        hi = is_homology_iso(res.arrow, top)
        parts["homotopy"] = hv.to_json()
        parts["collapse_factors_through_arrow"] = pc.collapse_factors
        parts["homology_iso"] = hi.to_json()
        passed = passed and hv.passed and pc.collapse_factors and hi.passed
        flags.append("homology-surrogate")
    return Verdict("symmetroidal", passed, flags, parts)


def check_symmetric_flat_instance(y: EquivariantArrow, family: Sequence, n, upto: int = 3) -> Verdict:
    pre = is_homology_iso(y.arrow, upto)
    if not pre.passed:
        raise StructuralError("the underlying arrow of y must be a homology isomorphism")
    res = coinv_pp(y, family, n)
    v = is_homology_iso(res.arrow, upto)
    return Verdict("symmetric-flat", v.passed, ["homology-surrogate"], {**v.witnesses, "dom_homology": _homology_padded(res.arrow.dom, upto), "cod_homology": _homology_padded(res.arrow.cod, upto)})


def random_homology_iso(rng: random.Random, max_dim: int = 2):
    """A random map of simplicial sets that is a homology isomorphism."""
    choice = rng.randrange(4)
    if choice == 0:
        m = rng.randint(1, max_dim)
        return cell_inclusion("horn", m, rng.randint(0, m))
    if choice == 1:
        m = rng.randint(0, max_dim)
        return vertex_map(simplex(0), 0, simplex(m))  # collapse Δ^m -> Δ^0
    if choice == 2:
        m = rng.randint(1, max_dim)
        return vertex_map(simplex(m), rng.randint(0, m))  # vertex inclusion
    X = rng.choice([simplex(0), circle(), two_horn_parameter()])
    return SSET.identity(X)


def check_symmetric_h_instance(Yact: GroupAction, family: Sequence, n, seed: int = 0, samples: int = 10, upto: int = 3) -> Verdict:
    """Sampled check: pushouts of homology isomorphisms along
    Y ⊗_Σ s^{⊞n} stay homology isomorphisms."""
    n = MultiIndex(n)
    res = tensor_coinv(Yact, family, n)
    t = res.arrow
    e = t.engine
    rng = random.Random(seed)
    failures = []
    tried = 0
    for _ in range(samples):
        w = random_homology_iso(rng)
        # attach along t: choose a map dom(t) -> dom(w) by collapsing to a vertex of dom(w)
        if w.dom.count(0) == 0:
            continue
        v = rng.randrange(w.dom.count(0))
        a = vertex_map(w.dom, v, t.dom)
        po = e.pushout(a, t)  # pushout of w.dom <- t.dom -> t.cod
        po_w = e.pushout(e.compose(w, a), t)
        comp = po.factor({"x": e.compose(po_w.legs["x"], w), "y": po_w.legs["y"]})
        tried += 1
        hv = is_homology_iso(comp, upto)
        if not hv.passed:
            failures.append({"sample": tried, "cone": hv.witnesses})
    mono = mono_verdict("mono", t)
    passed = not failures and mono.passed
    wit = {"samples": tried, "seed": seed, "mono": mono.passed}
    if failures:
        wit["failures"] = failures
    if not mono.passed:
        wit["mono_witness"] = mono.witnesses
    return Verdict("symmetric-h", passed, ["sampled-surrogate", "homology-surrogate"], wit)


def check_projective_cofibration(f: SimplicialMap, n: int) -> Verdict:
    """Does Σn act freely on the cells of cod(f^{⊞n}) outside the image?"""
    if not SSET.is_mono(f):
        raise StructuralError("check_projective_cofibration needs a monomorphism")
    res = pp_multi([f], (n,))
    inside = SSET.image_cells(res.arrow)
    action = res.action.cod_action
    G = action.group
    fixed = []
    for g, cell in fixed_cells(action):
        if cell not in inside:
            fixed.append({"group_element": list(G.elements[g]), "cell": list(cell), "vertices": _cell_vertices(res.cod, cell)})
    if fixed:
        return Verdict("projective-cofibration", False, [], {"fixed": fixed[0], "fixed_count": len(fixed)})
    return Verdict("projective-cofibration", True, [], {"complement_cells": sum(1 for c in SSET.cells(res.cod) if c not in inside)})


def _cell_vertices(X: SSet, cell) -> list:
    return list(X.vertices_of(nondeg(*cell)))


def check_symmetrizable(f, n: int) -> Verdict:
    """(f^{⊞n})_{Σn} is mono."""
    res = pp_multi([f], (n,))
    q = arrow_coinvariants(res.action)
    return mono_verdict("symmetrizable-cofibration", q.arrow)


def bsigma_homology(n: int, N: int, upto: int) -> list[str]:
    if n < 1:
        raise StructuralError("n must be positive")
    if upto > N - 1:
        raise StructuralError(f"degree {upto} is not determined by the {N}-skeleton; need upto <= {N - 1}")
    act = esigma_skeleton(n, N)
    B = coinvariants(act).obj
    return _homology_padded(B, upto)


def esigma_homology(n: int, N: int, upto: int) -> list[str]:
    if upto > N - 1:
        raise StructuralError(f"need upto <= {N - 1}")
    return _homology_padded(esigma_skeleton(n, N).obj, upto)


# ---------------------------------------------------------------------------
# strict vs homotopy pushout
# ---------------------------------------------------------------------------
def double_mapping_cylinder(f: SimplicialMap, g: SimplicialMap) -> SSet:
    """X ∪_{A×0} A×Δ¹ ∪_{A×1} Y for f: A -> X and g: A -> Y."""
    e = SSET
    A = f.dom
    I = simplex(1)
    i0 = e.pairing([e.identity(A), vertex_map(I, 0, A)])
    i1 = e.pairing([e.identity(A), vertex_map(I, 1, A)])
    first = e.pushout(i0, f)  # keys 'x': A×Δ¹, 'y': X
    second = e.pushout(e.compose(first.legs["x"], i1), g)
    return second.obj


def strict_vs_homotopy_pushout(f: SimplicialMap, g: SimplicialMap, upto: int = 2) -> Verdict:
    if f.dom != g.dom:
        raise StructuralError("f and g must share a domain")
    strict = SSET.pushout(f, g).obj
    cyl = double_mapping_cylinder(f, g)
    hs = _homology_padded(strict, upto)
    hh = _homology_padded(cyl, upto)
    return Verdict("strict-vs-homotopy-pushout", hs == hh, ["homology-surrogate"], {"strict": hs, "homotopy": hh})


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------
def interval_complex() -> ChainComplexFP:
    """Z --id--> Z in degrees 1 and 0."""
    return ChainComplexFP({0: FPAbelianGroup(1), 1: FPAbelianGroup(1)}, {1: np.array([[1]], dtype=object)})


def chain_counterexample_report() -> CheckReport:
    A = interval_complex()
    sq = CHAIN.tensor([A, A])
    act = sign_action_power(A, 2)
    swap = act.maps[1]
    Q = CHAIN.coinvariants(act).obj
    hq = complex_homology(Q)
    hsq = complex_homology(sq)
    groups = {k: str(Q.group(k)) for k in range(0, 3)}
    homology = {k: str(hq.get(k, FPAbelianGroup(0))) for k in range(0, 3)}
    sq_homology = {k: str(hsq.get(k, FPAbelianGroup(0))) for k in range(0, 3)}
    d2 = sq.d(2).tolist()
    d1 = sq.d(1).tolist()
    verdicts = [
        Verdict("tensor-square-differentials", d2 == [[1], [-1]] and d1 == [[1, 1]], [], {"d2": d2, "d1": d1}),
        Verdict(
            "swap-representations",
            swap.mat(2).tolist() == [[-1]] and swap.mat(1).tolist() == [[0, 1], [1, 0]] and swap.mat(0).tolist() == [[1]],
            [],
            {k: swap.mat(k).tolist() for k in range(3)},
        ),
        Verdict("coinvariant-groups", groups == {0: "Z", 1: "Z", 2: "Z/2"}, [], {"groups": groups}),
        Verdict("coinvariant-homology", homology == {0: "0", 1: "0", 2: "Z/2"}, [], {"homology": homology}),
        Verdict("coinvariants-not-exact", any(v != "0" for v in homology.values()), [], {"nonzero_degree": min((k for k, v in homology.items() if v != "0"), default=None)}),
        Verdict("tensor-square-acyclic", all(v == "0" for v in sq_homology.values()), [], {"homology": sq_homology}),
    ]
    rep = CheckReport("chain-counterexample", None)
    rep.add({"A": "Z -id-> Z in degrees 1, 0", "n": 2}, verdicts)
    return rep


# ---------------------------------------------------------------------------
# pushout-product preserves pushouts
# ---------------------------------------------------------------------------
def check_pp_preserves_pushout(square: ArrowSquare, g, rng: random.Random | None = None, cocones: int = 2) -> Verdict:
    if not is_cocartesian(square):
        raise StructuralError("input square is not cocartesian")
    sq = pp_map([square, identity_square(g)])
    ok = is_cocartesian(sq)
    wit = {"cocartesian": ok}
    if ok and rng is not None:
        po, _ = square_pushout(sq)
        spot = spot_check_universal(po, rng, cocones)
        wit["cocones_checked"] = spot
    return Verdict("pp-preserves-pushout", ok, [], wit)


def spot_check_universal(colim, rng: random.Random, trials: int) -> int:
    """Factor random commuting cocones through a computed colimit and check
    the induced map restricts correctly along every leg and is unique (the
    legs are jointly surjective on cells).  Returns the number of cocones."""
    e = colim.engine
    covered = set()
    for leg in colim.legs.values():
        covered |= set(e.image_cells(leg))
    if covered != set(e.cells(colim.obj)):
        raise StructuralError("colimit legs are not jointly surjective")
    done = 0
    for _ in range(trials):
        h = _random_map_out(e, colim.obj, rng)
        cocone = {key: e.compose(h, leg) for key, leg in colim.legs.items()}
        got = colim.factor(cocone)
        if not e.equal(got, h):
            raise StructuralError("induced map differs from the cocone's source map")
        done += 1
    return done


def _random_map_out(e, X, rng):
    if e.name == "finset":
        t = rng.randint(1, 3)
        return FinSetMap(X, FinSet(t), tuple(rng.randrange(t) for _ in range(X.size)))
    choice = rng.randrange(3)
    if choice == 0 or X.count(0) == 0:
        return e.identity(X)
    if choice == 1:
        return vertex_map(simplex(0), 0, X)
    # identify two random vertices
    pt = simplex(0)
    a, b = rng.randrange(X.count(0)), rng.randrange(X.count(0))
    coeq = e.coequalizer(vertex_map(X, a, pt), vertex_map(X, b, pt))
    return coeq.proj


# ---------------------------------------------------------------------------
# standard instances
# ---------------------------------------------------------------------------
def swap_points_arrow() -> EquivariantArrow:
    """Δ⁰ ⊔ Δ⁰ -> Δ⁰ with Σ2 exchanging the two points."""
    G = multi_symmetric_group((2,))
    pt = simplex(0)
    two = SSET.coproduct([pt, pt])
    swap = two.factor({0: two.legs[1], 1: two.legs[0]}, target=two.obj)
    fold = two.factor({0: SSET.identity(pt), 1: SSET.identity(pt)}, target=pt)
    return EquivariantArrow(fold, GroupAction(G, two.obj, [SSET.identity(two.obj), swap]), GroupAction(G, pt, [SSET.identity(pt)] * 2))


def standard_y_arrows() -> dict:
    """The equivariant arrows y used by the symmetroidality suite, for n = (2)."""
    G = multi_symmetric_group((2,))
    pt = simplex(0)
    return {
        "empty-to-point": trivially_acted(SSET.initial_map(pt), G),
        "boundary-1-trivial": trivially_acted(cell_inclusion("boundary", 1), G),
        "swap-points": swap_points_arrow(),
    }


def esigma_to_point(n: int, N: int) -> EquivariantArrow:
    act = esigma_skeleton(n, N)
    pt = simplex(0)
    return EquivariantArrow(vertex_map(pt, 0, act.obj), act, GroupAction(act.group, pt, [SSET.identity(pt)] * act.group.order))
