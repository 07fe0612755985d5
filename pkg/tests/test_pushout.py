import random

import pytest

from pplab.chain import CHAIN, ChainComplexFP, FPAbelianGroup
from pplab.core import FINSET, FinSet, FinSetMap, StructuralError, symmetric_group
from pplab.generators import random_finset_map, random_sset_mono
from pplab.laws import random_pushout_square
from pplab.pushout import (
    ArrowSquare,
    arrows_isomorphic,
    identity_square,
    is_cocartesian,
    is_cocartesian_generic,
    place_permutation_action,
    pp,
    pp_family,
    pp_map,
    pp_multi,
    pp_power,
)
from pplab.sset import SSET, boundary, cell_inclusion, homology_strings, map_by_vertices, simplex

from oracles import (
    boundary_vertex_sets,
    finset_pushout_size,
    horn_vertex_sets,
    pp_of_subcomplexes_counts,
)


def counts(X):
    return list(X.counts)


# -- golden shapes -----------------------------------------------------------
def test_pp_of_two_interval_boundaries_is_square_boundary():
    b = cell_inclusion("boundary", 1)
    res = pp(b, b)
    assert counts(res.dom) == [4, 4]
    assert counts(res.cod) == [4, 5, 2]
    assert homology_strings(res.dom, 1) == ["Z", "Z"]
    assert SSET.is_mono(res.arrow)


def test_cube_boundary():
    res = pp_power(cell_inclusion("boundary", 1), 3)
    assert counts(res.dom) == [8, 18, 12]
    assert homology_strings(res.dom, 2) == ["Z", "0", "Z"]


@pytest.mark.parametrize(
    "spec",
    [
        (("boundary", 1), ("boundary", 2)),
        (("horn", 2, 0), ("boundary", 1)),
        (("horn", 2, 1), ("horn", 2, 2)),
        (("boundary", 2), ("boundary", 2)),
        (("horn", 3, 1), ("boundary", 1)),
    ],
    ids=["bd1-bd2", "horn20-bd1", "horn21-horn22", "bd2-bd2", "horn31-bd1"],
)
def test_pp_counts_match_chain_oracle(spec):
    arrows, dims, subs = [], [], []
    for kind, m, *k in spec:
        arrows.append(cell_inclusion(kind, m, *k))
        dims.append(m)
        subs.append(boundary_vertex_sets(m) if kind == "boundary" else horn_vertex_sets(m, k[0]))
    res = pp_family(arrows)
    src, tgt = pp_of_subcomplexes_counts(dims, subs)
    assert counts(res.dom) == src
    assert counts(res.cod) == tgt


def test_pp_of_horn_and_boundary_is_acyclic_inclusion():
    res = pp(cell_inclusion("horn", 2, 1), cell_inclusion("boundary", 1))
    assert homology_strings(res.dom, 2) == homology_strings(res.cod, 2) == ["Z", "0", "0"]


def test_single_factor_is_the_arrow():
    f = cell_inclusion("horn", 2, 0)
    res = pp_family([f])
    assert SSET.equal(res.arrow, f)


def test_empty_family_rejected():
    with pytest.raises(StructuralError):
        pp_family([])


# -- finite sets -------------------------------------------------------------
def test_finset_pp_sizes_match_brute_force():
    rng = random.Random(4)
    for _ in range(60):
        f, g = random_finset_map(rng, 3), random_finset_map(rng, 3)
        res = pp(f, g)
        x0, x1, y0, y1 = f.dom.size, f.cod.size, g.dom.size, g.cod.size
        # X1·Y0 and X0·Y1 glued over X0·Y0
        left = [a * y0 + b for a in f.table for b in range(y0)]
        right = [a * y1 + b for a in range(x0) for b in g.table]
        assert res.dom.size == finset_pushout_size(x0 * y0, x1 * y0, x0 * y1, left, right)
        assert res.cod.size == x1 * y1


def test_finset_pp_of_injections_is_injective():
    f = FinSetMap(FinSet(1), FinSet(2), (1,))
    res = pp_power(f, 2)
    assert res.dom.size == 3 and res.cod.size == 4
    assert FINSET.is_mono(res.arrow)


# -- mono mode against the generic colimit ---------------------------------
def test_mono_and_abstract_modes_agree():
    rng = random.Random(8)
    for _ in range(25):
        f = random_sset_mono(rng, 6, 2)
        g = random_sset_mono(rng, 6, 2)
        a = pp(f, g, mode="mono")
        b = pp(f, g, mode="abstract")
        assert a.mode == "mono" and b.mode == "abstract"
        assert arrows_isomorphic(a.arrow, b.arrow)


def test_mono_mode_rejects_non_mono():
    collapse = SSET.coequalizer(*[SSET.coproduct([simplex(0), simplex(0)]).legs[i] for i in (0, 1)]).proj
    with pytest.raises(StructuralError):
        pp(collapse, cell_inclusion("boundary", 1), mode="mono")


# -- symmetric actions ------------------------------------------------------
@pytest.mark.parametrize("n", [2, 3])
def test_place_permutation_action_is_equivariant(n):
    res = pp_power(cell_inclusion("boundary", 1), n)
    res.action.verify()
    res.action.dom_action.check()
    assert res.action.group.order == [1, 1, 2, 6][n]


def test_blockwise_action_on_mixed_family():
    b1 = cell_inclusion("boundary", 1)
    h = cell_inclusion("horn", 2, 1)
    res = pp_multi([b1, h], (2, 1))
    res.action.verify()
    assert res.action.group.order == 2


def test_action_refuses_mixing_different_arrows():
    res = pp(cell_inclusion("boundary", 1), cell_inclusion("horn", 2, 0))
    with pytest.raises(StructuralError):
        place_permutation_action(res, symmetric_group(2))


def test_swap_fixes_only_the_diagonal():
    res = pp_power(cell_inclusion("boundary", 1), 2)
    sw = res.action.cod_action.maps[1]
    fixed = [(k, i) for (k, i) in SSET.cells(res.cod) if SSET.cell_image(sw, (k, i)) == (k, i)]
    # the two corner vertices (0,0), (1,1) and the diagonal edge
    assert sorted(k for k, _ in fixed) == [0, 0, 1]


# -- squares and cocartesianness ---------------------------------------------
@pytest.mark.parametrize("engine", ["finset", "sset"])
def test_fast_cocartesian_test_matches_generic(engine):
    rng = random.Random(21)
    for _ in range(40):
        sq = random_pushout_square(engine, rng)
        assert is_cocartesian(sq)
        assert is_cocartesian_generic(sq)


def test_non_cocartesian_square_is_detected():
    f = cell_inclusion("boundary", 1)
    # the square f -> id_{Δ1} is commutative but not a pushout
    sq = ArrowSquare(f, SSET.identity(simplex(1)), f, SSET.identity(simplex(1)))
    assert not is_cocartesian(sq)
    assert not is_cocartesian_generic(sq)


def test_pp_map_preserves_pushout_square():
    rng = random.Random(3)
    g = cell_inclusion("boundary", 1)
    for _ in range(10):
        sq = random_pushout_square("sset", rng)
        out = pp_map([sq, identity_square(g)])
        assert out.commutes()
        assert is_cocartesian(out)


def test_commutativity_is_checked():
    f = cell_inclusion("boundary", 1)
    collapse = map_by_vertices(simplex(1), simplex(1), lambda i: 0)
    with pytest.raises(StructuralError):
        ArrowSquare(f, f, SSET.identity(boundary(1)), collapse)


# -- chain complexes ---------------------------------------------------------
def test_chain_pp_of_initial_maps():
    A = ChainComplexFP({0: FPAbelianGroup(1)})
    i = CHAIN.initial_map(A)
    res = pp(i, i)
    assert res.dom.gens(0) == 0 and res.cod.gens(0) == 1


def test_chain_square_arrows_isomorphic():
    A = ChainComplexFP({0: FPAbelianGroup(1), 1: FPAbelianGroup(1)}, {1: [[1]]})
    i = CHAIN.initial_map(A)
    res = pp_power(i, 2)
    assert arrows_isomorphic(res.arrow, CHAIN.initial_map(CHAIN.tensor([A, A])))


def test_horn_pp_family_dimension():
    res = pp(cell_inclusion("horn", 2, 1), cell_inclusion("horn", 2, 1))
    assert res.cod.dim == 4 and res.dom.dim == 3
    assert counts(res.cod) == counts(SSET.tensor([simplex(2), simplex(2)]))
