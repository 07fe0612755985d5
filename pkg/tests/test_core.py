import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pplab.core import (
    FINSET,
    DiagramOnPoset,
    EquivariantArrow,
    FinGroup,
    FinSet,
    FinSetMap,
    GroupAction,
    NotCoequalizing,
    StructuralError,
    all_subgroups,
    arrow_coinvariants,
    cocone_commutes,
    coinvariants,
    coset_comparison,
    cyclic_group,
    group_product,
    induce,
    induce_arrow,
    multi_symmetric_group,
    poset_colimit,
    subgroup_of,
    symmetric_group,
    young_subgroup,
)

from oracles import finset_pushout_size, permutation_subgroups


def fmap(a, b, table):
    return FinSetMap(FinSet(a), FinSet(b), tuple(table))


finset_maps = st.integers(0, 4).flatmap(
    lambda a: st.integers(1 if a else 0, 4).flatmap(
        lambda b: st.lists(st.integers(0, max(b - 1, 0)), min_size=a, max_size=a).map(lambda t: fmap(a, b, t))
    )
)


# -- finite sets -------------------------------------------------------------
def test_finset_map_rejects_out_of_range_values():
    with pytest.raises(StructuralError):
        fmap(2, 2, (0, 2))


def test_compose_and_identity():
    f = fmap(2, 3, (0, 2))
    g = fmap(3, 2, (1, 1, 0))
    assert FINSET.compose(g, f).table == (1, 0)
    assert FINSET.equal(FINSET.compose(f, FINSET.identity(f.dom)), f)


@given(finset_maps, st.data())
@settings(max_examples=60, deadline=None)
def test_pushout_size_matches_union_find(f, data):
    g_cod = data.draw(st.integers(1 if f.dom.size else 0, 4))
    g = fmap(f.dom.size, g_cod, data.draw(st.lists(st.integers(0, max(g_cod - 1, 0)), min_size=f.dom.size, max_size=f.dom.size)))
    po = FINSET.pushout(f, g)
    assert po.obj.size == finset_pushout_size(f.dom.size, f.cod.size, g.cod.size, f.table, g.table)
    assert FINSET.equal(FINSET.compose(po.legs["x"], f), FINSET.compose(po.legs["y"], g))


@given(finset_maps)
@settings(max_examples=40, deadline=None)
def test_pushout_factor_is_unique_on_cocones(f):
    g = FINSET.identity(f.dom)
    po = FINSET.pushout(f, g)
    T = FinSet(3)
    rng = random.Random(f.cod.size)
    hx = fmap(f.cod.size, 3, [rng.randrange(3) for _ in range(f.cod.size)])
    hy = FINSET.compose(hx, f)
    u = po.factor({"x": hx, "y": hy})
    assert u.cod == T
    assert FINSET.equal(FINSET.compose(u, po.legs["x"]), hx)
    assert FINSET.equal(FINSET.compose(u, po.legs["y"]), hy)


def test_factor_rejects_non_cocone():
    f = fmap(1, 2, (0,))
    g = fmap(1, 2, (1,))
    co = FINSET.coequalizer(f, g)
    with pytest.raises(NotCoequalizing):
        co.factor(FINSET.identity(FinSet(2)))


def test_tensor_permute_flatten():
    X, Y, Z = FinSet(2), FinSet(3), FinSet(2)
    swap = FINSET.permute([X, Y], (1, 0))
    assert swap.dom.size == swap.cod.size == 6
    assert FINSET.is_iso(swap)
    back = FINSET.permute([Y, X], (1, 0))
    assert FINSET.equal(FINSET.compose(back, swap), FINSET.identity(FinSet(6)))
    flat = FINSET.flatten([[X, Y], [Z]])
    assert FINSET.is_iso(flat) and flat.cod.size == 12


def test_inverse_of_iso():
    f = fmap(3, 3, (2, 0, 1))
    assert FINSET.equal(FINSET.compose(FINSET.inverse(f), f), FINSET.identity(FinSet(3)))
    with pytest.raises(StructuralError):
        FINSET.inverse(fmap(2, 3, (0, 1)))


def test_poset_colimit_checks_functoriality():
    X = FinSet(1)
    Y = FinSet(2)
    d = DiagramOnPoset(
        {"a": X, "b": Y, "c": Y, "t": Y},
        {("a", "b"): fmap(1, 2, (0,)), ("a", "c"): fmap(1, 2, (0,)), ("b", "t"): FINSET.identity(Y), ("c", "t"): fmap(2, 2, (1, 0))},
    )
    with pytest.raises(StructuralError):
        poset_colimit(d, FINSET)


def test_poset_colimit_of_span_is_pushout():
    f, g = fmap(2, 3, (0, 1)), fmap(2, 2, (0, 0))
    col = poset_colimit(DiagramOnPoset({"a": f.dom, "x": f.cod, "y": g.cod}, {("a", "x"): f, ("a", "y"): g}), FINSET)
    assert col.obj.size == finset_pushout_size(2, 3, 2, f.table, g.table) == 3
    assert cocone_commutes(col)


# -- groups ------------------------------------------------------------------
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symmetric_group_axioms(n):
    G = symmetric_group(n)
    G.check_axioms()
    assert G.order == [1, 1, 2, 6, 24][n]
    assert G.elements[0] == tuple(range(n))


def test_group_rejects_non_closed_set():
    with pytest.raises(StructuralError):
        FinGroup([(0, 1, 2), (1, 2, 0)])


@pytest.mark.parametrize(
    "G",
    [cyclic_group(4), group_product([cyclic_group(2), cyclic_group(2)]), symmetric_group(3), cyclic_group(6)],
    ids=["C4", "V4", "S3", "C6"],
)
def test_all_subgroups_matches_brute_force(G):
    found = {frozenset(G.elements[i] for i in s.embedding) for s in all_subgroups(G)}
    assert found == permutation_subgroups(G.elements)


def test_multi_symmetric_group_is_blockwise():
    G = multi_symmetric_group((2, 1))
    assert G.order == 2
    assert all(p[2] == 2 for p in G.elements)


def test_young_subgroup_index():
    sub = young_subgroup((3,), (1,))
    assert sub.index == 3
    assert sub.sub.order == 2
    sub2 = young_subgroup((2, 2), (1, 1))
    assert sub2.index == 4


def test_cosets_partition_group():
    G = symmetric_group(3)
    sub = subgroup_of(G, [(1, 0, 2)])
    cosets = sub.left_cosets
    assert sorted(x for c in cosets for x in c) == list(range(6))
    for g in G:
        c, h = sub.decompose(g)
        r = cosets[c][0]
        assert G.mult[r][sub.embedding[h]] == g


# -- actions, coinvariants, induction ----------------------------------------
def test_action_checks_homomorphism():
    G = cyclic_group(2)
    X = FinSet(2)
    with pytest.raises(StructuralError):
        GroupAction(G, X, [fmap(2, 2, (1, 0)), fmap(2, 2, (1, 0))])


def test_coinvariants_of_swap():
    G = symmetric_group(2)
    X = FinSet(4)
    act = GroupAction(G, X, [FINSET.identity(X), fmap(4, 4, (1, 0, 2, 3))])
    assert coinvariants(act).obj.size == 3
    assert not act.is_free()


def test_quotient_arrow_of_equivariant_map():
    G = symmetric_group(2)
    X, Y = FinSet(2), FinSet(1)
    sw = fmap(2, 2, (1, 0))
    eq = EquivariantArrow(fmap(2, 1, (0, 0)), GroupAction(G, X, [FINSET.identity(X), sw]), GroupAction(G, Y, [FINSET.identity(Y)] * 2))
    q = arrow_coinvariants(eq)
    assert q.arrow.dom.size == 1 and FINSET.is_iso(q.arrow)


def test_equivariance_is_enforced():
    G = symmetric_group(2)
    X = FinSet(2)
    sw = fmap(2, 2, (1, 0))
    with pytest.raises(StructuralError):
        EquivariantArrow(fmap(2, 2, (0, 0)), GroupAction(G, X, [FINSET.identity(X), sw]), GroupAction(G, X, [FINSET.identity(X), sw]))


@pytest.mark.parametrize("G", [symmetric_group(3), cyclic_group(4), group_product([cyclic_group(2), cyclic_group(2)])], ids=["S3", "C4", "V4"])
def test_induction_is_coset_copies(G):
    for sub in all_subgroups(G):
        H = sub.sub
        X = FinSet(H.order)
        act = GroupAction(H, X, [fmap(H.order, H.order, H.mult[h]) for h in H])
        ind = induce(sub, act)
        ind.action.check()
        assert ind.action.obj.size == sub.index * H.order
        _, comp = coset_comparison(ind)
        assert FINSET.is_iso(comp)


def test_induced_arrow_is_equivariant():
    G = symmetric_group(3)
    sub = subgroup_of(G, [(1, 0, 2)])
    H = sub.sub
    X, Y = FinSet(2), FinSet(1)
    sw = fmap(2, 2, (1, 0))
    eq = EquivariantArrow(fmap(2, 1, (0, 0)), GroupAction(H, X, [FINSET.identity(X), sw]), GroupAction(H, Y, [FINSET.identity(Y)] * 2))
    arrow, d, c = induce_arrow(sub, eq)
    arrow.verify()
    assert arrow.arrow.dom.size == 6 and arrow.arrow.cod.size == 3


def test_place_permutations_of_product_sets():
    # Σ3 acting on 2^3 by permuting coordinates has 4 orbits (by Hamming weight)
    G = symmetric_group(3)
    X = FinSet(2)
    objs = [X, X, X]
    act = GroupAction(G, FinSet(8), [FINSET.permute(objs, p) for p in G.elements])
    assert coinvariants(act).obj.size == 4
    weights = {sum(t) for t in itertools.product((0, 1), repeat=3)}
    assert len(weights) == 4
