import random

import pytest

from pplab.core import FINSET, FinSet, FinSetMap, all_subgroups, symmetric_group
from pplab.laws import (
    _comparison_verdict,
    _random_h_set,
    associativity_verdict,
    composition_verdict,
    discrete_embedding_verdict,
    engine_invariant_instances,
    euler_characteristic,
    homology_euler,
    induction_verdict,
    pp_law_instance,
    small_groups,
    symmetry_comparison,
    symmetry_verdict,
)
from pplab.pushout import pp
from pplab.sset import SSET, cell_inclusion, circle, horn, simplex

from oracles import permutation_subgroups


def fmap(a, b, t):
    return FinSetMap(FinSet(a), FinSet(b), tuple(t))


@pytest.mark.parametrize("engine,count", [("finset", 40), ("sset", 8)])
def test_random_law_instances_hold(engine, count):
    rng = random.Random(17)
    for _ in range(count):
        inputs, verdicts = pp_law_instance(engine, rng)
        bad = [v.to_json() for v in verdicts if not v.passed]
        assert not bad, (inputs, bad)


def test_law_instance_shapes():
    rng = random.Random(0)
    _, fv = pp_law_instance("finset", rng)
    _, sv = pp_law_instance("sset", rng)
    assert len(fv) == 7 and "discrete-embedding" in {v.claim for v in fv}
    assert len(sv) == 6


def test_symmetry_on_named_cells():
    v = symmetry_verdict(cell_inclusion("horn", 2, 0), cell_inclusion("boundary", 1))
    assert v.passed and v.witnesses == {"dom_iso": True, "cod_iso": True, "commutes": True}


def test_associativity_on_named_cells():
    b = cell_inclusion("boundary", 1)
    for v in associativity_verdict(b, cell_inclusion("horn", 2, 1), b):
        assert v.passed, v.witnesses


def test_composition_law_on_named_cells():
    b = cell_inclusion("boundary", 1)
    v0 = SSET.initial_map(b.dom)
    assert composition_verdict(b, b, v0).passed


def test_discrete_embedding():
    assert discrete_embedding_verdict(fmap(1, 2, (1,)), fmap(2, 1, (0, 0))).passed


def test_comparison_verdict_negative_control():
    b = cell_inclusion("boundary", 1)
    a, c, dom, cod = symmetry_comparison(b, b)
    assert _comparison_verdict("swap", a, c, dom, cod).passed
    # identities in place of the swap are isomorphisms but do not commute
    bogus = _comparison_verdict("swap", a, c, SSET.identity(a.dom), cod)
    assert not bogus.passed
    assert bogus.witnesses == {"dom_iso": True, "cod_iso": True, "commutes": False}


def test_euler_helpers_agree():
    for X in [simplex(3), horn(3, 2), circle(), SSET.tensor([circle(), simplex(1)])]:
        assert euler_characteristic(X) == homology_euler(X)


def test_small_groups_orders_and_subgroups():
    orders = sorted(G.order for G in small_groups())
    assert orders == [1, 2, 3, 4, 4, 5, 6, 6]
    for G in small_groups():
        assert len(all_subgroups(G)) == len(permutation_subgroups(G.elements))


def test_induction_on_all_subgroups_of_s3():
    rng = random.Random(2)
    for sub in all_subgroups(symmetric_group(3)):
        assert induction_verdict(sub, _random_h_set(sub.sub, rng)).passed


def test_engine_invariants_stream():
    rows = list(engine_invariant_instances(random.Random(4), 30))
    assert rows
    for inputs, verdicts in rows:
        assert all(v.passed for v in verdicts), inputs


def test_finset_identity_pp_with_empty():
    e = fmap(0, 2, ())
    res = pp(e, FINSET.identity(FinSet(3)))
    assert res.dom.size == 6 and FINSET.is_iso(res.arrow)
