import itertools
import math
import random

import pytest

from pplab.core import FINSET, FinSet, FinSetMap, StructuralError
from pplab.filtration import (
    DCPoset,
    _decompose,
    Families,
    OrbitCell,
    decompose_composite_power,
    decompose_kappa,
    delete_step,
    kappa_map,
    mk_coset_check,
    mk_map,
    q_colimit,
    step_order,
    strict_closure_of,
    verify_certificate,
)
from pplab.generators import random_injective_chain, random_sset_chain
from pplab.pushout import MultiIndex, pp_family
from pplab.sset import SSET, cell_inclusion, labelled_inclusion, simplex, boundary


def fmap(a, b, t):
    return FinSetMap(FinSet(a), FinSet(b), tuple(t))


# -- the poset side ---------------------------------------------------------
def test_dcposet_requires_downward_closure():
    with pytest.raises(StructuralError):
        DCPoset((2,), ((1, 1),))
    assert len(DCPoset.closure((2,), [(1, 1)])) == 4


@pytest.mark.parametrize("n", [(1,), (2,), (3,), (1, 1), (2, 1)])
def test_start_posets_sizes(n):
    N = sum(n)
    assert len(DCPoset.composite_start(n)) == 3 ** N - 2 ** N
    # kappa start adds everything over {0,1}
    assert len(DCPoset.kappa_start(n)) == 3 ** N - 2 ** N + 1
    assert DCPoset.composite_start(n).is_invariant()


@pytest.mark.parametrize("n", [(2,), (3,), (2, 1), (1, 2)])
def test_orbits_partition_the_ones_and_twos(n):
    N = sum(n)
    seen = []
    for k in step_order(MultiIndex(n)):
        o = OrbitCell(n, k)
        assert o.size == len(o.elements) == math.prod(math.comb(a, b) for a, b in zip(n, k))
        seen.extend(o.elements)
    assert sorted(seen) == sorted(itertools.product((1, 2), repeat=N))


def test_step_order_is_a_valid_growth_order():
    n = MultiIndex((2, 1))
    cur = set(DCPoset.composite_start(n).elements)
    for k in step_order(n):
        for o in OrbitCell(n, k).elements:
            assert strict_closure_of(o) <= cur
        cur |= set(OrbitCell(n, k).elements)
    assert len(cur) == 27


def test_families_must_compose():
    with pytest.raises(StructuralError):
        Families([fmap(1, 2, (0,))], [fmap(3, 3, (0, 1, 2))], (2,))


def test_q_of_full_poset_is_top():
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 3, (0, 1))
    fam = Families([v0], [v1], (2,))
    col = q_colimit(DCPoset.full((2,)), fam)
    assert col.obj.size == 9


def test_q_of_start_is_pp_domain():
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 3, (0, 1))
    fam = Families([v0], [v1], (2,))
    col = q_colimit(DCPoset.composite_start((2,)), fam)
    comp = FINSET.compose(v1, v0)
    assert col.obj.size == pp_family([comp, comp]).dom.size == 5


# -- certificates -------------------------------------------------------------
@pytest.mark.parametrize("n", [(1,), (2,), (3,), (1, 1), (2, 1)])
def test_finset_certificates_verify(n):
    rng = random.Random(sum(n) * 7 + len(n))
    for _ in range(6):
        pairs = [random_injective_chain(rng, 3) for _ in n]
        v0 = [p[0] for p in pairs]
        v1 = [p[1] for p in pairs]
        for decompose in (decompose_composite_power, decompose_kappa):
            cert = decompose(v0, v1, n)
            v = verify_certificate(cert)
            assert v.passed, v.witnesses
            assert v.witnesses["steps"] == v.witnesses["expected_steps"]


def test_sset_certificate_on_boundary_chain():
    # ∅ ⊂ ∂Δ1 ⊂ Δ1
    v1 = cell_inclusion("boundary", 1)
    v0 = SSET.initial_map(boundary(1))
    for n in [(2,), (3,)]:
        cert = decompose_composite_power([v0], [v1], n)
        v = verify_certificate(cert)
        assert v.passed, v.witnesses
        assert v.witnesses["final_cod_cells"] == SSET.tensor([simplex(1)] * sum(n)).n_cells()


def test_sset_random_chain_certificates():
    rng = random.Random(12)
    for _ in range(3):
        v0, v1 = random_sset_chain(rng, 8, 2)
        for decompose in (decompose_composite_power, decompose_kappa):
            v = verify_certificate(decompose([v0], [v1], (2,)))
            assert v.passed, v.witnesses


def test_abstract_realization_also_verifies():
    v0, v1 = fmap(1, 2, (1,)), fmap(2, 3, (0, 2))
    cert = decompose_composite_power([v0], [v1], (2,), realization="abstract")
    assert cert.realization == "abstract"
    assert verify_certificate(cert).passed


def test_deleting_a_step_is_caught():
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 3, (0, 1))
    cert = decompose_composite_power([v0], [v1], (2,))
    bad = delete_step(cert, 1)
    v = verify_certificate(bad)
    assert not v.passed
    assert v.witnesses["reason"].startswith("stage mismatch")


def test_out_of_order_steps_are_rejected():
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 3, (0, 1))
    backwards = list(reversed(step_order(MultiIndex((2,)))))
    with pytest.raises(StructuralError):
        _decompose([v0], [v1], (2,), "composite", order=backwards)


def test_kappa_certificate_skips_k_zero():
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 2, (0, 1))
    cert = decompose_kappa([v0], [v1], (2,))
    assert (0,) not in cert.order and len(cert.steps) == 2


def test_kappa_map_is_iso_when_v1_is_identity():
    v0 = fmap(1, 2, (0,))
    fam = Families([v0], [FINSET.identity(FinSet(2))], (2,))
    k, _ = kappa_map(fam)
    assert FINSET.is_iso(k)


# -- the cells m_k --------------------------------------------------------------
@pytest.mark.parametrize("k", [(0,), (1,), (2,), (3,)])
def test_mk_is_coset_copies_of_base(k):
    v0, v1 = fmap(1, 2, (0,)), fmap(2, 3, (0, 2))
    fam = Families([v0], [v1], (3,))
    m = mk_map(fam, k)
    assert m.cosets == math.comb(3, k[0])
    assert mk_coset_check(m)


def test_mk_on_simplicial_sets():
    v0 = SSET.initial_map(boundary(1))
    v1 = labelled_inclusion(boundary(1), simplex(1))
    fam = Families([v0], [v1], (2,))
    m = mk_map(fam, (1,))
    assert m.cosets == 2 and mk_coset_check(m)
