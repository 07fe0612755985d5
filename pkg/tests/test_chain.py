import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pplab.chain import (
    CHAIN,
    ChainComplexFP,
    ChainMap,
    FPAbelianGroup,
    chain_coinvariants,
    complex_homology,
    format_group,
    koszul_sign,
    sign_action_power,
    smith_normal_form,
    tensor_complex,
    verify_snf,
)
from pplab.core import StructuralError

from oracles import smith_diagonal_oracle

matrices = st.integers(0, 4).flatmap(
    lambda m: st.integers(0, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m).map(
            lambda rows: (rows, m, n)
        )
    )
)


def arr(rows, m=None, n=None):
    if not rows:
        return np.zeros((m or 0, n or 0), dtype=object)
    return np.array(rows, dtype=object)


def two_term(lo_gens, hi_gens, d):
    """Free complex in degrees 1 and 0 with d_1 = d."""
    return ChainComplexFP({0: FPAbelianGroup(lo_gens), 1: FPAbelianGroup(hi_gens)}, {1: arr(d, lo_gens, hi_gens)})


# -- Smith normal form ------------------------------------------------------
@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_matches_sympy(data):
    rows, m, n = data
    A = arr(rows, m, n)
    res = smith_normal_form(A)
    verify_snf(A, res)
    assert [d for d in res.diagonal if d] == smith_diagonal_oracle(rows if m and n else [])


def test_snf_known_diagonal():
    res = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert res.diagonal == [2, 6, 12]
    assert res.torsion == [2, 6, 12]
    assert res.rank == 3


def test_verify_snf_rejects_tampered_result():
    A = arr([[2, 0], [0, 3]])
    res = smith_normal_form(A)
    res.D[0, 0] = 6
    with pytest.raises(AssertionError):
        verify_snf(A, res)


# -- groups and complexes ----------------------------------------------------
def test_presented_group_invariants():
    G = FPAbelianGroup(2, arr([[2], [2]]))
    assert G.invariants == (1, (2,))
    assert str(G) == "Z + Z/2"
    assert G.isomorphic(FPAbelianGroup.from_invariants(1, (2,)))
    assert format_group(0, ()) == "0"


def test_complex_rejects_nonzero_square():
    with pytest.raises(StructuralError):
        ChainComplexFP(
            {0: FPAbelianGroup(1), 1: FPAbelianGroup(1), 2: FPAbelianGroup(1)},
            {1: arr([[1]]), 2: arr([[1]])},
        )


def test_homology_of_multiplication_by_two():
    C = two_term(1, 1, [[2]])
    h = complex_homology(C)
    assert str(h[0]) == "Z/2" and str(h[1]) == "0"
    assert C.euler_characteristic() == 0


def test_kunneth_tor_term():
    # (Z --2--> Z) ⊗ itself: H_0 = Z/2 and H_1 = Tor(Z/2, Z/2) = Z/2
    C = two_term(1, 1, [[2]])
    h = complex_homology(tensor_complex(C, C))
    assert {k: str(v) for k, v in h.items()} == {0: "Z/2", 1: "Z/2", 2: "0"}


def test_homology_with_relations():
    # Z/4 --2--> Z/4 in degrees 1 -> 0
    C = ChainComplexFP({0: FPAbelianGroup(1, arr([[4]])), 1: FPAbelianGroup(1, arr([[4]]))}, {1: arr([[2]])})
    h = complex_homology(C)
    assert str(h[0]) == "Z/2" and str(h[1]) == "Z/2"


def test_chain_map_must_commute():
    C = two_term(1, 1, [[1]])
    with pytest.raises(StructuralError):
        ChainMap(C, C, {0: arr([[1]]), 1: arr([[0]])})


# -- signs, tensor, place permutations ----------------------------------------
def brute_koszul(degrees, perm):
    odd = [i for i, d in enumerate(degrees) if d % 2]
    inversions = sum(1 for a, b in itertools.combinations(odd, 2) if perm[a] > perm[b])
    return -1 if inversions % 2 else 1


@pytest.mark.parametrize("degrees", list(itertools.product(range(3), repeat=3)))
def test_koszul_sign_against_inversion_count(degrees):
    for perm in itertools.permutations(range(3)):
        assert koszul_sign(degrees, perm) == brute_koszul(degrees, perm)


def test_tensor_square_of_interval():
    A = two_term(1, 1, [[1]])
    sq = CHAIN.tensor([A, A])
    assert sq.d(2).tolist() == [[1], [-1]]
    assert sq.d(1).tolist() == [[1, 1]]
    act = sign_action_power(A, 2)
    swap = act.maps[1]
    assert swap.mat(2).tolist() == [[-1]]
    assert swap.mat(1).tolist() == [[0, 1], [1, 0]]
    assert swap.mat(0).tolist() == [[1]]


def test_coinvariants_of_interval_square():
    A = two_term(1, 1, [[1]])
    Q = chain_coinvariants(sign_action_power(A, 2))
    assert {k: str(Q.group(k)) for k in range(3)} == {0: "Z", 1: "Z", 2: "Z/2"}
    h = complex_homology(Q)
    assert {k: str(h[k]) for k in range(3)} == {0: "0", 1: "0", 2: "Z/2"}


def test_permute_squares_to_identity():
    A = two_term(1, 2, [[1, 1]])
    B = two_term(2, 1, [[1], [0]])
    sw = CHAIN.permute([A, B], (1, 0))
    back = CHAIN.permute([B, A], (1, 0))
    assert CHAIN.equal(CHAIN.compose(back, sw), CHAIN.identity(CHAIN.tensor([A, B])))
    assert CHAIN.is_iso(sw)


def test_coproduct_and_coequalizer():
    A = two_term(1, 1, [[1]])
    co = CHAIN.coproduct([A, A])
    assert co.obj.gens(0) == 2 and co.obj.gens(1) == 2
    assert CHAIN.is_mono(co.legs[0])
    # identifying the two summands gives back A
    q = CHAIN.coequalizer(co.legs[0], co.legs[1])
    h = complex_homology(q.obj)
    assert all(str(v) == "0" for v in h.values())
    assert str(q.obj.group(0)) == "Z"
