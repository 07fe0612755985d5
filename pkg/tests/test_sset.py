import random

import pytest

from pplab.core import FinSet, FinSetMap, ParseError, StructuralError
from pplab.generators import random_complex, random_sset_arrow, random_sset_map
from pplab.io import parse_arrow, parse_sset, sset_map_to_text, sset_to_text
from pplab.sset import (
    SSET,
    SSet,
    boundary,
    cell_inclusion,
    circle,
    discrete_map,
    esigma_skeleton,
    find_isomorphism,
    homology_strings,
    horn,
    identity_map,
    map_by_vertices,
    simplex,
    sset_from_vertex_lists,
    theta_of_word,
    word_of,
)
from pplab.sset.engine import coequalizer_by_all_simplices

from oracles import euler, homology_oracle, product_counts_oracle, simplex_counts


def test_degeneracy_words_roundtrip():
    for theta in [(0, 0, 1, 2), (0, 1, 1, 1), (0, 1, 2)]:
        d = theta[-1]
        assert theta_of_word(word_of(theta), d) == theta
    with pytest.raises(StructuralError):
        theta_of_word((0, 1), 1)  # not strictly decreasing


@pytest.mark.parametrize("m", range(5))
def test_standard_cells_counts(m):
    assert list(simplex(m).counts) == simplex_counts(m)
    if m:
        assert list(boundary(m).counts) == simplex_counts(m)[:-1]
        for k in range(m + 1):
            h = horn(m, k)
            assert h.n_cells() == sum(simplex_counts(m)) - 2


@pytest.mark.parametrize(
    "X,expected",
    [
        (simplex(3), ["Z", "0", "0", "0", "0"]),
        (boundary(3), ["Z", "0", "Z", "0"]),
        (horn(3, 1), ["Z", "0", "0", "0"]),
        (circle(), ["Z", "Z", "0"]),
    ],
    ids=["simplex3", "boundary3", "horn31", "circle"],
)
def test_known_homology(X, expected):
    upto = X.dim + 1
    assert homology_strings(X, upto) == expected
    assert homology_oracle(X, upto) == expected


def test_homology_of_random_complexes_matches_oracle():
    rng = random.Random(11)
    for _ in range(40):
        X = random_complex(rng, max_cells=14)
        assert homology_strings(X, X.dim + 1) == homology_oracle(X, X.dim + 1)


def test_torsion_from_projective_plane():
    # minimal triangulation of RP^2 has H_1 = Z/2
    tris = [(0, 1, 3), (1, 2, 3), (0, 2, 4), (2, 3, 4), (0, 3, 5), (3, 4, 5), (1, 4, 5), (0, 1, 4), (1, 2, 5), (0, 2, 5)]
    edges = sorted({e for t in tris for e in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]})
    X = sset_from_vertex_lists({0: [(v,) for v in range(6)], 1: edges, 2: tris})
    assert X.euler_characteristic() == 1
    assert homology_strings(X, 2) == ["Z", "Z/2", "0"] == homology_oracle(X, 2)


def test_esigma_skeleton_is_free_and_acyclic():
    act = esigma_skeleton(3, 2)
    act.check()
    assert list(act.obj.counts) == [6, 30, 150]
    assert SSET.acts_freely(act)
    assert homology_strings(act.obj, 1) == ["Z", "0"]


def test_simplicial_identities_hold_on_products():
    P = SSET.tensor([simplex(1), simplex(2), boundary(2)])
    P.check_identities_upto(P.dim + 1)


@pytest.mark.parametrize("a,b", [(simplex(1), simplex(1)), (simplex(2), simplex(1)), (boundary(2), horn(2, 0)), (circle(), circle())], ids=["11", "21", "bd-horn", "torus"])
def test_product_counts_match_lattice_paths(a, b):
    P = SSET.tensor([a, b])
    assert list(P.counts) == product_counts_oracle(a, b)
    assert euler(P.counts) == euler(a.counts) * euler(b.counts)


def test_torus_homology():
    T = SSET.tensor([circle(), circle()])
    assert homology_strings(T, 2) == ["Z", "Z^2", "Z"] == homology_oracle(T, 2)


def test_permute_is_iso_and_involutive():
    objs = [simplex(1), boundary(2)]
    sw = SSET.permute(objs, (1, 0))
    back = SSET.permute(list(reversed(objs)), (1, 0))
    assert SSET.is_iso(sw)
    assert SSET.equal(SSET.compose(back, sw), SSET.identity(SSET.tensor(objs)))
    assert SSET.equal(SSET.inverse(sw), back)


def test_inverse_rejects_non_iso():
    with pytest.raises(StructuralError):
        SSET.inverse(cell_inclusion("boundary", 2))


def test_coequalizer_matches_reference_on_random_pairs():
    rng = random.Random(5)
    done = 0
    while done < 60:
        f = random_sset_arrow(rng, 8, max_vertex=2)
        g_cod = f.cod
        # a second map with the same source and target, built from a vertex map
        verts = f.dom.count(0)
        if not verts or not g_cod.count(0):
            continue
        try:
            g = map_by_vertices(f.dom, g_cod, lambda i: rng.randrange(g_cod.count(0)))
        except StructuralError:
            continue
        a = SSET.coequalizer(f, g)
        b = coequalizer_by_all_simplices(f, g)
        assert find_isomorphism(a.obj, b.obj) is not None
        assert SSET.equal(SSET.compose(a.proj, f), SSET.compose(a.proj, g))
        done += 1


def test_coequalizer_of_endpoints_is_circle():
    pt = simplex(0)
    i0 = map_by_vertices(pt, simplex(1), lambda i: 0)
    i1 = map_by_vertices(pt, simplex(1), lambda i: 1)
    q = SSET.coequalizer(i0, i1)
    assert find_isomorphism(q.obj, circle()) is not None
    assert homology_strings(q.obj, 1) == ["Z", "Z"]


def test_find_isomorphism_distinguishes():
    # edges 01, 02 share a source; edges 01, 12 form a path
    assert find_isomorphism(horn(2, 0), horn(2, 1)) is None
    assert find_isomorphism(horn(2, 1), horn(2, 1)) is not None
    assert find_isomorphism(boundary(2), horn(2, 1)) is None
    assert find_isomorphism(simplex(1), SSET.tensor([simplex(0), simplex(1)])) is not None


def test_discrete_map_of_finset_map():
    f = discrete_map(FinSetMap(FinSet(3), FinSet(2), (0, 1, 1)))
    assert f.dom.counts == (3,) and f.cod.counts == (2,)
    assert not SSET.is_mono(f)


def test_map_check_rejects_non_simplicial_images():
    X = boundary(2)
    bad = [list(X.faces[0] and [((0,), 0, i) for i in range(3)]), [((0, 1), 1, 0)] * 3]
    with pytest.raises(StructuralError):
        type(identity_map(X))(X, X, bad)


# -- text format ----------------------------------------------------------
def test_sset_text_roundtrip():
    rng = random.Random(2)
    for _ in range(20):
        X = random_complex(rng)
        Y = parse_sset(sset_to_text(X))
        assert Y.faces == X.faces


def test_arrow_text_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        f = random_sset_map(rng)
        g = parse_arrow(sset_map_to_text(f))
        assert g.images == f.images and g.dom.faces == f.dom.faces


def test_parse_error_reports_position():
    text = "sset\ndim 0 count 2\ndim 1 count 1\n  0: [;1] [x;0]\nend\n"
    with pytest.raises(ParseError) as exc:
        parse_sset(text)
    assert exc.value.line == 4 and exc.value.col is not None


def test_parse_error_for_missing_face():
    text = "sset\ndim 0 count 1\ndim 1 count 1\n  0: [;1] [;0]\nend\n"
    with pytest.raises(ParseError) as exc:
        parse_sset(text)
    assert exc.value.line == 4


def test_parse_error_for_wrong_face_count():
    with pytest.raises(ParseError) as exc:
        parse_sset("sset\ndim 0 count 2\ndim 1 count 1\n  0: [;1]\nend\n")
    assert exc.value.line == 4


def test_parse_rejects_inconsistent_faces():
    # a 2-simplex whose faces do not glue
    text = "\n".join([
        "sset", "dim 0 count 3", "dim 1 count 3",
        "  0: [;1] [;0]", "  1: [;2] [;0]", "  2: [;2] [;1]",
        "dim 2 count 1", "  0: [;0] [;1] [;0]", "end",
    ])
    with pytest.raises(ParseError):
        parse_sset(text)


def test_finset_arrow_parse():
    f = parse_arrow("finset-map 2 3: 0 2\n")
    assert f.table == (0, 2)
    with pytest.raises(ParseError):
        parse_arrow("finset-map 2 3: 0 5\n")


def test_sset_with_no_cells():
    E = SSet([])
    assert E.n_cells() == 0 and homology_strings(E, 0) == ["0"]
    with pytest.raises(StructuralError):
        homology_strings(E, 1)
