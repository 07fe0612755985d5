from .simplicial import SimplicialMap, SSet, identity_map, nondeg, sset_from_vertex_lists, theta_of_word, word_of
from .engine import SSET, SSetEngine, closure, find_isomorphism, fixed_cells, image, subobject
from .cells import (
    boundary,
    cell_inclusion,
    circle,
    discrete,
    discrete_map,
    esigma_skeleton,
    generate_cell,
    horn,
    labelled_inclusion,
    map_by_vertices,
    simplex,
    two_horn_parameter,
    vertex_map,
)
from .homology import homology_strings, homology_table, is_homology_iso, normalized_chains, sset_homology
from .homotopy import HomotopyWitness, build_horn_contraction, constant_homotopy, homotopy_from_rule, verify_homotopy
