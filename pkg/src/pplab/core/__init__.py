from .errors import EngineMismatch, EquivarianceError, NotCoequalizing, ParseError, StructuralError
from .engine import (
    Coequalizer,
    Coinvariants,
    Colimit,
    Coproduct,
    DiagramOnPoset,
    Engine,
    PosetColimit,
    UnionColimit,
    cocone_commutes,
    common_engine,
    engine_of,
    poset_colimit,
)
from .groups import (
    FinGroup,
    Subgroup,
    all_subgroups,
    cyclic_group,
    group_product,
    identity_subgroup,
    multi_symmetric_group,
    subgroup_of,
    symmetric_group,
    whole_subgroup,
    young_subgroup,
)
from .actions import (
    EquivariantArrow,
    GroupAction,
    Induced,
    QuotientArrow,
    arrow_coinvariants,
    coinvariants,
    coset_comparison,
    induce,
    induce_arrow,
    permutation_action,
    tensor_action,
    trivial_action,
    trivially_acted,
)
from .finset import FINSET, FinSet, FinSetEngine, FinSetMap, finset_is_iso, finset_is_mono, finset_product
