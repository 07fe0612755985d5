from .snf import SNFResult, smith_normal_form, verify_snf
from .complexes import ChainComplexFP, ChainMap, FPAbelianGroup, complex_homology, format_group, homology_invariants
from .engine import CHAIN, ChainEngine, chain_coinvariants, koszul_sign, sign_action_power, tensor_complex
