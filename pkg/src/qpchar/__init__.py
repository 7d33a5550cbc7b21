"""Exact multigraded characters of principal subspaces of affine sl(n+1)
standard modules, computed by three independent routes (fermionic sums,
quasiparticle basis enumeration, a level-1 lattice Fock-space oracle) with
recursion and enveloping-algebra identity checks at finite truncation."""

from .fermionic import (
    andrews_gordon_product,
    char_first_pair,
    char_first_pair_pform,
    char_last_pair,
    char_last_pair_pform,
    collapse_charges,
    dynkin_flip_check,
    fermionic_char,
    verify_level1_sequence,
    verify_recursion,
)
from .fock import LatticeModule, bracket_check, e_shift_check, principal_subspace_dims
from .quasiparticle import (
    AdmissibilityContext,
    QPMonomial,
    char_from_basis,
    enumerate_sector,
    is_admissible,
)
from .rootdata import (
    DominantAffineWeight,
    Weight,
    cartan_matrix,
    epsilon,
    fundamental_weight,
    inner_product,
    positive_roots,
    simple_root,
    structure_constant,
    weight_from_fundamental,
)
from .series import TruncatedSeries, pochhammer

__all__ = [
    "AdmissibilityContext",
    "DominantAffineWeight",
    "LatticeModule",
    "QPMonomial",
    "TruncatedSeries",
    "Weight",
    "andrews_gordon_product",
    "bracket_check",
    "cartan_matrix",
    "char_first_pair",
    "char_first_pair_pform",
    "char_from_basis",
    "char_last_pair",
    "char_last_pair_pform",
    "collapse_charges",
    "dynkin_flip_check",
    "e_shift_check",
    "enumerate_sector",
    "epsilon",
    "fermionic_char",
    "fundamental_weight",
    "inner_product",
    "is_admissible",
    "pochhammer",
    "positive_roots",
    "principal_subspace_dims",
    "simple_root",
    "structure_constant",
    "verify_level1_sequence",
    "verify_recursion",
    "weight_from_fundamental",
]

__version__ = "0.1.0"
