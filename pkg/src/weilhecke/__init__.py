"""Exact arithmetic for discriminant forms, Weil representations,
and Hecke operators on vector-valued modular forms."""

from .cyclo import CycNum, e_frac, sqrt_nat, zeta
from .errors import (
    DomainError,
    ParseError,
    PrecisionError,
    VerificationError,
    WeilheckeError,
)
from .finquad import DfElem, DiscForm
from .hecke import (
    FourierExpansion,
    apply_T_general,
    apply_T_p2_even,
    apply_T_p2_odd,
    apply_T_p_even,
    coset_reps,
    eigenvalue,
    hecke_vanishes,
    is_eigenform,
    t_character,
)
from .metaplectic import MetaElem, S, T, Word, Z, lift_mod_n, snf_sl2, t_power, word_decompose
from .theta import LatticeSpec, short_vectors, theta_series
from .weil import (
    RepMatrix,
    chi_closed,
    coset_action,
    oa_matrix,
    rho,
    rho_generator,
    rho_qn,
    rho_rd_closed,
    rho_um_closed,
    rho_unit,
)

__all__ = [
    "CycNum", "zeta", "e_frac", "sqrt_nat",
    "DiscForm", "DfElem",
    "MetaElem", "Word", "S", "T", "Z", "t_power",
    "word_decompose", "lift_mod_n", "snf_sl2",
    "RepMatrix", "rho", "rho_generator", "rho_unit", "rho_qn",
    "rho_rd_closed", "rho_um_closed", "chi_closed", "oa_matrix", "coset_action",
    "FourierExpansion", "coset_reps", "apply_T_general",
    "apply_T_p_even", "apply_T_p2_even", "apply_T_p2_odd",
    "t_character", "hecke_vanishes", "eigenvalue", "is_eigenform",
    "LatticeSpec", "short_vectors", "theta_series",
    "WeilheckeError", "ParseError", "DomainError", "PrecisionError", "VerificationError",
]

__version__ = "0.1.0"
