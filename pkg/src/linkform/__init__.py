"""Torsion linking pairings of orientable Seifert fibred 3-manifolds.

Exact-arithmetic computation of the linking pairing of M(g;S) from its
Seifert data, classification of finite linking pairings into standard
atoms, constructive realization of pairings by Seifert data, and Witt
classes, all backed by independent brute-force oracles.
"""

# note: the seifert() convenience constructor stays in linkform.seifert so
# the package attribute keeps naming the submodule
from .seifert import SeifertData, euler_invariant, fibre_sum, validate
from .linking import GramPairing, gram_matrix, welldefined_check
from .pairing import (
    Cyc,
    E0,
    E1,
    StandardForm,
    brute_force_isomorphic,
    canonical_form,
    classify,
    classify_seifert,
    is_isomorphic,
    standard_form_of,
)
from .realize import exhaustive_search, realize
from .torsion import local_orders, presentation_matrix, smith_normal_form, structure_check
from .witt import WittElement, metabolic_oracle, witt_pairing, witt_seifert

__version__ = "0.1.0"

__all__ = [
    "SeifertData",
    "validate",
    "euler_invariant",
    "fibre_sum",
    "GramPairing",
    "gram_matrix",
    "welldefined_check",
    "Cyc",
    "E0",
    "E1",
    "StandardForm",
    "classify",
    "classify_seifert",
    "standard_form_of",
    "canonical_form",
    "is_isomorphic",
    "brute_force_isomorphic",
    "presentation_matrix",
    "smith_normal_form",
    "local_orders",
    "structure_check",
    "realize",
    "exhaustive_search",
    "WittElement",
    "witt_pairing",
    "witt_seifert",
    "metabolic_oracle",
    "__version__",
]
