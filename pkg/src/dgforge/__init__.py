"""dgforge: exact-arithmetic homological algebra for dg-algebras.

Desk-scale machinery for truncated cochain complexes over Q or F_p:
semi-free resolutions, derived duality and the bi-commutator, adic
completion towers, and brute-force oracles that cross-check all of it.
"""

__version__ = "0.1.0"

from .complexes import (
    ChainMap,
    Cohomology,
    Complex,
    HomComplex,
    Totalization,
    UncertifiedDegreeError,
    Window,
    cocone,
    cohomology,
    cone,
    cone_in,
    cone_out,
    direct_sum,
    h_dim,
    h_map,
    hom_complex,
    shift,
    single,
    totalize,
    zero_complex,
)
from .complexes import GradedMap
from .dgalgebra import (
    DgAlgebra,
    DgModule,
    FreeHomComplex,
    ModuleHomComplex,
    OrdinaryAlgebraPresentation,
    embed_ordinary,
    end_dga,
    free_module,
    module_hom_complex,
    opposite,
    semifree_module,
)
from .exactlin import QQ, Field, FieldMismatchError, Matrix, PrimeField, RationalField

__all__ = [
    "QQ",
    "ChainMap",
    "Cohomology",
    "Complex",
    "DgAlgebra",
    "DgModule",
    "Field",
    "FieldMismatchError",
    "FreeHomComplex",
    "GradedMap",
    "HomComplex",
    "Matrix",
    "ModuleHomComplex",
    "OrdinaryAlgebraPresentation",
    "PrimeField",
    "RationalField",
    "Totalization",
    "UncertifiedDegreeError",
    "Window",
    "__version__",
    "cocone",
    "cohomology",
    "cone",
    "cone_in",
    "cone_out",
    "direct_sum",
    "embed_ordinary",
    "end_dga",
    "free_module",
    "h_dim",
    "h_map",
    "hom_complex",
    "module_hom_complex",
    "opposite",
    "semifree_module",
    "shift",
    "single",
    "totalize",
    "zero_complex",
]
