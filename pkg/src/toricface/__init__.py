"""Toric face rings of monoidal complexes: presentations, squarefree duality, local cohomology."""

from .cells import EMPTY, CellComplex, CellComplexError, IncidenceFunction, synthesize_incidence, validate_complex
from .cohomology import CohomologyReport, cech_oracle_dim, local_cohomology_dim, oracle_sweep, ring_properties
from .io import builtin_fixture, load, parse, serialize
from .linalg import Field
from .monoidal import Degree, MonoidalComplex, MonoidalError, import_fan, import_simplicial, validate_monoidal
from .polyhedral import cone_from_generators, hilbert_basis, normality_check
from .presentation import present_ideal
from .squarefree import SquarefreeModule, dd_functor, ishida_complex, sq_cohomology

__version__ = "0.1.0"

__all__ = [
    "EMPTY", "CellComplex", "CellComplexError", "IncidenceFunction", "synthesize_incidence", "validate_complex",
    "CohomologyReport", "cech_oracle_dim", "local_cohomology_dim", "oracle_sweep", "ring_properties",
    "builtin_fixture", "load", "parse", "serialize", "Field",
    "Degree", "MonoidalComplex", "MonoidalError", "import_fan", "import_simplicial", "validate_monoidal",
    "cone_from_generators", "hilbert_basis", "normality_check", "present_ideal",
    "SquarefreeModule", "dd_functor", "ishida_complex", "sq_cohomology",
]
