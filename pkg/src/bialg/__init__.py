"""bialg - exact verification, construction and classification of small bialgebra-type structures."""

__version__ = "1.0.0"
__author__ = "bialg developers"

from .scalars import Field, FieldError, Fp, RATIONALS
from .core import Bundle, BundleKind, ComultTensor, LinearEndo, MultTensor, StructureError
from .axioms import CheckReport, check_algebra, check_bialgebra, check_bundle, check_coalgebra, check_infinitesimal
from .constructions import ConstructionError, PostconditionError, UnitalAlgebraInput
from .catalog import CatalogError
from .classify import BudgetExceededError, SearchError
from .settings import Settings
from .fsutils import ValidationError

__all__ = [
    "Field",
    "FieldError",
    "Fp",
    "RATIONALS",
    "Bundle",
    "BundleKind",
    "ComultTensor",
    "LinearEndo",
    "MultTensor",
    "StructureError",
    "CheckReport",
    "check_algebra",
    "check_bialgebra",
    "check_bundle",
    "check_coalgebra",
    "check_infinitesimal",
    "ConstructionError",
    "PostconditionError",
    "UnitalAlgebraInput",
    "CatalogError",
    "BudgetExceededError",
    "SearchError",
    "ValidationError",
    "Settings",
]
