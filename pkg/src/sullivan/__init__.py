"""Sullivan minimal models over the rationals.

Exact computations with free graded-commutative algebras: cohomology,
Gottlieb groups, splitting off odd spheres, total Gottlieb elements,
homotopies between maps of models and minimal models of presented algebras.
"""

from .algebra import Element, Generator, Monomial
from .cohomology import betti_numbers, cohomology, euler_characteristic, induced_cohomology_map
from .construction import PresentedCDGA, minimal_model_up_to_degree
from .errors import (
    BoundError,
    InputError,
    InternalError,
    ParseError,
    PreconditionError,
    SullivanError,
    UnsupportedInputError,
)
from .factorization import (
    build_phi,
    check_dW_condition,
    check_ghorbal_form,
    cycles_in_ideal_check,
    cyclic_classification,
    evaluation_homology_image,
    sphere_split,
    total_gottlieb_element,
)
from .gottlieb import derivation_space, even_vanishing_check, gottlieb_basis, gottlieb_group, normalize
from .homotopy import Cylinder, HomotopyCertificate, exp_sd_ds, find_homotopy, verify_homotopy
from .models import (
    Derivation,
    MinimalModel,
    Morphism,
    compose,
    identity,
    indecomposables_map,
    tensor_product,
    validate_model,
    validate_morphism,
)
from .workspace import Workspace, parse, parse_file, serialize

__version__ = "0.1.0"

__all__ = [
    "betti_numbers",
    "BoundError",
    "build_phi",
    "check_dW_condition",
    "check_ghorbal_form",
    "cohomology",
    "compose",
    "cycles_in_ideal_check",
    "cyclic_classification",
    "Cylinder",
    "Derivation",
    "derivation_space",
    "Element",
    "euler_characteristic",
    "evaluation_homology_image",
    "even_vanishing_check",
    "exp_sd_ds",
    "find_homotopy",
    "Generator",
    "gottlieb_basis",
    "gottlieb_group",
    "HomotopyCertificate",
    "identity",
    "indecomposables_map",
    "induced_cohomology_map",
    "InputError",
    "InternalError",
    "minimal_model_up_to_degree",
    "MinimalModel",
    "Monomial",
    "Morphism",
    "normalize",
    "parse",
    "parse_file",
    "ParseError",
    "PreconditionError",
    "PresentedCDGA",
    "serialize",
    "sphere_split",
    "SullivanError",
    "tensor_product",
    "total_gottlieb_element",
    "UnsupportedInputError",
    "validate_model",
    "validate_morphism",
    "verify_homotopy",
    "Workspace",
]
