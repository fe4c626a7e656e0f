"""Exact computations with canonical bases of tensor products via framed Cartan data.

Submodules: ``coeff`` (Laurent polynomials, rational functions), ``cartan``
(data, weights, framing), ``falg`` (the algebra f), ``canonical`` (A1/A2
canonical bases), ``hwmodule`` (highest-weight modules), ``tensor`` (tensor
products, quasi-R-matrix, diamond basis), ``framed`` (the framed construction),
``crystal`` (Kashiwara operators) and ``cli``.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .coeff import LaurentPoly, RationalFunc, quantum_binomial, quantum_factorial, quantum_integer
from .cartan import CartanDatum, Weight, cartan_type, frame, odot
from .falg import FreeElement, bilinear_form, equals_in_f
from .canonical import A1, A2Left, A2Right, CBIndex, cb_list, expand_cb
from .hwmodule import HighestWeightModule, HWElement, admissible_form
from .tensor import TensorModule, diamond_basis, psi, quasi_R
from .framed import FramedConstruction, verify_cb_correspondence, verify_positivity, verify_two_pairings

__all__ = [
    "__version__",
    "BACKEND",
    "LaurentPoly",
    "RationalFunc",
    "quantum_integer",
    "quantum_factorial",
    "quantum_binomial",
    "CartanDatum",
    "Weight",
    "cartan_type",
    "frame",
    "odot",
    "FreeElement",
    "bilinear_form",
    "equals_in_f",
    "CBIndex",
    "A1",
    "A2Left",
    "A2Right",
    "cb_list",
    "expand_cb",
    "HighestWeightModule",
    "HWElement",
    "admissible_form",
    "TensorModule",
    "diamond_basis",
    "psi",
    "quasi_R",
    "FramedConstruction",
    "verify_cb_correspondence",
    "verify_positivity",
    "verify_two_pairings",
]
