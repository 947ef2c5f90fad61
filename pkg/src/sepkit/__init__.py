"""Separability criteria from extended correlation tensors.

The package decides whether bipartite density matrices violate trace-norm
bounds on the extended correlation tensor (and the classic criteria that
arise as special cases), finds detection thresholds on standard state
families, and turns the criterion into entanglement witnesses.
"""

from sepkit.bases import (
    OperatorBasis,
    gell_mann_basis,
    heisenberg_weyl_basis,
    rescale_basis,
    validate_basis,
)
from sepkit.bloch import BlochDecomposition, Convention, bloch_vector, convert, decompose, reconstruct
from sepkit.criteria import (
    Criterion,
    CriterionReport,
    TensorParams,
    Verdict,
    build_extended_tensor,
    evaluate,
    ppt_check,
    preset,
    prop1_bound,
    realignment_check,
    theorem1_bound,
)
from sepkit.errors import ConvergenceError, DimensionError, NotHermitianError, StateError
from sepkit.states import (
    DensityMatrix,
    isotropic,
    maximally_entangled,
    mix_with_white_noise,
    random_density,
    random_pure_product,
    random_separable,
    tiles_state,
    werner,
)
from sepkit.witness import Isometry, Witness, build_witness, expectation, optimal_isometry

__version__ = "0.1.0"

__all__ = [
    "BlochDecomposition",
    "ConvergenceError",
    "Convention",
    "Criterion",
    "CriterionReport",
    "DensityMatrix",
    "DimensionError",
    "Isometry",
    "NotHermitianError",
    "OperatorBasis",
    "StateError",
    "TensorParams",
    "Verdict",
    "Witness",
    "bloch_vector",
    "build_extended_tensor",
    "build_witness",
    "convert",
    "decompose",
    "evaluate",
    "expectation",
    "gell_mann_basis",
    "heisenberg_weyl_basis",
    "isotropic",
    "maximally_entangled",
    "mix_with_white_noise",
    "optimal_isometry",
    "ppt_check",
    "preset",
    "prop1_bound",
    "random_density",
    "random_pure_product",
    "random_separable",
    "realignment_check",
    "reconstruct",
    "rescale_basis",
    "theorem1_bound",
    "tiles_state",
    "validate_basis",
    "werner",
]
