"""Exact Heisenberg/Virasoro/W vertex-operator engine on Fock spaces.

The space acted on is the free bosonic/fermionic Fock space built from a
finite graded Frobenius algebra (the "surface model").  Everything is
computed over exact rationals; there is no floating point anywhere.
"""

from hv.frobenius import (
    SurfaceModel,
    GradedClass,
    TensorClass,
    ModelError,
    load_model,
    builtin_model,
    BUILTIN_NAMES,
)
from hv.fock import FockVector, vacuum, basis, poincare, pair_fock
from hv.operators import q, virasoro, w, boundary, commutator, adjoint, derive, equal_up_to

__all__ = [
    "SurfaceModel",
    "GradedClass",
    "TensorClass",
    "ModelError",
    "load_model",
    "builtin_model",
    "BUILTIN_NAMES",
    "FockVector",
    "vacuum",
    "basis",
    "poincare",
    "pair_fock",
    "q",
    "virasoro",
    "w",
    "boundary",
    "commutator",
    "adjoint",
    "derive",
    "equal_up_to",
]
