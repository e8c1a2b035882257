"""Support-size reduction and measurement design for quantum estimation."""

from qestkit._core import (
    DiscretePrior,
    NumericalError,
    OptimizationReport,
    OptimizeMode,
    Povm,
    PriorPoint,
    QestkitError,
    ReducedPovm,
    ReductionCertificate,
    ReductionMode,
    StateModel,
    Subalgebra,
    ValidationError,
    bayes_cost,
    classical_fisher,
    dim_h,
    minimize_bayes,
    minimize_local,
    point_model,
    qubit_disk_prior,
    qubit_xz,
    qubit_xz_subalgebra,
    qubit_xz_two_copy_subalgebra,
    reduce_bayes,
    reduce_improving,
    reduce_preserving,
    sld,
    tensor_power,
    uniqueness_audit,
    weighted_cost,
)

__all__ = [
    "DiscretePrior",
    "NumericalError",
    "OptimizationReport",
    "OptimizeMode",
    "Povm",
    "PriorPoint",
    "QestkitError",
    "ReducedPovm",
    "ReductionCertificate",
    "ReductionMode",
    "StateModel",
    "Subalgebra",
    "ValidationError",
    "bayes_cost",
    "classical_fisher",
    "dim_h",
    "minimize_bayes",
    "minimize_local",
    "point_model",
    "qubit_disk_prior",
    "qubit_xz",
    "qubit_xz_subalgebra",
    "qubit_xz_two_copy_subalgebra",
    "reduce_bayes",
    "reduce_improving",
    "reduce_preserving",
    "sld",
    "tensor_power",
    "uniqueness_audit",
    "weighted_cost",
]

__version__ = "0.1.0"
