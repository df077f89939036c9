"""Functional regularized least squares classification with separable
operator-valued kernels: function-valued decision functions over vectors of
curves, trained through the Kronecker spectral structure of the block
operator Gram matrix, with one-vs-all classification and a scalar RLSC
baseline for comparison.
"""

from ._backend import BACKEND
from .classifier import (
    ConfusionMatrix,
    LabelScheme,
    MulticlassModel,
    classify,
    evaluate,
    make_label,
    train_multiclass,
)
from .data import (
    Dataset,
    load_dataset,
    save_csv,
    save_json,
    split,
    synth_lag_dataset,
    synth_null_dataset,
)
from .errors import DataError, NumericError, StructuralError
from .function_space import (
    FunctionalObservation,
    Grid,
    SampledFunction,
    l2_inner,
    l2_norm,
    l2p_distance_sq,
    vector_inner,
)
from .integral_operator import (
    OperatorEigen,
    apply_T_quadrature,
    dense_T_matrix,
    find_mu_roots,
    identity_eigensystem,
    operator_eigensystem,
)
from .scalar_kernel import (
    GramEigen,
    ScalarKernelParams,
    eval_scalar_kernel,
    gram_matrix,
    median_sigma,
    sym_eigen,
)
from .serialize import load_model, save_model
from .solver import (
    KroneckerEigen,
    RegularizationConfig,
    TrainedModel,
    brute_force_solve,
    build_kronecker_eigen,
    predict,
    rkhs_norm_sq,
    solve_beta,
    train_functional,
)

__version__ = "0.1.0"
