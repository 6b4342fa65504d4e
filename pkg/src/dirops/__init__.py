"""Composition-differentiation operators ``f -> f' o Phi`` on the Hardy space of Dirichlet series."""

from dirops.counting import (
    CountingSample,
    compactness_ratio,
    counting_closed_affine,
    counting_majorant,
    counting_oracle,
    divergence_demo,
)
from dirops.errors import DomainError, NonConvergenceError, NumericRangeError
from dirops.kernels import BACKEND
from dirops.matrix import (
    OperatorMatrix,
    SingularValueReport,
    adjoint_kernel_check,
    apply,
    approx_bound,
    build_affine_matrix,
    build_translation_matrix,
    hs_closed_form,
    hs_norm,
    operator_norm_est,
    remainder_norm,
    singular_values,
)
from dirops.series import (
    DirichletPolynomial,
    HalfPlanePoint,
    basis,
    derivative,
    eval_poly,
    h2_norm,
    inner_product,
    kernel_deriv_truncated,
    kernel_norms,
    kernel_truncated,
    lp_identity_check,
)
from dirops.special import TailBoundedSum, polylog_sum, zeta
from dirops.spectrum import eigen_witness, hermitian_residual, spectral_radius_est
from dirops.symbols import (
    AffineSymbol,
    GeneralSymbol,
    TranslationSymbol,
    classify_sampled,
    parse_symbol,
    strict_halfplane_check,
    validate_affine,
)
from dirops.verification import QuadratureSpec, cov_check, cov_lhs, cov_rhs

__version__ = "0.1.0"
