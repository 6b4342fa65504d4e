"""Self-adjointness residuals and spectral diagnostics on square embeddings."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dirops import kernels
from dirops.errors import NumericRangeError
from dirops.matrix import OperatorMatrix, dyadic_block, operator_norm_est
from dirops.series import DirichletPolynomial, derivative, eval_poly
from dirops.symbols import AffineSymbol

__all__ = [
    "hermitian_residual",
    "spectral_radius_est",
    "EigenWitness",
    "eigen_witness",
]

_LOW, _HIGH = 1e-300, 1e300


def hermitian_residual(M: OperatorMatrix) -> float:
    """Frobenius norm of ``S - S^H`` on the square embedding."""
    S = M.square_embedding()
    D = S - S.conj().T
    return math.sqrt(kernels.fsum(np.ascontiguousarray((D.real**2 + D.imag**2).ravel())))


def spectral_radius_est(M: OperatorMatrix, m_max: int) -> list[tuple[int, float]]:
    """``[(m, ||A^m||^{1/m}) for m = 1, 2, 4, ..., m_max]`` by repeated squaring.

    The matrix is scaled by its largest singular value and each power is kept
    normalised, carrying the logarithm of its norm separately, so nothing
    under- or overflows on the way.  An exactly nilpotent power gives 0 from
    that point on.
    """
    if m_max < 1 or m_max & (m_max - 1):
        raise ValueError(f"m_max must be a power of 2, got {m_max}")
    S = M.square_embedding()
    sigma1 = operator_norm_est(S)
    steps = int(math.log2(m_max))
    if sigma1 == 0.0:
        return [(1 << j, 0.0) for j in range(steps + 1)]
    U = S / sigma1
    log_norm = 0.0  # log ||(S/sigma1)^m||, with ||S/sigma1|| = 1
    out = [(1, sigma1)]
    zero = False
    for j in range(1, steps + 1):
        m = 1 << j
        if zero:
            out.append((m, 0.0))
            continue
        U = U @ U
        nu = operator_norm_est(U)
        if nu == 0.0:
            zero = True
            out.append((m, 0.0))
            continue
        if not _LOW <= nu <= _HIGH:
            raise NumericRangeError(f"normalised power norm {nu:g} left [1e-300, 1e300] at m={m}")
        U = U / nu
        log_norm = 2.0 * log_norm + math.log(nu)
        out.append((m, sigma1 * math.exp(log_norm / m)))
    return out


@dataclass(frozen=True)
class EigenWitness:
    """An eigenpair of the affine operator checked through the symbol itself.

    ``residual`` is ``max |f'(Phi(s)) - lam f(s)| / max |lam f(s)|`` over the
    sample points, computed from ``f`` and ``Phi`` directly (no matrix).
    """

    eigenvalue: complex
    eigenfunction: DirichletPolynomial
    residual: float
    points: int


def eigen_witness(sym: AffineSymbol, K: int = 48, samples: int = 32, seed: int = 0) -> EigenWitness:
    """Largest-modulus eigenpair of the dyadic block, verified pointwise."""
    B = dyadic_block(sym, K)
    lam, V = np.linalg.eig(B)
    i = int(np.argmax(np.abs(lam)))
    lam_i, v = complex(lam[i]), V[:, i]
    # f(s) = sum_j v_j 2^{-js}
    coeffs = np.zeros((1 << (K - 1)) if K <= 21 else 1, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.6, 3.0, samples) + 1j * rng.uniform(-20, 20, samples)
    j = np.arange(K)
    ln2 = math.log(2.0)

    def f(s):
        return np.sum(v * np.exp(-np.multiply.outer(s, j) * ln2), axis=-1)

    def fprime(s):
        return np.sum(-j * ln2 * v * np.exp(-np.multiply.outer(s, j) * ln2), axis=-1)

    lhs = fprime(sym.evaluate(pts))
    rhs = lam_i * f(pts)
    residual = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))
    if K <= 21:
        coeffs[(1 << j) - 1] = v
        poly = DirichletPolynomial(coeffs)
        # cross-check the sparse evaluator against the generic one at one point
        s0 = complex(pts[0])
        assert abs(eval_poly(poly, s0) - complex(f(np.array([s0]))[0])) < 1e-10
        assert abs(eval_poly(derivative(poly), sym(s0))
                   - complex(fprime(np.array([sym(s0)]))[0])) < 1e-10
    else:
        poly = DirichletPolynomial([0j])
    return EigenWitness(lam_i, poly, residual, samples)
