"""Truncated matrices of composition-differentiation operators.

For ``Phi(s) = c1 + c2 2^{-s}`` the image of ``e_n`` is

    D_Phi e_n = -n^{-c1} ln n * exp(-c2 ln n * 2^{-s})
              = sum_k  -((-c2)^k / k!) n^{-c1} (ln n)^{k+1}  2^{-ks},

so the operator lives on the dyadic monomials ``2^{-ks}``.  Rows of an affine
matrix are indexed by k (basis element ``2^{-ks}``), columns by n = 1..N.  For
``Phi(s) = s + c1`` the matrix is diagonal in ``e_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dirops import kernels
from dirops.errors import DomainError, NonConvergenceError
from dirops.series import DirichletPolynomial, kernel_deriv_truncated
from dirops.special import TailBoundedSum
from dirops.symbols import AffineSymbol, AffineVerdict, TranslationSymbol, validate_affine

__all__ = [
    "OperatorMatrix",
    "SingularValueReport",
    "build_affine_matrix",
    "build_translation_matrix",
    "dyadic_block",
    "apply",
    "apply_rows",
    "adjoint_apply",
    "operator_norm_est",
    "singular_values",
    "remainder_norm",
    "approx_bound",
    "corrected_approx_bound",
    "hs_norm",
    "hs_closed_form",
    "hs_row_tail",
    "adjoint_kernel_check",
]

DEFAULT_K = 96
DEFAULT_N = 96
SVD_TOL = 1e-13
POWER_TOL = 1e-12
POWER_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A K x N block of the operator in the monomial basis.

    Row r stands for the monomial ``n_r^{-s}`` with ``ln n_r = row_log[r]``
    (``n_r = 2^r`` for affine symbols); columns are always n = 1..N.
    """

    entries: np.ndarray
    row_log: np.ndarray
    symbol: AffineSymbol | TranslationSymbol | None = None
    kind: str = "dense"

    @property
    def K(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_array(cls, a) -> "OperatorMatrix":
        a = np.array(a, dtype=np.complex128)
        return cls(a, np.log(np.arange(1, a.shape[0] + 1, dtype=np.float64)))

    @property
    def max_row_index(self) -> int:
        top = float(self.row_log.max())
        return int(round(math.exp(top))) if top < 60 else 1 << 90

    @property
    def row_index(self) -> np.ndarray:
        """Integer row labels; only available while they fit comfortably in int64."""
        if self.row_log.max() > 40:
            raise OverflowError("row labels exceed 2^57; use row_log")
        return np.rint(np.exp(self.row_log)).astype(np.int64)

    @property
    def has_square_embedding(self) -> bool:
        return self.max_row_index <= self.N

    def square_embedding(self) -> np.ndarray:
        """N x N matrix on ``e_1..e_N``, row n holding the row with ``row_index == n``."""
        if not self.has_square_embedding:
            raise DomainError(
                f"square embedding needs N >= {self.max_row_index}, have N = {self.N}"
            )
        S = np.zeros((self.N, self.N), dtype=np.complex128)
        S[self.row_index - 1] = self.entries
        return S

    def rows(self):
        """Yield ``(k, n, re, im)`` for the CSV dump."""
        for r in range(self.K):
            for n in range(1, self.N + 1):
                z = self.entries[r, n - 1]
                yield r, n, float(z.real) + 0.0, float(z.imag) + 0.0


def _require_strict(sym: AffineSymbol) -> None:
    verdict = validate_affine(sym.c1, sym.c2)
    if verdict is not AffineVerdict.STRICT_INTERIOR:
        raise DomainError(
            f"symbol must satisfy Re c1 > 1/2 + |c2| strictly, got {verdict.value} "
            f"(c1={sym.c1}, c2={sym.c2})"
        )


def _affine_block(sym: AffineSymbol, K: int, logn: np.ndarray) -> np.ndarray:
    """Entries for rows k < K at columns with the given ``ln n`` (all > 0)."""
    c1, c2 = sym.c1, sym.c2
    out = np.zeros((K, logn.size), dtype=np.complex128)
    # n^{-i Im c1}: exactly 1 when c1 is real
    twist = np.exp(-1j * c1.imag * logn) if c1.imag else np.ones_like(logn, dtype=np.complex128)
    base = (np.log(logn) - c1.real * logn)
    if c2 == 0:
        out[0] = -np.exp(base) * twist
        return out
    unit = -c2 / abs(c2)
    ln_c2 = math.log(abs(c2))
    phase = 1.0 + 0j
    for k in range(K):
        mag = np.exp(k * ln_c2 - math.lgamma(k + 1) + (k + 1) * np.log(logn) - c1.real * logn)
        out[k] = -phase * mag * twist
        phase = phase * unit
    return out


def build_affine_matrix(sym: AffineSymbol, K: int = DEFAULT_K, N: int = DEFAULT_N) -> OperatorMatrix:
    """K x N matrix ``A[k, n] = -((-c2)^k / k!) n^{-c1} (ln n)^{k+1}``; column n = 1 is zero."""
    _require_strict(sym)
    if K < 1 or N < 2:
        raise DomainError(f"need K >= 1 and N >= 2, got K={K}, N={N}")
    entries = np.zeros((K, N), dtype=np.complex128)
    logn = np.log(np.arange(2, N + 1, dtype=np.float64))
    entries[:, 1:] = _affine_block(sym, K, logn)
    return OperatorMatrix(entries, np.arange(K) * math.log(2.0), sym, "affine")


def build_translation_matrix(sym: TranslationSymbol, N: int = DEFAULT_N) -> OperatorMatrix:
    """Diagonal ``D[n, n] = -n^{-c1} ln n``."""
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    logn = np.log(np.arange(1, N + 1, dtype=np.float64))
    diag = -np.exp(-sym.c1 * logn) * logn
    return OperatorMatrix(np.diag(diag), logn, sym, "translation")


def dyadic_block(sym: AffineSymbol, K: int) -> np.ndarray:
    """The operator restricted to ``span{2^{-js}}``: ``B[k, j] = A[k, 2^j]`` for j, k < K.

    The range of the affine operator lies in this span, so its nonzero
    spectrum is that of the infinite version of this block.
    """
    _require_strict(sym)
    B = np.zeros((K, K), dtype=np.complex128)
    if K > 1:
        B[:, 1:] = _affine_block(sym, K, np.arange(1, K, dtype=np.float64) * math.log(2.0))
    return B


def _entries(M) -> np.ndarray:
    if isinstance(M, OperatorMatrix):
        return M.entries
    return np.asarray(M, dtype=np.complex128)


def apply(M: OperatorMatrix, P: DirichletPolynomial) -> DirichletPolynomial:
    """Image of ``P`` as a Dirichlet polynomial on the integer index grid."""
    if P.N > M.N:
        raise ValueError(f"polynomial length {P.N} exceeds matrix width {M.N}")
    b = kernels.cmatvec(np.ascontiguousarray(M.entries), P.padded(M.N))
    top = M.max_row_index
    if top > 1 << 24:
        raise ValueError("image index grid too large to materialise; use apply_rows")
    out = np.zeros(top, dtype=np.complex128)
    out[M.row_index - 1] = b
    return DirichletPolynomial(out)


def apply_rows(M: OperatorMatrix, P: DirichletPolynomial) -> np.ndarray:
    """Coefficients of the image on the row grid (``b = M a``)."""
    if P.N > M.N:
        raise ValueError(f"polynomial length {P.N} exceeds matrix width {M.N}")
    return kernels.cmatvec(np.ascontiguousarray(M.entries), P.padded(M.N))


def adjoint_apply(M: OperatorMatrix, y) -> np.ndarray:
    """``M^H y`` for a vector on the row grid (length K), compensated per column."""
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (M.K,):
        raise ValueError(f"expected a vector of length {M.K}")
    cols = np.ascontiguousarray(M.entries.T)
    return np.array([kernels.cdot(y, col, True) for col in cols], dtype=np.complex128)


def operator_norm_est(M, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> float:
    """Largest singular value by power iteration on ``A^H A``.

    Stops when the Rayleigh quotient changes by less than ``tol`` relative;
    raises :class:`NonConvergenceError` at the iteration cap.
    """
    A = _entries(M)
    if A.size == 0 or not np.any(A):
        return 0.0
    rng = np.random.default_rng(0)
    x = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    x /= np.linalg.norm(x)
    AH = A.conj().T
    lam_prev = -1.0
    for _ in range(max_iter):
        y = A @ x
        lam = float(np.vdot(y, y).real)
        z = AH @ y
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return 0.0
        x = z / nz
        if abs(lam - lam_prev) <= tol * lam:
            # the Rayleigh quotient of the updated vector is the sharper estimate
            y = A @ x
            return math.sqrt(max(float(np.vdot(y, y).real), lam))
        lam_prev = lam
    raise NonConvergenceError(f"power iteration did not converge in {max_iter} steps")


@dataclass(frozen=True, eq=False)
class SingularValueReport:
    """Descending singular values with the analytic approximation-number bounds.

    ``analytic_bounds[n]`` bounds ``sigmas[n]`` (that is, ``a_{n+1}``); it is
    None when the symbol is not a real affine symbol satisfying the hypothesis.
    """

    sigmas: np.ndarray
    bound_params: tuple[float, float, float] | None = None
    analytic_bounds: np.ndarray | None = None
    sweeps: int = 0

    def rows(self):
        for i, s in enumerate(self.sigmas):
            b = None if self.analytic_bounds is None else float(self.analytic_bounds[i])
            yield i, float(s), b


def _jacobi_sigmas(A: np.ndarray) -> tuple[np.ndarray, int]:
    A = np.asarray(A, dtype=np.complex128)
    K, N = A.shape
    work = A if N <= K else A.conj().T
    sig, sweeps, off = kernels.jacobi_singular_values(np.ascontiguousarray(work), SVD_TOL, 80)
    if off > SVD_TOL:
        raise NonConvergenceError(f"Jacobi SVD stalled with off-diagonal mass {off:g}")
    return np.asarray(sig)[: min(K, N)], sweeps


def _real_params(sym) -> tuple[float, float] | None:
    if not isinstance(sym, AffineSymbol):
        return None
    if sym.c1.imag != 0 or sym.c2.imag != 0:
        return None
    c1, c2 = sym.c1.real, sym.c2.real
    if not 2 * c1 - 2 * abs(c2) - 1 > 0:
        return None
    return c1, c2


def singular_values(M) -> SingularValueReport:
    """Full singular spectrum by one-sided Jacobi, with the analytic bounds attached."""
    sig, sweeps = _jacobi_sigmas(_entries(M))
    sym = M.symbol if isinstance(M, OperatorMatrix) else None
    params = _real_params(sym)
    if params is None:
        return SingularValueReport(sig, None, None, sweeps)
    c1, c2 = params
    x = 2 * c2 / (2 * c1 - 1)
    bounds = np.array([approx_bound(c1, c2, n) for n in range(sig.size)])
    return SingularValueReport(sig, (c1, c2, x), bounds, sweeps)


def remainder_norm(M, n: int) -> float:
    """Norm of the rows k >= n, i.e. of the operator minus its rank-n head."""
    A = _entries(M)
    K = A.shape[0]
    if not 0 <= n <= K:
        raise DomainError(f"n must lie in [0, {K}], got {n}")
    if n == K:
        return 0.0
    tail = A[n:]
    if not np.any(tail):
        return 0.0
    return float(_jacobi_sigmas(tail)[0][0])


def _as_real(v, name: str) -> float:
    z = complex(v)
    if z.imag != 0:
        raise DomainError(f"{name} must be real for the approximation-number bound, got {z}")
    return z.real


def approx_bound(c1, c2, n: int) -> float:
    """Upper bound for ``a_{n+1}`` and for the rank-n remainder norm.

    ``sqrt(2c1 / ((2c1-1)^2 - (2c2)^2)^3 * (16 x^2 + 4 x^{2n}))`` with
    ``x = 2 c2 / (2 c1 - 1)``; requires real ``c1, c2`` and ``2c1 - 2|c2| - 1 > 0``.
    """
    c1 = _as_real(c1, "c1")
    c2 = _as_real(c2, "c2")
    if n < 0:
        raise DomainError("n must be nonnegative")
    if not 2 * c1 - 2 * abs(c2) - 1 > 0:
        raise DomainError(f"need 2 c1 - 2|c2| - 1 > 0, got c1={c1}, c2={c2}")
    x = 2 * c2 / (2 * c1 - 1)
    pref = 2 * c1 / ((2 * c1 - 1) ** 2 - (2 * c2) ** 2) ** 3
    return math.sqrt(pref * (16 * x * x + 4 * x ** (2 * n)))


def corrected_approx_bound(c1, c2, n: int) -> float:
    """:func:`approx_bound` times ``(2c1 - 1)^{3/2}``.

    Summing ``(c2^{2k}/(k!)^2) (2k+2)!/(2c1-1)^{2k+2} * 2c1/(2c1-1)`` over
    ``k >= n`` gives the prefactor ``2c1 (2c1-1)^3 / ((2c1-1)^2 - (2c2)^2)^3``;
    :func:`approx_bound` drops the ``(2c1-1)^3`` and is too small at n = 0
    once ``c1 > 1``.
    """
    c1r = _as_real(c1, "c1")
    return approx_bound(c1, c2, n) * (2 * c1r - 1) ** 1.5


def hs_norm(M) -> float:
    """Frobenius norm."""
    A = _entries(M)
    return math.sqrt(kernels.fsum(np.ascontiguousarray((A.real**2 + A.imag**2).ravel())))


def _bessel_series(x2: float) -> tuple[float, float, int]:
    """``sum_k x^{2k}/(k!)^2`` for ``x2 = x^2``, with a bound on the dropped tail."""
    terms = [1.0]
    t = 1.0
    k = 0
    while True:
        q = x2 / (k + 1) ** 2
        if q < 0.5 and t * q / (1 - q) <= 1e-18 * math.fsum(terms):
            return math.fsum(terms), t * q / (1 - q), k + 1
        k += 1
        t *= q
        terms.append(t)


def hs_closed_form(sym: AffineSymbol, N: int) -> TailBoundedSum:
    """``sqrt(sum_{n<=N} (ln n)^2 n^{-2 Re c1} sum_k (|c2| ln n)^{2k} / (k!)^2)``.

    This is the Hilbert-Schmidt norm of the first N columns with all rows kept.
    """
    _require_strict(sym)
    vals, tails = [], []
    a = abs(sym.c2)
    for n in range(2, N + 1):
        ln = math.log(n)
        w = ln * ln * n ** (-2.0 * sym.c1.real)
        s, tail, _ = _bessel_series((a * ln) ** 2)
        vals.append(w * s)
        tails.append(w * tail)
    S = math.fsum(vals)
    T = math.fsum(tails)
    value = math.sqrt(S)
    bound = (T / (2 * value) if value else math.sqrt(T)) + 8 * np.finfo(float).eps * value
    return TailBoundedSum(value, float(bound), N)


def hs_row_tail(sym: AffineSymbol, N: int, K: int) -> float:
    """Upper bound on the squared Frobenius mass of rows k >= K (first N columns)."""
    _require_strict(sym)
    a = abs(sym.c2)
    if a == 0:
        return 0.0 if K >= 1 else hs_closed_form(sym, N).value ** 2
    total = []
    for n in range(2, N + 1):
        ln = math.log(n)
        x2 = (a * ln) ** 2
        logw = 2 * math.log(ln) - 2 * sym.c1.real * ln
        k = K
        acc = []
        while True:
            logt = k * math.log(x2) - 2 * math.lgamma(k + 1) + logw
            t = math.exp(logt) if logt > -745 else 0.0
            q = x2 / (k + 1) ** 2
            if q < 0.5:
                acc.append(t / (1 - q))
                break
            acc.append(t)
            k += 1
        total.append(math.fsum(acc))
    return math.fsum(total)


def adjoint_kernel_check(sym, a, K: int = DEFAULT_K, N: int = DEFAULT_N) -> float:
    """Max coefficient gap between ``M^H k_a`` and ``k^(1)_{Phi(a)}``.

    ``k_a`` is restricted to the row grid of M.  The gap vanishes as K grows
    (affine) and is exact for translation symbols.
    """
    a = complex(a)
    if not a.real > 0.5:
        raise DomainError(f"Re(a) must exceed 1/2, got {a.real}")
    if isinstance(sym, AffineSymbol):
        M = build_affine_matrix(sym, K, N)
    elif isinstance(sym, TranslationSymbol):
        M = build_translation_matrix(sym, N)
    else:
        raise TypeError("adjoint check supports affine and translation symbols")
    k_grid = np.exp(-a.conjugate() * M.row_log)
    got = adjoint_apply(M, k_grid)
    want = kernel_deriv_truncated(sym(a), N).coeffs
    return float(np.max(np.abs(got - want)))
