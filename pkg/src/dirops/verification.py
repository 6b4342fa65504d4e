"""Two-sided check of the change-of-variables formula for affine symbols.

The left side is ``||f' o Phi||^2`` from the operator matrix.  The right side is

    |f'(c1)|^2 + (2/pi) int_{|w - c1| < |c2|} |f''(w)|^2 ln(|c2|/|w - c1|) dA(w),

the area integral over the half-plane collapsing to the disk where the mean
counting function is nonzero.  With ``w = c1 + |c2| e^{-u} e^{i theta}`` the
measure ``r ln(|c2|/r) dr`` becomes ``|c2|^2 u e^{-2u} du`` and the logarithmic
singularity at the centre disappears; the integral is then a tensor rule
(Gauss-Legendre in u, trapezoid in theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dirops import kernels
from dirops.errors import DomainError, NonConvergenceError
from dirops.matrix import apply_rows, build_affine_matrix, hs_row_tail
from dirops.series import DirichletPolynomial, derivative, eval_poly, h2_norm
from dirops.special import TailBoundedSum
from dirops.symbols import AffineSymbol

__all__ = ["QuadratureSpec", "CovReport", "cov_lhs", "cov_rhs", "cov_check"]

DEFAULT_K = 80
DEFAULT_BUDGET = 1e-6
_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class QuadratureSpec:
    radial_nodes: int = 128
    angular_nodes: int = 256
    u_cutoff: float = 40.0

    def __post_init__(self):
        if self.radial_nodes < 8 or self.angular_nodes < 8:
            raise ValueError("radial_nodes and angular_nodes must be at least 8")
        if not self.u_cutoff >= 20:
            raise ValueError("u_cutoff must be at least 20")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(max(8, self.radial_nodes // 2), max(8, self.angular_nodes // 2),
                              self.u_cutoff)

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.radial_nodes, 2 * self.angular_nodes, self.u_cutoff)


def cov_lhs(sym: AffineSymbol, P: DirichletPolynomial, K: int = DEFAULT_K) -> TailBoundedSum:
    """``||D_Phi P||^2`` from the K-row matrix; the bound covers the dropped rows."""
    N = max(P.N, 2)
    M = build_affine_matrix(sym, K, N)
    b = apply_rows(M, DirichletPolynomial(P.padded(N)))
    value = kernels.fsum(np.ascontiguousarray(b.real**2 + b.imag**2))
    # Cauchy-Schwarz on the missing rows, plus the cross term 2|<head, tail>|
    tail_sq = hs_row_tail(sym, N, K) * h2_norm(P) ** 2
    bound = tail_sq + 2.0 * math.sqrt(value * tail_sq) + 4 * N * _EPS * value
    return TailBoundedSum(value, bound, K)


def _second_derivative_weights(P: DirichletPolynomial) -> tuple[np.ndarray, np.ndarray]:
    logn = np.log(np.arange(1, P.N + 1, dtype=np.float64))
    return logn, P.coeffs * logn * logn


def _disk_integral(sym: AffineSymbol, P: DirichletPolynomial, radial: int, angular: int,
                   U: float) -> float:
    rho = abs(sym.c2)
    if rho == 0:
        return 0.0
    logn, w2 = _second_derivative_weights(P)
    x, wx = np.polynomial.legendre.leggauss(radial)
    u = 0.5 * U * (x + 1.0)
    wu = 0.5 * U * wx * u * np.exp(-2.0 * u)
    theta = _TWO_PI_GRID(angular)
    pts = sym.c1 + rho * np.multiply.outer(np.exp(-u), np.exp(1j * theta))
    vals = np.exp(-np.multiply.outer(pts, logn)) @ w2  # P''(w)
    radial = (vals.real**2 + vals.imag**2).mean(axis=1) * 2.0 * math.pi
    total = kernels.fsum(np.ascontiguousarray(radial * wu))
    return (2.0 / math.pi) * rho * rho * total


def _TWO_PI_GRID(n: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(n) / n


def _cutoff_tail(sym: AffineSymbol, P: DirichletPolynomial, U: float) -> float:
    """Bound on the dropped ``u > U`` part: ``sup|P''|^2 * int_U^inf u e^{-2u} du``."""
    rho = abs(sym.c2)
    logn, w2 = _second_derivative_weights(P)
    sup = float(np.sum(np.abs(w2) * np.exp(-(sym.c1.real - rho) * logn)))
    tail = (2 * U + 1) * math.exp(-2 * U) / 4
    return (2.0 / math.pi) * rho * rho * sup * sup * tail


def cov_rhs(sym: AffineSymbol, P: DirichletPolynomial,
            quad: QuadratureSpec = QuadratureSpec()) -> TailBoundedSum:
    """Right side of the formula; the bound compares against a half-resolution rule."""
    if not sym.bounded:
        raise DomainError("symbol must satisfy Re c1 > 1/2 + |c2|")
    point = abs(eval_poly(derivative(P), sym.c1)) ** 2
    U = quad.u_cutoff
    full = _disk_integral(sym, P, quad.radial_nodes, quad.angular_nodes, U)
    # the comparison rule always has half the nodes, even below the public minimum
    half = _disk_integral(sym, P, quad.radial_nodes // 2, quad.angular_nodes // 2, U)
    value = point + full
    err = max(abs(full - half), 64 * _EPS * abs(value)) + _cutoff_tail(sym, P, quad.u_cutoff)
    return TailBoundedSum(value, err, quad.radial_nodes * quad.angular_nodes)


@dataclass(frozen=True)
class CovReport:
    lhs: float
    rhs: float
    rel_err: float
    K: int
    radial_nodes: int
    angular_nodes: int
    tail_budget: float
    lhs_bound: float = 0.0
    rhs_error: float = 0.0

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_err": self.rel_err,
            "K": self.K,
            "radial_nodes": self.radial_nodes,
            "angular_nodes": self.angular_nodes,
            "tail_budget": self.tail_budget,
        }


def cov_check(sym: AffineSymbol, P: DirichletPolynomial, K: int = DEFAULT_K,
              quad: QuadratureSpec = QuadratureSpec(),
              tail_budget: float = DEFAULT_BUDGET) -> CovReport:
    """Relative gap between the two sides.

    Each side must meet ``tail_budget`` (relative to its size) or a
    :class:`NonConvergenceError` names the side that did not.
    """
    lhs = cov_lhs(sym, P, K)
    rhs = cov_rhs(sym, P, quad)
    if lhs.tail_bound > tail_budget * max(lhs.value, 1e-30):
        raise NonConvergenceError(
            f"lhs: row tail {lhs.tail_bound:.3g} exceeds budget at K={K}"
        )
    if rhs.tail_bound > tail_budget * max(rhs.value, 1e-30):
        raise NonConvergenceError(
            f"rhs: quadrature error estimate {rhs.tail_bound:.3g} exceeds budget "
            f"({quad.radial_nodes} x {quad.angular_nodes} nodes)"
        )
    rel = abs(lhs.value - rhs.value) / max(lhs.value, 1e-30)
    if lhs.value == 0.0 and rhs.value == 0.0:
        rel = 0.0
    return CovReport(lhs.value, rhs.value, rel, K, quad.radial_nodes, quad.angular_nodes,
                     tail_budget, lhs.tail_bound, rhs.tail_bound)
