"""Dirichlet polynomials, their H^2 geometry, and reproducing kernels.

A Dirichlet polynomial is ``P(s) = sum_{n=1}^N a_n n^{-s}``.  The monomials
``e_n(s) = n^{-s}`` form an orthonormal basis of H^2, so inner products and
norms are plain coefficient sums.  All logarithms are natural.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from dirops import kernels
from dirops.errors import DomainError

__all__ = [
    "DirichletPolynomial",
    "HalfPlanePoint",
    "basis",
    "eval_poly",
    "derivative",
    "inner_product",
    "h2_norm",
    "kernel_truncated",
    "kernel_deriv_truncated",
    "kernel_norms",
    "lp_identity_check",
    "lp_sigma_moment",
]


class HalfPlanePoint(NamedTuple):
    """The point ``sigma + i t``."""

    sigma: float
    t: float = 0.0

    def __complex__(self) -> complex:
        return complex(self.sigma, self.t)

    @classmethod
    def of(cls, s) -> "HalfPlanePoint":
        z = complex(s)
        return cls(z.real, z.imag)


def _as_complex(s) -> complex:
    return complex(s)


def _require_half_plane(a: complex) -> None:
    if not a.real > 0.5:
        raise DomainError(f"Re(a) must exceed 1/2, got {a.real!r}")


class DirichletPolynomial:
    """Finite Dirichlet series with coefficients ``a_1..a_N`` (immutable)."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.complex128).reshape(-1)
        if c.size < 1:
            raise ValueError("a Dirichlet polynomial needs at least one coefficient")
        c.setflags(write=False)
        self._coeffs = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def N(self) -> int:
        return int(self._coeffs.size)

    def __len__(self) -> int:
        return self.N

    def __getitem__(self, n: int) -> complex:
        """Coefficient of ``n^{-s}`` (1-based; zero past the end)."""
        if n < 1:
            raise IndexError("coefficients are indexed from n = 1")
        return complex(self._coeffs[n - 1]) if n <= self.N else 0j

    def __call__(self, s) -> complex:
        return eval_poly(self, s)

    def __add__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        a, b = _padded(self, other)
        return DirichletPolynomial(a + b)

    def __sub__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        a, b = _padded(self, other)
        return DirichletPolynomial(a - b)

    def __mul__(self, scalar) -> "DirichletPolynomial":
        return DirichletPolynomial(self._coeffs * complex(scalar))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        a, b = _padded(self, other)
        return bool(np.array_equal(a, b))

    def __hash__(self):
        return hash(tuple(np.trim_zeros(self._coeffs, "b")))

    def __repr__(self) -> str:
        nz = [f"a_{n}={c:g}" for n, c in enumerate(self._coeffs, start=1) if c != 0]
        return f"DirichletPolynomial(N={self.N}, {', '.join(nz) or '0'})"

    def padded(self, N: int) -> np.ndarray:
        if N < self.N:
            raise ValueError(f"cannot pad length {self.N} down to {N}")
        out = np.zeros(N, dtype=np.complex128)
        out[: self.N] = self._coeffs
        return out

    @classmethod
    def from_dict(cls, terms: dict[int, complex], N: int | None = None) -> "DirichletPolynomial":
        top = max(terms) if terms else 1
        c = np.zeros(max(top, N or 1), dtype=np.complex128)
        for n, v in terms.items():
            c[n - 1] = v
        return cls(c)


def _padded(p: DirichletPolynomial, q: DirichletPolynomial) -> tuple[np.ndarray, np.ndarray]:
    N = max(p.N, q.N)
    return p.padded(N), q.padded(N)


def basis(n: int, N: int | None = None) -> DirichletPolynomial:
    """The unit vector ``e_n(s) = n^{-s}``, optionally padded to length N."""
    return DirichletPolynomial.from_dict({n: 1.0}, N)


def _powers(N: int, s: complex) -> np.ndarray:
    """``n^{-s}`` for n = 1..N."""
    logn = np.log(np.arange(1, N + 1, dtype=np.float64))
    return np.exp(-s * logn)


def eval_poly(P: DirichletPolynomial, s) -> complex:
    """Evaluate ``P(s)``; ascending-n compensated summation."""
    s = _as_complex(s)
    return kernels.cdot(P.coeffs, _powers(P.N, s), False)


def derivative(P: DirichletPolynomial) -> DirichletPolynomial:
    logn = np.log(np.arange(1, P.N + 1, dtype=np.float64))
    return DirichletPolynomial(-P.coeffs * logn)


def inner_product(P: DirichletPolynomial, Q: DirichletPolynomial) -> complex:
    """``<P, Q> = sum a_n conj(b_n)``; the shorter input is zero-padded."""
    a, b = _padded(P, Q)
    return kernels.cdot(a, b, True)


def h2_norm(P: DirichletPolynomial) -> float:
    c = P.coeffs
    return float(np.sqrt(kernels.fsum(c.real**2 + c.imag**2)))


def kernel_truncated(a, N: int) -> DirichletPolynomial:
    """First N coefficients ``n^{-conj(a)}`` of the point-evaluation kernel at ``a``."""
    a = _as_complex(a)
    _require_half_plane(a)
    return DirichletPolynomial(_powers(N, a.conjugate()))


def kernel_deriv_truncated(a, N: int) -> DirichletPolynomial:
    """First N coefficients ``-n^{-conj(a)} ln n`` of the kernel reproducing ``f'(a)``."""
    a = _as_complex(a)
    _require_half_plane(a)
    logn = np.log(np.arange(1, N + 1, dtype=np.float64))
    return DirichletPolynomial(-_powers(N, a.conjugate()) * logn)


def kernel_norms(a) -> tuple[float, float]:
    """``(||k_a||, ||k_a^(1)||)`` from zeta(2 Re a) and sum (ln n)^2 n^{-2 Re a}."""
    from dirops.special import polylog_sum, zeta

    a = _as_complex(a)
    _require_half_plane(a)
    x = 2.0 * a.real
    return float(np.sqrt(zeta(x).value)), float(np.sqrt(polylog_sum(2, x).value))


def lp_sigma_moment(log_n: float) -> float:
    """``int_0^inf sigma n^{-2 sigma} d sigma`` for ``ln n = log_n > 0``."""
    return 1.0 / (4.0 * log_n * log_n)


def lp_identity_check(P: DirichletPolynomial) -> float:
    """Relative error of the Littlewood-Paley norm identity on ``P``.

    The right side is ``|a_1|^2 + 4 sum_{n>=2} |a_n|^2 (ln n)^2 m(n)`` where
    ``m(n)`` is the sigma-moment of ``n^{-2 sigma}``: the long-run mean of
    ``|P'(sigma+it)|^2`` is ``sum |a_n|^2 (ln n)^2 n^{-2 sigma}`` and the
    windowed average over ``[-T, T]`` contributes the extra factor 2.
    """
    c = P.coeffs
    mod2 = c.real**2 + c.imag**2
    lhs = kernels.fsum(mod2)
    terms = [mod2[0]]
    for n in range(2, P.N + 1):
        ln = np.log(n)
        terms.append(4.0 * mod2[n - 1] * ln * ln * lp_sigma_moment(ln))
    rhs = kernels.fsum(np.array(terms, dtype=np.float64))
    if lhs == 0.0:
        return 0.0 if rhs == 0.0 else float("inf")
    return abs(rhs - lhs) / lhs
