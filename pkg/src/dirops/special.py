"""Zeta and log-weighted zeta sums on the real ray ``s > 1`` with rigorous tails.

``L_k(s) = sum_{n>=1} (ln n)^k n^{-s}`` is summed exactly up to a cutoff N and
the remainder is bracketed with integrals.  Beyond the inflection point the
summand is convex, which gives

    int_N^inf f - f(N)/2  <=  sum_{n>N} f(n)  <=  int_{N+1/2}^inf f,

an interval of width at most ``|f'(N)|/8``.  Both integrals have closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dirops import kernels
from dirops.errors import DomainError, NonConvergenceError

__all__ = [
    "TailBoundedSum",
    "zeta",
    "polylog_sum",
    "zeta_bounds",
    "weighted_sum_ceiling",
    "norm_lower_bound",
    "norm_upper_bound",
]

S_FLOOR = 1.0 + 1e-6
MAX_K = 12
MAX_TERMS = 1 << 27
_CHUNK = 1 << 20
_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class TailBoundedSum:
    """A value whose true counterpart lies in ``[value - tail_bound, value + tail_bound]``."""

    value: float
    tail_bound: float
    terms_used: int

    def __float__(self) -> float:
        return self.value

    def contains(self, x: float) -> bool:
        return abs(x - self.value) <= self.tail_bound


def _check_s(s: float) -> None:
    if not s > S_FLOOR:
        raise DomainError(f"s must exceed 1 + 1e-6, got {s!r}")


def _tail_integral(k: int, s: float, M: float) -> float:
    """``int_M^inf (ln x)^k x^{-s} dx`` for ``M >= 1``."""
    L = math.log(M)
    a = s - 1.0
    acc = []
    falling = 1.0  # k!/(k-j)!
    for j in range(k + 1):
        acc.append(falling * L ** (k - j) / a ** (j + 1))
        falling *= k - j
    return math.exp(-a * L) * math.fsum(acc)


def _summand(k: int, s: float, x: float) -> float:
    return math.log(x) ** k * x ** (-s)


def _slope(k: int, s: float, x: float) -> float:
    """Derivative of ``(ln x)^k x^{-s}``."""
    u = math.log(x)
    if k == 0:
        return -s * x ** (-s - 1.0)
    return x ** (-s - 1.0) * u ** (k - 1) * (k - s * u)


def _convex_from(k: int, s: float) -> float:
    """A point beyond which the summand is convex and decreasing."""
    if k == 0:
        return 1.0
    disc = k * (k + 4.0 * s * (s + 1.0))
    root = (k * (2.0 * s + 1.0) + math.sqrt(disc)) / (2.0 * s * (s + 1.0))
    return math.exp(max(root, k / s))


def _partial_sum(k: int, s: float, N: int) -> float:
    parts = []
    for lo in range(1, N + 1, _CHUNK):
        n = np.arange(lo, min(lo + _CHUNK, N + 1), dtype=np.float64)
        terms = np.power(n, -s)
        if k:
            terms = terms * np.log(n) ** k
        parts.append(kernels.fsum(terms))
    return kernels.fsum(np.array(parts, dtype=np.float64))


def _bracketed(k: int, s: float, tol: float) -> TailBoundedSum:
    # scale of the answer, from the elementary bound k!/(s-1)^k * s/(s-1)
    est = math.factorial(k) / (s - 1.0) ** k * s / (s - 1.0)
    fp_est = (k + 3) * _EPS * est
    budget = tol - fp_est
    if budget <= 0:
        raise NonConvergenceError(f"tolerance {tol:g} is below rounding level at s={s}")
    N = max(2, math.ceil(_convex_from(k, s)) + 1)
    while abs(_slope(k, s, N)) / 16.0 > budget:
        N = math.ceil(N * 1.25)
        if N > MAX_TERMS:
            raise NonConvergenceError(
                f"L_{k}({s}) needs more than {MAX_TERMS} terms for tolerance {tol:g}"
            )
    partial = _partial_sum(k, s, N)
    lower = _tail_integral(k, s, N) - 0.5 * _summand(k, s, N)
    upper = _tail_integral(k, s, N + 0.5)
    value = partial + 0.5 * (lower + upper)
    fp = (k + 3) * _EPS * (partial + upper)
    bound = abs(_slope(k, s, N)) / 16.0 + fp
    if bound > tol:
        raise NonConvergenceError(f"tail bound {bound:g} exceeds tolerance {tol:g}")
    return TailBoundedSum(value, bound, N)


def zeta(s: float, tol: float = 1e-13) -> TailBoundedSum:
    """Riemann zeta for real ``s > 1 + 1e-6`` with absolute error at most ``tol``."""
    s = float(s)
    _check_s(s)
    return _bracketed(0, s, tol)


def polylog_sum(k: int, s: float, tol: float = 1e-13) -> TailBoundedSum:
    """``sum_n (ln n)^k n^{-s}``.

    For ``k >= 1`` the tolerance is relative to ``max(1, k!/(s-1)^{k+1})``, the
    size of the tail integral from 1; for ``k = 0`` it is absolute.
    """
    s = float(s)
    _check_s(s)
    if not (isinstance(k, (int, np.integer)) and 0 <= k <= MAX_K):
        raise DomainError(f"k must be an integer in [0, {MAX_K}], got {k!r}")
    k = int(k)
    scale = 1.0 if k == 0 else max(1.0, math.factorial(k) / (s - 1.0) ** (k + 1))
    return _bracketed(k, s, tol * scale)


def zeta_bounds(s: float) -> tuple[float, float]:
    """Elementary enclosure ``1/(s-1) <= zeta(s) <= s/(s-1)``."""
    s = float(s)
    _check_s(s)
    return 1.0 / (s - 1.0), s / (s - 1.0)


def weighted_sum_ceiling(k: int, s: float) -> float:
    """``k!/(s-1)^k * zeta(s)``, an upper bound for ``sum (ln n)^k n^{-s}``."""
    return math.factorial(k) / (float(s) - 1.0) ** k * zeta(s).value


def norm_lower_bound(c1_re: float) -> float:
    """``2/(2 Re c1 - 1)^3``."""
    c1_re = float(c1_re)
    if not c1_re > 0.5:
        raise DomainError(f"Re(c1) must exceed 1/2, got {c1_re!r}")
    return 2.0 / (2.0 * c1_re - 1.0) ** 3


def norm_upper_bound(c1_re: float) -> float:
    """``2/(2 Re c1 - 1)^2 * zeta(2 Re c1)``."""
    c1_re = float(c1_re)
    if not c1_re > 0.5:
        raise DomainError(f"Re(c1) must exceed 1/2, got {c1_re!r}")
    return 2.0 / (2.0 * c1_re - 1.0) ** 2 * zeta(2.0 * c1_re).value
