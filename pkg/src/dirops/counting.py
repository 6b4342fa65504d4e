"""Mean counting function of affine symbols.

For ``Phi(s) = c1 + c2 2^{-s}`` the equation ``Phi(s) = w`` means
``2^{-s} = z = (w - c1)/c2``, whose solutions

    s_m = -(Log z + 2 pi i m) / ln 2

share the real part ``-ln|z|/ln 2`` and are spaced ``2 pi / ln 2`` apart
vertically.  Averaging ``Re s`` over preimages in ``|Im s| <= T`` therefore
gives ``max(0, ln(|c2|/|w - c1|))`` in the limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from dirops import kernels
from dirops._parallel import ordered_map
from dirops.errors import DomainError
from dirops.series import HalfPlanePoint
from dirops.symbols import AffineSymbol

__all__ = [
    "CountingSample",
    "counting_closed_affine",
    "counting_oracle",
    "counting_majorant",
    "compactness_ratio",
    "divergence_demo",
    "preimage_real_part",
    "scan_grid",
    "SCAN_HEADER",
]

SCAN_HEADER = ("re_w", "im_w", "m_closed", "m_oracle", "abs_err", "majorant", "ratio")
_TWO_PI = 2.0 * math.pi
_LN2 = math.log(2.0)


def _excluded(sym: AffineSymbol, w: complex) -> None:
    if w == sym.c1:
        raise DomainError(f"w = Phi(+inf) = {sym.c1} is excluded")


def counting_closed_affine(sym: AffineSymbol, w) -> float:
    """``max(0, ln(|c2| / |w - c1|))``."""
    w = complex(w)
    _excluded(sym, w)
    if sym.c2 == 0:
        return 0.0
    return max(0.0, math.log(abs(sym.c2)) - math.log(abs(w - sym.c1)))


def preimage_real_part(sym: AffineSymbol, w) -> float | None:
    """Common real part of the preimages of w in ``Re s > 0``, or None if there are none."""
    w = complex(w)
    _excluded(sym, w)
    if sym.c2 == 0:
        return None
    r = abs(w - sym.c1) / abs(sym.c2)
    if r >= 1.0:
        return None
    return -math.log(r) / _LN2


def counting_oracle(sym: AffineSymbol, w, T: float, sigma_cut: float | None = None) -> float:
    """``(pi/T) * sum Re(s)`` over preimages with ``|Im s| <= T`` and ``Re s > sigma_cut``.

    The preimages are enumerated one by one.  ``sigma_cut`` defaults to half
    the preimage real part; it only matters when it would exclude them all,
    which is rejected.
    """
    w = complex(w)
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    re0 = preimage_real_part(sym, w)
    if re0 is None:
        return 0.0
    if sigma_cut is None:
        sigma_cut = 0.5 * re0
    if not 0 < sigma_cut < re0:
        raise DomainError(f"sigma_cut must lie in (0, {re0}), got {sigma_cut!r}")
    arg = cmath.phase((w - sym.c1) / sym.c2)
    # Im s_m = -(arg + 2 pi m)/ln 2
    reach = T * _LN2
    m_lo = math.ceil((-reach - arg) / _TWO_PI)
    m_hi = math.floor((reach - arg) / _TWO_PI)
    parts = [re0 for m in range(m_lo, m_hi + 1) if abs(arg + _TWO_PI * m) / _LN2 <= T]
    if not parts:
        return 0.0
    return math.pi / T * kernels.fsum(np.array(parts, dtype=np.float64))


def counting_majorant(w, v) -> float:
    """``ln |(w + conj(v) - 1) / (w - v)|``; vanishes on ``Re w = 1/2``."""
    w, v = complex(w), complex(v)
    if w == v:
        raise DomainError("majorant is undefined at w = v")
    if w.real < 0.5 or not v.real > 0.5:
        raise DomainError(f"need Re(w) >= 1/2 and Re(v) > 1/2, got w={w}, v={v}")
    return math.log(abs(w + v.conjugate() - 1.0)) - math.log(abs(w - v))


def compactness_ratio(sym: AffineSymbol, w) -> float:
    """``M(w) / (Re w - 1/2)^3``."""
    w = complex(w)
    if not w.real > 0.5:
        raise DomainError(f"Re(w) must exceed 1/2, got {w.real!r}")
    return counting_closed_affine(sym, w) / (w.real - 0.5) ** 3


@dataclass(frozen=True)
class CountingSample:
    w: HalfPlanePoint
    m_closed: float
    m_oracle: float
    majorant: float
    compactness_ratio: float

    @property
    def abs_err(self) -> float:
        return abs(self.m_oracle - self.m_closed)

    def row(self) -> tuple:
        return (self.w.sigma, self.w.t, self.m_closed, self.m_oracle, self.abs_err,
                self.majorant, self.compactness_ratio)


def sample(sym: AffineSymbol, w, T: float) -> CountingSample:
    w = complex(w)
    return CountingSample(
        HalfPlanePoint.of(w),
        counting_closed_affine(sym, w),
        counting_oracle(sym, w, T),
        counting_majorant(w, sym.c1),
        compactness_ratio(sym, w),
    )


def scan_grid(sym: AffineSymbol, points, T: float, workers: int | None = None) -> list[CountingSample]:
    """Evaluate every grid point; output follows the input order.

    Points must satisfy ``Re w > 1/2`` and differ from ``c1``; this is checked
    before anything is computed.
    """
    points = [complex(p) for p in points]
    for p in points:
        if not p.real > 0.5:
            raise DomainError(f"grid point {p} has Re(w) <= 1/2")
        _excluded(sym, p)
    return ordered_map(lambda p: sample(sym, p, T), points, workers)


def _geometric_cuts(lo: float, hi: float, ratio: float = 8.0) -> list[float]:
    cuts = [lo]
    while cuts[-1] * ratio < hi:
        cuts.append(cuts[-1] * ratio)
    cuts.append(hi)
    return cuts


def _quad_pieces(f, cuts, rtol: float) -> float:
    vals = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        v, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=rtol, limit=200)
        vals.append(v)
    return math.fsum(vals)


def divergence_demo(delta: float, epsilon: float, rtol: float = 1e-8) -> float:
    """``int_{-1}^{1} int_delta^epsilon sigma / (sigma^2 + t^2)^2 dsigma dt``.

    Nested adaptive quadrature; both ranges are cut geometrically so that the
    peak of width ``delta`` near ``t = 0`` is resolved.  The integrand is even
    in t.
    """
    delta, epsilon = float(delta), float(epsilon)
    if not 0 < delta <= epsilon:
        raise DomainError(f"need 0 < delta <= epsilon, got delta={delta}, epsilon={epsilon}")
    if delta == epsilon:
        return 0.0
    sig_cuts = _geometric_cuts(delta, epsilon)

    def inner(t: float) -> float:
        return _quad_pieces(lambda s: s / (s * s + t * t) ** 2, sig_cuts, rtol)

    t_cuts = [0.0] + _geometric_cuts(delta / 8.0, 1.0)
    return 2.0 * _quad_pieces(inner, t_cuts, rtol)
