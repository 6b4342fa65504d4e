"""Pure numpy/stdlib versions of the compiled kernels.

Every reduction here is correctly rounded via :func:`math.fsum`.  The
compiled ``fsum`` matches bit for bit; the compiled complex reductions are
Neumaier-compensated and agree to a few ulps of ``sum |terms|``.
"""

from __future__ import annotations

import math

import numpy as np


def fsum(x) -> float:
    return math.fsum(np.asarray(x, dtype=np.float64))


def csum(z) -> complex:
    z = np.asarray(z, dtype=np.complex128)
    return complex(math.fsum(z.real), math.fsum(z.imag))


def cdot(a, b, conj_b: bool = True) -> complex:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("length mismatch")
    if conj_b:
        b = np.conj(b)
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag
    re = math.fsum(np.concatenate([ar * br, -(ai * bi)]))
    im = math.fsum(np.concatenate([ar * bi, ai * br]))
    return complex(re, im)


def cmatvec(A, x) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    if A.shape[1] != x.shape[0]:
        raise ValueError("dimension mismatch")
    return np.array([cdot(row, x, conj_b=False) for row in A], dtype=np.complex128)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Brent-Luk tournament: n-1 rounds of disjoint pairs covering all (p, q)."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_singular_values(A, tol: float = 1e-13, max_sweeps: int = 80):
    A = np.asarray(A, dtype=np.complex128)
    amax = float(np.max(np.abs(A))) if A.size else 0.0
    e = math.frexp(amax)[1] if amax > 0 else 0
    # exact power-of-two scaling keeps squared column norms in range
    W = np.array(np.ldexp(1.0, -e) * A.T, order="C")
    n = W.shape[0]
    rounds = _round_robin(n) if n > 1 else []
    off = 0.0
    sweep = 0
    tiny = 1e-300
    eps = np.finfo(np.float64).eps
    floor = 16.0 * eps * eps * float(np.sum(W.real**2 + W.imag**2))
    while sweep < max_sweeps:
        sweep += 1
        off = 0.0
        for p, q in rounds:
            X, Y = W[p], W[q]
            alpha = np.sum(X.real**2 + X.imag**2, axis=1)
            beta = np.sum(Y.real**2 + Y.imag**2, axis=1)
            gam = np.sum(np.conj(X) * Y, axis=1)
            g = np.abs(gam)
            scale = np.sqrt(alpha) * np.sqrt(beta)
            act = (alpha >= tiny) & (beta >= tiny) & (g > tol * scale) & (g > floor)
            if not act.any():
                continue
            off = max(off, float(np.max(g[act] / scale[act])))
            p, q, alpha, beta, gam, g = p[act], q[act], alpha[act], beta[act], gam[act], g[act]
            zeta = (beta - alpha) / (2.0 * g)
            # hypot avoids overflow of zeta**2 for nearly decoupled pairs
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t**2)
            s = c * t
            X = W[p]
            Yt = W[q] * (np.conj(gam) / g)[:, None]
            W[p] = c[:, None] * X - s[:, None] * Yt
            W[q] = s[:, None] * X + c[:, None] * Yt
        if off == 0.0:
            break
    sig = np.ldexp(np.sqrt(np.sum(W.real**2 + W.imag**2, axis=1)), e)
    return np.sort(sig)[::-1], sweep, off
