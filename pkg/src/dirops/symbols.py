"""Symbols Phi generating composition-differentiation operators.

Every admissible symbol has the shape ``Phi(s) = c0*s + phi(s)`` with a
nonnegative integer characteristic ``c0`` and a Dirichlet series ``phi``.
Three concrete families are modelled:

* :class:`AffineSymbol`      ``Phi(s) = c1 + c2 * 2^{-s}``      (c0 = 0)
* :class:`TranslationSymbol` ``Phi(s) = s + c1``                (c0 = 1)
* :class:`GeneralSymbol`     ``Phi(s) = c0*s + sum c_n n^{-s}`` (finite phi)

Membership of a general symbol in the class G_0 (or G_{>=1}) cannot be decided
from finitely many samples; :func:`classify_sampled` only reports evidence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from dirops.series import DirichletPolynomial, eval_poly

__all__ = [
    "AffineSymbol",
    "TranslationSymbol",
    "GeneralSymbol",
    "AffineVerdict",
    "ClassificationEvidence",
    "HalfPlaneVerdict",
    "phi_at_infinity",
    "validate_affine",
    "classify_sampled",
    "strict_halfplane_check",
    "parse_symbol",
    "format_symbol",
]

BOUNDARY_TOL = 1e-12
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class GeneralSymbol:
    c0: int
    phi: DirichletPolynomial

    def __post_init__(self):
        if int(self.c0) != self.c0 or self.c0 < 0:
            raise ValueError(f"characteristic must be a nonnegative integer, got {self.c0!r}")

    def __call__(self, s) -> complex:
        s = complex(s)
        return self.c0 * s + eval_poly(self.phi, s)

    def evaluate(self, s: np.ndarray) -> np.ndarray:
        """Vectorised evaluation on an array of points."""
        s = np.asarray(s, dtype=np.complex128)
        logn = np.log(np.arange(1, self.phi.N + 1, dtype=np.float64))
        vals = np.exp(-np.multiply.outer(s, logn)) @ self.phi.coeffs
        return self.c0 * s + vals


@dataclass(frozen=True)
class AffineSymbol:
    c1: complex
    c2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "c2", complex(self.c2))

    @property
    def c0(self) -> int:
        return 0

    @property
    def bounded(self) -> bool:
        """``Re c1 > 1/2 + |c2|``."""
        return self.c1.real > 0.5 + abs(self.c2)

    @property
    def is_constant(self) -> bool:
        return self.c2 == 0

    def __call__(self, s) -> complex:
        return self.c1 + self.c2 * 2.0 ** (-complex(s))

    def evaluate(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.complex128)
        return self.c1 + self.c2 * np.exp(-s * _LN2)

    def as_general(self) -> GeneralSymbol:
        return GeneralSymbol(0, DirichletPolynomial([self.c1, self.c2]))

    def infimum_real_part(self) -> float:
        """``inf Re Phi`` over ``Re s > 0``, which is ``Re c1 - |c2|``."""
        return self.c1.real - abs(self.c2)


@dataclass(frozen=True)
class TranslationSymbol:
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c1", complex(self.c1))

    @property
    def c0(self) -> int:
        return 1

    def __call__(self, s) -> complex:
        return complex(s) + self.c1

    def evaluate(self, s: np.ndarray) -> np.ndarray:
        return np.asarray(s, dtype=np.complex128) + self.c1

    def as_general(self) -> GeneralSymbol:
        return GeneralSymbol(1, DirichletPolynomial([self.c1]))


Symbol = GeneralSymbol | AffineSymbol | TranslationSymbol


def phi_at_infinity(sym: Symbol) -> complex:
    """``Phi(+inf)``, defined for characteristic-zero symbols only."""
    if sym.c0 != 0:
        raise ValueError("Phi(+inf) is undefined for symbols of positive characteristic")
    if isinstance(sym, AffineSymbol):
        return sym.c1
    return sym.phi[1]


class AffineVerdict(enum.Enum):
    STRICT_INTERIOR = "strict-interior"
    BOUNDARY = "boundary"
    INVALID = "invalid"


def validate_affine(c1, c2) -> AffineVerdict:
    margin = complex(c1).real - 0.5 - abs(complex(c2))
    if abs(margin) <= BOUNDARY_TOL:
        return AffineVerdict.BOUNDARY
    return AffineVerdict.STRICT_INTERIOR if margin > 0 else AffineVerdict.INVALID


def _sample_points(sample_count: int, seed: int) -> np.ndarray:
    # sigma log-uniform on [1e-3, 20], t uniform on [-50, 50]
    rng = np.random.default_rng(seed)
    sigma = np.exp(rng.uniform(math.log(1e-3), math.log(20.0), sample_count))
    t = rng.uniform(-50.0, 50.0, sample_count)
    return sigma + 1j * t


@dataclass(frozen=True)
class ClassificationEvidence:
    """Sampled evidence about the class of a symbol, not a proof.

    ``label`` is ``"G0"``, ``"G>=1"`` or ``"counterexample"``; in the last case
    ``witness`` is a sample point whose image leaves the required half-plane.
    """

    label: str
    c0: int
    samples: int
    seed: int
    min_real_part: float
    witness: complex | None = None

    def as_dict(self) -> dict:
        w = self.witness
        return {
            "label": self.label,
            "c0": self.c0,
            "samples": self.samples,
            "seed": self.seed,
            "min_real_part": self.min_real_part,
            "witness": None if w is None else [w.real, w.imag],
            "note": "sampled evidence, not a proof",
        }


def classify_sampled(sym: Symbol, sample_count: int, seed: int) -> ClassificationEvidence:
    """Check ``Phi(C_0) ⊂ C_{1/2}`` (c0 = 0) or ``Phi(C_0) ⊂ C_0`` (c0 >= 1) on samples."""
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    pts = _sample_points(sample_count, seed)
    re = sym.evaluate(pts).real
    threshold = 0.5 if sym.c0 == 0 else 0.0
    i = int(np.argmin(re))
    if re[i] > threshold:
        label = "G0" if sym.c0 == 0 else "G>=1"
        return ClassificationEvidence(label, sym.c0, sample_count, seed, float(re[i]))
    return ClassificationEvidence(
        "counterexample", sym.c0, sample_count, seed, float(re[i]), complex(pts[i])
    )


@dataclass(frozen=True)
class HalfPlaneVerdict:
    epsilon: float
    sampled_pass: bool
    sampled_min_real_part: float
    exact_pass: bool | None = None
    exact_infimum: float | None = None

    @property
    def passed(self) -> bool:
        return self.sampled_pass if self.exact_pass is None else self.exact_pass


def strict_halfplane_check(sym: Symbol, epsilon: float, sample_count: int = 4096,
                           seed: int = 0) -> HalfPlaneVerdict:
    """Does Phi map ``C_0`` into ``C_{1/2 + epsilon}``?

    Affine symbols also get the exact answer from ``inf Re Phi = Re c1 - |c2|``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pts = _sample_points(sample_count, seed)
    smin = float(np.min(sym.evaluate(pts).real))
    target = 0.5 + epsilon
    exact = inf = None
    if isinstance(sym, AffineSymbol):
        inf = sym.infimum_real_part()
        exact = inf >= target
    return HalfPlaneVerdict(epsilon, smin >= target, smin, exact, inf)


def _pair(a: str, b: str) -> complex:
    return complex(float(a), float(b))


def parse_symbol(text: str) -> Symbol:
    """Parse ``affine:..``, ``translate:..`` or ``general:..`` literals."""
    kind, _, body = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "affine":
            vals = body.split(",")
            if len(vals) != 4:
                raise ValueError("affine needs c1_re,c1_im,c2_re,c2_im")
            return AffineSymbol(_pair(*vals[:2]), _pair(*vals[2:]))
        if kind == "translate":
            vals = body.split(",")
            if len(vals) != 2:
                raise ValueError("translate needs c1_re,c1_im")
            return TranslationSymbol(_pair(*vals))
        if kind == "general":
            head, *pairs = body.split(";")
            coeffs = []
            for p in pairs:
                vals = p.split(",")
                if len(vals) != 2:
                    raise ValueError(f"bad coefficient {p!r}")
                coeffs.append(_pair(*vals))
            if not coeffs:
                raise ValueError("general needs at least one coefficient")
            return GeneralSymbol(int(head), DirichletPolynomial(coeffs))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid symbol literal {text!r}: {exc}") from None
    raise ValueError(f"unknown symbol kind {kind!r} in {text!r}")


def format_symbol(sym: Symbol) -> str:
    if isinstance(sym, AffineSymbol):
        return f"affine:{sym.c1.real!r},{sym.c1.imag!r},{sym.c2.real!r},{sym.c2.imag!r}"
    if isinstance(sym, TranslationSymbol):
        return f"translate:{sym.c1.real!r},{sym.c1.imag!r}"
    body = ";".join(f"{float(c.real)!r},{float(c.imag)!r}" for c in sym.phi.coeffs)
    return f"general:{sym.c0};{body}"
