"""Validated qubit states: pure amplitude pairs, density operators, and the
(|alpha|^2, theta) and (W1, W2) parameterizations used throughout."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .errors import (
    InvalidWeights,
    NonHermitianInput,
    NotNormalized,
    NotPositiveSemidefinite,
    OutOfRange,
)

NORM_TOL = 1e-12
TRACE_TOL = 1e-12

UP = np.array([1.0, 0.0], dtype=np.complex128)
DOWN = np.array([0.0, 1.0], dtype=np.complex128)


@dataclass(frozen=True)
class QubitPureState:
    """``alpha |up> + beta |down>`` with ``|alpha|^2 + |beta|^2 = 1``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if not math.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    @property
    def alpha_sq(self) -> float:
        return abs(self.alpha) ** 2

    def planar_form(self) -> PlanarAngleForm:
        """Recover ``(|alpha|^2, theta)``.

        ``theta`` is the angle between alpha and beta viewed as vectors in the
        complex plane. It is reported as 0 when either amplitude vanishes.
        """
        overlap = self.alpha.conjugate() * self.beta
        if self.alpha == 0 or self.beta == 0:
            theta = 0.0
        else:
            theta = math.atan2(abs(overlap.imag), overlap.real)
        return PlanarAngleForm(min(1.0, self.alpha_sq), theta)


@dataclass(frozen=True)
class PlanarAngleForm:
    alpha_sq: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.alpha_sq <= 1.0:
            raise OutOfRange(f"alpha_sq={self.alpha_sq!r} outside [0, 1]")
        if not 0.0 <= self.theta <= math.pi:
            raise OutOfRange(f"theta={self.theta!r} outside [0, pi]")


@dataclass(frozen=True)
class DiagonalMixture:
    """Incoherent mixture ``w1 |up><up| + w2 |down><down|``."""

    w1: float
    w2: float

    def __post_init__(self):
        if not (self.w1 >= 0.0 and self.w2 >= 0.0) or abs(self.w1 + self.w2 - 1.0) > NORM_TOL:
            raise InvalidWeights(f"weights ({self.w1!r}, {self.w2!r}) are not a probability pair")

    @classmethod
    def from_w1(cls, w1: float) -> DiagonalMixture:
        return cls(w1, 1.0 - w1)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix of size 2 or 4.

    The wrapped array is stored read-only.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(qmat.as_matrix(self.matrix), copy=True)
        herm = qmat.hermiticity_error(m)
        if herm > qmat.HERMITIAN_TOL:
            raise NonHermitianInput(f"density operator not Hermitian (error {herm:.3e})")
        tr = qmat.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotNormalized(f"density operator trace is {tr!r}, expected 1")
        vals = qmat.hermitian_eigen(m).eigenvalues
        if vals[0] < -qmat.PSD_CLAMP_TOL:
            raise NotPositiveSemidefinite(f"density operator has eigenvalue {vals[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, matrix={np.array2string(self.matrix, precision=6)})"


def pure_to_density(psi: QubitPureState) -> DensityOperator:
    v = psi.vector
    return DensityOperator(np.outer(v, v.conj()))


def from_planar_form(p: PlanarAngleForm) -> QubitPureState:
    """Canonical state with ``alpha = sqrt(alpha_sq)`` real and
    ``beta = sqrt(1 - alpha_sq) * exp(i theta)``."""
    alpha = math.sqrt(p.alpha_sq)
    beta = math.sqrt(1.0 - p.alpha_sq) * cmath.exp(1j * p.theta)
    return QubitPureState(alpha, beta)


def planar_state(alpha_sq: float, theta: float = 0.0) -> QubitPureState:
    return from_planar_form(PlanarAngleForm(alpha_sq, theta))


def mixture_to_density(m: DiagonalMixture) -> DensityOperator:
    return DensityOperator(np.diag([m.w1, m.w2]).astype(np.complex128))
