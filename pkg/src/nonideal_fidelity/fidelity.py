"""Uhlmann fidelity ``F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho))``."""

from __future__ import annotations

import math

import numpy as np

from . import qmat
from .errors import DimensionMismatch
from .qstate import DensityOperator, QubitPureState


def uhlmann_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """General fidelity via two Hermitian square roots.

    This path takes no shortcuts for pure or commuting inputs so that the
    closed forms can be checked against it. The result is clamped to [0, 1].
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"cannot compare dim {rho.dim} with dim {sigma.dim}")
    root = qmat.matrix_sqrt_psd(rho.matrix)
    inner = root @ sigma.matrix @ root
    inner = 0.5 * (inner + qmat.dagger(inner))
    value = float(np.real(np.trace(qmat.matrix_sqrt_psd(inner))))
    return min(1.0, max(0.0, value))


def pure_fidelity(psi: QubitPureState, rho: DensityOperator) -> float:
    """``<psi|rho|psi>^(1/2)``, valid when one argument is pure."""
    if rho.dim != 2:
        raise DimensionMismatch("pure_fidelity compares qubit states")
    v = psi.vector
    overlap = float(np.real(np.vdot(v, rho.matrix @ v)))
    return math.sqrt(min(1.0, max(0.0, overlap)))


def bhattacharyya(p, q) -> float:
    """Classical fidelity ``sum_i sqrt(p_i q_i)`` of two probability vectors."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.sum(np.sqrt(p * q)))
