"""Dense complex-matrix kernel for the 2x2 qubit and 4x4 qubit+apparatus spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The joint space
is always ordered (qubit x apparatus), so joint index ``i*2 + k`` pairs qubit
index ``i`` with apparatus index ``k``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NotPositiveSemidefinite

ALLOWED_DIMS = (2, 4)
HERMITIAN_TOL = 1e-12
PSD_CLAMP_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64
# Eigenvalues this small (relative to max(1, spectral radius)) are numerical zeros.
RANK_CUTOFF = 1e-14


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m, dims=ALLOWED_DIMS) -> np.ndarray:
    """Coerce ``m`` to a square complex array whose size is one of ``dims``."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in dims:
        raise DimensionMismatch(f"expected a square matrix of size {dims}, got shape {arr.shape}")
    return arr


def identity(dim: int) -> np.ndarray:
    if dim not in ALLOWED_DIMS:
        raise DimensionMismatch(f"unsupported dimension {dim}")
    return np.eye(dim, dtype=np.complex128)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return max_abs(m - dagger(m))


def _eigh_2x2(m: np.ndarray) -> HermitianEigen:
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    r = math.hypot(0.5 * (a - d), abs(b))

    # The eigenvalue of larger magnitude comes from mean +/- r without
    # cancellation; the other one from det / big.
    det = a * d - (b.real * b.real + b.imag * b.imag)
    if mean >= 0.0:
        hi = mean + r
        lo = det / hi if hi != 0.0 else 0.0
    else:
        lo = mean - r
        hi = det / lo

    # Phase-rotate to a real symmetric block, then a Givens angle.
    phase = np.exp(-1j * np.angle(b)) if b != 0 else 1.0
    t = 0.5 * math.atan2(2.0 * abs(b), a - d)
    c, s = math.cos(t), math.sin(t)
    vecs = np.array([[-s, c], [phase * c, phase * s]], dtype=np.complex128)
    return HermitianEigen(np.array([lo, hi]), vecs)


def _eigh_jacobi(m: np.ndarray) -> HermitianEigen:
    # Plain Python scalars: for n = 4 this beats per-rotation numpy calls.
    n = m.shape[0]
    a = m.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = max(1.0, float(np.linalg.norm(m)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off < JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p][q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b.conjugate() / mag
                t = 0.5 * math.atan2(2.0 * mag, a[p][p].real - a[q][q].real)
                c, s = math.cos(t), math.sin(t)
                ps, pc = phase * s, phase * c
                # Rotation columns p, q: (c, phase*s) and (-s, phase*c).
                for row in a:
                    x, y = row[p], row[q]
                    row[p], row[q] = c * x + ps * y, -s * x + pc * y
                cps, cpc = ps.conjugate(), pc.conjugate()
                rp, rq = a[p], a[q]
                for k in range(n):
                    x, y = rp[k], rq[k]
                    rp[k], rq[k] = c * x + cps * y, -s * x + cpc * y
                rp[q] = rq[p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p], row[q] = c * x + ps * y, -s * x + pc * y
    vals = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(vals, kind="stable")
    return HermitianEigen(vals[order], np.array(v, dtype=np.complex128)[:, order])


def hermitian_eigen(m) -> HermitianEigen:
    """Full spectral decomposition of a 2x2 or 4x4 Hermitian matrix.

    Eigenvalues are returned in ascending order, eigenvectors as the columns
    of a unitary matrix. The 2x2 case is closed form; the 4x4 case uses cyclic
    complex Jacobi rotations.

    Raises:
        NonHermitianInput: if ``max|m - m^dag| > 1e-12``.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL:
        raise NonHermitianInput(f"matrix is not Hermitian (max|m - m^dag| = {err:.3e})")
    m = 0.5 * (m + dagger(m))
    if m.shape[0] == 2:
        return _eigh_2x2(m)
    return _eigh_jacobi(m)


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero, as are positive
    eigenvalues below the numerical-rank cutoff.
    """
    vals, vecs = hermitian_eigen(m)
    if vals[0] < -PSD_CLAMP_TOL:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {vals[0]:.3e} < -{PSD_CLAMP_TOL}")
    cutoff = RANK_CUTOFF * max(1.0, float(np.max(np.abs(vals))))
    roots = np.sqrt(np.where(vals > cutoff, vals, 0.0))
    s = (vecs * roots) @ dagger(vecs)
    return 0.5 * (s + dagger(s))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` of two 2x2 matrices (qubit first)."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


def partial_trace_apparatus(m) -> np.ndarray:
    """Trace out the apparatus factor of a 4x4 (qubit x apparatus) operator."""
    m = as_matrix(m, dims=(4,))
    return np.einsum("ikjk->ij", m.reshape(2, 2, 2, 2))


def trace(m) -> complex:
    return complex(np.trace(np.asarray(m)))
