"""Ideal and nonideal first-kind measurements of S_z on a qubit.

Two independent routes produce the post-measurement qubit state:

* effective Kraus operators acting on the qubit alone (``apply_kraus``), and
* the joint qubit+apparatus isometry followed by tracing out the apparatus
  (``joint_evolve`` / ``measure_via_tracing``).

They share no code beyond the matrix kernel, so each checks the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qmat
from .errors import DimensionMismatch, IncompleteChannel, NotNormalized, OutOfRange
from .qstate import DOWN, UP, DensityOperator, QubitPureState, pure_to_density

COMPLETENESS_TOL = 1e-10
CONSTRAINT_TOL = 1e-12


def completeness_residual(operators: Sequence[np.ndarray]) -> float:
    """``max|sum_n A_n^dag A_n - I|``."""
    ops = [qmat.as_matrix(a) for a in operators]
    total = sum(qmat.dagger(a) @ a for a in ops)
    return qmat.max_abs(total - qmat.identity(ops[0].shape[0]))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving quantum operation ``rho -> sum_n A_n rho A_n^dag``."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(qmat.as_matrix(a), copy=True) for a in self.operators)
        if not ops:
            raise IncompleteChannel("a channel needs at least one Kraus operator", residual=1.0)
        if len({a.shape for a in ops}) != 1:
            raise DimensionMismatch("Kraus operators have mixed dimensions")
        residual = completeness_residual(ops)
        if residual > COMPLETENESS_TOL:
            raise IncompleteChannel(
                f"completeness residual {residual:.3e} exceeds {COMPLETENESS_TOL}", residual=residual
            )
        for a in ops:
            a.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def residual(self) -> float:
        return completeness_residual(self.operators)


@dataclass(frozen=True)
class NonidealParams:
    """Error amplitudes of a nonideal S_z measurement.

    ``eps_up`` is the amplitude for an |up> input to be recorded as |down>,
    ``eps_down`` the converse. Unitarity of the joint evolution forces
    ``sqrt(1 - eps_up^2) * eps_down + eps_up * sqrt(1 - eps_down^2) = 0``.
    """

    eps_up: float
    eps_down: float

    def __post_init__(self):
        if not (abs(self.eps_up) <= 1.0 and abs(self.eps_down) <= 1.0):
            raise OutOfRange(f"error amplitudes ({self.eps_up!r}, {self.eps_down!r}) must lie in [-1, 1]")
        if not self.eps < 1.0:
            raise OutOfRange(f"aggregate eps={self.eps!r} must be < 1")
        residual = self.constraint_residual
        if abs(residual) > CONSTRAINT_TOL:
            raise IncompleteChannel(
                f"orthogonality constraint violated by {residual:.3e}", residual=abs(residual)
            )

    @property
    def eps(self) -> float:
        return math.hypot(self.eps_up, self.eps_down)

    @property
    def constraint_residual(self) -> float:
        return _constraint(self.eps_up, self.eps_down)


def _constraint(eps_up: float, eps_down: float) -> float:
    return math.sqrt(1.0 - eps_up**2) * eps_down + eps_up * math.sqrt(1.0 - eps_down**2)


def symmetric_params(eps: float) -> NonidealParams:
    """The canonical choice ``eps_up = -eps_down = eps / sqrt(2)``."""
    if not 0.0 <= eps < 1.0:
        raise OutOfRange(f"eps={eps!r} outside [0, 1)")
    e = eps / math.sqrt(2.0)
    return NonidealParams(e, -e)


@dataclass(frozen=True, eq=False)
class ApparatusModel:
    """Two-level apparatus: ready state ``chi`` and orthonormal pointer states."""

    chi: np.ndarray = field(default_factory=lambda: UP.copy())
    pointer_plus: np.ndarray = field(default_factory=lambda: UP.copy())
    pointer_minus: np.ndarray = field(default_factory=lambda: DOWN.copy())

    def __post_init__(self):
        vecs = []
        for name in ("chi", "pointer_plus", "pointer_minus"):
            v = np.asarray(getattr(self, name), dtype=np.complex128)
            if v.shape != (2,):
                raise DimensionMismatch(f"{name} must be a 2-vector")
            if abs(np.vdot(v, v).real - 1.0) > CONSTRAINT_TOL:
                raise NotNormalized(f"{name} is not normalized")
            v = v.copy()
            v.setflags(write=False)
            object.__setattr__(self, name, v)
            vecs.append(v)
        if abs(np.vdot(vecs[1], vecs[2])) > CONSTRAINT_TOL:
            raise NotNormalized("pointer states are not orthogonal")


DEFAULT_APPARATUS = ApparatusModel()


def ideal_channel() -> KrausChannel:
    """Projectors onto |up> and |down>."""
    return KrausChannel((np.outer(UP, UP.conj()), np.outer(DOWN, DOWN.conj())))


def nonideal_kraus_operators(eps_up: float, eps_down: float) -> tuple:
    """Effective Kraus pair for arbitrary amplitudes, with no validation.

    ``A_plus = |up>(sqrt(1-eps_up^2) <up| + eps_down <down|)`` and
    ``A_minus = |down>(eps_up <up| + sqrt(1-eps_down^2) <down|)``.
    """
    keep_up = math.sqrt(1.0 - eps_up**2)
    keep_down = math.sqrt(1.0 - eps_down**2)
    a_plus = np.array([[keep_up, eps_down], [0.0, 0.0]], dtype=np.complex128)
    a_minus = np.array([[0.0, 0.0], [eps_up, keep_down]], dtype=np.complex128)
    return a_plus, a_minus


def nonideal_channel(p: NonidealParams) -> KrausChannel:
    return KrausChannel(nonideal_kraus_operators(p.eps_up, p.eps_down))


def apply_kraus(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    if rho.dim != ch.dim:
        raise DimensionMismatch(f"channel acts on dim {ch.dim}, state has dim {rho.dim}")
    m = rho.matrix
    out = sum(a @ m @ qmat.dagger(a) for a in ch.operators)
    return DensityOperator(0.5 * (out + qmat.dagger(out)))


def isometry(p: NonidealParams, app: ApparatusModel = DEFAULT_APPARATUS) -> np.ndarray:
    """4x2 map ``|s>|chi> -> U|s>|chi>`` restricted to the ready state.

    Column 0 is the image of |up>|chi>, column 1 the image of |down>|chi>.
    """
    plus = np.kron(UP, app.pointer_plus)
    minus = np.kron(DOWN, app.pointer_minus)
    image_up = math.sqrt(1.0 - p.eps_up**2) * plus + p.eps_up * minus
    image_down = math.sqrt(1.0 - p.eps_down**2) * minus + p.eps_down * plus
    return np.column_stack([image_up, image_down])


def joint_evolve(
    psi: QubitPureState, p: NonidealParams, app: ApparatusModel = DEFAULT_APPARATUS
) -> DensityOperator:
    """Pure joint state ``U (alpha|up> + beta|down>)|chi>`` as a 4x4 projector.

    By linearity this is the coherent superposition of the two eigenstate
    evolutions.
    """
    v = isometry(p, app) @ psi.vector
    return DensityOperator(np.outer(v, v.conj()))


def joint_evolve_density(
    rho: DensityOperator, p: NonidealParams, app: ApparatusModel = DEFAULT_APPARATUS
) -> DensityOperator:
    if rho.dim != 2:
        raise DimensionMismatch("joint evolution takes a qubit state")
    v = isometry(p, app)
    out = v @ rho.matrix @ qmat.dagger(v)
    return DensityOperator(0.5 * (out + qmat.dagger(out)))


def measure_via_tracing(
    state, p: NonidealParams, app: ApparatusModel = DEFAULT_APPARATUS
) -> DensityOperator:
    """Post-measurement qubit state from the joint evolution and ``tr_A``.

    ``state`` is a :class:`QubitPureState` or a qubit :class:`DensityOperator`.
    """
    if isinstance(state, QubitPureState):
        joint = joint_evolve(state, p, app)
    else:
        joint = joint_evolve_density(state, p, app)
    return DensityOperator(qmat.partial_trace_apparatus(joint.matrix))


def measure_via_kraus(state, p: NonidealParams) -> DensityOperator:
    if isinstance(state, QubitPureState):
        state = pure_to_density(state)
    return apply_kraus(nonideal_channel(p), state)
