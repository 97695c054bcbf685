"""Closed-form fidelities for ideal and nonideal S_z measurements.

All functions take plain floats or numpy arrays (broadcast together) and use
the symmetric error choice ``eps_up = -eps_down = eps / sqrt(2)``. Inputs are
``alpha_sq = |alpha|^2`` and ``theta``, the planar angle between the two
amplitudes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MacroscopicityWarning, OutOfRange

# Values of delta_f_sq below -NEGATIVE_TOL count as a genuine fidelity increase.
NEGATIVE_TOL = 1e-14
# yanase_min_eps warns at or above this bound (apparatus no longer macroscopic).
MACROSCOPIC_EPS_LIMIT = 0.1


def _check_alpha_sq(alpha_sq):
    a = np.asarray(alpha_sq, dtype=float)
    if np.any(~((a >= 0.0) & (a <= 1.0))):
        raise OutOfRange("alpha_sq must lie in [0, 1]")
    return a


def _check_theta(theta):
    t = np.asarray(theta, dtype=float)
    if np.any(~((t >= 0.0) & (t <= math.pi))):
        raise OutOfRange("theta must lie in [0, pi]")
    return t


def _check_eps(eps):
    e = np.asarray(eps, dtype=float)
    if np.any(~((e >= 0.0) & (e < 1.0))):
        raise OutOfRange("eps must lie in [0, 1)")
    return e


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def f_id_closed(alpha_sq):
    """Ideal-measurement fidelity ``sqrt(1 - 2x + 2x^2)`` for ``x = |alpha|^2``."""
    x = _check_alpha_sq(alpha_sq)
    return _scalar(np.sqrt(1.0 - 2.0 * x + 2.0 * x**2))


def f_nonid_closed(alpha_sq, theta, eps):
    """Nonideal-measurement fidelity for a pure input. Reduces to :func:`f_id_closed` at ``eps = 0``."""
    x = _check_alpha_sq(alpha_sq)
    t = _check_theta(theta)
    e = _check_eps(eps)
    a = np.sqrt(x)
    keep = 1.0 - e**2 / 2.0
    cos_t = np.cos(t)
    f_sq = (
        1.0
        - e**2 / 2.0
        + 2.0 * x**2
        - 2.0 * x**2 * e**2
        + 2.0 * x * e**2
        - 2.0 * x
        - e * (x * a) * np.sqrt(8.0 * (1.0 - x) * keep) * cos_t
        + e * a * np.sqrt(2.0 * (1.0 - x) * keep) * cos_t
    )
    return _scalar(np.sqrt(np.clip(f_sq, 0.0, 1.0)))


def delta_f_sq_closed(alpha_sq, theta, eps):
    """``F_id^2 - F_nonid^2`` for a pure input, from its own polynomial.

    Deliberately not computed from :func:`f_id_closed` and
    :func:`f_nonid_closed`, so the two routes cross-check.
    """
    x = _check_alpha_sq(alpha_sq)
    t = _check_theta(theta)
    e = _check_eps(eps)
    a = np.sqrt(x)
    keep = 1.0 - e**2 / 2.0
    cos_t = np.cos(t)
    value = (
        e**2 / 2.0
        + 2.0 * x**2 * e**2
        - 2.0 * x * e**2
        + e * (x * a) * np.sqrt(8.0 * (1.0 - x) * keep) * cos_t
        - e * a * np.sqrt(2.0 * (1.0 - x) * keep) * cos_t
    )
    return _scalar(value)


def eigenstate_f_nonid(eps):
    """Nonideal fidelity for an |up> (or |down>) input: ``sqrt(1 - eps^2/2)``.

    The input's overlap with the post-measurement state is ``1 - eps^2/2``.
    """
    e = _check_eps(eps)
    return _scalar(np.sqrt(1.0 - e**2 / 2.0))


def eigenstate_delta_f(eps):
    """``F_id - F_nonid`` for an eigenstate input; ``F_id = 1`` there.

    Evaluated as ``(eps^2/2) / (1 + sqrt(1 - eps^2/2))`` to avoid cancellation;
    the leading term is ``eps^2 / 4``.
    """
    e = _check_eps(eps)
    return _scalar((e**2 / 2.0) / (1.0 + np.sqrt(1.0 - e**2 / 2.0)))


def f_nonid_mixed_closed(w1, eps):
    """Nonideal fidelity for the incoherent input ``diag(w1, 1 - w1)``.

    The measured state is ``diag(r1, r2)`` with
    ``r1 = w1 (1 - eps^2/2) + w2 eps^2/2``, so the fidelity is
    ``sqrt(w1 r1) + sqrt(w2 r2)``. Because both pairs sum to one this equals
    ``1 - sum_i (r_i - w_i)^2 / (2 (sqrt(r_i) + sqrt(w_i))^2)``, which has no
    division by ``w1`` or ``w2``, no cancellation, and never exceeds 1.
    """
    w1 = np.asarray(w1, dtype=float)
    if np.any(~((w1 >= 0.0) & (w1 <= 1.0))):
        raise OutOfRange("w1 must lie in [0, 1]")
    e = _check_eps(eps)
    w2 = 1.0 - w1
    flip = e**2 / 2.0
    shift = flip * (w2 - w1)  # r1 - w1 == -(r2 - w2)
    r1 = w1 + shift
    r2 = w2 - shift
    den1 = np.sqrt(r1) + np.sqrt(w1)
    den2 = np.sqrt(r2) + np.sqrt(w2)
    with np.errstate(invalid="ignore", divide="ignore"):
        term1 = np.where(den1 > 0.0, (shift / den1) ** 2, 0.0)
        term2 = np.where(den2 > 0.0, (shift / den2) ** 2, 0.0)
    return _scalar(1.0 - 0.5 * (term1 + term2))


def yanase_min_eps(m_norm: float) -> float:
    """Smallest attainable aggregate error ``(8 ||M_x||^2)^(-1/2)``.

    ``m_norm`` is the operator norm of the apparatus's additive conserved
    quantity. Emits :class:`MacroscopicityWarning` when the bound reaches
    ``MACROSCOPIC_EPS_LIMIT``.
    """
    if not (math.isfinite(m_norm) and m_norm > 0.0):
        raise OutOfRange(f"m_norm={m_norm!r} must be a positive finite number")
    bound = 1.0 / (math.sqrt(8.0) * m_norm)
    if bound >= MACROSCOPIC_EPS_LIMIT:
        warnings.warn(
            f"error bound {bound:.4g} is not small: the measurement model assumes a "
            "macroscopic apparatus, which this conserved-quantity norm does not describe",
            MacroscopicityWarning,
            stacklevel=2,
        )
    return bound


@dataclass(frozen=True)
class FidelityReport:
    """Ideal vs nonideal fidelity for one input state.

    ``input_kind`` is ``"pure"`` (coherent superposition) or ``"mixed"``
    (incoherent diagonal mixture).
    """

    f_id: float
    f_nonid: float
    delta_f: float
    delta_f_sq: float
    input_kind: str = "pure"

    @property
    def increase(self) -> bool:
        return self.delta_f_sq < -NEGATIVE_TOL


def pure_report(alpha_sq: float, theta: float, eps: float) -> FidelityReport:
    f_id = f_id_closed(alpha_sq)
    f_nonid = f_nonid_closed(alpha_sq, theta, eps)
    d_sq = delta_f_sq_closed(alpha_sq, theta, eps)
    # a - b = (a^2 - b^2) / (a + b) keeps the sign and precision of d_sq.
    return FidelityReport(f_id, f_nonid, d_sq / (f_id + f_nonid), d_sq, "pure")


def mixed_report(w1: float, eps: float) -> FidelityReport:
    # The ideal measurement leaves a diagonal state untouched.
    f_nonid = f_nonid_mixed_closed(w1, eps)
    return FidelityReport(1.0, f_nonid, 1.0 - f_nonid, 1.0 - f_nonid**2, "mixed")
