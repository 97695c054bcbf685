"""Tabulate ``F_id^2 - F_nonid^2`` over the (|alpha|^2, theta) rectangle."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import analysis
from .channels import apply_kraus, ideal_channel, measure_via_tracing, symmetric_params
from .errors import ConfigInvalid
from .fidelity import uhlmann_fidelity
from .qstate import planar_state, pure_to_density

MODES = ("analytic", "simulated", "both")
COLUMNS = ("alpha_sq", "theta", "eps", "f_id", "f_nonid", "delta_f", "delta_f_sq")
AGREEMENT_TOL = 1e-10

QUADRANTS = (
    "low_alpha_low_theta",
    "low_alpha_high_theta",
    "high_alpha_low_theta",
    "high_alpha_high_theta",
)
# Quadrants where a coherent input gains fidelity from the nonideal measurement.
INCREASE_QUADRANTS = ("low_alpha_low_theta", "high_alpha_high_theta")


@dataclass(frozen=True)
class SweepConfig:
    eps: float
    n_alpha: int = 101
    n_theta: int = 101
    mode: str = "analytic"

    def __post_init__(self):
        if not (isinstance(self.n_alpha, int) and isinstance(self.n_theta, int)):
            raise ConfigInvalid("grid sizes must be integers")
        if self.n_alpha < 2 or self.n_theta < 2:
            raise ConfigInvalid(f"grid must be at least 2x2, got {self.n_alpha}x{self.n_theta}")
        if not (math.isfinite(self.eps) and 0.0 <= self.eps < 1.0):
            raise ConfigInvalid(f"eps={self.eps!r} outside [0, 1)")
        if self.mode not in MODES:
            raise ConfigInvalid(f"mode must be one of {MODES}, got {self.mode!r}")

    def grid(self):
        return np.linspace(0.0, 1.0, self.n_alpha), np.linspace(0.0, math.pi, self.n_theta)


@dataclass(frozen=True)
class Extremum:
    alpha_sq: float
    theta: float
    value: float


@dataclass
class SweepResult:
    """Grid columns are 2-D arrays indexed ``[alpha index, theta index]``."""

    config: SweepConfig
    alpha_sq: np.ndarray
    theta: np.ndarray
    f_id: np.ndarray
    f_nonid: np.ndarray
    delta_f: np.ndarray
    delta_f_sq: np.ndarray
    extremum_max: Extremum
    extremum_min: Extremum
    negative_cells: dict
    max_divergence: float | None = None
    regions: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.delta_f_sq.shape

    def rows(self):
        eps = float(self.config.eps)
        a_grid, t_grid = np.meshgrid(self.alpha_sq, self.theta, indexing="ij")
        cols = (a_grid, t_grid, self.f_id, self.f_nonid, self.delta_f, self.delta_f_sq)
        flat = [c.ravel().tolist() for c in cols]
        for a, t, fi, fn, d, dsq in zip(*flat):
            yield (a, t, eps, fi, fn, d, dsq)

    def negative_mask(self) -> np.ndarray:
        return self.delta_f_sq < -analysis.NEGATIVE_TOL

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in self.rows():
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": asdict(self.config),
            "rows": [dict(zip(COLUMNS, row)) for row in self.rows()],
            "extrema": {"max": asdict(self.extremum_max), "min": asdict(self.extremum_min)},
            "negative_cells": self.negative_cells,
            "regions": self.regions,
        }
        if self.max_divergence is not None:
            doc["max_divergence"] = self.max_divergence
        return json.dumps(doc, allow_nan=False) + "\n"


def _simulate_point(alpha_sq: float, theta: float, eps: float):
    psi = planar_state(alpha_sq, theta)
    sigma = pure_to_density(psi)
    f_id = uhlmann_fidelity(sigma, apply_kraus(ideal_channel(), sigma))
    f_nonid = uhlmann_fidelity(sigma, measure_via_tracing(psi, symmetric_params(eps)))
    return f_id, f_nonid


def _simulate_row(alpha_sq: float, thetas, eps: float):
    return [_simulate_point(alpha_sq, float(t), eps) for t in thetas]


def _simulate(alphas, thetas, eps, workers=1):
    args = [(float(a), thetas, eps) for a in alphas]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_simulate_row, *zip(*args)))
    else:
        rows = [_simulate_row(*a) for a in args]
    values = np.asarray(rows, dtype=float)  # (n_alpha, n_theta, 2)
    return values[..., 0], values[..., 1]


def _negative_summary(alphas, thetas, mask):
    idx = np.argwhere(mask)
    if idx.size == 0:
        return {"count": 0, "bounds": None}
    return {
        "count": int(idx.shape[0]),
        "bounds": {
            "alpha_sq": [float(alphas[idx[:, 0].min()]), float(alphas[idx[:, 0].max()])],
            "theta": [float(thetas[idx[:, 1].min()]), float(thetas[idx[:, 1].max()])],
        },
    }


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepResult:
    """Evaluate the grid in ``cfg.mode``.

    In ``both`` mode the rows carry the analytic values and
    ``max_divergence`` records the worst analytic-vs-simulated gap in
    ``delta_f_sq``. Comparing it with ``AGREEMENT_TOL`` is left to callers.
    ``workers > 1`` spreads the simulated rows over processes; results are
    identical and ordered the same either way.
    """
    alphas, thetas = cfg.grid()
    a_grid, t_grid = np.meshgrid(alphas, thetas, indexing="ij")
    divergence = None

    if cfg.mode in ("analytic", "both"):
        f_id = np.asarray(analysis.f_id_closed(a_grid))
        f_nonid = np.asarray(analysis.f_nonid_closed(a_grid, t_grid, cfg.eps))
        d_sq = np.asarray(analysis.delta_f_sq_closed(a_grid, t_grid, cfg.eps))
        delta = d_sq / (f_id + f_nonid)
        if cfg.mode == "both":
            s_id, s_nonid = _simulate(alphas, thetas, cfg.eps, workers)
            divergence = float(np.max(np.abs(d_sq - (s_id**2 - s_nonid**2))))
    else:
        f_id, f_nonid = _simulate(alphas, thetas, cfg.eps, workers)
        d_sq = f_id**2 - f_nonid**2
        delta = f_id - f_nonid

    i_max = np.unravel_index(np.argmax(d_sq), d_sq.shape)
    i_min = np.unravel_index(np.argmin(d_sq), d_sq.shape)
    result = SweepResult(
        config=cfg,
        alpha_sq=alphas,
        theta=thetas,
        f_id=f_id,
        f_nonid=f_nonid,
        delta_f=delta,
        delta_f_sq=d_sq,
        extremum_max=Extremum(float(alphas[i_max[0]]), float(thetas[i_max[1]]), float(d_sq[i_max])),
        extremum_min=Extremum(float(alphas[i_min[0]]), float(thetas[i_min[1]]), float(d_sq[i_min])),
        negative_cells=_negative_summary(alphas, thetas, d_sq < -analysis.NEGATIVE_TOL),
        max_divergence=divergence,
    )
    result.regions = detect_increase_regions(result)
    return result


def quadrant_masks(alphas, thetas) -> dict:
    """Interior grid points of each quadrant of [0,1] x [0,pi] split at (1/2, pi/2).

    A point is interior when it lies at least one grid step from every edge
    of its quadrant.
    """
    step_a = alphas[1] - alphas[0]
    step_t = thetas[1] - thetas[0]
    slack = 1e-9

    def inside(values, lo, hi, step):
        return (values >= lo + step * (1 - slack)) & (values <= hi - step * (1 - slack))

    a_lo = inside(alphas, 0.0, 0.5, step_a)
    a_hi = inside(alphas, 0.5, 1.0, step_a)
    t_lo = inside(thetas, 0.0, math.pi / 2, step_t)
    t_hi = inside(thetas, math.pi / 2, math.pi, step_t)
    return {
        "low_alpha_low_theta": np.outer(a_lo, t_lo),
        "low_alpha_high_theta": np.outer(a_lo, t_hi),
        "high_alpha_low_theta": np.outer(a_hi, t_lo),
        "high_alpha_high_theta": np.outer(a_hi, t_hi),
    }


def detect_increase_regions(r: SweepResult) -> dict:
    """Fraction of strictly negative interior cells in each quadrant."""
    negative = r.negative_mask()
    fractions = {}
    for name, mask in quadrant_masks(r.alpha_sq, r.theta).items():
        total = int(mask.sum())
        fractions[name] = float(negative[mask].sum() / total) if total else None
    return fractions
