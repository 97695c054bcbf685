"""Analytic-vs-simulation cross checks and module invariants, as one report.

Each suite draws ``cases`` pseudorandom inputs from a seeded generator and
records the worst residual of every check against its tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import analysis, qmat
from .channels import (
    apply_kraus,
    completeness_residual,
    ideal_channel,
    measure_via_tracing,
    nonideal_kraus_operators,
    symmetric_params,
)
from .fidelity import bhattacharyya, pure_fidelity, uhlmann_fidelity
from .qstate import (
    DensityOperator,
    DiagonalMixture,
    QubitPureState,
    mixture_to_density,
    planar_state,
    pure_to_density,
)
from .sweep import INCREASE_QUADRANTS, SweepConfig, quadrant_masks, run_sweep

DEFAULT_SEED = 20010417
DEFAULT_CASES = 1000
FAULTS = ("flip-eps-down",)


@dataclass
class Check:
    label: str
    residual: float
    tolerance: float
    # "le": numeric residual <= tolerance; "bound": a count or ratio <= limit;
    # "gt": value > tolerance (negative tests and lower bounds).
    kind: str = "le"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.residual):
            return False
        if self.kind == "gt":
            return self.residual > self.tolerance
        return self.residual <= self.tolerance


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, label, residual, tolerance, kind="le"):
        self.checks.append(Check(label, float(residual), tolerance, kind))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        vals = [c.residual for c in self.checks if c.kind == "le"]
        return max(vals) if vals else 0.0


@dataclass
class VerificationReport:
    suites: list
    cases: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def lines(self):
        for s in self.suites:
            status = "PASS" if s.passed else "FAIL"
            yield f"[{status}] {s.name}: max residual {s.max_residual:.3e}"
            for c in s.checks:
                if not c.passed:
                    op = ">" if c.kind == "gt" else "<="
                    yield f"    failed: {c.label}: {c.residual:.3e} (want {op} {c.tolerance:.1e})"
            for n in s.notes:
                yield f"    {n}"
        yield f"{'ALL PASS' if self.passed else 'FAILURES'} (cases={self.cases}, seed={self.seed})"


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def random_psd(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g @ g.conj().T


def random_density(rng, dim=2, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_pure(rng) -> QubitPureState:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v = v / np.linalg.norm(v)
    return QubitPureState(v[0], v[1])


def _kraus_ops(eps, fault):
    p = symmetric_params(eps)
    if fault == "flip-eps-down":
        return nonideal_kraus_operators(p.eps_up, -p.eps_down)
    return nonideal_kraus_operators(p.eps_up, p.eps_down)


def _apply_raw(ops, rho):
    m = rho.matrix
    return sum(a @ m @ qmat.dagger(a) for a in ops)


def suite_qmat(rng, cases):
    s = SuiteResult("qmat")
    recon = ortho = sq = pt_trace = pt_round = 0.0
    for _ in range(cases):
        for dim in (2, 4):
            h = random_hermitian(rng, dim)
            vals, vecs = qmat.hermitian_eigen(h)
            recon = max(recon, qmat.max_abs(vecs @ np.diag(vals) @ vecs.conj().T - h))
            ortho = max(ortho, qmat.max_abs(vecs.conj().T @ vecs - np.eye(dim)))
            m = random_psd(rng, dim)
            r = qmat.matrix_sqrt_psd(m)
            sq = max(sq, qmat.max_abs(r @ r - m))
        joint = random_psd(rng, 4)
        pt_trace = max(pt_trace, abs(np.trace(qmat.partial_trace_apparatus(joint)) - np.trace(joint)))
        q = random_density(rng).matrix
        a = random_density(rng).matrix
        pt_round = max(pt_round, qmat.max_abs(qmat.partial_trace_apparatus(qmat.tensor_product(q, a)) - q))
    s.add("eigen reconstruction", recon, 1e-12)
    s.add("eigenvector orthonormality", ortho, 1e-12)
    s.add("sqrt reconstruction", sq, 1e-10)
    s.add("partial trace preserves trace", pt_trace, 1e-12)
    s.add("tensor then trace round trip", pt_round, 1e-12)
    return s


def suite_channels(rng, cases, fault=None):
    s = SuiteResult("channels")
    eps_values = np.linspace(0.0, 0.95, 20)
    s.add("ideal completeness", ideal_channel().residual(), 1e-10)
    s.add(
        "nonideal completeness (20 eps)",
        max(completeness_residual(_kraus_ops(e, fault)) for e in eps_values),
        1e-10,
    )
    violated = min(
        completeness_residual(nonideal_kraus_operators(e / math.sqrt(2), e / math.sqrt(2)))
        for e in eps_values
        if e >= 0.01
    )
    s.add("violated sign constraint detected", violated, 1e-6, kind="gt")

    trace_err = agree = idem = 0.0
    for k in range(cases):
        eps = rng.uniform(0.0, 0.3)
        ops = _kraus_ops(eps, fault)
        p = symmetric_params(eps)
        inputs = [random_pure(rng), random_density(rng), mixture_to_density(DiagonalMixture.from_w1(rng.uniform()))]
        for state in inputs:
            rho = pure_to_density(state) if isinstance(state, QubitPureState) else state
            via_kraus = _apply_raw(ops, rho)
            via_joint = measure_via_tracing(state, p).matrix
            trace_err = max(trace_err, abs(np.trace(via_kraus) - 1.0), abs(np.trace(via_joint) - 1.0))
            agree = max(agree, qmat.max_abs(via_kraus - via_joint))
            once = apply_kraus(ideal_channel(), rho)
            twice = apply_kraus(ideal_channel(), once)
            idem = max(idem, qmat.max_abs(once.matrix - twice.matrix))
    s.add("trace preservation", trace_err, 1e-12)
    s.add("kraus vs joint isometry + partial trace", agree, 1e-12)
    s.add("ideal channel idempotent", idem, 1e-12)
    return s


def suite_fidelity(rng, cases):
    s = SuiteResult("fidelity")
    sym = self_f = ortho = bhat = shortcut = rng_excursion = 0.0
    for _ in range(cases):
        rho, sigma = random_density(rng), random_density(rng)
        f1, f2 = uhlmann_fidelity(rho, sigma), uhlmann_fidelity(sigma, rho)
        sym = max(sym, abs(f1 - f2))
        rng_excursion = max(rng_excursion, max(0.0, f1 - 1.0, -f1))
        self_f = max(self_f, abs(uhlmann_fidelity(rho, rho) - 1.0))
        psi = random_pure(rng)
        perp = QubitPureState(-np.conj(psi.beta), np.conj(psi.alpha))
        ortho = max(ortho, uhlmann_fidelity(pure_to_density(psi), pure_to_density(perp)))
        p, q = rng.dirichlet([1, 1]), rng.dirichlet([1, 1])
        d1, d2 = DensityOperator(np.diag(p)), DensityOperator(np.diag(q))
        bhat = max(bhat, abs(uhlmann_fidelity(d1, d2) - bhattacharyya(p, q)))
        shortcut = max(shortcut, abs(pure_fidelity(psi, rho) - uhlmann_fidelity(pure_to_density(psi), rho)))
    s.add("symmetry", sym, 1e-10)
    s.add("range [0, 1]", rng_excursion, 0.0)
    s.add("F(rho, rho) = 1", self_f, 1e-12)
    s.add("orthogonal pure states give 0", ortho, 1e-12)
    s.add("diagonal pairs reduce to Bhattacharyya", bhat, 1e-12)
    s.add("pure shortcut vs general", shortcut, 1e-10)
    return s


def simulated_fidelities(alpha_sq, theta, eps):
    """(F_id, F_nonid) through state construction, channels and Uhlmann fidelity."""
    psi = planar_state(alpha_sq, theta)
    sigma = pure_to_density(psi)
    f_id = uhlmann_fidelity(sigma, apply_kraus(ideal_channel(), sigma))
    f_nonid = uhlmann_fidelity(sigma, measure_via_tracing(psi, symmetric_params(eps)))
    return f_id, f_nonid


def simulated_mixed_fidelity(w1, eps):
    sigma = mixture_to_density(DiagonalMixture.from_w1(w1))
    return uhlmann_fidelity(sigma, measure_via_tracing(sigma, symmetric_params(eps)))


def suite_closed_forms(rng, cases):
    s = SuiteResult("closed forms vs simulation")
    e_id = e_nonid = e_mixed = e_diff = 0.0
    for _ in range(cases):
        x, t, eps = rng.uniform(0, 1), rng.uniform(0, math.pi), rng.uniform(0, 0.3)
        f_id, f_nonid = simulated_fidelities(x, t, eps)
        e_id = max(e_id, abs(analysis.f_id_closed(x) - f_id))
        e_nonid = max(e_nonid, abs(analysis.f_nonid_closed(x, t, eps) - f_nonid))
        diff = analysis.f_id_closed(x) ** 2 - analysis.f_nonid_closed(x, t, eps) ** 2
        e_diff = max(e_diff, abs(analysis.delta_f_sq_closed(x, t, eps) - diff))
        w1 = rng.uniform(0, 1)
        e_mixed = max(e_mixed, abs(analysis.f_nonid_mixed_closed(w1, eps) - simulated_mixed_fidelity(w1, eps)))
    s.add("ideal fidelity closed form", e_id, 1e-10)
    s.add("nonideal fidelity closed form", e_nonid, 1e-10)
    s.add("mixed-input fidelity closed form", e_mixed, 1e-10)
    s.add("difference polynomial vs difference of squares", e_diff, 1e-12)
    return s


def suite_surface(rng, cases):
    s = SuiteResult("difference surface")
    n = max(cases, 50)
    theta = rng.uniform(0, math.pi, n)
    eps = rng.uniform(0, 0.999, n)
    x = rng.uniform(0, 1, n)
    s.add("zero plane at alpha_sq = 1/2", np.max(np.abs(analysis.delta_f_sq_closed(0.5, theta, eps))), 1e-14)
    slice_ = analysis.delta_f_sq_closed(x, math.pi / 2, eps)
    s.add("theta = pi/2 slice", np.max(np.abs(slice_ - 2 * eps**2 * (x - 0.5) ** 2)), 1e-14)
    swapped = analysis.delta_f_sq_closed(1 - x, math.pi - theta, eps)
    s.add("swap symmetry", np.max(np.abs(analysis.delta_f_sq_closed(x, theta, eps) - swapped)), 1e-12)
    ratio = analysis.delta_f_sq_closed(0.2, 0.3, 1e-6) / analysis.delta_f_sq_closed(0.2, 0.3, 1e-8)
    s.add("linear scaling in eps", abs(ratio / 100.0 - 1.0), 1e-3, kind="bound")
    return s


def suite_mixed(rng, cases):
    s = SuiteResult("incoherent inputs never gain fidelity")
    n = max(cases, 10)
    w1 = rng.uniform(0, 1, n)
    eps = rng.uniform(1e-3, 0.999, n)
    f = np.asarray(analysis.f_nonid_mixed_closed(w1, eps))
    s.add("F <= 1", max(0.0, float(np.max(f)) - 1.0), 0.0)
    s.add("equality at w1 = 1/2", float(np.max(np.abs(analysis.f_nonid_mixed_closed(0.5, eps) - 1.0))), 1e-15)
    # Away from w1 = 1/2 the deficit is ~eps^4 (1-2 w1)^2 / (32 w1 w2): resolvable here.
    far = (np.abs(w1 - 0.5) > 1e-2) & (eps > 0.05)
    s.add("strictly below 1 away from w1 = 1/2 (count at 1)", int(np.sum(f[far] >= 1.0)), 0, kind="bound")
    e = rng.uniform(1e-3, 0.3, n)
    reduce = np.max(np.abs(analysis.f_nonid_mixed_closed(1.0, e) - analysis.eigenstate_f_nonid(e)))
    s.add("w1 = 1 reduces to the eigenstate fidelity", reduce, 1e-12)
    return s


def suite_bound():
    s = SuiteResult("error lower bound")
    s.add("bound at norm 10", abs(analysis.yanase_min_eps(10.0) - 1 / math.sqrt(800)), 1e-15)
    norms = np.logspace(0.5, 8, 60)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        values = np.array([analysis.yanase_min_eps(m) for m in norms])
    s.add("monotone decreasing", float(np.max(np.diff(values)) >= 0), 0.0, kind="bound")
    return s


def suite_sweep(cases):
    s = SuiteResult("sign regions")
    results = {eps: run_sweep(SweepConfig(eps)) for eps in (1e-3, 1e-10)}
    for eps, r in results.items():
        masks = quadrant_masks(r.alpha_sq, r.theta)
        bad = 0
        for name, mask in masks.items():
            vals = r.delta_f_sq[mask]
            bad += int(np.sum(vals >= 0)) if name in INCREASE_QUADRANTS else int(np.sum(vals <= 0))
        s.add(f"interior signs at eps={eps:g}", bad, 0, kind="bound")
    pattern = np.sum(results[1e-3].negative_mask() != results[1e-10].negative_mask())
    s.add("sign pattern independent of eps", pattern, 0, kind="bound")

    r = results[1e-3]
    peak = max(abs(r.extremum_max.value), abs(r.extremum_min.value))
    where = r.extremum_max if abs(r.extremum_max.value) >= abs(r.extremum_min.value) else r.extremum_min
    s.add("extremum below 10 eps", peak / 1e-3, 10.0, kind="bound")
    s.add("extremum above 0.1 eps", peak / 1e-3, 0.1, kind="gt")
    s.notes.append(
        f"eps=1e-3 grid extremum |dF^2| = {peak:.6g} = {peak / 1e-3:.4f} eps "
        f"at alpha_sq={where.alpha_sq:.4g}, theta={where.theta:.6g}"
    )

    n = 5 if cases < 100 else 21
    both = run_sweep(SweepConfig(1e-3, n_alpha=n, n_theta=n, mode="both"))
    s.add(f"analytic vs simulated sweep ({n}x{n})", both.max_divergence, 1e-10)
    return s


def run_verification(cases: int = DEFAULT_CASES, seed: int = DEFAULT_SEED, fault: str | None = None):
    if cases < 1:
        raise ValueError("cases must be >= 1")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    rng = np.random.default_rng(seed)
    suites = [
        suite_qmat(rng, cases),
        suite_channels(rng, cases, fault),
        suite_fidelity(rng, cases),
        suite_closed_forms(rng, cases),
        suite_surface(rng, cases),
        suite_mixed(rng, cases),
        suite_bound(),
        suite_sweep(cases),
    ]
    return VerificationReport(suites, cases, seed)
