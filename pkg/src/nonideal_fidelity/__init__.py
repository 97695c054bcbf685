"""Ideal and nonideal first-kind qubit measurements and their fidelities."""

from .analysis import (
    FidelityReport,
    delta_f_sq_closed,
    eigenstate_delta_f,
    eigenstate_f_nonid,
    f_id_closed,
    f_nonid_closed,
    f_nonid_mixed_closed,
    mixed_report,
    pure_report,
    yanase_min_eps,
)
from .channels import (
    ApparatusModel,
    KrausChannel,
    NonidealParams,
    apply_kraus,
    ideal_channel,
    joint_evolve,
    measure_via_tracing,
    nonideal_channel,
    symmetric_params,
)
from .errors import QuantumModelError
from .fidelity import pure_fidelity, uhlmann_fidelity
from .qstate import (
    DensityOperator,
    DiagonalMixture,
    PlanarAngleForm,
    QubitPureState,
    from_planar_form,
    mixture_to_density,
    planar_state,
    pure_to_density,
)
from .sweep import SweepConfig, SweepResult, detect_increase_regions, run_sweep

__version__ = "0.1.0"
