"""Simulation library for power splitting and energy harvesting in interference-aligned networks."""

from .allocation import (
    AllocOptions,
    PowerProfile,
    solve_eh_only_pa,
    solve_pso_pa,
    solve_pso_pa_batch,
    water_filling,
)
from .channel import (
    CALIBRATION_SLOT_BASE,
    ChannelSet,
    NetworkConfig,
    SymbolVector,
    draw_channel_set,
    draw_symbols,
    stack_channels,
    stack_symbols,
)
from .experiments import (
    ExperimentSpec,
    calibrate_power,
    render_csv,
    run_bounds_experiment,
    run_pa_profile,
    run_power_rate_region,
    run_pso_alpha_sweep,
    run_selection_sweep,
)
from .ia import (
    IaBatch,
    IaSolution,
    SolverOptions,
    check_feasibility,
    effective_channel,
    interference_leakage,
    solve_minil,
    solve_minil_batch,
)
from .metrics import (
    SlotMetrics,
    compute_slot_metrics,
    effective_gain,
    harvested_power,
    harvested_power_expected,
    prr,
    q_upper_bound,
    rate_id,
    received_field,
    signal_geometry,
)
from .selection import (
    SelectionState,
    SlotOutcome,
    initial_state,
    prrs_select,
    rrs_select,
    rrs_state_after,
    run_selection_slot,
)
from .splitting import (
    RequirementWeights,
    SplitProfile,
    closed_form_rho,
    pso_closed_form,
    pso_objective,
    pso_solve,
    uniform_weights,
    weights_from_requirements,
)

__all__ = [
    "AllocOptions",
    "PowerProfile",
    "solve_eh_only_pa",
    "solve_pso_pa",
    "solve_pso_pa_batch",
    "water_filling",
    "CALIBRATION_SLOT_BASE",
    "ChannelSet",
    "NetworkConfig",
    "SymbolVector",
    "draw_channel_set",
    "draw_symbols",
    "stack_channels",
    "stack_symbols",
    "ExperimentSpec",
    "calibrate_power",
    "render_csv",
    "run_bounds_experiment",
    "run_pa_profile",
    "run_power_rate_region",
    "run_pso_alpha_sweep",
    "run_selection_sweep",
    "IaBatch",
    "IaSolution",
    "SolverOptions",
    "check_feasibility",
    "effective_channel",
    "interference_leakage",
    "solve_minil",
    "solve_minil_batch",
    "SlotMetrics",
    "compute_slot_metrics",
    "effective_gain",
    "harvested_power",
    "harvested_power_expected",
    "prr",
    "q_upper_bound",
    "rate_id",
    "received_field",
    "signal_geometry",
    "SelectionState",
    "SlotOutcome",
    "initial_state",
    "prrs_select",
    "rrs_select",
    "rrs_state_after",
    "run_selection_slot",
    "RequirementWeights",
    "SplitProfile",
    "closed_form_rho",
    "pso_closed_form",
    "pso_objective",
    "pso_solve",
    "uniform_weights",
    "weights_from_requirements",
]
