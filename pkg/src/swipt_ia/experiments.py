"""Monte Carlo harness emitting the figure-level results as CSV tables.

Every experiment is a pure function of an ExperimentSpec: channels, symbols,
and solver restarts all derive from (seed, slot) streams, so repeated runs
produce byte-identical CSV.  Transmit power is calibrated per configuration
to hit a target average received SNR, since the path-loss scale alone does
not pin down the operating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import AllocOptions, solve_pso_pa_batch
from .channel import CALIBRATION_SLOT_BASE, NetworkConfig, stack_channels, stack_symbols
from .errors import ConfigurationError, NumericError
from .ia import IaBatch, SolverOptions, check_feasibility, solve_minil_batch
from .splitting import closed_form_rho, uniform_weights, RequirementWeights

DEFAULT_ALPHA_POINTS = 21


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment run: network, sample size, seed, and sweep grids.

    Exactly one of the sweep fields is consulted per runner: l_grid by the
    selection sweep, alpha_grid by the uniform splitting sweeps, and
    alpha_profile by the per-user runs.  Leaving a field None selects that
    runner's default grid.
    """

    name: str
    cfg: NetworkConfig
    slots: int = 5000
    seed: int = 0
    snr_db: float = 10.0
    mode: str = "inst"
    l_grid: tuple[int, ...] | None = None
    alpha_grid: tuple[float, ...] | None = None
    alpha_profile: tuple[float, ...] | None = None
    user: int = 1
    cal_slots: int = 500
    restarts: int = 8
    leak_tol: float = 1e-8
    max_iters: int = 5000

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("experiment name must be non-empty")
        if self.slots < 1 or self.cal_slots < 1:
            raise ConfigurationError("slots and cal_slots must be >= 1")
        if self.mode not in ("inst", "expected"):
            raise ConfigurationError(f"mode must be 'inst' or 'expected', got {self.mode!r}")
        if not 1 <= self.user <= self.cfg.K:
            raise ConfigurationError(f"user must be in 1..{self.cfg.K}, got {self.user}")
        if self.l_grid is not None:
            if len(self.l_grid) == 0 or any(not 0 <= L <= self.cfg.K for L in self.l_grid):
                raise ConfigurationError("l_grid entries must lie in 0..K")
        for grid in (self.alpha_grid, self.alpha_profile):
            if grid is not None:
                if len(grid) == 0 or any(not 0.0 <= a <= 1.0 for a in grid):
                    raise ConfigurationError("alpha values must lie in [0, 1]")
        if self.alpha_profile is not None and len(self.alpha_profile) != self.cfg.K:
            raise ConfigurationError(
                f"alpha_profile needs {self.cfg.K} entries, got {len(self.alpha_profile)}"
            )
        if not np.isfinite(self.snr_db):
            raise ConfigurationError("snr_db must be finite")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise ConfigurationError("boolean cells are not part of any schema")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.9g" % float(value)


def render_csv(header: list[str], rows: list[tuple]) -> str:
    """Serialize rows under a header, floats at 9 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _solver_opts(spec: ExperimentSpec) -> SolverOptions:
    return SolverOptions(max_iters=spec.max_iters, leak_tol=spec.leak_tol, seed=spec.seed)


def _alloc_opts(spec: ExperimentSpec) -> AllocOptions:
    return AllocOptions(restarts=spec.restarts, seed=spec.seed)


def _simulate(cfg: NetworkConfig, seed: int, opts: SolverOptions, first_slot: int, n: int):
    """Draw and align n consecutive slots; returns (H, Xi, batch)."""
    slots = np.arange(first_slot, first_slot + n)
    H = stack_channels(cfg, seed, slots)
    batch, _ = solve_minil_batch(H, slots, cfg, opts)
    Xi = stack_symbols(cfg, seed, slots)
    return H, Xi, batch


def _gains_fields(H: np.ndarray, batch: IaBatch, Xi: np.ndarray, mode: str):
    """Per-slot per-user effective gains and unit-power field powers.

    gains[s, k] = |u' h[k][k] v|^2; fields[s, k] is the squared field norm at
    the harvester for unit transmit power, with symbols drawn ("inst") or
    averaged out ("expected").
    """
    K = H.shape[1]
    hv = np.einsum("skjnm,sjm->skjn", H, batch.v[..., 0])
    direct = hv[:, np.arange(K), np.arange(K)]
    gains = np.abs(np.einsum("skn,skn->sk", np.conj(batch.u[..., 0]), direct)) ** 2
    if mode == "inst":
        w = (hv * Xi[:, None, :, None]).sum(axis=2)
        fields = np.sum(np.abs(w) ** 2, axis=-1)
    else:
        fields = np.sum(np.abs(hv) ** 2, axis=(2, 3))
    return gains, fields


def _grams(H: np.ndarray, batch: IaBatch, Xi: np.ndarray, mode: str) -> np.ndarray:
    """Harvested-field Gram tensors (S, K, K, K) for the joint allocator.

    The "expected" mode averages the symbols out, which kills the cross terms
    and leaves a diagonal quadratic form.
    """
    K = H.shape[1]
    hv = np.einsum("skjnm,sjm->skjn", H, batch.v[..., 0])
    if mode == "inst":
        w = hv * Xi[:, None, :, None]
        return np.einsum("skjn,skln->skjl", np.conj(w), w).real
    norms = np.sum(np.abs(hv) ** 2, axis=-1)
    G = np.zeros(norms.shape + (K,))
    idx = np.arange(K)
    G[:, :, idx, idx] = norms
    return G


def calibrate_power(cfg: NetworkConfig, snr_db: float, seed: int, slots: int = 500) -> float:
    """Transmit power hitting a target average received SNR.

    Measures the mean effective channel power over converged alignment
    solutions on a dedicated slot range (disjoint from evaluation slots) and
    inverts 10 lg(P_t * E|u' H v|^2) = snr_db.
    """
    check_feasibility(cfg)
    if slots < 1:
        raise ConfigurationError("calibration needs at least one slot")
    opts = SolverOptions(seed=seed)
    H, Xi, batch = _simulate(cfg, seed, opts, CALIBRATION_SLOT_BASE, slots)
    gains, _ = _gains_fields(H, batch, Xi, "expected")
    if not batch.converged.any():
        raise NumericError("calibration produced no converged alignment solutions")
    mean_gain = float(gains[batch.converged].mean())
    if mean_gain <= 0.0:
        raise NumericError("calibration measured a zero mean effective gain")
    return float(10.0 ** (snr_db / 10.0) / mean_gain)


def _calibrated_cfg(spec: ExperimentSpec) -> NetworkConfig:
    P_t = calibrate_power(spec.cfg, spec.snr_db, spec.seed, spec.cal_slots)
    return spec.cfg.with_power(P_t)


def measured_pa_snr(gains: np.ndarray, p: np.ndarray) -> float:
    """Average received SNR in dB under per-user powers: 10 lg E(sum p g / K)."""
    K = gains.shape[-1]
    return float(10.0 * np.log10(np.mean(np.sum(p * gains, axis=-1) / K)))


def run_bounds_experiment(spec: ExperimentSpec) -> tuple[list[str], list[tuple]]:
    """Per-slot harvested power of one user against its analytic ceiling.

    Returns rows (slot, k, Q, Q_upper) with Q taken at full-harvest split.
    """
    cfg = _calibrated_cfg(spec)
    H, Xi, batch = _simulate(cfg, spec.seed, _solver_opts(spec), 0, spec.slots)
    _, fields = _gains_fields(H, batch, Xi, spec.mode)
    k = spec.user - 1
    Q = cfg.zeta * cfg.P_t * fields[:, k]

    row = H[:, k]
    if cfg.M <= cfg.N:
        gram = np.einsum("sjnm,sjnp->sjmp", np.conj(row), row)
    else:
        gram = np.einsum("sjnm,sjpm->sjnp", row, np.conj(row))
    top = np.linalg.eigvalsh(gram)[..., -1]
    Q_upper = cfg.zeta * cfg.P_t * np.sum(np.sqrt(top), axis=-1) ** 2

    header = ["slot", "k", "Q", "Q_upper"]
    rows = [(int(s), spec.user, Q[s], Q_upper[s]) for s in range(spec.slots)]
    return header, rows


def _rrs_masks(K: int, L: int, n_slots: int) -> np.ndarray:
    """Boolean (slots, K) membership of the round-robin harvester sets.

    Matches iterating rrs_select from the initial state: the pointer before
    slot t is (K + t L - 1) mod K in 1-based terms, and the set is the next L
    users around the ring.
    """
    mask = np.zeros((n_slots, K), dtype=bool)
    if L == 0:
        return mask
    t = np.arange(n_slots)
    last0 = (K - 1 + t * L) % K
    members = (last0[:, None] + np.arange(1, L + 1)[None, :]) % K
    np.put_along_axis(mask, members, True, axis=1)
    return mask


def _prrs_masks(rates: np.ndarray, powers: np.ndarray, L: int) -> np.ndarray:
    """Boolean (slots, K) membership of the top-L power-to-rate-ratio sets."""
    S, K = rates.shape
    mask = np.zeros((S, K), dtype=bool)
    if L == 0:
        return mask
    with np.errstate(divide="ignore"):
        ratio = np.where(rates > 0.0, powers / np.maximum(rates, 1e-300), np.inf)
    tie = np.broadcast_to(np.arange(K), (S, K))
    order = np.lexsort((tie, -ratio), axis=-1)
    np.put_along_axis(mask, order[:, :L], True, axis=1)
    return mask


def run_selection_sweep(spec: ExperimentSpec) -> tuple[list[str], list[tuple]]:
    """Mean sum rate and harvest of both harvester-selection rules across L.

    L counts dedicated harvesters, so K - L users decode; rows cover both
    algorithms over the grid (all of 0..K by default).
    """
    cfg = _calibrated_cfg(spec)
    K = cfg.K
    H, Xi, batch = _simulate(cfg, spec.seed, _solver_opts(spec), 0, spec.slots)
    gains, fields = _gains_fields(H, batch, Xi, spec.mode)
    rates = np.log2(1.0 + cfg.P_t * gains)
    powers = cfg.zeta * cfg.P_t * fields

    l_grid = spec.l_grid if spec.l_grid is not None else tuple(range(K + 1))
    header = ["algorithm", "L", "mean_sum_rate", "mean_sum_power"]
    rows = []
    for algorithm in ("RRS", "PRRS"):
        for L in l_grid:
            if algorithm == "RRS":
                mask = _rrs_masks(K, L, spec.slots)
            else:
                mask = _prrs_masks(rates, powers, L)
            sum_rate = np.sum(rates * ~mask, axis=1).mean()
            sum_power = np.sum(powers * mask, axis=1).mean()
            rows.append((algorithm, L, sum_rate, sum_power))
    return header, rows


def _uniform_alpha_grid(spec: ExperimentSpec) -> np.ndarray:
    if spec.alpha_grid is not None:
        return np.asarray(spec.alpha_grid, dtype=float)
    return np.linspace(0.0, 1.0, DEFAULT_ALPHA_POINTS)


def run_pso_alpha_sweep(spec: ExperimentSpec) -> tuple[list[str], list[tuple]]:
    """Closed-form splitting sweep at equal transmit power.

    Uniform mode (alpha_profile unset) sweeps one alpha shared by all users
    and reports network means: rows (alpha, mean_sum_rate, mean_sum_power,
    mean_rho).  Profile mode fixes per-user weights and reports per-user
    means: rows (k, alpha, mean_rate, mean_power, mean_rho).
    """
    cfg = _calibrated_cfg(spec)
    H, Xi, batch = _simulate(cfg, spec.seed, _solver_opts(spec), 0, spec.slots)
    gains, fields = _gains_fields(H, batch, Xi, spec.mode)
    gain_power = cfg.P_t * gains
    field_power = cfg.P_t * fields

    if spec.alpha_profile is not None:
        alpha = np.asarray(spec.alpha_profile, dtype=float)
        rho = closed_form_rho(alpha[None, :], 1.0 - alpha[None, :], gain_power, field_power, cfg.zeta)
        rate = np.log2(1.0 + rho * gain_power)
        power = (1.0 - rho) * cfg.zeta * field_power
        header = ["k", "alpha", "mean_rate", "mean_power", "mean_rho"]
        rows = [
            (k + 1, alpha[k], rate[:, k].mean(), power[:, k].mean(), rho[:, k].mean())
            for k in range(cfg.K)
        ]
        return header, rows

    header = ["alpha", "mean_sum_rate", "mean_sum_power", "mean_rho"]
    rows = []
    for a in _uniform_alpha_grid(spec):
        rho = closed_form_rho(a, 1.0 - a, gain_power, field_power, cfg.zeta)
        rate = np.log2(1.0 + rho * gain_power)
        power = (1.0 - rho) * cfg.zeta * field_power
        rows.append((a, rate.sum(axis=1).mean(), power.sum(axis=1).mean(), rho.mean()))
    return header, rows


def _pa_curves(spec, cfg, gains, grams, alphas):
    """Mean (sum_power, sum_rate) of the joint allocator at each uniform alpha."""
    budget = cfg.K * cfg.P_t
    opts = _alloc_opts(spec)
    out = []
    for a in alphas:
        w = uniform_weights(float(a), cfg.K)
        rho, p, _ = solve_pso_pa_batch(gains, grams, w, cfg.zeta, budget, opts)
        s = np.sqrt(p)
        field = np.einsum("skjl,sj,sl->sk", grams, s, s)
        rate = np.log2(1.0 + rho * gains * p)
        power = (1.0 - rho) * cfg.zeta * field
        out.append((power.sum(axis=1).mean(), rate.sum(axis=1).mean()))
    return out


def run_power_rate_region(spec: ExperimentSpec) -> tuple[list[str], list[tuple]]:
    """Power-rate frontier of the four operating strategies on shared slots.

    Rows are (method, alpha, mean_sum_power, mean_sum_rate).  For the two
    selection methods the sweep variable is the harvester count, so the alpha
    column carries L for those rows.
    """
    cfg = _calibrated_cfg(spec)
    K = cfg.K
    H, Xi, batch = _simulate(cfg, spec.seed, _solver_opts(spec), 0, spec.slots)
    gains, fields = _gains_fields(H, batch, Xi, spec.mode)
    rates_full = np.log2(1.0 + cfg.P_t * gains)
    powers_full = cfg.zeta * cfg.P_t * fields
    l_grid = spec.l_grid if spec.l_grid is not None else tuple(range(K + 1))
    alphas = _uniform_alpha_grid(spec)

    header = ["method", "alpha", "mean_sum_power", "mean_sum_rate"]
    rows = []
    for method in ("RRS", "PRRS"):
        for L in l_grid:
            if method == "RRS":
                mask = _rrs_masks(K, L, spec.slots)
            else:
                mask = _prrs_masks(rates_full, powers_full, L)
            rows.append(
                (
                    method,
                    float(L),
                    np.sum(powers_full * mask, axis=1).mean(),
                    np.sum(rates_full * ~mask, axis=1).mean(),
                )
            )

    gain_power = cfg.P_t * gains
    field_power = cfg.P_t * fields
    for a in alphas:
        rho = closed_form_rho(a, 1.0 - a, gain_power, field_power, cfg.zeta)
        rate = np.log2(1.0 + rho * gain_power)
        power = (1.0 - rho) * cfg.zeta * field_power
        rows.append(("PSO", float(a), power.sum(axis=1).mean(), rate.sum(axis=1).mean()))

    grams = _grams(H, batch, Xi, spec.mode)
    for a, (mean_power, mean_rate) in zip(alphas, _pa_curves(spec, cfg, gains, grams, alphas)):
        rows.append(("PSO-PA", float(a), mean_power, mean_rate))
    return header, rows


def run_pa_profile(spec: ExperimentSpec) -> tuple[list[str], list[tuple]]:
    """Per-user outcomes of the joint allocator under fixed rate weights.

    Rows are (k, alpha_k, mean_power_allocated, mean_rate, mean_harvested,
    mean_rho); requires alpha_profile.
    """
    if spec.alpha_profile is None:
        raise ConfigurationError("run_pa_profile requires alpha_profile")
    cfg = _calibrated_cfg(spec)
    H, Xi, batch = _simulate(cfg, spec.seed, _solver_opts(spec), 0, spec.slots)
    gains, _ = _gains_fields(H, batch, Xi, spec.mode)
    grams = _grams(H, batch, Xi, spec.mode)

    alpha = np.asarray(spec.alpha_profile, dtype=float)
    w = RequirementWeights(alpha=alpha, beta=1.0 - alpha)
    budget = cfg.K * cfg.P_t
    rho, p, _ = solve_pso_pa_batch(gains, grams, w, cfg.zeta, budget, _alloc_opts(spec))
    s = np.sqrt(p)
    field = np.einsum("skjl,sj,sl->sk", grams, s, s)
    rate = np.log2(1.0 + rho * gains * p)
    harvested = (1.0 - rho) * cfg.zeta * field

    header = ["k", "alpha", "mean_power_allocated", "mean_rate", "mean_harvested", "mean_rho"]
    rows = [
        (
            k + 1,
            alpha[k],
            p[:, k].mean(),
            rate[:, k].mean(),
            harvested[:, k].mean(),
            rho[:, k].mean(),
        )
        for k in range(cfg.K)
    ]
    return header, rows
