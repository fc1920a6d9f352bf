"""Experiment harness: calibration, schemas, and vectorized selection masks."""

import numpy as np
import pytest

from swipt_ia.channel import NetworkConfig, stack_channels, stack_symbols
from swipt_ia.errors import ConfigurationError
from swipt_ia.experiments import (
    ExperimentSpec,
    _gains_fields,
    _prrs_masks,
    _rrs_masks,
    calibrate_power,
    render_csv,
    run_bounds_experiment,
    run_pa_profile,
    run_power_rate_region,
    run_pso_alpha_sweep,
    run_selection_sweep,
)
from swipt_ia.ia import SolverOptions, solve_minil_batch
from swipt_ia.selection import initial_state, prrs_select, rrs_select

NET = NetworkConfig(K=4, M=3, N=2)


def _spec(**kw):
    base = dict(name="test", cfg=NET, slots=40, seed=0, cal_slots=40, restarts=3)
    base.update(kw)
    return ExperimentSpec(**base)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        _spec(slots=0)
    with pytest.raises(ConfigurationError):
        _spec(mode="average")
    with pytest.raises(ConfigurationError):
        _spec(user=5)
    with pytest.raises(ConfigurationError):
        _spec(l_grid=(1, 9))
    with pytest.raises(ConfigurationError):
        _spec(alpha_grid=(0.2, 1.4))
    with pytest.raises(ConfigurationError):
        _spec(alpha_profile=(0.5, 0.5))
    with pytest.raises(ConfigurationError):
        _spec(name="")


def test_calibration_round_trip():
    P_t = calibrate_power(NET, snr_db=10.0, seed=0, slots=150)
    cfg = NET.with_power(P_t)
    # re-measure on fresh evaluation slots: the mean received SNR ratio must
    # come back near the 10 dB target
    slots = np.arange(250)
    H = stack_channels(cfg, 0, slots)
    batch, _ = solve_minil_batch(H, slots, cfg, SolverOptions(seed=0))
    Xi = stack_symbols(cfg, 0, slots)
    gains, _ = _gains_fields(H, batch, Xi, "expected")
    ratio = cfg.P_t * gains[batch.converged].mean()
    assert abs(ratio - 10.0) / 10.0 < 0.02, ratio
    assert abs(10.0 * np.log10(ratio) - 10.0) < 0.2


def test_calibration_scaling():
    a = calibrate_power(NET, snr_db=0.0, seed=1, slots=80)
    b = calibrate_power(NET, snr_db=3.0103, seed=1, slots=80)
    assert b / a == pytest.approx(2.0, rel=1e-6)
    c = calibrate_power(NET, snr_db=10.0, seed=1, slots=80)
    assert c / a == pytest.approx(10.0, rel=1e-9)


def test_rrs_masks_match_selector():
    for K, L in ((4, 1), (5, 2), (5, 3), (4, 0)):
        masks = _rrs_masks(K, L, 11)
        state = initial_state(K)
        for t in range(11):
            members, state = rrs_select(state, K, L)
            expect = np.zeros(K, dtype=bool)
            for m in members:
                expect[m - 1] = True
            assert np.array_equal(masks[t], expect), (K, L, t)


def test_prrs_masks_match_selector():
    rng = np.random.default_rng(0)
    rates = rng.gamma(2.0, 1.0, size=(30, 5))
    powers = rng.gamma(2.0, 1.0, size=(30, 5))
    rates[3, 2] = 0.0  # infinite-ratio user must always be picked first
    for L in (1, 2, 4):
        masks = _prrs_masks(rates, powers, L)
        for t in range(rates.shape[0]):
            with np.errstate(divide="ignore"):
                ratio = np.where(rates[t] > 0, powers[t] / np.maximum(rates[t], 1e-300), np.inf)
            members = prrs_select(ratio, L)
            expect = np.zeros(5, dtype=bool)
            for m in members:
                expect[m - 1] = True
            assert np.array_equal(masks[t], expect), (L, t)
    assert _prrs_masks(rates, powers, 2)[3, 2]


def test_bounds_schema_and_containment():
    header, rows = run_bounds_experiment(_spec(slots=30, user=2))
    assert header == ["slot", "k", "Q", "Q_upper"]
    assert len(rows) == 30
    for slot, k, q, q_up in rows:
        assert k == 2
        assert 0.0 <= q <= q_up
    assert [r[0] for r in rows] == list(range(30))


def test_selection_sweep_schema_and_endpoints():
    header, rows = run_selection_sweep(_spec(slots=50))
    assert header == ["algorithm", "L", "mean_sum_rate", "mean_sum_power"]
    assert len(rows) == 2 * (NET.K + 1)
    table = {(r[0], r[1]): (r[2], r[3]) for r in rows}
    for algo in ("RRS", "PRRS"):
        # no harvesters: zero power; all harvesters: zero rate
        assert table[(algo, 0)][1] == 0.0
        assert table[(algo, NET.K)][0] == 0.0
    # both rules agree at the degenerate ends
    assert table[("RRS", 0)] == table[("PRRS", 0)]
    assert table[("RRS", NET.K)] == table[("PRRS", NET.K)]
    # ratio ranking harvests at least as much as the ring at equal L
    for L in range(1, NET.K):
        assert table[("PRRS", L)][1] >= table[("RRS", L)][1] - 1e-9


def test_pso_sweep_uniform_and_profile():
    header, rows = run_pso_alpha_sweep(_spec(alpha_grid=(0.0, 0.5, 1.0)))
    assert header == ["alpha", "mean_sum_rate", "mean_sum_power", "mean_rho"]
    assert [r[0] for r in rows] == [0.0, 0.5, 1.0]
    a0, a1 = rows[0], rows[-1]
    assert a0[1] == 0.0 and a0[3] == 0.0  # harvest-only end
    assert a1[2] == 0.0 and a1[3] == 1.0  # decode-only end

    header_p, rows_p = run_pso_alpha_sweep(_spec(alpha_profile=(0.2, 0.5, 0.9, 1.0)))
    assert header_p == ["k", "alpha", "mean_rate", "mean_power", "mean_rho"]
    assert [r[0] for r in rows_p] == [1, 2, 3, 4]
    assert rows_p[3][4] == 1.0  # alpha = 1 user always decodes


def test_region_schema_and_method_blocks():
    spec = _spec(slots=25, alpha_grid=(0.0, 0.9, 1.0), restarts=2)
    header, rows = run_power_rate_region(spec)
    assert header == ["method", "alpha", "mean_sum_power", "mean_sum_rate"]
    methods = [r[0] for r in rows]
    assert methods == ["RRS"] * (NET.K + 1) + ["PRRS"] * (NET.K + 1) + ["PSO"] * 3 + ["PSO-PA"] * 3
    # the alpha column carries the harvester count for the selection blocks
    assert [r[1] for r in rows[: NET.K + 1]] == [float(L) for L in range(NET.K + 1)]
    by_m = {}
    for m, a, pw, rt in rows:
        by_m.setdefault(m, []).append((a, pw, rt))
    # decode-only endpoints coincide for the equal-power strategies
    assert by_m["PSO"][-1][2] == pytest.approx(by_m["RRS"][0][2], rel=1e-12)
    # the allocator's decode-only endpoint beats equal power
    assert by_m["PSO-PA"][-1][2] >= by_m["PSO"][-1][2] - 1e-9


def test_pa_profile_schema_and_budget():
    spec = _spec(slots=20, alpha_profile=(0.1, 0.4, 0.8, 0.99), restarts=2)
    header, rows = run_pa_profile(spec)
    assert header == ["k", "alpha", "mean_power_allocated", "mean_rate", "mean_harvested", "mean_rho"]
    assert [r[0] for r in rows] == [1, 2, 3, 4]
    assert [r[1] for r in rows] == [0.1, 0.4, 0.8, 0.99]
    total = sum(r[2] for r in rows)
    P_t = calibrate_power(NET, 10.0, 0, 40)
    assert total <= NET.K * P_t + 1e-6
    with pytest.raises(ConfigurationError):
        run_pa_profile(_spec(slots=20))


def test_runs_are_reproducible():
    spec = _spec(slots=30)
    first = run_selection_sweep(spec)
    second = run_selection_sweep(spec)
    assert first == second


def test_expected_mode_runs():
    header, rows = run_selection_sweep(_spec(slots=20, mode="expected"))
    assert len(rows) == 2 * (NET.K + 1)
    # expected fields smooth the harvest but rates are untouched
    inst = run_selection_sweep(_spec(slots=20))[1]
    assert rows[0][2] == inst[0][2]


def test_render_csv_formatting():
    text = render_csv(["a", "b"], [(1, 0.123456789123), ("x", 2.0)])
    lines = text.splitlines()
    assert lines[0] == "a,b"
    assert lines[1] == "1,0.123456789"
    assert lines[2] == "x,2"
    assert text.endswith("\n")
