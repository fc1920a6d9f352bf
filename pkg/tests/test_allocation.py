"""Joint splitting and power allocation, and its analytic extremes."""

import numpy as np
import pytest

from swipt_ia.allocation import (
    AllocOptions,
    PowerProfile,
    batch_gain_gram,
    slot_gain_gram,
    solve_eh_only_pa,
    solve_pso_pa,
    solve_pso_pa_batch,
    water_filling,
)
from swipt_ia.channel import NetworkConfig, draw_channel_set, draw_symbols, stack_channels, stack_symbols
from swipt_ia.errors import ConfigurationError, NoSignalError
from swipt_ia.ia import SolverOptions, solve_minil, solve_minil_batch
from swipt_ia.metrics import effective_gain, received_field
from swipt_ia.splitting import RequirementWeights, closed_form_rho, uniform_weights

CFG = NetworkConfig(K=3, M=2, N=2, P_t=8.0)
OPTS = AllocOptions(restarts=4, seed=1)


def _slot(seed, slot):
    ch = draw_channel_set(CFG, seed, slot)
    sol = solve_minil(ch, CFG, SolverOptions(seed=seed))
    xi = draw_symbols(CFG, seed, slot)
    return ch, sol, xi


def test_water_filling_equal_gains():
    prof = water_filling(np.array([2.0, 2.0, 2.0, 2.0]), 12.0)
    assert np.allclose(prof.p, 3.0, atol=1e-9)
    assert prof.p.sum() == pytest.approx(12.0, abs=1e-9)


def test_water_filling_threshold():
    # a hopeless channel gets nothing until the budget is enormous
    prof = water_filling(np.array([1.0, 1e-9]), 1.0)
    assert prof.p[0] == pytest.approx(1.0, abs=1e-9)
    assert prof.p[1] == 0.0


def test_water_filling_kkt():
    rng = np.random.default_rng(5)
    for _ in range(30):
        gains = rng.gamma(1.5, 1.0, size=6)
        gains[rng.integers(0, 6)] = 0.0
        budget = rng.uniform(0.5, 20.0)
        prof = water_filling(gains, budget)
        assert prof.p.sum() == pytest.approx(budget, abs=1e-9)
        assert np.all(prof.p >= 0.0)
        inv = np.where(gains > 0, 1.0 / np.maximum(gains, 1e-300), np.inf)
        active = prof.p > 1e-12
        # every active user sits on the common water level; no inactive user
        # could profitably displace an active one
        levels = prof.p[active] + inv[active]
        assert np.max(np.abs(levels - prof.water_level)) < 1e-8
        if np.any(~active):
            assert np.min(inv[~active]) >= prof.water_level - 1e-8
        assert prof.p[gains == 0.0] == pytest.approx(0.0, abs=1e-12)


def test_water_filling_errors():
    with pytest.raises(NoSignalError):
        water_filling(np.zeros(3), 1.0)
    with pytest.raises(ConfigurationError):
        water_filling(np.array([1.0, -0.5]), 1.0)
    with pytest.raises(ConfigurationError):
        water_filling(np.array([1.0]), 0.0)


def test_power_profile_validation():
    with pytest.raises(ConfigurationError):
        PowerProfile(p=np.array([-0.1, 0.2]), budget=1.0)
    with pytest.raises(ConfigurationError):
        PowerProfile(p=np.array([0.9, 0.9]), budget=1.0)


def test_gain_gram_consistency():
    ch, sol, xi = _slot(3, 0)
    g, G = slot_gain_gram(ch, sol, xi)
    for k in range(CFG.K):
        assert g[k] == pytest.approx(effective_gain(ch, sol, k), rel=1e-12)
        # the quadratic form at unit powers is the plain field power
        field = received_field(ch, sol, xi, k)
        ones = np.ones(CFG.K)
        assert ones @ G[k] @ ones == pytest.approx(float(np.sum(np.abs(field) ** 2)), rel=1e-12)
        eig = np.linalg.eigvalsh(G[k])
        assert eig.min() > -1e-10


def test_batch_gram_matches_single():
    slots = np.arange(5)
    H = stack_channels(CFG, 4, slots)
    batch, _ = solve_minil_batch(H, slots, CFG, SolverOptions(seed=4))
    Xi = stack_symbols(CFG, 4, slots)
    gains, grams = batch_gain_gram(H, batch.v, batch.u, Xi)
    for i, slot in enumerate(slots):
        ch, sol, xi = _slot(4, int(slot))
        g, G = slot_gain_gram(ch, sol, xi)
        assert np.allclose(gains[i], g, atol=1e-12)
        assert np.allclose(grams[i], G, atol=1e-12)


def test_decode_only_reduces_to_water_filling():
    w = RequirementWeights(alpha=np.ones(CFG.K), beta=np.zeros(CFG.K))
    budget = CFG.K * CFG.P_t
    for slot in range(4):
        ch, sol, xi = _slot(6, slot)
        gains, _ = slot_gain_gram(ch, sol, xi)
        wf = water_filling(gains, budget)
        rho, p, _ = solve_pso_pa(ch, sol, xi, w, CFG, OPTS)
        assert np.all(rho.rho == 1.0)
        assert np.max(np.abs(p.p - wf.p)) < 1e-6, slot


def test_harvest_only_routes_all_to_harvesters():
    w = RequirementWeights(alpha=np.zeros(CFG.K), beta=np.ones(CFG.K))
    ch, sol, xi = _slot(7, 1)
    _, G = slot_gain_gram(ch, sol, xi)
    rho, p, F = solve_pso_pa(ch, sol, xi, w, CFG, OPTS)
    assert np.all(rho.rho == 0.0)
    budget = CFG.K * CFG.P_t
    s_eq = np.full(CFG.K, np.sqrt(budget / CFG.K))
    F_eq = CFG.zeta * np.einsum("kjl,j,l->", G, s_eq, s_eq)
    assert F >= F_eq - 1e-9


def test_eh_only_beats_random_search():
    rng = np.random.default_rng(17)
    for slot in range(3):
        ch, sol, xi = _slot(9, slot)
        prof = solve_eh_only_pa(ch, sol, xi, CFG, OPTS)
        _, G = slot_gain_gram(ch, sol, xi)
        A = G.sum(axis=0)
        s = np.sqrt(prof.p)
        val = float(s @ A @ s)
        draws = rng.dirichlet(np.ones(CFG.K), size=20000) * prof.budget
        ss = np.sqrt(draws)
        best = float(np.max(np.einsum("ij,jl,il->i", ss, A, ss)))
        assert val >= best * (1.0 - 1e-6), (val, best)


def test_eh_only_single_user_gets_everything():
    cfg = NetworkConfig(K=1, M=2, N=2, P_t=3.0)
    ch = draw_channel_set(cfg, 2, 0)
    sol = solve_minil(ch, cfg)
    xi = draw_symbols(cfg, 2, 0)
    prof = solve_eh_only_pa(ch, sol, xi, cfg, OPTS)
    assert prof.p[0] == pytest.approx(cfg.K * cfg.P_t, rel=1e-9)


def test_batch_dominates_baseline_and_is_deterministic():
    slots = np.arange(12)
    H = stack_channels(CFG, 11, slots)
    batch, _ = solve_minil_batch(H, slots, CFG, SolverOptions(seed=11))
    Xi = stack_symbols(CFG, 11, slots)
    gains, grams = batch_gain_gram(H, batch.v, batch.u, Xi)
    w = uniform_weights(0.7, CFG.K)
    budget = CFG.K * CFG.P_t

    rho, p, F = solve_pso_pa_batch(gains, grams, w, CFG.zeta, budget, OPTS)
    assert np.all(p.sum(axis=1) <= budget + 1e-9)
    assert np.all((rho >= 0.0) & (rho <= 1.0))

    S, K = gains.shape
    alpha = np.broadcast_to(w.alpha, (S, K))
    beta = np.broadcast_to(w.beta, (S, K))
    s_eq = np.full((S, K), np.sqrt(budget / K))
    field_eq = np.einsum("bkjl,bj,bl->bk", grams, s_eq, s_eq)
    rho_eq = closed_form_rho(alpha, beta, gains * (budget / K), field_eq, CFG.zeta)
    F_eq = np.sum(
        alpha * np.log2(1.0 + rho_eq * gains * (budget / K))
        + beta * (1.0 - rho_eq) * CFG.zeta * field_eq,
        axis=-1,
    )
    assert np.all(F >= F_eq - 1e-9)

    rho2, p2, F2 = solve_pso_pa_batch(gains, grams, w, CFG.zeta, budget, OPTS)
    assert np.array_equal(rho, rho2) and np.array_equal(p, p2) and np.array_equal(F, F2)


def test_options_validation():
    with pytest.raises(ConfigurationError):
        AllocOptions(restarts=0)
    with pytest.raises(ConfigurationError):
        AllocOptions(tol=0.0)
    ch, sol, xi = _slot(3, 2)
    w = uniform_weights(0.5, CFG.K)
    with pytest.raises(ConfigurationError):
        solve_pso_pa(ch, sol, xi, uniform_weights(0.5, CFG.K + 1), CFG, OPTS)
