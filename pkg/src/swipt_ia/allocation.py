"""Joint power-splitting and transmit-power allocation under a sum budget.

The joint problem couples every user's transmit power through the harvested
fields, and the rho * P product makes it non-convex, so the solver is a
multi-start ascent: a short log-barrier phase over the box and simplex
constraints, then a monotone polish that alternates the exact per-user split
update with a water-level step on the powers.  Powers are handled through
s = sqrt(p), which keeps the harvested term a smooth quadratic form down to
p = 0.

Two analytic extremes are exposed directly: water_filling (everyone decodes)
and solve_eh_only_pa (everyone harvests).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, NetworkConfig, SymbolVector, check_channel_shape
from .errors import ConfigurationError, NoSignalError
from .ia import IaSolution
from .splitting import RequirementWeights, SplitProfile, closed_form_rho

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class PowerProfile:
    """Per-user transmit powers under a sum budget (= K * P_t)."""

    p: np.ndarray
    budget: float
    water_level: float | None = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "p", p)
        if np.any(p < 0):
            raise ConfigurationError("powers must be non-negative")
        if p.sum() > self.budget + 1e-9:
            raise ConfigurationError(
                f"power sum {p.sum():.12g} exceeds budget {self.budget:.12g}"
            )


@dataclass(frozen=True)
class AllocOptions:
    """Multi-start ascent knobs."""

    max_iters: int = 10000
    tol: float = 1e-9
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1:
            raise ConfigurationError("max_iters and restarts must be >= 1")
        if not self.tol > 0:
            raise ConfigurationError("tol must be positive")


def slot_gain_gram(
    ch: ChannelSet, sol: IaSolution, xi: SymbolVector
) -> tuple[np.ndarray, np.ndarray]:
    """Effective gains and harvested-field Gram tensors for one slot.

    Returns:
        (g, G): g[k] = |u[k]' h[k][k] v[k]|^2, and G[k, j, l] =
        Re((h[k][j] v[j] xi_j)' (h[k][l] v[l] xi_l)), so that the field power
        at receiver k under powers p is s' G[k] s with s = sqrt(p).
    """
    K = ch.h.shape[0]
    hv = np.einsum("kjnm,jm->kjn", ch.h, sol.v[:, :, 0])
    direct = hv[np.arange(K), np.arange(K)]
    g = np.abs(np.einsum("kn,kn->k", np.conj(sol.u[:, :, 0]), direct)) ** 2
    w = hv * xi.xi[None, :, None]
    G = np.einsum("kjn,kln->kjl", np.conj(w), w).real
    return g, G


def batch_gain_gram(
    H: np.ndarray, V: np.ndarray, U: np.ndarray, Xi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked slot_gain_gram over S slots: gains (S, K), Grams (S, K, K, K)."""
    K = H.shape[1]
    hv = np.einsum("skjnm,sjm->skjn", H, V[..., 0])
    direct = hv[:, np.arange(K), np.arange(K)]
    g = np.abs(np.einsum("skn,skn->sk", np.conj(U[..., 0]), direct)) ** 2
    w = hv * Xi[:, None, :, None]
    G = np.einsum("skjn,skln->skjl", np.conj(w), w).real
    return g, G


def _project_sphere(s: np.ndarray, budget: float) -> np.ndarray:
    """Project rows onto the nonnegative orthant capped by the power budget."""
    s = np.maximum(s, 0.0)
    norm2 = np.sum(s * s, axis=-1, keepdims=True)
    scale = np.where(norm2 > budget, np.sqrt(budget / np.maximum(norm2, 1e-300)), 1.0)
    return s * scale


def _field_powers(G: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Per-receiver field power s' G[k] s, batched: (B, K, K, K) x (B, K) -> (B, K)."""
    return np.einsum("bkjl,bj,bl->bk", G, s, s)


def _objective(g, G, alpha, beta, zeta, rho, s):
    """Exact joint objective per batch row."""
    gp = g * s * s
    field = _field_powers(G, s)
    terms = alpha * np.log2(1.0 + rho * gp) + beta * (1.0 - rho) * zeta * field
    return terms.sum(axis=-1)


def _eh_matrix(G, beta, zeta, rho):
    """B[b] = zeta * sum_k beta_k (1 - rho_k) G[b, k]; EH-part gradient is 2 B s."""
    return zeta * np.einsum("bk,bkjl->bjl", beta * (1.0 - rho), G)


def _cubic_argmax(a, gamma, b, lam):
    """Maximize a*log2(1 + gamma*s^2) + 2*b*s - lam*s^2 over s >= 0, elementwise.

    Stationary points solve a cubic; all real roots are formed in closed form,
    polished by two Newton steps, and compared (including s = 0) on the exact
    objective.  Coordinates with a*gamma = 0 reduce to the linear case
    s = max(b, 0)/lam.
    """
    a, gamma, b, lam = np.broadcast_arrays(a, gamma, b, lam)
    lin = (a * gamma) <= 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        s_lin = np.where(lam > 0, np.maximum(b, 0.0) / np.maximum(lam, 1e-300), 0.0)

    safe_gamma = np.where(lin, 1.0, gamma)
    safe_a = np.where(lin, 1.0, a)
    c3 = np.maximum(lam, 1e-300) * safe_gamma * _LN2
    c2 = -b * safe_gamma * _LN2
    c1 = lam * _LN2 - safe_a * safe_gamma
    c0 = -b * _LN2

    p2 = c2 / c3
    p1 = c1 / c3
    p0 = c0 / c3
    shift = -p2 / 3.0
    p = p1 - p2 * p2 / 3.0
    q = 2.0 * p2**3 / 27.0 - p2 * p1 / 3.0 + p0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    one = disc > 0
    sq = np.sqrt(np.where(one, disc, 0.0))
    t_single = np.cbrt(-q / 2.0 + sq) + np.cbrt(-q / 2.0 - sq)
    m = 2.0 * np.sqrt(np.maximum(-p / 3.0, 0.0))
    denom = np.where(m > 0, (m / 2.0) ** 3, 1.0)
    cos_arg = np.clip((-q / 2.0) / denom, -1.0, 1.0)
    theta = np.arccos(cos_arg) / 3.0

    roots = np.empty(a.shape + (3,))
    for i in range(3):
        t_triple = m * np.cos(theta - 2.0 * np.pi * i / 3.0)
        roots[..., i] = np.where(one, t_single, t_triple) + shift

    for _ in range(2):  # Newton polish on the original cubic
        val = ((c3[..., None] * roots + c2[..., None]) * roots + c1[..., None]) * roots + c0[
            ..., None
        ]
        dval = (3.0 * c3[..., None] * roots + 2.0 * c2[..., None]) * roots + c1[..., None]
        dval = np.where(np.abs(dval) < 1e-300, 1.0, dval)
        roots = roots - val / dval

    cand = np.concatenate([np.maximum(roots, 0.0), np.zeros(a.shape + (1,))], axis=-1)
    fval = (
        a[..., None] * np.log2(1.0 + gamma[..., None] * cand * cand)
        + 2.0 * b[..., None] * cand
        - lam[..., None] * cand * cand
    )
    best = np.take_along_axis(cand, np.argmax(fval, axis=-1)[..., None], axis=-1)[..., 0]
    return np.where(lin, s_lin, best)


def _p_block(a, gamma, b, budget, lam_init=None, iters=60):
    """Budget-constrained maximization of sum_k [a log2(1+gamma s^2) + 2 b s].

    Finds the multiplier lam by bisection so the returned s saturates the
    budget (or proves the objective wants less than the whole budget).
    Returns (s, lam) for warm-starting the next call.
    """
    B = a.shape[0]
    lam0 = np.full(B, 1.0) if lam_init is None else np.maximum(lam_init, 1e-12)

    def total(lam):
        s = _cubic_argmax(a, gamma, b, lam[:, None])
        return np.sum(s * s, axis=-1), s

    lam_hi = lam0.copy()
    for _ in range(40):
        tot, _ = total(lam_hi)
        grow = tot > budget
        if not grow.any():
            break
        lam_hi = np.where(grow, lam_hi * 16.0, lam_hi)
    lam_lo = np.minimum(lam0, lam_hi) / 16.0
    for _ in range(40):
        tot, _ = total(lam_lo)
        shrink = tot < budget
        if not shrink.any():
            break
        lam_lo = np.where(shrink, lam_lo / 16.0, lam_lo)

    for _ in range(iters):
        lam_mid = 0.5 * (lam_lo + lam_hi)
        tot, _ = total(lam_mid)
        hi_side = tot > budget
        lam_lo = np.where(hi_side, lam_mid, lam_lo)
        lam_hi = np.where(~hi_side, lam_mid, lam_hi)

    _, s = total(lam_hi)
    return _project_sphere(s, budget), lam_hi


def _pg_steps(g, G, alpha, beta, zeta, budget, rho, s, eta, n_steps):
    """Adaptive projected-gradient ascent on s with rho held fixed."""
    F = _objective(g, G, alpha, beta, zeta, rho, s)
    Bm = _eh_matrix(G, beta, zeta, rho)
    for _ in range(n_steps):
        gp = g * s * s
        grad = 2.0 * alpha * rho * g * s / ((1.0 + rho * gp) * _LN2) + 2.0 * np.einsum(
            "bjl,bl->bj", Bm, s
        )
        s_try = _project_sphere(s + eta[:, None] * grad, budget)
        F_try = _objective(g, G, alpha, beta, zeta, rho, s_try)
        accept = F_try >= F
        s = np.where(accept[:, None], s_try, s)
        F = np.where(accept, F_try, F)
        eta = np.where(accept, eta * 1.6, eta * 0.4)
    return s, F, eta


def _barrier_phase(g, G, alpha, beta, zeta, budget, rho, s, n_stages=3, n_steps=25):
    """Short interior-point warmup: ascend F plus a log-barrier, shrinking mu."""
    B, K = rho.shape
    eps_r = 1e-4

    rho = np.clip(rho, 2 * eps_r, 1.0 - 2 * eps_r)
    s = np.maximum(s, np.sqrt(budget / K) * 1e-4)
    norm2 = np.sum(s * s, axis=-1, keepdims=True)
    s = s * np.sqrt(budget * (1.0 - 1e-6) / np.maximum(norm2, 1e-300))

    F0 = _objective(g, G, alpha, beta, zeta, rho, s)
    mu = 0.01 * (1.0 + np.abs(F0)) / (3 * K + 1)
    eta = np.full(B, 0.05 * np.sqrt(budget / K))

    def barrier_val(mu_c, rho_c, s_c):
        slack = budget - np.sum(s_c * s_c, axis=-1)
        bad = (
            np.any((rho_c <= eps_r) | (rho_c >= 1.0 - eps_r), axis=-1)
            | np.any(s_c <= 0.0, axis=-1)
            | (slack <= 0.0)
        )
        rho_safe = np.clip(rho_c, 1e-12, 1.0 - 1e-12)
        s_safe = np.maximum(s_c, 1e-300)
        bar = (
            np.sum(np.log(rho_safe) + np.log1p(-rho_safe), axis=-1)
            + 2.0 * np.sum(np.log(s_safe), axis=-1)
            + np.log(np.maximum(slack, 1e-300))
        )
        with np.errstate(invalid="ignore"):  # out-of-box trial points get -inf anyway
            val = _objective(g, G, alpha, beta, zeta, rho_c, s_c) + mu_c * bar
        return np.where(bad, -np.inf, val)

    for _ in range(n_stages):
        Gv = barrier_val(mu, rho, s)
        Bm = None
        for _ in range(n_steps):
            gp = g * s * s
            denom = (1.0 + rho * gp) * _LN2
            field = _field_powers(G, s)
            grad_rho = (
                alpha * gp / denom
                - beta * zeta * field
                + mu[:, None] * (1.0 / rho - 1.0 / (1.0 - rho))
            )
            Bm = _eh_matrix(G, beta, zeta, rho)
            slack = budget - np.sum(s * s, axis=-1, keepdims=True)
            grad_s = (
                2.0 * alpha * rho * g * s / denom
                + 2.0 * np.einsum("bjl,bl->bj", Bm, s)
                + mu[:, None] * (2.0 / np.maximum(s, 1e-300) - 2.0 * s / np.maximum(slack, 1e-300))
            )
            rho_try = rho + eta[:, None] * grad_rho
            s_try = s + eta[:, None] * grad_s
            G_try = barrier_val(mu, rho_try, s_try)
            accept = G_try > Gv
            rho = np.where(accept[:, None], rho_try, rho)
            s = np.where(accept[:, None], s_try, s)
            Gv = np.where(accept, G_try, Gv)
            eta = np.where(accept, eta * 1.5, eta * 0.5)
        mu = mu / 30.0
    return rho, s


def _solve_joint(g, G, alpha, beta, zeta, budget, rho0, s0, opts: AllocOptions):
    """Full ascent from given starts; returns (rho, s, F, converged) per row.

    Rows that stop improving are frozen and dropped from the working set so a
    few slow rows do not keep the whole batch iterating.
    """
    rho_w, s_w = _barrier_phase(g, G, alpha, beta, zeta, budget, rho0, s0)
    s_w = _project_sphere(s_w, budget)
    rho_w = np.clip(rho_w, 0.0, 1.0)

    B, K = rho_w.shape
    out_rho = np.empty((B, K))
    out_s = np.empty((B, K))
    out_F = np.full(B, -np.inf)
    out_conv = np.zeros(B, dtype=bool)

    idx = np.arange(B)
    g_w, G_w, a_w, b_w = g, G, alpha, beta
    eta = np.full(B, 0.05 * np.sqrt(budget / K))
    lam = None
    F = _objective(g_w, G_w, a_w, b_w, zeta, rho_w, s_w)
    stall = np.zeros(B, dtype=int)
    max_rounds = max(3, min(120, opts.max_iters // 80))

    for round_no in range(1, max_rounds + 1):
        field = _field_powers(G_w, s_w)
        rho_w = closed_form_rho(a_w, b_w, g_w * s_w * s_w, field, zeta)

        Bm = _eh_matrix(G_w, b_w, zeta, rho_w)
        b_lin = np.einsum("bjl,bl->bj", Bm, s_w)
        s_ref, lam = _p_block(a_w, rho_w * g_w, b_lin, budget, lam_init=lam)
        F_cur = _objective(g_w, G_w, a_w, b_w, zeta, rho_w, s_w)
        F_ref = _objective(g_w, G_w, a_w, b_w, zeta, rho_w, s_ref)
        keep = F_ref >= F_cur - 1e-10 * (1.0 + np.abs(F_cur))
        s_w = np.where(keep[:, None], s_ref, s_w)

        s_w, F_new, eta = _pg_steps(g_w, G_w, a_w, b_w, zeta, budget, rho_w, s_w, eta, 4)

        improve = F_new - F
        stall = np.where(improve < opts.tol * (1.0 + np.abs(F_new)), stall + 1, 0)
        F = F_new

        done = stall >= 2
        if round_no == max_rounds:
            done = np.ones_like(done)
        if done.any():
            sel = idx[done]
            out_rho[sel] = rho_w[done]
            out_s[sel] = s_w[done]
            out_F[sel] = F[done]
            out_conv[sel] = stall[done] >= 2
            keep_rows = ~done
            if not keep_rows.any():
                break
            idx = idx[keep_rows]
            g_w, G_w = g_w[keep_rows], G_w[keep_rows]
            a_w, b_w = a_w[keep_rows], b_w[keep_rows]
            rho_w, s_w = rho_w[keep_rows], s_w[keep_rows]
            F, stall, eta = F[keep_rows], stall[keep_rows], eta[keep_rows]
            lam = lam[keep_rows] if lam is not None else None

    # final exact split update on the frozen iterates
    field = _field_powers(G, out_s)
    out_rho = closed_form_rho(alpha, beta, g * out_s * out_s, field, zeta)
    out_F = _objective(g, G, alpha, beta, zeta, out_rho, out_s)
    return out_rho, out_s, out_F, out_conv


def _restart_points(g, budget, alpha, beta, zeta, G, restarts, seed):
    """Initial (rho, s) stack: baseline, half split, spread levels, seeded random."""
    S, K = g.shape
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(983,)))
    rho0 = np.empty((S, restarts, K))
    s0 = np.empty((S, restarts, K))
    s_eq = np.sqrt(budget / K)

    for r in range(restarts):
        if r == 0:
            s0[:, r, :] = s_eq
            se = np.full((S, K), s_eq)
            field = _field_powers(G, se)
            rho0[:, r, :] = closed_form_rho(alpha, beta, g * (budget / K), field, zeta)
        elif r == 1:
            s0[:, r, :] = s_eq
            rho0[:, r, :] = 0.5
        elif r == 2:
            # spread toward the strong decoders: water-level-like heuristic start
            inv = np.where(g > 0, 1.0 / np.maximum(g, 1e-300), np.inf)
            p = np.maximum(np.min(inv, axis=-1, keepdims=True) + budget / K - inv, 0.0)
            tot = p.sum(axis=-1, keepdims=True)
            p = np.where(tot > 0, p * budget / np.maximum(tot, 1e-300), budget / K)
            s0[:, r, :] = np.sqrt(p)
            field = _field_powers(G, s0[:, r, :])
            rho0[:, r, :] = closed_form_rho(alpha, beta, g * p, field, zeta)
        else:
            rho0[:, r, :] = rng.uniform(0.02, 0.98, size=(S, K))
            p = rng.dirichlet(np.ones(K), size=S) * budget
            s0[:, r, :] = np.sqrt(p)
    return rho0, s0


def solve_pso_pa_batch(
    gains: np.ndarray,
    grams: np.ndarray,
    weights: RequirementWeights,
    zeta: float,
    budget: float,
    opts: AllocOptions = AllocOptions(),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint (rho, P) ascent over a stack of slots.

    Args:
        gains: (S, K) effective channel powers.
        grams: (S, K, K, K) harvested-field Gram tensors.
        weights: per-user (alpha, beta), shared across slots.
        zeta: conversion efficiency.
        budget: sum transmit power bound K * P_t.
        opts: restart count, seed, and stopping tolerances.

    Returns:
        (rho, p, objective) with shapes (S, K), (S, K), (S,).  The result on
        every slot weakly dominates the equal-power, closed-form-rho baseline.
    """
    S, K = gains.shape
    R = opts.restarts
    alpha = np.broadcast_to(np.asarray(weights.alpha, dtype=float), (S, K))
    beta = np.broadcast_to(np.asarray(weights.beta, dtype=float), (S, K))

    rho0, s0 = _restart_points(gains, budget, alpha, beta, zeta, grams, R, opts.seed)
    g_r = np.repeat(gains[:, None, :], R, axis=1).reshape(S * R, K)
    G_r = np.repeat(grams[:, None], R, axis=1).reshape(S * R, K, K, K)
    a_r = np.repeat(alpha[:, None, :], R, axis=1).reshape(S * R, K)
    b_r = np.repeat(beta[:, None, :], R, axis=1).reshape(S * R, K)

    rho, s, F, conv = _solve_joint(
        g_r, G_r, a_r, b_r, zeta, budget, rho0.reshape(S * R, K), s0.reshape(S * R, K), opts
    )
    if not conv.all():
        warnings.warn(
            f"{int((~conv).sum())} of {conv.size} ascent runs hit the iteration cap; "
            "returning best iterates",
            RuntimeWarning,
            stacklevel=2,
        )
    rho = rho.reshape(S, R, K)
    s = s.reshape(S, R, K)
    F = F.reshape(S, R)

    best = np.argmax(F, axis=1)
    take = np.arange(S)
    rho_best = rho[take, best]
    s_best = s[take, best]
    F_best = F[take, best]

    # exact baseline candidate: equal power, closed-form splits
    s_eq = np.full((S, K), np.sqrt(budget / K))
    field_eq = _field_powers(grams, s_eq)
    rho_eq = closed_form_rho(alpha, beta, gains * (budget / K), field_eq, zeta)
    F_eq = _objective(gains, grams, alpha, beta, zeta, rho_eq, s_eq)
    swap = F_eq > F_best
    rho_best = np.where(swap[:, None], rho_eq, rho_best)
    s_best = np.where(swap[:, None], s_eq, s_best)
    F_best = np.where(swap, F_eq, F_best)

    return rho_best, s_best**2, F_best


def solve_pso_pa(
    ch: ChannelSet,
    sol: IaSolution,
    xi: SymbolVector,
    weights: RequirementWeights,
    cfg: NetworkConfig,
    opts: AllocOptions = AllocOptions(),
) -> tuple[SplitProfile, PowerProfile, float]:
    """Jointly optimize splits and transmit powers for one slot.

    Returns:
        (SplitProfile, PowerProfile, objective).  The objective weakly
        dominates the equal-power, closed-form-rho baseline by construction;
        non-convergence inside the iteration budget emits a RuntimeWarning and
        returns the best iterate.
    """
    check_channel_shape(cfg, ch.h)
    if np.asarray(weights.alpha).shape != (cfg.K,):
        raise ConfigurationError(f"weights must have shape ({cfg.K},)")
    g, G = slot_gain_gram(ch, sol, xi)
    budget = cfg.K * cfg.P_t
    rho, p, F = solve_pso_pa_batch(g[None], G[None], weights, cfg.zeta, budget, opts)
    p_row = np.minimum(p[0], budget)
    total = p_row.sum()
    if total > budget:
        p_row = p_row * (budget / total)
    return (
        SplitProfile(rho=rho[0]),
        PowerProfile(p=p_row, budget=budget),
        float(F[0]),
    )


def water_filling(gains: np.ndarray, budget: float) -> PowerProfile:
    """Classical budgeted rate maximization: p[k] = max(V - 1/g[k], 0).

    The water level V is located by bisection until the budget matches, then
    snapped to the exact level of the final active set.

    Raises:
        NoSignalError: every gain is zero.
    """
    gains = np.asarray(gains, dtype=float)
    if gains.ndim != 1 or gains.size == 0:
        raise ConfigurationError("gains must be a non-empty vector")
    if np.any(gains < 0) or not np.all(np.isfinite(gains)):
        raise ConfigurationError("gains must be finite and non-negative")
    if not budget > 0:
        raise ConfigurationError(f"budget must be positive, got {budget!r}")
    if np.all(gains == 0.0):
        raise NoSignalError("all channel gains are zero")

    with np.errstate(divide="ignore"):
        inv = np.where(gains > 0, 1.0 / gains, np.inf)
    lo = float(inv.min())
    hi = lo + float(budget)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.sum(np.maximum(mid - inv, 0.0)) > budget:
            hi = mid
        else:
            lo = mid
    level = 0.5 * (lo + hi)

    active = level > inv
    n_act = int(active.sum())
    if n_act > 0:
        exact = (budget + float(np.sum(inv[active]))) / n_act
        inactive_fine = ~active & np.isfinite(inv)
        consistent = exact > float(np.max(inv[active]))
        if inactive_fine.any():
            consistent = consistent and exact <= float(np.min(inv[inactive_fine]))
        if consistent:
            level = exact
    p = np.where(active, np.maximum(level - inv, 0.0), 0.0)
    return PowerProfile(p=p, budget=float(budget), water_level=float(level))


def solve_eh_only_pa(
    ch: ChannelSet,
    sol: IaSolution,
    xi: SymbolVector,
    cfg: NetworkConfig,
    opts: AllocOptions = AllocOptions(),
) -> PowerProfile:
    """Allocate the budget to maximize total harvested field power.

    Solves max_p sum_k ||sum_j sqrt(p_j) h[k][j] v[j] xi_j||^2 on the simplex
    by projected ascent on s = sqrt(p), multi-start: the quadratic form's
    dominant eigenvector folded into the orthant, the equal split, and seeded
    random simplex points.
    """
    check_channel_shape(cfg, ch.h)
    _, G = slot_gain_gram(ch, sol, xi)
    K = cfg.K
    budget = cfg.K * cfg.P_t
    A = G.sum(axis=0)

    starts = [np.full(K, np.sqrt(budget / K))]
    _, eigvecs = np.linalg.eigh(A)
    lead = np.abs(eigvecs[:, -1])
    if lead.sum() > 0:
        starts.append(np.sqrt(budget) * lead / np.linalg.norm(lead))
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(opts.seed), spawn_key=(984,)))
    while len(starts) < max(opts.restarts, 3):
        p = rng.dirichlet(np.ones(K)) * budget
        starts.append(np.sqrt(p))

    s0 = np.stack(starts)
    B = s0.shape[0]
    G_full = np.repeat(G[None], B, axis=0)
    # alpha = 0 silences the rate part; beta = 1 and zeta = 1 leave the plain
    # per-receiver field powers of the harvested-only objective
    _, s, F, _ = _solve_joint(
        np.zeros((B, K)),
        G_full,
        np.zeros((B, K)),
        np.ones((B, K)),
        1.0,
        budget,
        np.zeros((B, K)),
        s0,
        opts,
    )
    best = int(np.argmax(F))
    p = np.minimum(s[best] ** 2, budget)
    total = p.sum()
    if total > budget:
        p = p * (budget / total)
    return PowerProfile(p=p, budget=budget)
