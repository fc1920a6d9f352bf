"""Iterative interference alignment by leakage minimization.

The solver alternates between the forward network and its reciprocal: in each
direction every receiver picks the combiner spanning the weakest eigenmodes of
its interference covariance, and reciprocity turns those combiners into the
next precoders.  Total leakage is non-increasing across iterations, which is
the property the stopping rule and the tests lean on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    SOLVER_INIT_STREAM,
    ChannelSet,
    NetworkConfig,
    check_channel_shape,
    stream_rng,
)
from .errors import ConfigurationError, FeasibilityError, NumericError


@dataclass(frozen=True)
class SolverOptions:
    """Knobs of the alternating minimization."""

    max_iters: int = 5000
    leak_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.leak_tol > 0.0:
            raise ConfigurationError(f"leak_tol must be positive, got {self.leak_tol}")


@dataclass(frozen=True)
class IaSolution:
    """Converged (or best-effort) alignment for one slot.

    v and u hold orthonormal precoder/combiner columns, shapes (K, M, d) and
    (K, N, d).  leakage is the forward interference leakage at the returned
    iterate, iterations the number of full forward/reverse rounds executed.
    """

    v: np.ndarray
    u: np.ndarray
    leakage: float
    iterations: int
    converged: bool
    leakage_history: np.ndarray | None = None


@dataclass(frozen=True)
class IaBatch:
    """Stacked alignment results for a batch of slots."""

    v: np.ndarray  # (S, K, M, d)
    u: np.ndarray  # (S, K, N, d)
    leakage: np.ndarray  # (S,)
    iterations: np.ndarray  # (S,)
    converged: np.ndarray  # (S,) bool

    def solution(self, i: int) -> IaSolution:
        return IaSolution(
            v=self.v[i],
            u=self.u[i],
            leakage=float(self.leakage[i]),
            iterations=int(self.iterations[i]),
            converged=bool(self.converged[i]),
        )


def check_feasibility(cfg: NetworkConfig) -> bool:
    """Whether single-stream alignment is proper for the configured geometry.

    Uses the antenna-count condition M + N >= K + 1 for d = 1.  Configurations
    with d != 1 are outside the supported SWIPT chain.
    """
    if cfg.d != 1:
        raise ConfigurationError(f"only d = 1 is supported, got d = {cfg.d}")
    return cfg.M + cfg.N >= cfg.K + 1


def _init_precoders(cfg: NetworkConfig, seed: int, slots: np.ndarray) -> np.ndarray:
    """Seeded random orthonormal precoder columns, shape (S, K, M, d)."""
    S = len(slots)
    V = np.empty((S, cfg.K, cfg.M, cfg.d), dtype=complex)
    for i, slot in enumerate(slots):
        rng = stream_rng(seed, int(slot), SOLVER_INIT_STREAM)
        raw = rng.standard_normal((cfg.K, cfg.M, cfg.d)) + 1j * rng.standard_normal(
            (cfg.K, cfg.M, cfg.d)
        )
        for k in range(cfg.K):
            q, _ = np.linalg.qr(raw[k])
            V[i, k] = q[:, : cfg.d]
    return V


def _min_eigvec_columns(Q: np.ndarray, d: int) -> np.ndarray:
    """Eigenvectors of the d smallest eigenvalues for a stack of Hermitian matrices."""
    Q = 0.5 * (Q + np.conj(np.swapaxes(Q, -1, -2)))
    _, vecs = np.linalg.eigh(Q)
    return vecs[..., :d]


def _leakage_terms(H: np.ndarray, V: np.ndarray, U: np.ndarray, P_t: float, d: int) -> np.ndarray:
    """Forward leakage per slot for stacked channels/precoders/combiners."""
    HV = np.einsum("skjnm,sjmd->skjnd", H, V)
    cross = np.einsum("skne,skjnd->skjed", np.conj(U), HV)
    power = np.sum(np.abs(cross) ** 2, axis=(1, 2, 3, 4))
    K = H.shape[1]
    diag = np.einsum("skne,sknd->sked", np.conj(U), HV[:, np.arange(K), np.arange(K)])
    own = np.sum(np.abs(diag) ** 2, axis=(1, 2, 3))
    return (P_t / d) * (power - own)


def _interference_covariances(
    H: np.ndarray, V: np.ndarray, P_t: float, d: int
) -> np.ndarray:
    """Q[s, k] = (P_t/d) * sum_{j != k} h[k][j] v[j] v[j]' h[k][j]'."""
    HV = np.einsum("skjnm,sjmd->skjnd", H, V)
    total = np.einsum("skjnd,skjpd->sknp", HV, np.conj(HV))
    K = H.shape[1]
    own_cols = HV[:, np.arange(K), np.arange(K)]
    own = np.einsum("sknd,skpd->sknp", own_cols, np.conj(own_cols))
    return (P_t / d) * (total - own)


def solve_minil_batch(
    H: np.ndarray,
    slots: np.ndarray,
    cfg: NetworkConfig,
    opts: SolverOptions = SolverOptions(),
    track_history: bool = False,
) -> tuple[IaBatch, np.ndarray | None]:
    """Run the alternating leakage minimization on a stack of slots.

    Args:
        H: channels, shape (S, K, K, N, M).
        slots: slot index per batch entry, used to seed initialization.
        cfg: network description (P_t scales the reported leakage only).
        opts: stopping rule and initialization seed.
        track_history: record the per-iteration total leakage (summed over the
            batch diagnostics only when S == 1).

    Returns:
        (IaBatch, history) where history is the leakage trace when tracked.
    """
    if not check_feasibility(cfg):
        raise FeasibilityError(
            f"alignment infeasible for K={cfg.K}, M={cfg.M}, N={cfg.N}, d={cfg.d}: "
            "need M + N >= K + 1"
        )
    H = np.asarray(H, dtype=complex)
    if H.ndim != 5 or H.shape[1:] != (cfg.K, cfg.K, cfg.N, cfg.M):
        raise NumericError(f"batched channel array has shape {H.shape}")
    if not np.isfinite(H).all():
        raise NumericError("channel array contains non-finite entries")

    S, K, d = H.shape[0], cfg.K, cfg.d
    slots = np.asarray(slots)
    Hrev = np.conj(np.transpose(H, (0, 2, 1, 4, 3)))

    V = _init_precoders(cfg, opts.seed, slots)
    U = np.zeros((S, K, cfg.N, d), dtype=complex)

    out_v = np.empty_like(V)
    out_u = np.empty_like(U)
    out_leak = np.full(S, np.nan)
    out_iters = np.zeros(S, dtype=int)
    out_conv = np.zeros(S, dtype=bool)

    idx = np.arange(S)
    Hw, Hrw, Vw = H, Hrev, V
    history = [] if track_history else None

    for it in range(1, opts.max_iters + 1):
        Qf = _interference_covariances(Hw, Vw, cfg.P_t, d)
        Uw = _min_eigvec_columns(Qf, d)
        Qr = _interference_covariances(Hrw, Uw, cfg.P_t, d)
        Vw = _min_eigvec_columns(Qr, d)
        leak = _leakage_terms(Hw, Vw, Uw, cfg.P_t, d)
        if history is not None:
            history.append(float(leak.sum()))

        done = leak <= opts.leak_tol
        if it == opts.max_iters:
            done = np.ones_like(done)
        if done.any():
            sel = idx[done]
            out_v[sel] = Vw[done]
            out_u[sel] = Uw[done]
            out_leak[sel] = leak[done]
            out_iters[sel] = it
            out_conv[sel] = leak[done] <= opts.leak_tol
            keep = ~done
            if not keep.any():
                break
            idx, Hw, Hrw, Vw = idx[keep], Hw[keep], Hrw[keep], Vw[keep]

    batch = IaBatch(v=out_v, u=out_u, leakage=out_leak, iterations=out_iters, converged=out_conv)
    return batch, (np.asarray(history) if history is not None else None)


def solve_minil(
    ch: ChannelSet,
    cfg: NetworkConfig,
    opts: SolverOptions = SolverOptions(),
    track_history: bool = True,
) -> IaSolution:
    """Solve one slot's alignment by alternating leakage minimization.

    Deterministic: the same channels and opts.seed reproduce the same solution.

    Args:
        ch: the slot's channel set.
        cfg: network description.
        opts: stopping rule and initialization seed.
        track_history: attach the per-iteration leakage trace to the solution.

    Returns:
        IaSolution; converged is False when max_iters ran out first.
    """
    check_channel_shape(cfg, ch.h)
    batch, history = solve_minil_batch(
        ch.h[None], np.array([ch.slot]), cfg, opts, track_history=track_history
    )
    sol = batch.solution(0)
    if history is not None:
        sol = IaSolution(
            v=sol.v,
            u=sol.u,
            leakage=sol.leakage,
            iterations=sol.iterations,
            converged=sol.converged,
            leakage_history=history[: sol.iterations],
        )
    return sol


def interference_leakage(ch: ChannelSet, sol: IaSolution, cfg: NetworkConfig) -> float:
    """Total forward leakage (P_t/d) * sum_k sum_{j != k} ||u[k]' h[k][j] v[j]||_F^2."""
    check_channel_shape(cfg, ch.h)
    leak = _leakage_terms(ch.h[None], sol.v[None], sol.u[None], cfg.P_t, cfg.d)
    return float(leak.sum())


def effective_channel(ch: ChannelSet, sol: IaSolution, k: int) -> np.ndarray:
    """Post-processing direct channel u[k]' h[k][k] v[k] of shape (d, d)."""
    K = ch.h.shape[0]
    if not 0 <= k < K:
        raise ConfigurationError(f"user index {k} outside 0..{K - 1}")
    return np.conj(sol.u[k]).T @ ch.h[k, k] @ sol.v[k]
