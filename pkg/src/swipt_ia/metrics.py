"""Per-slot link metrics: information rate, harvested power, and their ratio.

Each receiver splits its RF input by a factor rho: the rho share feeds the
decoder, the 1 - rho share feeds the harvester.  The harvested quantity uses
the total received field (desired signal plus residual interference), scaled
by the conversion efficiency zeta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, NetworkConfig, SymbolVector, check_channel_shape
from .errors import ConfigurationError, DimensionError
from .ia import IaSolution


@dataclass(frozen=True)
class SlotMetrics:
    """Per-user metric arrays for one slot (index = user position 0..K-1).

    rate_full: decoder rate at rho = 1.
    power_full: harvested power at rho = 0 (instantaneous symbols).
    prr: power-to-rate ratio, np.inf where the rate vanishes.
    q_upper: harvested-power upper bound from the spectral norms of row k.
    c: desired-signal amplitude ||h[k][k] v[k]||.
    cos_delta: alignment cosine between the combiner and the desired signal.
    gain: effective channel power |u[k]' h[k][k] v[k]|^2.
    field: squared field norm feeding the harvester at unit transmit power.
    """

    rate_full: np.ndarray
    power_full: np.ndarray
    prr: np.ndarray
    q_upper: np.ndarray
    c: np.ndarray
    cos_delta: np.ndarray
    gain: np.ndarray
    field: np.ndarray


def _check_user(K: int, k: int) -> None:
    if not 0 <= k < K:
        raise ConfigurationError(f"user index {k} outside 0..{K - 1}")


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 <= rho <= 1.0 or not np.isfinite(rho):
        raise ConfigurationError(f"rho must lie in [0, 1], got {rho!r}")
    return rho


def effective_gain(ch: ChannelSet, sol: IaSolution, k: int) -> float:
    """|u[k]' h[k][k] v[k]|^2 for single-stream solutions."""
    _check_user(ch.h.shape[0], k)
    val = np.conj(sol.u[k][:, 0]) @ ch.h[k, k] @ sol.v[k][:, 0]
    return float(np.abs(val) ** 2)


def rate_id(ch: ChannelSet, sol: IaSolution, k: int, P_t: float, rho: float) -> float:
    """Decoder rate log2(1 + rho * P_t * |u[k]' h[k][k] v[k]|^2) in bits/s/Hz.

    Residual interference is treated as cancelled, so the rate depends only on
    the effective direct channel.  rho = 0 gives exactly 0.
    """
    rho = _check_rho(rho)
    if P_t < 0:
        raise ConfigurationError(f"P_t must be non-negative, got {P_t!r}")
    return float(np.log2(1.0 + rho * P_t * effective_gain(ch, sol, k)))


def received_field(ch: ChannelSet, sol: IaSolution, xi: SymbolVector, k: int) -> np.ndarray:
    """Unit-power antenna-domain field sum_j h[k][j] v[j] xi[j] at receiver k."""
    K = ch.h.shape[0]
    _check_user(K, k)
    if xi.xi.shape != (K,):
        raise DimensionError(f"symbol vector has shape {xi.xi.shape}, expected ({K},)")
    hv = np.einsum("jnm,jm->jn", ch.h[k], sol.v[:, :, 0])
    return hv.T @ xi.xi


def harvested_power(
    ch: ChannelSet,
    sol: IaSolution,
    xi: SymbolVector,
    k: int,
    cfg: NetworkConfig,
    rho: float,
) -> float:
    """Instantaneous harvested power (1 - rho) * zeta * P_t * ||sum_j h v xi||^2."""
    rho = _check_rho(rho)
    check_channel_shape(cfg, ch.h)
    field = received_field(ch, sol, xi, k)
    return float((1.0 - rho) * cfg.zeta * cfg.P_t * np.sum(np.abs(field) ** 2))


def harvested_power_expected(
    ch: ChannelSet, sol: IaSolution, k: int, cfg: NetworkConfig, rho: float
) -> float:
    """Harvested power averaged over unit-power symbols.

    Cross terms between users vanish under independent zero-mean symbols,
    leaving (1 - rho) * zeta * P_t * sum_j ||h[k][j] v[j]||^2.
    """
    rho = _check_rho(rho)
    check_channel_shape(cfg, ch.h)
    _check_user(cfg.K, k)
    hv = np.einsum("jnm,jm->jn", ch.h[k], sol.v[:, :, 0])
    return float((1.0 - rho) * cfg.zeta * cfg.P_t * np.sum(np.abs(hv) ** 2))


def prr(
    ch: ChannelSet, sol: IaSolution, xi: SymbolVector, k: int, cfg: NetworkConfig
) -> float:
    """Power-to-rate ratio: full-split harvest over full-split rate.

    Returns np.inf when the decoder rate vanishes (dead direct channel), which
    ranks such users first for harvesting duty.
    """
    rate = rate_id(ch, sol, k, cfg.P_t, 1.0)
    q = harvested_power(ch, sol, xi, k, cfg, 0.0)
    if rate == 0.0:
        return float("inf")
    return float(q / rate)


def q_upper_bound(ch: ChannelSet, k: int, cfg: NetworkConfig) -> float:
    """Harvest ceiling zeta * P_t * (sum_j sqrt(lambda_max(h[k][j]' h[k][j])))^2.

    Valid for any unit-norm precoders and symbols; computed from the Hermitian
    eigendecomposition of the smaller Gram matrix of each channel.
    """
    check_channel_shape(cfg, ch.h)
    _check_user(cfg.K, k)
    row = ch.h[k]
    if cfg.M <= cfg.N:
        gram = np.einsum("jnm,jnp->jmp", np.conj(row), row)
    else:
        gram = np.einsum("jnm,jpm->jnp", row, np.conj(row))
    top = np.linalg.eigvalsh(gram)[:, -1]
    return float(cfg.zeta * cfg.P_t * np.sum(np.sqrt(top)) ** 2)


def signal_geometry(ch: ChannelSet, sol: IaSolution, k: int) -> tuple[float, float]:
    """Amplitude and alignment cosine of the desired signal at receiver k.

    Returns (c, cos_delta) with c = ||h[k][k] v[k]|| and cos_delta the cosine
    of the angle between the combiner u[k] and h[k][k] v[k].  A zero direct
    channel returns (0, 0).
    """
    _check_user(ch.h.shape[0], k)
    hv = ch.h[k, k] @ sol.v[k][:, 0]
    c = float(np.linalg.norm(hv))
    if c == 0.0:
        return 0.0, 0.0
    cos_delta = float(np.abs(np.conj(sol.u[k][:, 0]) @ hv) / c)
    return c, min(cos_delta, 1.0)


def compute_slot_metrics(
    ch: ChannelSet,
    sol: IaSolution,
    xi: SymbolVector,
    cfg: NetworkConfig,
    mode: str = "inst",
) -> SlotMetrics:
    """Bundle the per-user metrics of one slot.

    mode selects the field statistic: "inst" uses the drawn symbols, while
    "expected" replaces the field norm by its symbol average, which smooths
    sweep curves at the cost of losing per-slot harvest variation.
    """
    if mode not in ("inst", "expected"):
        raise ConfigurationError(f"mode must be 'inst' or 'expected', got {mode!r}")
    K = cfg.K
    rate_full = np.array([rate_id(ch, sol, k, cfg.P_t, 1.0) for k in range(K)])
    if mode == "inst":
        power_full = np.array(
            [harvested_power(ch, sol, xi, k, cfg, 0.0) for k in range(K)]
        )
    else:
        power_full = np.array(
            [harvested_power_expected(ch, sol, k, cfg, 0.0) for k in range(K)]
        )
    with np.errstate(divide="ignore"):
        ratio = np.where(rate_full > 0.0, power_full / np.maximum(rate_full, 1e-300), np.inf)
    q_up = np.array([q_upper_bound(ch, k, cfg) for k in range(K)])
    geom = [signal_geometry(ch, sol, k) for k in range(K)]
    gain = np.array([effective_gain(ch, sol, k) for k in range(K)])
    field = power_full / (cfg.zeta * cfg.P_t)
    return SlotMetrics(
        rate_full=rate_full,
        power_full=power_full,
        prr=ratio,
        q_upper=q_up,
        c=np.array([g[0] for g in geom]),
        cos_delta=np.array([g[1] for g in geom]),
        gain=gain,
        field=field,
    )
