"""Seeded generation of block-fading channels and transmit symbols.

All randomness is derived from ``(seed, slot, stream)`` through numpy's
SeedSequence, so every draw is a pure function of its arguments.  Channels,
symbols, and solver initialization live on separate stream labels and never
overlap for any slot index.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, DimensionError

# Stream labels for the per-slot random streams.
CHANNEL_STREAM = 0
SYMBOL_STREAM = 1
SOLVER_INIT_STREAM = 2

# Slot-index base reserved for power calibration so that calibration draws
# never reuse evaluation slots.
CALIBRATION_SLOT_BASE = 1 << 20


@dataclass(frozen=True)
class NetworkConfig:
    """Static description of a symmetric K-user MIMO interference network.

    Attributes:
        K: number of transmit/receive pairs.
        M: transmit antennas per user.
        N: receive antennas per user.
        d: data streams per user (the SWIPT chain requires d = 1).
        a_p: per-entry channel variance (path loss times fading power).
        zeta: energy-conversion efficiency of the harvesting circuit.
        P_t: per-user transmit power in watts.
    """

    K: int
    M: int
    N: int
    d: int = 1
    a_p: float = 0.1
    zeta: float = 0.5
    P_t: float = 1.0

    def __post_init__(self):
        for name in ("K", "M", "N", "d"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if not 0.0 < self.a_p <= 1.0:
            raise ConfigurationError(f"a_p must lie in (0, 1], got {self.a_p!r}")
        if not 0.0 < self.zeta < 1.0:
            raise ConfigurationError(f"zeta must lie in (0, 1), got {self.zeta!r}")
        if not self.P_t > 0.0 or not np.isfinite(self.P_t):
            raise ConfigurationError(f"P_t must be finite and positive, got {self.P_t!r}")

    def with_power(self, P_t: float) -> "NetworkConfig":
        """Return a copy of the config with a different transmit power."""
        return replace(self, P_t=float(P_t))


@dataclass(frozen=True)
class ChannelSet:
    """One slot's channel matrices, h[k][j] of shape (N, M), stacked (K, K, N, M)."""

    h: np.ndarray
    slot: int


@dataclass(frozen=True)
class SymbolVector:
    """One slot's unit-power transmit symbols, one complex scalar per user."""

    xi: np.ndarray
    slot: int


def stream_rng(seed: int, slot: int, stream: int) -> np.random.Generator:
    """Generator for the (seed, slot, stream) triple, independent across triples."""
    if seed < 0 or slot < 0:
        raise ConfigurationError(f"seed and slot must be non-negative, got {seed}, {slot}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(slot)))
    return np.random.default_rng(ss)


def draw_channel_set(cfg: NetworkConfig, seed: int, slot: int) -> ChannelSet:
    """Draw one slot of i.i.d. complex Gaussian channels.

    Each entry of h[k][j] is CN(0, a_p): two independent real Gaussians of
    variance a_p/2 for the real and imaginary parts.

    Args:
        cfg: network description supplying K, M, N, and a_p.
        seed: base seed of the run.
        slot: slot index; each slot is an independent fading block.

    Returns:
        ChannelSet with h of shape (K, K, N, M), h[k][j] being the channel
        from transmitter j to receiver k.
    """
    rng = stream_rng(seed, slot, CHANNEL_STREAM)
    shape = (cfg.K, cfg.K, cfg.N, cfg.M)
    scale = np.sqrt(cfg.a_p / 2.0)
    h = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return ChannelSet(h=h, slot=slot)


def draw_symbols(cfg: NetworkConfig, seed: int, slot: int) -> SymbolVector:
    """Draw one slot of unit-power CN(0, 1) transmit symbols, one per user."""
    rng = stream_rng(seed, slot, SYMBOL_STREAM)
    xi = (rng.standard_normal(cfg.K) + 1j * rng.standard_normal(cfg.K)) / np.sqrt(2.0)
    return SymbolVector(xi=xi, slot=slot)


def stack_channels(cfg: NetworkConfig, seed: int, slots: np.ndarray) -> np.ndarray:
    """Stack draw_channel_set over the given slot indices into (S, K, K, N, M)."""
    return np.stack([draw_channel_set(cfg, seed, int(s)).h for s in np.asarray(slots)])


def stack_symbols(cfg: NetworkConfig, seed: int, slots: np.ndarray) -> np.ndarray:
    """Stack draw_symbols over the given slot indices into (S, K)."""
    return np.stack([draw_symbols(cfg, seed, int(s)).xi for s in np.asarray(slots)])


def check_channel_shape(cfg: NetworkConfig, h: np.ndarray) -> None:
    """Raise DimensionError unless h has the (K, K, N, M) layout of cfg."""
    expected = (cfg.K, cfg.K, cfg.N, cfg.M)
    if h.shape != expected:
        raise DimensionError(f"channel array has shape {h.shape}, expected {expected}")
    if not np.iscomplexobj(h):
        raise DimensionError("channel array must be complex valued")
