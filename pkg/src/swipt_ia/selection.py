"""Receiver selection: which users spend the slot harvesting.

Two policies are implemented.  Round-robin selection (RRS) rotates a block of
L consecutive user numbers through the ring 1..K so every user harvests
exactly L times in any window of K slots.  Ratio-based selection (PRRS) picks
the L users whose power-to-rate ratio is largest, spending the slots of users
whose channels favor harvesting over decoding.

User numbers in this module are 1-based (user 0 is written K), matching the
ring arithmetic; array positions elsewhere are user_number - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, NetworkConfig, SymbolVector
from .errors import SelectionError
from .ia import IaSolution
from .metrics import SlotMetrics, compute_slot_metrics


@dataclass(frozen=True)
class SelectionState:
    """Round-robin pointer: the user number selected last (K before any slot)."""

    last_index: int


def initial_state(K: int) -> SelectionState:
    """Fresh round-robin state for a K-user network."""
    return SelectionState(last_index=K)


@dataclass(frozen=True)
class SlotOutcome:
    """Accounting for one slot under a fixed harvesting set.

    eh_set holds 1-based user numbers; sum_rate counts decoding users only,
    sum_power counts harvesting users only.
    """

    eh_set: frozenset
    sum_rate: float
    sum_power: float


def _check_L(K: int, L: int) -> None:
    if not 0 <= L < K:
        raise SelectionError(f"need 0 <= L < K, got L={L} for K={K}")


def rrs_select(state: SelectionState, K: int, L: int) -> tuple[frozenset, SelectionState]:
    """Advance the round-robin block by L positions.

    Args:
        state: pointer state from the previous slot.
        K: number of users.
        L: harvesting users this slot.

    Returns:
        (eh_set, new_state): the L consecutive user numbers following the
        pointer, and the pointer moved to the last of them.
    """
    _check_L(K, L)
    if not 1 <= state.last_index <= K:
        raise SelectionError(f"last_index {state.last_index} outside 1..{K}")
    members = frozenset(((state.last_index + i - 1) % K) + 1 for i in range(1, L + 1))
    new_last = ((state.last_index + L - 1) % K) + 1
    return members, SelectionState(last_index=new_last)


def rrs_state_after(K: int, L: int, n_slots: int) -> SelectionState:
    """Pointer position after n_slots round-robin selections, in closed form."""
    _check_L(K, L)
    return SelectionState(last_index=((K + n_slots * L - 1) % K) + 1)


def prrs_select(prr_values: np.ndarray, L: int) -> frozenset:
    """Pick the L users with the largest power-to-rate ratio.

    Ties resolve to the lowest user number.  prr_values may contain np.inf
    (users whose decoder rate vanished); those sort first.
    """
    prr_values = np.asarray(prr_values, dtype=float)
    K = prr_values.shape[0]
    _check_L(K, L)
    if np.isnan(prr_values).any():
        raise SelectionError("prr values must not contain NaN")
    order = np.lexsort((np.arange(K), -prr_values))
    return frozenset(int(i) + 1 for i in order[:L])


def run_selection_slot(
    ch: ChannelSet,
    sol: IaSolution,
    xi: SymbolVector,
    cfg: NetworkConfig,
    eh_set: frozenset,
    mode: str = "inst",
    metrics: SlotMetrics | None = None,
) -> SlotOutcome:
    """Account one slot: harvesting users at rho = 0, decoding users at rho = 1.

    Args:
        ch, sol, xi: the slot's channels, alignment, and symbols.
        cfg: network description.
        eh_set: 1-based user numbers spending the slot harvesting.
        mode: "inst" or "expected" harvest accounting.
        metrics: precomputed slot metrics, recomputed when omitted.

    Returns:
        SlotOutcome with the decoded sum rate and harvested sum power.
    """
    K = cfg.K
    for u in eh_set:
        if not 1 <= u <= K:
            raise SelectionError(f"eh_set member {u} outside 1..{K}")
    if metrics is None:
        metrics = compute_slot_metrics(ch, sol, xi, cfg, mode=mode)
    eh_mask = np.zeros(K, dtype=bool)
    for u in eh_set:
        eh_mask[u - 1] = True
    sum_rate = float(metrics.rate_full[~eh_mask].sum())
    sum_power = float(metrics.power_full[eh_mask].sum())
    return SlotOutcome(eh_set=frozenset(eh_set), sum_rate=sum_rate, sum_power=sum_power)
