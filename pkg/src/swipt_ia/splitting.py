"""Per-user power-splitting optimization.

Every receiver weighs rate against harvest through (alpha, beta) with
alpha + beta = 1 and maximizes

    F_k(rho) = alpha * log2(1 + rho * P_t * gain) + beta * (1 - rho) * zeta * P_t * field

over rho in [0, 1].  F_k is concave in rho, so the maximizer is the
stationary point clamped to the box, and it separates across users because no
user's split appears in another user's term.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import NetworkConfig
from .errors import ConfigurationError, DegenerateWeightsError
from .metrics import SlotMetrics

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class RequirementWeights:
    """Per-user rate/harvest priorities, alpha + beta = 1 elementwise."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if alpha.shape != beta.shape:
            raise ConfigurationError("alpha and beta must have the same shape")
        if np.any(alpha < 0) or np.any(beta < 0):
            raise ConfigurationError("weights must be non-negative")
        if np.any(np.abs(alpha + beta - 1.0) > 1e-12):
            raise ConfigurationError("alpha + beta must equal 1 per user")


def uniform_weights(alpha: float, K: int) -> RequirementWeights:
    """The same (alpha, 1 - alpha) for every user."""
    a = np.full(K, float(alpha))
    return RequirementWeights(alpha=a, beta=1.0 - a)


def weights_from_requirements(
    rate_req, power_req, upsilon: float = 1.0, phi: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Normalize service requirements into splitting weights, elementwise.

    alpha = upsilon * rate_req / (upsilon * rate_req + phi * power_req) and
    beta = 1 - alpha.  upsilon and phi convert the two requirement units onto
    a common scale.  Scalars and per-user vectors are both accepted.

    Raises:
        DegenerateWeightsError: some user has both scaled requirements zero.
    """
    rate_req = np.asarray(rate_req, dtype=float)
    power_req = np.asarray(power_req, dtype=float)
    if np.any(rate_req < 0) or np.any(power_req < 0):
        raise ConfigurationError("requirements must be non-negative")
    if upsilon < 0 or phi < 0:
        raise ConfigurationError("scale factors must be non-negative")
    num = upsilon * rate_req
    den = num + phi * power_req
    if np.any(den == 0.0):
        raise DegenerateWeightsError("rate and power requirements are both zero")
    alpha = num / den
    return alpha, 1.0 - alpha


@dataclass(frozen=True)
class SplitProfile:
    """Per-user splitting factors rho in [0, 1]."""

    rho: np.ndarray


def split_objective_terms(
    rho: np.ndarray,
    gain_power: np.ndarray,
    field_power: np.ndarray,
    alpha: np.ndarray,
    beta: np.ndarray,
    zeta: float,
) -> np.ndarray:
    """Per-user objective alpha*log2(1 + rho*gp) + beta*(1-rho)*zeta*fp.

    gain_power is the decoder-side received power coefficient (P * gain) and
    field_power the harvester-side field power (P-scaled squared field norm).
    Broadcasts over any common shape.
    """
    rho = np.asarray(rho, dtype=float)
    return alpha * np.log2(1.0 + rho * gain_power) + beta * (1.0 - rho) * zeta * field_power


def closed_form_rho(
    alpha: np.ndarray,
    beta: np.ndarray,
    gain_power: np.ndarray,
    field_power: np.ndarray,
    zeta: float,
) -> np.ndarray:
    """Stationary splitting factor clamped to [0, 1], broadcast over arrays.

    The unclamped stationary point is

        psi = alpha / (beta * zeta * field_power * ln 2) - 1 / gain_power.

    Degenerate limits: alpha = 0 gives 0, beta = 0 gives 1, and a vanishing
    gain with alpha > 0 gives 0 (psi -> -inf).
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    gain_power = np.asarray(gain_power, dtype=float)
    field_power = np.asarray(field_power, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        psi = alpha / (beta * zeta * field_power * _LN2) - 1.0 / gain_power
    rho = np.clip(psi, 0.0, 1.0)
    rho = np.where(np.isnan(psi), 1.0, rho)  # alpha>0, beta*field=0, gain=0
    rho = np.where((alpha > 0) & (gain_power <= 0.0), 0.0, rho)
    rho = np.where(beta == 0.0, 1.0, rho)
    rho = np.where(alpha == 0.0, 0.0, rho)
    return rho


def pso_objective(
    profile: SplitProfile,
    metrics: SlotMetrics,
    weights: RequirementWeights,
    cfg: NetworkConfig,
) -> float:
    """Weighted sum utility of a splitting profile on one slot's metrics."""
    rho = np.asarray(profile.rho, dtype=float)
    if rho.shape != metrics.gain.shape:
        raise ConfigurationError(
            f"profile has shape {rho.shape}, metrics expect {metrics.gain.shape}"
        )
    if np.any(rho < 0.0) or np.any(rho > 1.0):
        raise ConfigurationError("rho must lie in [0, 1]")
    terms = split_objective_terms(
        rho,
        cfg.P_t * metrics.gain,
        cfg.P_t * metrics.field,
        weights.alpha,
        weights.beta,
        cfg.zeta,
    )
    return float(terms.sum())


def pso_closed_form(
    gain: float, field: float, alpha: float, beta: float, zeta: float, P_t: float
) -> float:
    """Optimal splitting factor for one user from its slot metrics.

    Args:
        gain: effective channel power |u' h v|^2.
        field: squared received field norm at unit transmit power.
        alpha, beta: rate/harvest weights, alpha + beta = 1.
        zeta: conversion efficiency.
        P_t: transmit power.

    Returns:
        rho in [0, 1] maximizing the weighted rate-plus-harvest objective.
    """
    if not np.isclose(alpha + beta, 1.0, atol=1e-12) or alpha < 0 or beta < 0:
        raise ConfigurationError(f"need alpha + beta = 1, non-negative, got {alpha}, {beta}")
    if gain < 0 or field < 0:
        raise ConfigurationError("gain and field powers must be non-negative")
    if gain == 0.0 and alpha > 0.0 and beta > 0.0:
        warnings.warn(
            "zero effective channel: splitting everything to the harvester",
            RuntimeWarning,
            stacklevel=2,
        )
    rho = closed_form_rho(alpha, beta, P_t * gain, P_t * field, zeta)
    return float(rho)


def pso_solve(
    metrics: SlotMetrics, weights: RequirementWeights, cfg: NetworkConfig
) -> SplitProfile:
    """Optimal per-user splits for one slot; separable, so solved user by user."""
    if weights.alpha.shape != metrics.gain.shape:
        raise ConfigurationError(
            f"weights have shape {weights.alpha.shape}, metrics expect {metrics.gain.shape}"
        )
    rho = closed_form_rho(
        weights.alpha,
        weights.beta,
        cfg.P_t * metrics.gain,
        cfg.P_t * metrics.field,
        cfg.zeta,
    )
    return SplitProfile(rho=rho)
