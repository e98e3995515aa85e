"""Burn-in lower bound for confident-but-wrong priors.

The bound prices the forced exploration an algorithm must spend to
overturn a prior that concentrates mass 1 - epsilon on the wrong arm,
via a sequential-testing argument. Pure arithmetic only; no simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BurnInParams",
    "BurnInResult",
    "binary_kl",
    "effective_prior_weight",
    "burn_in_lower_bound",
]


@dataclass(frozen=True)
class BurnInParams:
    """epsilon: prior mass on the true optimum; delta: allowed failure
    probability of identification; gap: per-cycle sub-optimality cost."""

    epsilon: float
    delta: float
    gap: float
    k: int

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.gap < 0:
            raise ValueError(f"gap must be non-negative, got {self.gap}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")

    @property
    def assumption_violated(self) -> bool:
        """The bound's derivation assumes epsilon <= delta."""
        return self.epsilon > self.delta


@dataclass(frozen=True)
class BurnInResult:
    cycles: float
    degenerate: bool            # log term non-positive; bound clamped to 0
    assumption_violated: bool   # evaluated outside the epsilon <= delta regime


def binary_kl(p: float, q: float) -> float:
    """Binary KL divergence p*ln(p/q) + (1-p)*ln((1-p)/(1-q)), in nats."""
    if not 0 < p < 1 or not 0 < q < 1:
        raise ValueError("binary_kl arguments must lie strictly in (0, 1)")
    return p * math.log(p / q) + (1.0 - p) * math.log((1.0 - p) / (1.0 - q))


def effective_prior_weight(epsilon: float, k: int) -> float:
    """Prior weight on the optimum once spread across all k arms."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return epsilon / (1.0 - epsilon + epsilon * k)


def burn_in_lower_bound(p: BurnInParams) -> BurnInResult:
    """Minimum expected cycles wasted before overturning the wrong prior.

    (1-delta)(1-epsilon) * gap * ln((1-epsilon)/delta) / kl(eps_k, 1-eps_k).
    When delta >= 1 - epsilon the log term is non-positive and the bound
    degenerates to zero.
    """
    log_term = math.log((1.0 - p.epsilon) / p.delta)
    if log_term <= 0:
        return BurnInResult(cycles=0.0, degenerate=True,
                            assumption_violated=p.assumption_violated)
    eps_k = effective_prior_weight(p.epsilon, p.k)
    kl = binary_kl(eps_k, 1.0 - eps_k)
    cycles = (1.0 - p.delta) * (1.0 - p.epsilon) * p.gap * log_term / kl
    return BurnInResult(cycles=cycles, degenerate=False,
                        assumption_violated=p.assumption_violated)
