"""Chirp-subcarrier allocation: per-user index sets and the mapping Gamma_k.

Interleaved users occupy ``{K*m + k}``; localized users occupy the ``k``-th
contiguous block ``{k*M + m}``.  Over all users the index sets partition
``0..N-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .enums import Strategy
from .errors import ConfigurationError
from .transforms import as_sequence, scaled_cycles

__all__ = ["AllocationPlan", "all_plans", "map_user", "demap_user", "offset_phases"]


@dataclass(frozen=True)
class AllocationPlan:
    strategy: Strategy
    n: int
    m: int
    k_users: int
    user: int

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.k_users < 1 or self.m < 1 or self.n != self.m * self.k_users:
            raise ConfigurationError(f"N={self.n} must equal M={self.m} x K={self.k_users}")
        if not 0 <= self.user < self.k_users:
            raise ConfigurationError(f"user {self.user} outside [0, {self.k_users})")

    @property
    def stride(self) -> int:
        return self.k_users if self.strategy is Strategy.INTERLEAVED else 1

    @property
    def base(self) -> int:
        """DAF-domain index of the user's first chirp subcarrier."""
        return self.user if self.strategy is Strategy.INTERLEAVED else self.user * self.m

    @cached_property
    def indices(self) -> np.ndarray:
        """Ascending DAF-domain indices of the user's chirp subcarriers."""
        idx = self.base + self.stride * np.arange(self.m)
        idx.setflags(write=False)
        return idx


def all_plans(strategy: Strategy | str, n: int, k_users: int) -> list[AllocationPlan]:
    """One plan per user, in user order."""
    if k_users < 1 or n % k_users:
        raise ConfigurationError(f"N={n} is not divisible by K={k_users}")
    return [AllocationPlan(Strategy(strategy), n, n // k_users, k_users, k) for k in range(k_users)]


def map_user(x_spread, plan: AllocationPlan) -> np.ndarray:
    """Place an M-length vector on the user's chirp subcarriers of an otherwise empty N-length frame."""
    x_spread = as_sequence(x_spread, "x_spread", plan.m)
    out = np.zeros(plan.n, dtype=np.complex128)
    out[plan.indices] = x_spread
    return out


def demap_user(y_full, plan: AllocationPlan) -> np.ndarray:
    """Extract the user's chirp subcarriers (adjoint of :func:`map_user`)."""
    y_full = as_sequence(y_full, "y_full", plan.n)
    return y_full[plan.indices].copy()


def offset_phases(plan: AllocationPlan, lambda2: float) -> np.ndarray:
    """Unit-modulus pre-compensation of the user's allocation offset.

    The N-point inverse transform applies ``exp(j2pi * lambda2 * u**2)`` at
    subcarrier ``u = base + stride*m``.  Multiplying the user's spread symbols
    by ``exp(-j2pi * lambda2 * (u**2 - (stride*m)**2))`` removes the cross term
    ``2 * base * stride * m`` so every user sees the same chirp as user 0.  All
    ones for user 0.
    """
    stride_m = plan.stride * np.arange(plan.m, dtype=np.int64)
    excess = np.square(plan.indices.astype(np.int64)) - np.square(stride_m)
    return np.exp(-2j * np.pi * scaled_cycles(lambda2, excess))
