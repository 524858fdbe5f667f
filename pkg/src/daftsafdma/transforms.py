"""Discrete affine Fourier transform (DAFT) pair and chirp parameter selection.

The forward transform of a length-``N`` sequence is::

    X[m] = 1/sqrt(N) * sum_n x[n] * exp(-j2pi * (lambda2 * m**2 + m*n/N + lambda1 * n**2))

i.e. ``diag(chirp(lambda2)) @ F_N @ diag(chirp(lambda1))`` with the unitary DFT
``F_N``.  Both directions are evaluated as chirp -> FFT -> chirp in
``O(N log N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .enums import Strategy
from .errors import ConfigurationError, SizeError

__all__ = [
    "ChirpParams",
    "scaled_cycles",
    "chirp_cycles",
    "chirp_phases",
    "daft",
    "idaft",
    "daft_matrix",
    "derive_params",
]

# Veltkamp splitting constant, 2**27 + 1
_SPLITTER = 134217729.0


def as_sequence(x, name: str = "x", length: int | None = None, axis: int = -1) -> np.ndarray:
    """Validate ``x`` as a finite complex array and return it as ``complex128``."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 0 or arr.shape[axis] < 1:
        raise SizeError(f"{name} must be a non-empty sequence")
    if length is not None and arr.shape[axis] != length:
        raise SizeError(f"{name} has length {arr.shape[axis]}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise SizeError(f"{name} contains NaN or Inf")
    return arr


def scaled_cycles(lam: float, k) -> np.ndarray:
    """Fractional part of ``lam * k`` for integer ``k``, computed without losing the low bits.

    ``lam`` is split into a 26-bit head and a tail so that ``head * k`` is exact
    for ``|k| < 2**27``; the integer part is discarded before the tail is added.
    """
    k2 = np.asarray(k, dtype=np.int64).astype(np.float64)
    lam = float(lam)
    c = _SPLITTER * lam
    head = c - (c - lam)
    tail = lam - head
    return np.mod(head * k2, 1.0) + tail * k2


def chirp_cycles(lam: float, index) -> np.ndarray:
    """``lam * index**2`` modulo one, in cycles."""
    return scaled_cycles(lam, np.square(np.asarray(index, dtype=np.int64)))


def chirp_phases(lam: float, n: int) -> np.ndarray:
    """Quadratic-phase sequence ``exp(-j2pi * lam * i**2)`` for ``i = 0..n-1``."""
    if int(n) != n or n < 1:
        raise SizeError(f"chirp length must be a positive integer, got {n}")
    if not math.isfinite(lam):
        raise ConfigurationError(f"chirp rate must be finite, got {lam}")
    return np.exp(-2j * np.pi * chirp_cycles(lam, np.arange(int(n))))


def _along(vec: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = vec.size
    return vec.reshape(shape)


def daft(x, lambda1: float, lambda2: float, axis: int = -1) -> np.ndarray:
    """Unitary forward DAFT along ``axis``.

    Args:
        x: Input samples.
        lambda1: Chirp rate applied to the input index.
        lambda2: Chirp rate applied to the output index.
        axis: Axis to transform; other axes are treated as a batch.

    Returns:
        The DAF-domain sequence, same shape as ``x``.
    """
    x = as_sequence(x, axis=axis)
    n = x.shape[axis]
    c1 = _along(chirp_phases(lambda1, n), x.ndim, axis)
    c2 = _along(chirp_phases(lambda2, n), x.ndim, axis)
    return c2 * np.fft.fft(c1 * x, axis=axis, norm="ortho")


def idaft(X, lambda1: float, lambda2: float, axis: int = -1) -> np.ndarray:
    """Inverse DAFT, the exact adjoint of :func:`daft` for the same chirp rates."""
    X = as_sequence(X, name="X", axis=axis)
    n = X.shape[axis]
    c1 = _along(chirp_phases(lambda1, n), X.ndim, axis)
    c2 = _along(chirp_phases(lambda2, n), X.ndim, axis)
    return np.conj(c1) * np.fft.ifft(np.conj(c2) * X, axis=axis, norm="ortho")


def daft_matrix(n: int, lambda1: float, lambda2: float) -> np.ndarray:
    """Dense ``n x n`` DAFT matrix (columns are transforms of the unit vectors)."""
    return daft(np.eye(n, dtype=np.complex128), lambda1, lambda2, axis=0)


@dataclass(frozen=True)
class ChirpParams:
    """Chirp rates of the N-point (``lambda1``, ``lambda2``) and M-point spreading
    (``lambda1_spread``, ``lambda2_spread``) transforms for ``k_users`` users."""

    n: int
    m: int
    k_users: int
    lambda1: float
    lambda2: float
    lambda1_spread: float
    lambda2_spread: float

    def __post_init__(self):
        if self.k_users < 1 or self.m < 1 or self.n != self.m * self.k_users:
            raise ConfigurationError(
                f"frame size must equal users x per-user size, got N={self.n}, M={self.m}, K={self.k_users}"
            )
        for name in ("lambda1", "lambda2", "lambda1_spread", "lambda2_spread"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")


def derive_params(
    alpha_max: int,
    n: int,
    k_users: int,
    strategy: Strategy | str,
    lambda2_spread: float = math.pi,
) -> ChirpParams:
    """Chirp rates for full delay-Doppler diversity and low PAPR.

    ``lambda1 = lambda1_spread = (2 * alpha_max + 1) / (2N)``.  The spreading
    rate ``lambda2_spread`` is fixed (pi by default); the N-point rate is
    ``lambda2_spread / K**2`` for interleaved allocation and ``lambda2_spread``
    for localized allocation.
    """
    strategy = Strategy(strategy)
    if alpha_max < 0:
        raise ConfigurationError(f"alpha_max must be >= 0, got {alpha_max}")
    if n < 1 or k_users < 1 or n % k_users:
        raise ConfigurationError(f"N={n} is not divisible by K={k_users}")
    lambda1 = (2 * alpha_max + 1) / (2 * n)
    if strategy is Strategy.INTERLEAVED:
        lambda2 = lambda2_spread / k_users**2
    else:
        lambda2 = lambda2_spread
    return ChirpParams(n, n // k_users, k_users, lambda1, lambda2, lambda1, lambda2_spread)
