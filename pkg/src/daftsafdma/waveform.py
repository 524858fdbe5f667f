"""Transmit chain: QPSK mapping, M-point DAFT spreading, chirp-subcarrier
allocation, N-point inverse DAFT and chirp-periodic prefix (CPP).

Also carries the closed-form time-domain samples of a spread user's signal,
which hold when the chirp rates follow :func:`~daftsafdma.transforms.derive_params`.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .allocation import AllocationPlan, all_plans, offset_phases
from .enums import Scheme, Strategy
from .errors import ConfigurationError, PredictorInapplicableError, SizeError
from .transforms import ChirpParams, as_sequence, daft, idaft, scaled_cycles

__all__ = [
    "Frame",
    "qpsk_modulate",
    "spread_user",
    "daf_frame",
    "assemble_downlink",
    "user_signals",
    "build_frame",
    "add_cpp",
    "predict_interleaved",
    "predict_localized_q0",
]

_INV_SQRT2 = 1 / math.sqrt(2)


def qpsk_modulate(bits) -> np.ndarray:
    """Gray-mapped QPSK with unit symbol energy.

    Consecutive bit pairs ``(b0, b1)`` set the signs of the real and imaginary
    parts (0 -> +, 1 -> -).  Leading axes are kept, the last axis halves.
    """
    bits = np.asarray(bits)
    if bits.ndim == 0 or bits.shape[-1] % 2:
        raise SizeError(f"QPSK needs an even number of bits, got shape {bits.shape}")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise SizeError("bits must be 0 or 1")
    pairs = bits.reshape(*bits.shape[:-1], -1, 2).astype(np.int8)
    return ((1 - 2 * pairs[..., 0]) + 1j * (1 - 2 * pairs[..., 1])) * _INV_SQRT2


def spread_user(x_k, params: ChirpParams) -> np.ndarray:
    """M-point DAFT spreading with ``(lambda1_spread, lambda2_spread)``. Accepts a ``(..., M)`` batch."""
    x_k = as_sequence(x_k, "x_k", params.m)
    return daft(x_k, params.lambda1_spread, params.lambda2_spread)


def _check_symbols(user_symbols, params: ChirpParams) -> np.ndarray:
    x = as_sequence(user_symbols, "user_symbols")
    if x.shape != (params.k_users, params.m):
        raise SizeError(f"user_symbols must have shape {(params.k_users, params.m)}, got {x.shape}")
    return x


def daf_frame(
    user_symbols,
    scheme: Scheme | str,
    strategy: Strategy | str,
    params: ChirpParams,
    offset_compensation: bool = True,
) -> np.ndarray:
    """Per-user DAF-domain vectors ``x''_k`` as a ``(K, N)`` array.

    For the DAFT-spread scheme each user's spread symbols are multiplied by
    :func:`~daftsafdma.allocation.offset_phases` unless ``offset_compensation``
    is False.  The O-AFDMA baseline maps raw symbols.
    """
    scheme = Scheme(scheme)
    x = _check_symbols(user_symbols, params)
    plans = all_plans(strategy, params.n, params.k_users)
    if scheme is Scheme.DAFT_S:
        x = spread_user(x, params)
        if offset_compensation:
            x = x * np.stack([offset_phases(p, params.lambda2) for p in plans])
    out = np.zeros((params.k_users, params.n), dtype=np.complex128)
    for k, plan in enumerate(plans):
        out[k, plan.indices] = x[k]
    return out


def assemble_downlink(
    user_symbols,
    scheme: Scheme | str,
    strategy: Strategy | str,
    params: ChirpParams,
    offset_compensation: bool = True,
) -> np.ndarray:
    """Superimposed N-sample downlink signal ``s = sum_k IDAFT(x''_k)``."""
    daf = daf_frame(user_symbols, scheme, strategy, params, offset_compensation)
    return idaft(daf.sum(axis=0), params.lambda1, params.lambda2)


def user_signals(
    user_symbols,
    scheme: Scheme | str,
    strategy: Strategy | str,
    params: ChirpParams,
    offset_compensation: bool = True,
) -> np.ndarray:
    """Each user's own time-domain contribution ``s_k`` as a ``(K, N)`` array."""
    daf = daf_frame(user_symbols, scheme, strategy, params, offset_compensation)
    return idaft(daf, params.lambda1, params.lambda2, axis=-1)


def add_cpp(s, cpp_len: int, lambda1: float) -> np.ndarray:
    """Prepend a chirp-periodic prefix of ``cpp_len`` samples.

    The sample at position ``-m`` is ``s[N-m] * exp(-j2pi * lambda1 * (N**2 - 2*N*m))``,
    which reduces to a plain cyclic prefix when ``lambda1 = 0``.
    """
    s = as_sequence(s, "s")
    n = s.shape[-1]
    if cpp_len < 0 or cpp_len >= n:
        raise ConfigurationError(f"CPP length must lie in [0, N), got {cpp_len} for N={n}")
    if cpp_len == 0:
        return s.copy()
    m = np.arange(cpp_len, 0, -1, dtype=np.int64)
    phase = np.exp(-2j * np.pi * scaled_cycles(lambda1, n * n - 2 * n * m))
    return np.concatenate([s[..., n - m] * phase, s], axis=-1)


@dataclass(frozen=True)
class Frame:
    """One downlink frame: payloads, symbols and the transmitted signal."""

    scheme: Scheme
    strategy: Strategy
    params: ChirpParams
    user_bits: np.ndarray
    user_symbols: np.ndarray
    composite: np.ndarray
    cpp_len: int
    offset_compensation: bool = True

    def with_cpp(self) -> np.ndarray:
        return add_cpp(self.composite, self.cpp_len, self.params.lambda1)


def build_frame(
    user_bits,
    scheme: Scheme | str,
    strategy: Strategy | str,
    params: ChirpParams,
    cpp_len: int = 0,
    offset_compensation: bool = True,
) -> Frame:
    """Modulate a ``(K, 2M)`` bit array and assemble the composite signal."""
    user_bits = np.asarray(user_bits, dtype=np.int8)
    if user_bits.shape != (params.k_users, 2 * params.m):
        raise SizeError(f"user_bits must have shape {(params.k_users, 2 * params.m)}, got {user_bits.shape}")
    symbols = qpsk_modulate(user_bits)
    s = assemble_downlink(symbols, scheme, strategy, params, offset_compensation)
    return Frame(Scheme(scheme), Strategy(strategy), params, user_bits, symbols, s, cpp_len, offset_compensation)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-15)


def _check_user(user: int, params: ChirpParams, offset_compensation: bool) -> None:
    if not 0 <= user < params.k_users:
        raise ConfigurationError(f"user {user} outside [0, {params.k_users})")
    if user and not offset_compensation:
        raise PredictorInapplicableError("closed form holds for user > 0 only with offset compensation")


def predict_interleaved(x_k, params: ChirpParams, q, r, user: int = 0, offset_compensation: bool = True):
    """Closed-form sample ``s_k[M*q + r]`` of an interleaved DAFT-spread user.

    ``s_k[Mq + r] = x_k[r] / sqrt(K) * exp(j2pi * lambda1 * ((Mq)**2 + 2*M*q*r))``,
    times ``exp(j2pi * u * k / N)`` for a compensated user ``k > 0``.  Requires
    ``lambda1_spread == lambda1`` and ``lambda2_spread == K**2 * lambda2``.
    ``q`` and ``r`` broadcast.
    """
    if not (_close(params.lambda1_spread, params.lambda1)
            and _close(params.lambda2_spread, params.k_users**2 * params.lambda2)):
        raise PredictorInapplicableError("interleaved closed form needs lambda1' = lambda1 and lambda2' = K^2 lambda2")
    _check_user(user, params, offset_compensation)
    x_k = as_sequence(x_k, "x_k", params.m)
    q = np.asarray(q, dtype=np.int64)
    r = np.asarray(r, dtype=np.int64)
    if np.any((q < 0) | (q >= params.k_users) | (r < 0) | (r >= params.m)):
        raise ConfigurationError("q must lie in [0, K) and r in [0, M)")
    mq = params.m * q
    cycles = scaled_cycles(params.lambda1, mq * mq + 2 * mq * r)
    cycles = cycles + np.mod((mq + r) * user, params.n) / params.n
    out = x_k[r] / math.sqrt(params.k_users) * np.exp(2j * np.pi * cycles)
    return out[()] if out.ndim == 0 else out


def predict_localized_q0(x_k, params: ChirpParams, m_bar, user: int = 0, offset_compensation: bool = True):
    """Closed-form sample ``s_k[K*m_bar]`` of a localized DAFT-spread user.

    ``s_k[K m_bar] = x_k[m_bar] / sqrt(K) * exp(j2pi * lambda1 * (K**2 - 1) * m_bar**2)``.
    Requires ``lambda1_spread == lambda1`` and ``lambda2_spread == lambda2``.
    Other sample positions mix all ``M`` symbols and have no such form.
    """
    if not (_close(params.lambda1_spread, params.lambda1) and _close(params.lambda2_spread, params.lambda2)):
        raise PredictorInapplicableError("localized closed form needs lambda1' = lambda1 and lambda2' = lambda2")
    _check_user(user, params, offset_compensation)
    x_k = as_sequence(x_k, "x_k", params.m)
    m_bar = np.asarray(m_bar, dtype=np.int64)
    if np.any((m_bar < 0) | (m_bar >= params.m)):
        raise ConfigurationError("m_bar must lie in [0, M)")
    cycles = scaled_cycles(params.lambda1, (params.k_users**2 - 1) * m_bar * m_bar)
    out = x_k[m_bar] / math.sqrt(params.k_users) * np.exp(2j * np.pi * cycles)
    return out[()] if out.ndim == 0 else out
