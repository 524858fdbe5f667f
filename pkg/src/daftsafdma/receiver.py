"""Per-user receive chain: N-point DAFT, MMSE equalization, demapping,
despreading and hard-decision QPSK demodulation."""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .allocation import AllocationPlan, demap_user, offset_phases
from .channel import ChannelRealization, build_channel_matrix, build_effective_channel
from .enums import Scheme
from .errors import EqualizationError, SizeError
from .transforms import ChirpParams, as_sequence, daft, idaft

__all__ = [
    "EqualizerInput",
    "daft_receive",
    "mmse_equalize",
    "TimeDomainMmse",
    "despread_demap",
    "qpsk_demod",
    "receive_user",
]

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class EqualizerInput:
    """DAF-domain observation ``y``, channel ``h_eff`` and ``gamma = Es/N0`` (linear).

    ``noiseless=True`` replaces ``1/gamma`` by zero, giving the zero-forcing solution.
    """

    y: np.ndarray
    h_eff: np.ndarray
    gamma: float = float("inf")
    noiseless: bool = False

    def __post_init__(self):
        if not self.noiseless and not (0 < self.gamma < float("inf")):
            raise ValueError(f"gamma must be positive and finite unless noiseless, got {self.gamma}")

    @property
    def inv_gamma(self) -> float:
        return 0.0 if self.noiseless else 1.0 / self.gamma


def daft_receive(r, params: ChirpParams) -> np.ndarray:
    """N-point DAFT of the CPP-free received block."""
    return daft(as_sequence(r, "r", params.n), params.lambda1, params.lambda2)


def _check_residual(A, z, y, condition) -> None:
    ynorm = np.linalg.norm(y)
    resid = np.linalg.norm(A @ z - y) / ynorm if ynorm else 0.0
    if not np.isfinite(resid) or resid > RESIDUAL_TOL:
        raise EqualizationError("MMSE system could not be solved to tolerance", condition(), resid)


def mmse_equalize(inp: EqualizerInput) -> np.ndarray:
    """``H^H (H H^H + I/gamma)^{-1} y`` via a Cholesky (or LU fallback) solve.

    Raises:
        EqualizationError: The solution misses the relative residual tolerance of 1e-8.
    """
    H = np.asarray(inp.h_eff, dtype=np.complex128)
    n = H.shape[0]
    y = as_sequence(inp.y, "y", n)
    if H.ndim != 2 or H.shape[1] != n:
        raise SizeError(f"h_eff must be square with {n} rows, got {H.shape}")
    A = H @ H.conj().T + inp.inv_gamma * np.eye(n)
    try:
        z = la.cho_solve(la.cho_factor(A), y)
    except la.LinAlgError:
        try:
            with warnings.catch_warnings(), np.errstate(all="ignore"):
                warnings.simplefilter("ignore", la.LinAlgWarning)
                z = la.solve(A, y)
        except la.LinAlgError:
            raise EqualizationError("MMSE system matrix is singular", np.linalg.cond(A), np.inf) from None
    with np.errstate(all="ignore"):
        _check_residual(A, z, y, lambda: np.linalg.cond(A))
    return H.conj().T @ z


class TimeDomainMmse:
    """MMSE estimate of the transmitted time-domain block from a sparse channel matrix.

    Because the DAFT is unitary, ``DAFT(H^H (H H^H + n0 I)^{-1} r)`` equals the
    DAF-domain MMSE solution with ``H_eff = A H A^H`` and ``gamma = 1/n0``.  The
    time-domain system is banded up to wrap-around, so a sparse LU is cheap even
    at N = 1024, and one factorization serves any number of received blocks.
    """

    def __init__(self, H, n0: float):
        if n0 < 0:
            raise ValueError(f"n0 must be non-negative, got {n0}")
        self.H = sp.csr_matrix(H)
        n = self.H.shape[0]
        self.A = (self.H @ self.H.conj().T + n0 * sp.identity(n, format="csr")).tocsc()
        try:
            self._lu = spla.splu(self.A)
        except RuntimeError:
            raise EqualizationError(
                "MMSE system matrix is singular", np.linalg.cond(self.A.toarray()), np.inf
            ) from None

    def solve(self, r) -> np.ndarray:
        r = as_sequence(r, "r", self.A.shape[0])
        z = self._lu.solve(r)
        _check_residual(self.A, z, r, lambda: np.linalg.cond(self.A.toarray()))
        return self.H.conj().T @ z


def despread_demap(
    x_hat_full,
    plan: AllocationPlan,
    params: ChirpParams,
    scheme: Scheme | str,
    offset_compensation: bool = True,
) -> np.ndarray:
    """Extract a user's subcarriers from the equalized frame and undo the spreading."""
    x = demap_user(x_hat_full, plan)
    if Scheme(scheme) is Scheme.DAFT_S:
        if offset_compensation:
            x = x * np.conj(offset_phases(plan, params.lambda2))
        x = idaft(x, params.lambda1_spread, params.lambda2_spread)
    return x


def qpsk_demod(symbols) -> np.ndarray:
    """Hard Gray demapping; a symbol on an axis decides bit 0 for that axis."""
    symbols = as_sequence(symbols, "symbols")
    bits = np.empty(symbols.shape[:-1] + (symbols.shape[-1], 2), dtype=np.int8)
    bits[..., 0] = symbols.real < 0
    bits[..., 1] = symbols.imag < 0
    return bits.reshape(*symbols.shape[:-1], -1)


def receive_user(
    r,
    chan: ChannelRealization,
    params: ChirpParams,
    plan: AllocationPlan,
    scheme: Scheme | str,
    n0: float,
    offset_compensation: bool = True,
    route: str = "sparse",
) -> np.ndarray:
    """Full receive chain for one user with perfect channel knowledge.

    ``route="dense"`` equalizes against the explicit DAF-domain ``H_eff``;
    ``route="sparse"`` uses :class:`TimeDomainMmse`.  ``n0 = 0`` is the noiseless limit.
    """
    if route == "dense":
        H_eff = build_effective_channel(build_channel_matrix(chan, params.n, params.lambda1), params)
        inp = EqualizerInput(daft_receive(r, params), H_eff, 1.0 / n0 if n0 else float("inf"), noiseless=n0 == 0)
        x_hat = mmse_equalize(inp)
    elif route == "sparse":
        H = build_channel_matrix(chan, params.n, params.lambda1, sparse=True)
        x_hat = daft_receive(TimeDomainMmse(H, n0).solve(r), params)
    else:
        raise ValueError(f"unknown route {route!r}")
    return despread_demap(x_hat, plan, params, scheme, offset_compensation)
