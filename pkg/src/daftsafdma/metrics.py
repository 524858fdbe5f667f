"""PAPR, empirical CCDF and bit-error accounting."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import SizeError
from .transforms import as_sequence, daft, scaled_cycles

__all__ = [
    "CcdfCurve",
    "BerPoint",
    "DEFAULT_THRESHOLDS_DB",
    "papr",
    "papr_db",
    "oversampled_signal",
    "ccdf_estimate",
    "papr_at_ccdf",
    "ber_accumulate",
    "ebn0_to_n0",
]

DEFAULT_THRESHOLDS_DB = np.round(np.arange(131) * 0.1, 10)


def oversampled_signal(X, lambda1: float, lambda2: float, oversample: int) -> np.ndarray:
    """Evaluate the inverse-DAFT sum of ``X`` at times ``v / oversample``, ``v = 0..L*N-1``.

    Samples at integer times coincide with ``idaft(X, lambda1, lambda2)``.  The
    sum is evaluated exactly through a zero-padded inverse FFT followed by the
    continuous chirp ``exp(j2pi * lambda1 * t**2)``.
    """
    X = as_sequence(X, "X")
    n = X.shape[-1]
    L = int(oversample)
    if L < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    idx = np.arange(n, dtype=np.int64)
    weighted = X * np.exp(2j * np.pi * scaled_cycles(lambda2, idx * idx))
    padded = np.zeros(X.shape[:-1] + (L * n,), dtype=np.complex128)
    padded[..., :n] = weighted
    v = np.arange(L * n, dtype=np.int64)
    inner = np.fft.ifft(padded, axis=-1) * (L * n / np.sqrt(n))
    return inner * np.exp(2j * np.pi * scaled_cycles(lambda1 / L**2, v * v))


def papr(s, oversample: int = 1, lambda1: float | None = None, lambda2: float | None = None) -> float:
    """Peak-to-average power ratio (linear) of a time-domain block.

    With ``oversample > 1`` the block is re-evaluated on a finer time grid
    through its DAF-domain representation, which needs ``lambda1`` and ``lambda2``.
    """
    s = as_sequence(s, "s")
    if oversample > 1:
        if lambda1 is None or lambda2 is None:
            raise ValueError("oversampled PAPR needs lambda1 and lambda2")
        s = oversampled_signal(daft(s, lambda1, lambda2), lambda1, lambda2, oversample)
    power = np.abs(s) ** 2
    mean = power.mean(axis=-1)
    if np.any(mean == 0):
        raise SizeError("PAPR of an all-zero signal is undefined")
    ratio = power.max(axis=-1) / mean
    return float(ratio) if np.ndim(ratio) == 0 else ratio


def papr_db(s, **kwargs):
    return 10 * np.log10(papr(s, **kwargs))


@dataclass(frozen=True)
class CcdfCurve:
    """Empirical ``Pr(PAPR > threshold)`` on an ascending threshold grid."""

    thresholds_db: np.ndarray
    probabilities: np.ndarray
    trials: int

    def at(self, threshold_db: float) -> float:
        i = int(np.searchsorted(self.thresholds_db, threshold_db))
        if i == len(self.thresholds_db) or not np.isclose(self.thresholds_db[i], threshold_db):
            raise KeyError(threshold_db)
        return float(self.probabilities[i])


def ccdf_estimate(papr_samples_db, thresholds_db=None) -> CcdfCurve:
    """Fraction of samples strictly above each threshold."""
    samples = np.sort(np.asarray(papr_samples_db, dtype=np.float64).ravel())
    if samples.size == 0:
        raise SizeError("CCDF needs at least one PAPR sample")
    thresholds = DEFAULT_THRESHOLDS_DB if thresholds_db is None else np.asarray(thresholds_db, dtype=np.float64)
    if np.any(np.diff(thresholds) <= 0):
        raise ValueError("thresholds must be strictly ascending")
    above = samples.size - np.searchsorted(samples, thresholds, side="right")
    return CcdfCurve(thresholds, above / samples.size, samples.size)


def papr_at_ccdf(papr_samples_db, level: float) -> float:
    """Smallest sample value ``t`` with empirical ``Pr(PAPR > t) <= level``."""
    samples = np.sort(np.asarray(papr_samples_db, dtype=np.float64).ravel())[::-1]
    if samples.size == 0:
        raise SizeError("need at least one PAPR sample")
    k = min(int(np.floor(level * samples.size)), samples.size - 1)
    return float(samples[k])


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    bit_errors: int = 0
    total_bits: int = 0

    def __post_init__(self):
        if not 0 <= self.bit_errors <= self.total_bits:
            raise ValueError(f"inconsistent counts {self.bit_errors}/{self.total_bits}")

    @property
    def ber(self) -> float:
        return self.bit_errors / self.total_bits if self.total_bits else float("nan")

    def __add__(self, other: "BerPoint") -> "BerPoint":
        if other.ebn0_db != self.ebn0_db:
            raise ValueError("cannot merge points at different Eb/N0")
        return replace(self, bit_errors=self.bit_errors + other.bit_errors, total_bits=self.total_bits + other.total_bits)


def ber_accumulate(point: BerPoint, tx_bits, rx_bits) -> BerPoint:
    """Return ``point`` with the Hamming distance between the two bit streams added."""
    tx = np.asarray(tx_bits).ravel()
    rx = np.asarray(rx_bits).ravel()
    if tx.shape != rx.shape:
        raise SizeError(f"bit streams differ in length: {tx.size} vs {rx.size}")
    errors = int(np.count_nonzero(tx != rx))
    return replace(point, bit_errors=point.bit_errors + errors, total_bits=point.total_bits + tx.size)


def ebn0_to_n0(ebn0_db: float, bits_per_symbol: int = 2) -> float:
    """Noise power per complex sample for unit symbol energy (CPP overhead not counted)."""
    if bits_per_symbol < 1:
        raise ValueError("bits_per_symbol must be >= 1")
    return 1.0 / (10 ** (ebn0_db / 10) * bits_per_symbol)
