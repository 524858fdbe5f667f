"""Linear time-varying multipath channel with integer delays and (fractional)
normalized Doppler shifts, in time-domain and matrix form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, SizeError
from .transforms import ChirpParams, as_sequence, daft, daft_matrix, idaft, scaled_cycles

__all__ = [
    "ChannelPath",
    "ChannelRealization",
    "sample_channel",
    "apply_time",
    "build_channel_matrix",
    "build_effective_channel",
    "awgn",
]


@dataclass(frozen=True)
class ChannelPath:
    gain: complex
    delay: int
    doppler: float


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """``P`` paths stored as parallel arrays.

    Attributes:
        gains: Complex path gains, shape ``(P,)``.
        delays: Integer delays in samples, shape ``(P,)``.
        dopplers: Doppler shifts in cycles per frame, shape ``(P,)``.
        l_max: Largest admissible delay.
        alpha_max: Largest admissible Doppler magnitude.
    """

    gains: np.ndarray
    delays: np.ndarray
    dopplers: np.ndarray
    l_max: int
    alpha_max: float

    def __post_init__(self):
        gains = np.atleast_1d(np.asarray(self.gains, dtype=np.complex128))
        delays = np.atleast_1d(np.asarray(self.delays))
        dopplers = np.atleast_1d(np.asarray(self.dopplers, dtype=np.float64))
        if gains.size < 1 or not gains.shape == delays.shape == dopplers.shape:
            raise ConfigurationError("a channel needs at least one path and equally sized path arrays")
        if not np.all(delays == np.round(delays)) or np.any(delays < 0) or np.any(delays > self.l_max):
            raise ConfigurationError(f"delays must be integers in [0, {self.l_max}]")
        if np.any(np.abs(dopplers) > self.alpha_max):
            raise ConfigurationError(f"|doppler| must not exceed {self.alpha_max}")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "delays", delays.astype(np.int64))
        object.__setattr__(self, "dopplers", dopplers)

    @classmethod
    def from_paths(cls, paths, l_max: int | None = None, alpha_max: float | None = None):
        paths = list(paths)
        delays = [p.delay for p in paths]
        dopplers = [p.doppler for p in paths]
        return cls(
            [p.gain for p in paths],
            delays,
            dopplers,
            max(delays) if l_max is None else l_max,
            max(abs(a) for a in dopplers) if alpha_max is None else alpha_max,
        )

    @property
    def paths(self) -> list[ChannelPath]:
        return [ChannelPath(complex(h), int(l), float(a)) for h, l, a in zip(self.gains, self.delays, self.dopplers)]

    def __len__(self) -> int:
        return self.gains.size


def sample_channel(p_paths: int, alpha_max: float, l_max: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw a random channel.

    Gains are i.i.d. ``CN(0, 1/P)``, delays uniform on ``{0, ..., l_max}`` and
    Dopplers follow the Jakes model ``alpha_max * cos(theta)`` with ``theta``
    uniform on ``[-pi, pi]``.
    """
    if p_paths < 1 or l_max < 0 or alpha_max < 0:
        raise ConfigurationError(f"invalid channel settings P={p_paths}, l_max={l_max}, alpha_max={alpha_max}")
    scale = np.sqrt(0.5 / p_paths)
    gains = scale * (rng.standard_normal(p_paths) + 1j * rng.standard_normal(p_paths))
    delays = rng.integers(0, l_max + 1, size=p_paths)
    dopplers = alpha_max * np.cos(rng.uniform(-np.pi, np.pi, size=p_paths))
    return ChannelRealization(gains, delays, dopplers, l_max, alpha_max)


def apply_time(s_cpp, chan: ChannelRealization, n: int, cpp_len: int) -> np.ndarray:
    """Pass a CPP-extended signal through the channel and drop the prefix.

    ``r[t] = sum_p h_p * exp(-j2pi * alpha_p * t / N) * s_ext[t - l_p]`` for
    ``t = 0..N-1``, where negative indices fall into the prefix.
    """
    s_cpp = as_sequence(s_cpp, "s_cpp", n + cpp_len)
    if chan.delays.max() > cpp_len:
        raise ConfigurationError(f"CPP of {cpp_len} samples is shorter than the channel delay {chan.delays.max()}")
    t = np.arange(n)
    r = np.zeros(n, dtype=np.complex128)
    for h, l, a in zip(chan.gains, chan.delays, chan.dopplers):
        r += h * np.exp(-2j * np.pi * a * t / n) * s_cpp[cpp_len - l : cpp_len - l + n]
    return r


def _path_diagonals(chan: ChannelRealization, n: int, lambda1: float):
    u = np.arange(n, dtype=np.int64)
    for h, l, a in zip(chan.gains, chan.delays, chan.dopplers):
        # prefix phase for rows reading from the CPP
        upsilon = np.ones(n, dtype=np.complex128)
        head = u < l
        upsilon[head] = np.exp(-2j * np.pi * scaled_cycles(lambda1, n * n - 2 * n * (l - u[head])))
        yield h * upsilon * np.exp(-2j * np.pi * a * u / n), (u - l) % n


def build_channel_matrix(chan: ChannelRealization, n: int, lambda1: float, sparse: bool = False):
    """``H = sum_p h_p * Upsilon_p @ Delta_p @ Pi**l_p`` acting on one CPP-free frame.

    ``Pi`` is the forward cyclic shift, ``Delta_p`` the Doppler ramp and
    ``Upsilon_p`` the prefix phase on the first ``l_p`` rows.  With ``sparse``
    a CSR matrix with at most ``P`` nonzeros per row is returned.
    """
    if chan.delays.max() >= n:
        raise ConfigurationError(f"delays must be smaller than N={n}")
    rows, cols, vals = [], [], []
    u = np.arange(n)
    for diag, col in _path_diagonals(chan, n, lambda1):
        rows.append(u)
        cols.append(col)
        vals.append(diag)
    H = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    return H if sparse else H.toarray()


def build_effective_channel(H, params: ChirpParams, route: str = "matrix") -> np.ndarray:
    """DAF-domain channel ``A H A^H`` with ``A`` the N-point DAFT.

    ``route="matrix"`` forms the dense DAFT matrix; ``route="columns"`` maps
    each unit vector through IDAFT, ``H`` and DAFT.  Both give the same result.
    """
    H = H.toarray() if sp.issparse(H) else np.asarray(H, dtype=np.complex128)
    n = params.n
    if H.shape != (n, n):
        raise SizeError(f"H must be {n}x{n}, got {H.shape}")
    if route == "matrix":
        A = daft_matrix(n, params.lambda1, params.lambda2)
        return A @ H @ A.conj().T
    if route == "columns":
        basis = idaft(np.eye(n, dtype=np.complex128), params.lambda1, params.lambda2, axis=0)
        return daft(H @ basis, params.lambda1, params.lambda2, axis=0)
    raise ValueError(f"unknown route {route!r}")


def awgn(r, n0: float, rng: np.random.Generator) -> np.ndarray:
    """Add circular complex Gaussian noise of variance ``n0`` per sample."""
    if not n0 >= 0:
        raise ConfigurationError(f"noise power must be non-negative, got {n0}")
    r = as_sequence(r, "r")
    if n0 == 0:
        return r.copy()
    noise = rng.standard_normal(r.shape) + 1j * rng.standard_normal(r.shape)
    return r + np.sqrt(n0 / 2) * noise
