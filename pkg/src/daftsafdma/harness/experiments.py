"""Monte Carlo drivers for the PAPR-CCDF and BER experiments.

Every random draw comes from an :class:`RngStream` keyed by frame index, so a
run is fully determined by ``(seed, config)`` whatever the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import itertools
import logging

import numpy as np

from ..allocation import all_plans
from ..channel import apply_time, build_channel_matrix, sample_channel
from ..enums import PaprMode, Scheme, Strategy
from ..metrics import BerPoint, CcdfCurve, ccdf_estimate, ebn0_to_n0, oversampled_signal
from ..receiver import TimeDomainMmse, daft_receive, despread_demap, qpsk_demod
from ..transforms import derive_params, idaft
from ..waveform import add_cpp, daf_frame, qpsk_modulate
from .config import SimConfig
from .rng import RngStream

log = logging.getLogger(__name__)

__all__ = ["PaprResult", "BerResult", "run_papr_experiment", "run_ber_experiment", "combos"]


def combos(cfg: SimConfig) -> list[tuple[Scheme, Strategy]]:
    return list(itertools.product(cfg.schemes, cfg.strategies))


def _frame_bits(cfg: SimConfig, frame: int) -> np.ndarray:
    m = cfg.n // cfg.k_users
    return RngStream(cfg.seed, frame, "bits").generator().integers(0, 2, size=(cfg.k_users, 2 * m), dtype=np.int8)


def _chunks(items, parts):
    items = list(items)
    size = -(-len(items) // parts)
    return [items[i : i + size] for i in range(0, len(items), size)]


class _Serial:
    def map(self, fn, *iterables):
        return map(fn, *iterables)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _pool(workers: int):
    return ProcessPoolExecutor(max_workers=workers) if workers > 1 else _Serial()


def _map(pool, fn, jobs):
    return list(pool.map(fn, *zip(*jobs)))


@dataclass
class PaprResult:
    """PAPR samples (dB) and CCDF curves per (scheme, strategy)."""

    samples_db: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)


def _papr_frames(cfg: SimConfig, frames) -> np.ndarray:
    """PAPR in dB, shape ``(len(combos), len(frames), samples_per_frame)``."""
    per_user = cfg.papr_mode is PaprMode.PER_USER
    width = cfg.k_users if per_user else 1
    cs = combos(cfg)
    out = np.empty((len(cs), len(frames), width))
    params = {s: derive_params(cfg.alpha_max, cfg.n, cfg.k_users, s) for s in cfg.strategies}
    for j, frame in enumerate(frames):
        symbols = qpsk_modulate(_frame_bits(cfg, frame))
        for i, (scheme, strategy) in enumerate(cs):
            p = params[strategy]
            daf = daf_frame(symbols, scheme, strategy, p, cfg.offset_compensation)
            if not per_user:
                daf = daf.sum(axis=0, keepdims=True)
            if cfg.oversample > 1:
                s = oversampled_signal(daf, p.lambda1, p.lambda2, cfg.oversample)
            else:
                s = idaft(daf, p.lambda1, p.lambda2, axis=-1)
            power = np.abs(s) ** 2
            out[i, j] = 10 * np.log10(power.max(axis=-1) / power.mean(axis=-1))
    return out


def run_papr_experiment(cfg: SimConfig) -> PaprResult:
    """CCDF of the PAPR for every configured (scheme, strategy) pair."""
    jobs = [(cfg, chunk) for chunk in _chunks(range(cfg.frames), cfg.workers)]
    with _pool(cfg.workers) as pool:
        data = np.concatenate(_map(pool, _papr_frames, jobs), axis=1)
    result = PaprResult()
    grid = cfg.threshold_grid
    for i, key in enumerate(combos(cfg)):
        samples = data[i].ravel()
        result.samples_db[key] = samples
        result.curves[key] = ccdf_estimate(samples, grid)
    return result


@dataclass
class BerResult:
    """Bit-error counts per (scheme, strategy) over the Eb/N0 grid."""

    points: dict = field(default_factory=dict)
    frames_used: dict = field(default_factory=dict)

    def ber(self, key) -> np.ndarray:
        return np.array([p.ber for p in self.points[key]])


def _ber_frames(cfg: SimConfig, frames, active) -> np.ndarray:
    """Error and bit counts, shape ``(len(combos), len(grid), 2)``, summed over ``frames``.

    ``active[i, e]`` selects which (combo, Eb/N0) points are simulated.
    """
    cs = combos(cfg)
    n, K = cfg.n, cfg.k_users
    counts = np.zeros((len(cs), len(cfg.ebn0_grid_db), 2), dtype=np.int64)
    params = {s: derive_params(cfg.alpha_max, n, K, s) for s in cfg.strategies}
    plans = {s: all_plans(s, n, K) for s in cfg.strategies}
    lambda1 = next(iter(params.values())).lambda1
    for frame in frames:
        bits = _frame_bits(cfg, frame)
        symbols = qpsk_modulate(bits)
        tx = {}
        for i, (scheme, strategy) in enumerate(cs):
            if active[i].any():
                p = params[strategy]
                s = idaft(daf_frame(symbols, scheme, strategy, p, cfg.offset_compensation).sum(axis=0),
                          p.lambda1, p.lambda2)
                tx[i] = add_cpp(s, cfg.cpp_len, p.lambda1)
        chan_rng = RngStream(cfg.seed, frame, "channel")
        noise_rng = RngStream(cfg.seed, frame, "noise")
        for k in range(K):
            chan = sample_channel(cfg.p_paths, cfg.alpha_max, cfg.l_max, chan_rng.generator(k))
            H = build_channel_matrix(chan, n, lambda1, sparse=True)
            received = {i: apply_time(s_cpp, chan, n, cfg.cpp_len) for i, s_cpp in tx.items()}
            for e, ebn0 in enumerate(cfg.ebn0_grid_db):
                if not active[:, e].any():
                    continue
                n0 = 0.0 if cfg.noiseless else ebn0_to_n0(ebn0, 2)
                g = noise_rng.generator(e, k)
                noise = np.sqrt(n0 / 2) * (g.standard_normal(n) + 1j * g.standard_normal(n))
                mmse = TimeDomainMmse(H, n0)
                for i, (scheme, strategy) in enumerate(cs):
                    if not active[i, e]:
                        continue
                    p = params[strategy]
                    x_hat = daft_receive(mmse.solve(received[i] + noise), p)
                    sym = despread_demap(x_hat, plans[strategy][k], p, scheme, cfg.offset_compensation)
                    counts[i, e, 0] += np.count_nonzero(qpsk_demod(sym) != bits[k])
                    counts[i, e, 1] += bits[k].size
    return counts


def run_ber_experiment(cfg: SimConfig) -> BerResult:
    """Bit-error rate of every (scheme, strategy) over the Eb/N0 grid.

    Frames run in batches of ``cfg.batch_frames``.  After each batch a point
    with at least ``cfg.target_errors`` errors is retired, so stopping depends
    only on the merged integer counts, never on the worker count.
    """
    cs = combos(cfg)
    counts = np.zeros((len(cs), len(cfg.ebn0_grid_db), 2), dtype=np.int64)
    used = np.zeros((len(cs), len(cfg.ebn0_grid_db)), dtype=np.int64)
    active = np.ones(used.shape, dtype=bool)
    start = 0
    with _pool(cfg.workers) as pool:
        while start < cfg.frames and active.any():
            batch = range(start, min(start + cfg.batch_frames, cfg.frames))
            jobs = [(cfg, chunk, active.copy()) for chunk in _chunks(batch, cfg.workers)]
            for part in _map(pool, _ber_frames, jobs):
                counts += part
            used[active] += len(batch)
            start = batch.stop
            if cfg.target_errors:
                active &= counts[..., 0] < cfg.target_errors
            log.debug("after %d frames: %d active points", start, active.sum())
    result = BerResult()
    for i, key in enumerate(cs):
        result.points[key] = [
            BerPoint(ebn0, int(counts[i, e, 0]), int(counts[i, e, 1])) for e, ebn0 in enumerate(cfg.ebn0_grid_db)
        ]
        result.frames_used[key] = [int(u) for u in used[i]]
    return result
