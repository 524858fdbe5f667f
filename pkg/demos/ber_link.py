"""
BER over a doubly dispersive channel
====================================

One frame end to end: random Jakes channel, CPP, time-varying channel,
noise, DAFT receiver and MMSE equalization.  Then a short BER sweep.
"""

import numpy as np

import daftsafdma as ds
from daftsafdma.harness import SimConfig, run_ber_experiment

n, k = 128, 4
rng = np.random.default_rng(11)
p = ds.derive_params(1, n, k, "interleaved")
bits = rng.integers(0, 2, size=(k, 2 * p.m))
frame = ds.build_frame(bits, "daft-s", "interleaved", p, cpp_len=1)

chan = ds.sample_channel(3, alpha_max=1, l_max=1, rng=rng)
for path in chan.paths:
    print(path)

n0 = ds.ebn0_to_n0(12.0)
r = ds.awgn(ds.apply_time(frame.with_cpp(), chan, n, 1), n0, rng)

# the channel in matrix form matches the time-domain route
H = ds.build_channel_matrix(chan, n, p.lambda1)
print("matrix vs time:", np.abs(H @ frame.composite - ds.apply_time(frame.with_cpp(), chan, n, 1)).max())

plan = ds.AllocationPlan("interleaved", n, p.m, k, 0)
soft = ds.receive_user(r, chan, p, plan, "daft-s", n0)
errors = np.count_nonzero(ds.qpsk_demod(soft) != bits[0])
print(f"user 0: {errors} bit errors out of {bits[0].size}")

cfg = SimConfig(n=128, frames=200, ebn0_grid_db=(0, 6, 12), seed=5, target_errors=200)
res = run_ber_experiment(cfg)
for key, pts in res.points.items():
    print(f"{key[0].value:8s} {key[1].value:12s}", " ".join(f"{pt.ber:.2e}" for pt in pts))
