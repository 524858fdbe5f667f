"""
Discrete affine Fourier transform basics
========================================

The DAFT is a chirp, an FFT and a second chirp.  It is unitary, so the
inverse is its adjoint and energy is preserved.
"""

import numpy as np

import daftsafdma as ds

rng = np.random.default_rng(7)
x = rng.standard_normal(16) + 1j * rng.standard_normal(16)

# chirp rates chosen for a channel with at most one Doppler bin
p = ds.derive_params(alpha_max=1, n=16, k_users=4, strategy="interleaved")
print(p)

X = ds.daft(x, p.lambda1, p.lambda2)
print("energy ratio:", np.linalg.norm(X) / np.linalg.norm(x))
print("round trip error:", np.abs(ds.idaft(X, p.lambda1, p.lambda2) - x).max())

# the dense matrix form agrees with the fast path
A = ds.daft_matrix(16, p.lambda1, p.lambda2)
print("matrix vs fast path:", np.abs(A @ x - X).max())
print("A is unitary:", np.allclose(A.conj().T @ A, np.eye(16)))

# with both chirps at zero the DAFT is the unitary DFT
print("zero chirps == DFT:", np.allclose(ds.daft(x, 0, 0), np.fft.fft(x, norm="ortho")))
