import math

import numpy as np
import pytest

from daftsafdma import (
    AllocationPlan,
    EqualizerInput,
    TimeDomainMmse,
    all_plans,
    add_cpp,
    apply_time,
    awgn,
    assemble_downlink,
    build_channel_matrix,
    build_effective_channel,
    daf_frame,
    daft_receive,
    derive_params,
    despread_demap,
    ebn0_to_n0,
    idaft,
    mmse_equalize,
    qpsk_demod,
    qpsk_modulate,
    receive_user,
    sample_channel,
)
from daftsafdma.errors import EqualizationError

from oracles import compensation_diag, daft_dense, gamma_matrix, qpsk_awgn_ber


def rand_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestDaftReceive:
    def test_inverts_idaft(self):
        p = derive_params(1, 32, 4, "interleaved")
        x = rand_complex(np.random.default_rng(0), 32)
        np.testing.assert_allclose(daft_receive(idaft(x, p.lambda1, p.lambda2), p), x, atol=1e-12)

    def test_matches_dense(self):
        p = derive_params(1, 32, 4, "localized")
        r = rand_complex(np.random.default_rng(1), 32)
        np.testing.assert_allclose(daft_receive(r, p), daft_dense(32, p.lambda1, p.lambda2) @ r, atol=1e-11)

    def test_identity_channel_gives_daf_frame(self):
        p = derive_params(1, 16, 4, "interleaved")
        x = qpsk_modulate(np.random.default_rng(2).integers(0, 2, (4, 8)))
        s = assemble_downlink(x, "daft-s", "interleaved", p)
        np.testing.assert_allclose(daft_receive(s, p), daf_frame(x, "daft-s", "interleaved", p).sum(0), atol=1e-12)


class TestMmse:
    def test_identity_noiseless(self):
        y = rand_complex(np.random.default_rng(3), 8)
        np.testing.assert_allclose(mmse_equalize(EqualizerInput(y, np.eye(8), noiseless=True)), y)

    def test_scaled_identity(self):
        y = rand_complex(np.random.default_rng(4), 8)
        np.testing.assert_allclose(mmse_equalize(EqualizerInput(y, 2 * np.eye(8), noiseless=True)), y / 2)

    def test_recovers_known_vector(self):
        rng = np.random.default_rng(5)
        H = np.eye(16) + 0.3 * rand_complex(rng, (16, 16)) / 4
        x = rand_complex(rng, 16)
        out = mmse_equalize(EqualizerInput(H @ x, H, noiseless=True))
        assert np.linalg.norm(out - x) < 1e-8

    def test_formula(self):
        rng = np.random.default_rng(6)
        H = rand_complex(rng, (12, 12))
        y = rand_complex(rng, 12)
        gamma = 3.0
        expected = H.conj().T @ np.linalg.inv(H @ H.conj().T + np.eye(12) / gamma) @ y
        np.testing.assert_allclose(mmse_equalize(EqualizerInput(y, H, gamma)), expected, atol=1e-10)

    def test_zero_forcing_limit(self):
        rng = np.random.default_rng(7)
        H = np.eye(10) + 0.2 * rand_complex(rng, (10, 10))
        y = rand_complex(rng, 10)
        np.testing.assert_allclose(mmse_equalize(EqualizerInput(y, H, 1e12)), np.linalg.solve(H, y), atol=1e-6)

    def test_shrinkage_monotone(self):
        rng = np.random.default_rng(8)
        H = rand_complex(rng, (10, 10))
        y = rand_complex(rng, 10)
        norms = [np.linalg.norm(mmse_equalize(EqualizerInput(y, H, 1 / ig))) for ig in [1e-3, 0.01, 0.1, 1, 10]]
        assert all(a >= b for a, b in zip(norms, norms[1:]))

    def test_singular(self):
        H = np.zeros((4, 4))
        H[0, 0] = 1
        with pytest.raises(EqualizationError) as info:
            mmse_equalize(EqualizerInput(np.ones(4), H, noiseless=True))
        assert info.value.condition > 1e12

    def test_invalid_gamma(self):
        with pytest.raises(ValueError):
            EqualizerInput(np.ones(2), np.eye(2), 0.0)

    def test_time_domain_route_equals_daf_domain(self):
        rng = np.random.default_rng(9)
        p = derive_params(2, 64, 4, "interleaved")
        chan = sample_channel(5, 2, 2, rng)
        H = build_channel_matrix(chan, 64, p.lambda1)
        r = rand_complex(rng, 64)
        for n0 in [0.0, 0.05, 1.0]:
            dense = mmse_equalize(EqualizerInput(daft_receive(r, p), build_effective_channel(H, p),
                                                 1 / n0 if n0 else math.inf, noiseless=n0 == 0))
            fast = daft_receive(TimeDomainMmse(H, n0).solve(r), p)
            np.testing.assert_allclose(fast, dense, atol=1e-9)


class TestDespread:
    @pytest.mark.parametrize("scheme", ["daft-s", "o-afdma"])
    @pytest.mark.parametrize("strategy", ["interleaved", "localized"])
    def test_noiseless_identity_recovery(self, scheme, strategy):
        p = derive_params(1, 32, 4, strategy)
        bits = np.random.default_rng(10).integers(0, 2, (4, 16))
        x = qpsk_modulate(bits)
        y = daft_receive(assemble_downlink(x, scheme, strategy, p), p)
        for plan in all_plans(strategy, 32, 4):
            est = despread_demap(y, plan, p, scheme)
            np.testing.assert_allclose(est, x[plan.user], atol=1e-8)
            np.testing.assert_array_equal(qpsk_demod(est), bits[plan.user])

    def test_no_cross_user_leakage(self):
        p = derive_params(1, 32, 4, "localized")
        x = np.zeros((4, 8), dtype=complex)
        x[2] = qpsk_modulate(np.random.default_rng(11).integers(0, 2, 16))
        y = daft_receive(assemble_downlink(x, "daft-s", "localized", p), p)
        for plan in all_plans("localized", 32, 4):
            if plan.user != 2:
                assert np.abs(despread_demap(y, plan, p, "daft-s")).max() < 1e-12

    @pytest.mark.parametrize("strategy", ["interleaved", "localized"])
    def test_matches_dense_formula(self, strategy):
        p = derive_params(1, 16, 4, strategy)
        x_hat = rand_complex(np.random.default_rng(12), 16)
        A = daft_dense(4, p.lambda1_spread, p.lambda2_spread)
        for k in range(4):
            plan = AllocationPlan(strategy, 16, 4, 4, k)
            C = compensation_diag(strategy, 16, 4, k, p.lambda2)
            expected = A.conj().T @ C.conj().T @ gamma_matrix(strategy, 16, 4, k).T @ x_hat
            np.testing.assert_allclose(despread_demap(x_hat, plan, p, "daft-s"), expected, atol=1e-12)


class TestQpskDemod:
    def test_round_trip(self):
        bits = np.random.default_rng(13).integers(0, 2, 1000)
        np.testing.assert_array_equal(qpsk_demod(qpsk_modulate(bits)), bits)

    def test_tie_goes_to_zero(self):
        np.testing.assert_array_equal(qpsk_demod([0j, 1j, -1 + 0j]), [0, 0, 0, 0, 1, 0])

    def test_awgn_20db(self):
        rng = np.random.default_rng(14)
        bits = rng.integers(0, 2, 1_000_000)
        rx = awgn(qpsk_modulate(bits), ebn0_to_n0(20.0), rng)
        ber = np.mean(qpsk_demod(rx) != bits)
        assert qpsk_awgn_ber(20.0) < 1e-20
        assert ber < 1e-4


@pytest.mark.parametrize("route", ["dense", "sparse"])
@pytest.mark.parametrize("strategy", ["interleaved", "localized"])
def test_end_to_end_noiseless_channel(route, strategy):
    rng = np.random.default_rng(15)
    p = derive_params(1, 64, 4, strategy)
    bits = rng.integers(0, 2, (4, 32))
    s = assemble_downlink(qpsk_modulate(bits), "daft-s", strategy, p)
    for plan in all_plans(strategy, 64, 4):
        chan = sample_channel(3, 1, 1, rng)
        r = apply_time(add_cpp(s, 1, p.lambda1), chan, 64, 1)
        sym = receive_user(r, chan, p, plan, "daft-s", 0.0, route=route)
        np.testing.assert_array_equal(qpsk_demod(sym), bits[plan.user])
