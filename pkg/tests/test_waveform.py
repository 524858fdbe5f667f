import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from daftsafdma import (
    ChirpParams,
    add_cpp,
    assemble_downlink,
    build_frame,
    derive_params,
    idaft,
    daft,
    papr,
    predict_interleaved,
    predict_localized_q0,
    qpsk_modulate,
    spread_user,
    user_signals,
)
from daftsafdma.errors import ConfigurationError, PredictorInapplicableError, SizeError

from oracles import cpp_prefix, daft_dense, dense_downlink

S2 = 1 / math.sqrt(2)


def random_qpsk(rng, shape):
    return qpsk_modulate(rng.integers(0, 2, size=shape[:-1] + (2 * shape[-1],)))


class TestQpsk:
    def test_mapping(self):
        np.testing.assert_allclose(qpsk_modulate([0, 0, 1, 0, 0, 1, 1, 1]),
                                   [(1 + 1j) * S2, (-1 + 1j) * S2, (1 - 1j) * S2, (-1 - 1j) * S2])

    def test_unit_energy(self):
        x = random_qpsk(np.random.default_rng(0), (1000,))
        assert np.abs(x) ** 2 == pytest.approx(np.ones(1000))
        assert np.mean(np.abs(x) ** 2) == pytest.approx(1.0, abs=1e-15)

    def test_odd_rejected(self):
        with pytest.raises(SizeError):
            qpsk_modulate([0, 1, 1])


class TestSpread:
    def test_single_point_is_unit_phase(self):
        p = ChirpParams(4, 1, 4, 0.1, 0.2, 0.1, math.pi)
        out = spread_user([0.3 - 0.4j], p)
        assert abs(out[0]) == pytest.approx(0.5)

    def test_matches_dense(self):
        p = derive_params(1, 16, 4, "interleaved")
        x = random_qpsk(np.random.default_rng(1), (4,))
        np.testing.assert_allclose(spread_user(x, p), daft_dense(4, p.lambda1, math.pi) @ x, atol=1e-13)

    def test_length_checked(self):
        with pytest.raises(SizeError):
            spread_user([1, 2, 3], derive_params(1, 16, 4, "interleaved"))


@pytest.mark.parametrize("scheme", ["daft-s", "o-afdma"])
@pytest.mark.parametrize("strategy", ["interleaved", "localized"])
@pytest.mark.parametrize("compensate", [True, False])
def test_downlink_matches_dense_matrices(scheme, strategy, compensate):
    p = derive_params(1, 16, 4, strategy)
    x = random_qpsk(np.random.default_rng(2), (4, 4))
    s = assemble_downlink(x, scheme, strategy, p, offset_compensation=compensate)
    np.testing.assert_allclose(s, dense_downlink(x, scheme, strategy, p, compensate), atol=1e-12)
    assert np.linalg.norm(s) ** 2 == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-10)


def test_degenerate_single_user_full_band():
    # K = 1: spreading and inverse transform use the same rates, so the chain returns x itself
    p = derive_params(1, 32, 1, "interleaved")
    x = random_qpsk(np.random.default_rng(3), (1, 32))
    s = assemble_downlink(x, "daft-s", "interleaved", p)
    np.testing.assert_allclose(np.abs(s), np.abs(x[0]), atol=1e-12)


def test_period_repetition_user0():
    p = derive_params(1, 16, 4, "interleaved")
    x = random_qpsk(np.random.default_rng(4), (4, 4))
    s0 = user_signals(x, "daft-s", "interleaved", p)[0]
    np.testing.assert_allclose(np.abs(s0).reshape(4, 4), np.tile(np.abs(x[0]) / 2, (4, 1)), atol=1e-12)


class TestCpp:
    def test_zero_length(self):
        s = np.arange(8) + 0j
        np.testing.assert_array_equal(add_cpp(s, 0, 0.3), s)

    def test_plain_cyclic_prefix(self):
        s = np.arange(8) + 1j
        np.testing.assert_allclose(add_cpp(s, 3, 0.0), np.r_[s[-3:], s])

    def test_frozen_prefix(self):
        s = np.arange(8) + 1j * np.arange(8)[::-1]
        # frozen from s[N-m] * exp(-j2pi * 0.1 * (N^2 - 2Nm)), m = 2, 1
        expected = [2.805158482545 - 5.397322103396j, 2.163118960625 + 6.657395614066j]
        out = add_cpp(s, 2, 0.1)
        np.testing.assert_allclose(out[:2], expected, atol=1e-11)
        np.testing.assert_allclose(out[:2], cpp_prefix(s, 2, 0.1), atol=1e-12)
        np.testing.assert_array_equal(out[2:], s)

    def test_prefix_is_chirp_periodic_extension(self):
        # the inverse transform evaluated at negative times reproduces the prefix
        rng = np.random.default_rng(5)
        X = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        lam1, lam2 = 0.09, 1.3
        s = idaft(X, lam1, lam2)
        u = np.arange(-4, 0)
        ub = np.arange(16)
        direct = np.exp(2j * np.pi * (lam1 * u[:, None] ** 2 + u[:, None] * ub / 16 + lam2 * ub**2)) @ X / 4
        np.testing.assert_allclose(add_cpp(s, 4, lam1)[:4], direct, atol=1e-11)

    def test_too_long(self):
        with pytest.raises(ConfigurationError):
            add_cpp(np.ones(8), 8, 0.1)


class TestPredictors:
    def test_interleaved_origin(self):
        p = derive_params(1, 16, 4, "interleaved")
        x = random_qpsk(np.random.default_rng(6), (4,))
        assert predict_interleaved(x, p, 0, 0) == pytest.approx(x[0] / 2)

    @pytest.mark.parametrize("user", [0, 1, 3])
    def test_interleaved_all_samples(self, user):
        p = derive_params(1, 32, 4, "interleaved")
        x = random_qpsk(np.random.default_rng(7), (4, 8))
        chain = user_signals(x, "daft-s", "interleaved", p)[user]
        q, r = np.divmod(np.arange(32), 8)
        pred = predict_interleaved(x[user], p, q, r, user=user)
        np.testing.assert_allclose(chain, pred, atol=1e-10)
        np.testing.assert_allclose(np.abs(pred), np.abs(x[user][r]) / 2, atol=1e-15)

    def test_interleaved_mismatch_breaks(self):
        good = derive_params(1, 32, 4, "interleaved")
        bad = ChirpParams(32, 8, 4, good.lambda1, good.lambda2, good.lambda1, good.lambda2_spread + 0.3)
        x = random_qpsk(np.random.default_rng(8), (4, 8))
        chain = user_signals(x, "daft-s", "interleaved", bad)[0]
        q, r = np.divmod(np.arange(32), 8)
        assert np.abs(chain - predict_interleaved(x[0], good, q, r)).max() > 1e-3
        with pytest.raises(PredictorInapplicableError):
            predict_interleaved(x[0], bad, 0, 0)

    def test_uncompensated_user_rejected(self):
        p = derive_params(1, 32, 4, "interleaved")
        with pytest.raises(PredictorInapplicableError):
            predict_interleaved(np.ones(8), p, 0, 0, user=1, offset_compensation=False)

    def test_localized_q0(self):
        p = derive_params(1, 32, 4, "localized")
        x = random_qpsk(np.random.default_rng(9), (4, 8))
        assert predict_localized_q0(x[0], p, 0) == pytest.approx(x[0][0] / 2)
        for user in range(4):
            chain = user_signals(x, "daft-s", "localized", p)[user]
            mb = np.arange(8)
            np.testing.assert_allclose(chain[4 * mb], predict_localized_q0(x[user], p, mb, user=user), atol=1e-10)

    def test_localized_off_grid_samples_mix(self):
        # counterexample search: off-grid samples do not keep the symbol magnitude
        p = derive_params(1, 32, 4, "localized")
        rng = np.random.default_rng(10)
        found = False
        for _ in range(20):
            x = random_qpsk(rng, (4, 8))
            s0 = user_signals(x, "daft-s", "localized", p)[0]
            off = np.arange(32)[np.arange(32) % 4 != 0]
            if np.abs(np.abs(s0[off]) - 0.5).max() > 1e-3:
                found = True
                break
        assert found

    def test_localized_condition(self):
        p = derive_params(1, 32, 4, "interleaved")
        with pytest.raises(PredictorInapplicableError):
            predict_localized_q0(np.ones(8), p, 0)


@settings(max_examples=30, deadline=None)
@given(
    log_n=st.integers(3, 8),
    log_k=st.integers(0, 3),
    alpha_max=st.integers(0, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_interleaved_users_constant_modulus(log_n, log_k, alpha_max, seed):
    n, k = 2**log_n, 2 ** min(log_k, log_n - 1)
    p = derive_params(alpha_max, n, k, "interleaved")
    x = random_qpsk(np.random.default_rng(seed), (k, n // k))
    signals = user_signals(x, "daft-s", "interleaved", p)
    np.testing.assert_allclose(papr(signals), 1.0, atol=1e-9)
    s = assemble_downlink(x, "daft-s", "interleaved", p)
    assert np.linalg.norm(s) ** 2 == pytest.approx(n, rel=1e-10)


def test_build_frame():
    p = derive_params(1, 16, 4, "interleaved")
    bits = np.random.default_rng(11).integers(0, 2, (4, 8))
    f = build_frame(bits, "daft-s", "interleaved", p, cpp_len=2)
    assert f.with_cpp().shape == (18,)
    np.testing.assert_allclose(f.composite, assemble_downlink(qpsk_modulate(bits), "daft-s", "interleaved", p))
    with pytest.raises(SizeError):
        build_frame(bits[:, :6], "daft-s", "interleaved", p)
