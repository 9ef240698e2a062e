"""
LTC Prune - Observer Model Tests
"""

import numpy as np
import pytest

from ltc_prune.errors import ChannelError, ModelError
from ltc_prune.ltc import (
    TAU_MIN,
    LtcParameters,
    ObserverModel,
    forward,
    init_params,
    inverse_softplus,
    ltc_step,
    model_fingerprint,
    readout,
    restrict_channels,
    restrict_model,
    select_columns,
)


class TestInitParams:
    """Unit tests for init_params."""

    def test_shapes(self):
        """Should size every array from hidden size and input count."""
        p = init_params(5, 3, seed=0)
        assert p.w_rec.shape == (5, 5)
        assert p.w_in.shape == (5, 3)
        assert p.readout_w.shape == (5,)
        assert p.b.shape == (5,)

    def test_initial_tau_is_one(self):
        """Should start every time constant at 1."""
        np.testing.assert_allclose(init_params(4, 2, seed=0).tau(), 1.0)

    def test_weight_bounds(self):
        """Should draw weights within 1/sqrt(fan_in)."""
        p = init_params(16, 4, seed=2)
        assert np.abs(p.w_in).max() <= 0.5
        assert np.abs(p.w_rec).max() <= 0.25

    def test_seeded(self):
        """Should reproduce for the same seed."""
        a, b = init_params(3, 2, seed=9), init_params(3, 2, seed=9)
        np.testing.assert_array_equal(a.w_rec, b.w_rec)

    def test_zero_size_rejected(self):
        """Should reject empty layers."""
        with pytest.raises(ModelError):
            init_params(0, 2, seed=0)


class TestLtcStep:
    """Unit tests for ltc_step and readout."""

    def setup_method(self):
        self.params = init_params(3, 2, seed=0)

    def test_tau_stays_above_floor(self):
        """Should keep tau above its floor for very negative raw values."""
        arrays = self.params.as_arrays()
        params = LtcParameters.from_arrays({**arrays, "tau_raw": np.full(3, -50.0)})
        assert np.all(params.tau() > TAU_MIN - 1e-12)

    def test_semi_implicit_update(self):
        """Should match (h + a * drive) / (1 + a)."""
        h = np.array([0.1, -0.2, 0.3])
        u = np.array([0.5, -1.0])
        a = 0.05 / self.params.tau()
        drive = self.params.b + np.tanh(h) @ self.params.w_rec.T + np.tanh(u) @ self.params.w_in.T
        np.testing.assert_allclose(ltc_step(h, u, self.params, 0.05), (h + a * drive) / (1 + a))

    def test_fixed_point_without_weights(self):
        """Should leave h = b unchanged when all weights are zero."""
        arrays = {k: np.zeros_like(v) for k, v in self.params.as_arrays().items()}
        arrays["tau_raw"] = self.params.tau_raw
        arrays["b"] = np.array([0.3, -0.1, 0.0])
        params = LtcParameters.from_arrays(arrays)
        np.testing.assert_allclose(ltc_step(params.b, np.zeros(2), params, 0.05), params.b)

    def test_batched_matches_single(self):
        """Should give the same rows for a batch as for single states."""
        h = np.array([[0.1, 0.2, 0.3], [-0.3, 0.0, 0.5]])
        u = np.array([[1.0, 0.0], [0.0, -1.0]])
        batch = ltc_step(h, u, self.params, 0.05)
        for i in range(2):
            np.testing.assert_allclose(batch[i], ltc_step(h[i], u[i], self.params, 0.05))

    def test_wrong_input_width(self):
        """Should raise ChannelError for the wrong number of inputs."""
        with pytest.raises(ChannelError):
            ltc_step(np.zeros(3), np.zeros(5), self.params, 0.05)

    def test_readout_affine(self):
        """Should compute readout_w . h + readout_b."""
        h = np.array([1.0, 2.0, 3.0])
        assert readout(h, self.params) == pytest.approx(h @ self.params.readout_w + self.params.readout_b)


class TestForward:
    """Unit tests for forward."""

    def setup_method(self):
        self.model = ObserverModel(params=init_params(4, 2, seed=3), channel_names=("u1", "u2"))
        self.inputs = np.random.default_rng(0).standard_normal((30, 2))

    def test_matches_repeated_steps(self):
        """Should equal looping ltc_step from a zero state."""
        hidden, estimates = forward(self.model, self.inputs)
        h = np.zeros(4)
        for n, u in enumerate(self.inputs):
            h = ltc_step(h, u, self.model.params, self.model.dt)
            np.testing.assert_allclose(hidden[n], h, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(estimates, hidden @ self.model.params.readout_w + self.model.params.readout_b)

    def test_empty_sequence(self):
        """Should return empty arrays for zero steps."""
        hidden, estimates = forward(self.model, np.empty((0, 2)))
        assert hidden.shape == (0, 4)
        assert estimates.shape == (0,)

    def test_column_names_checked(self):
        """Should reject inputs whose named columns differ from the model's."""
        with pytest.raises(ChannelError):
            forward(self.model, self.inputs, columns=["u2", "u1"])

    def test_deterministic(self):
        """Should produce identical estimates on repeated calls."""
        np.testing.assert_array_equal(forward(self.model, self.inputs)[1], forward(self.model, self.inputs)[1])


class TestChannelBinding:
    """Tests for select_columns and restrict_channels."""

    def setup_method(self):
        self.model = ObserverModel(params=init_params(2, 3, seed=0), channel_names=("F", "x", "noise1"))

    def test_select_columns_order(self):
        """Should index wanted names in wanted order."""
        assert select_columns(["t", "F", "x"], ["x", "F"]) == [2, 1]

    def test_select_columns_missing(self):
        """Should name missing channels."""
        with pytest.raises(ChannelError) as exc:
            select_columns(["F"], ["F", "V"])
        assert exc.value.details["channels"] == ["V"]

    def test_restrict_keeps_model_order(self):
        """Should return indices in model order."""
        assert restrict_channels(self.model, {"noise1", "F"}) == [0, 2]

    def test_restrict_empty(self):
        """Should reject an empty selection."""
        with pytest.raises(ChannelError):
            restrict_channels(self.model, [])

    def test_name_count_must_match_weights(self):
        """Should refuse a model whose names do not match its input weights."""
        with pytest.raises(ChannelError):
            ObserverModel(params=init_params(2, 3, seed=0), channel_names=("F", "x"))


class TestFingerprint:
    """Tests for model_fingerprint."""

    def test_stable_and_sensitive(self):
        """Should be stable for equal models and change with any parameter."""
        model = ObserverModel(params=init_params(3, 2, seed=0), channel_names=("a", "b"))
        again = ObserverModel(params=init_params(3, 2, seed=0), channel_names=("a", "b"))
        assert model_fingerprint(model) == model_fingerprint(again)

        arrays = model.params.as_arrays()
        changed = model.with_params(LtcParameters.from_arrays({**arrays, "readout_b": 1e-9}))
        assert model_fingerprint(changed) != model_fingerprint(model)


# ============ Dynamics properties ============

def quiet_params(hidden: int, inputs: int, tau: float = 1.0, b=0.0) -> LtcParameters:
    """All weights zero, every time constant ``tau``."""
    return LtcParameters(
        tau_raw=np.full(hidden, inverse_softplus(tau - TAU_MIN)),
        b=np.zeros(hidden) + b,
        w_rec=np.zeros((hidden, hidden)),
        w_in=np.zeros((hidden, inputs)),
        readout_w=np.zeros(hidden),
        readout_b=0.0,
    )


def noisy_params(seed: int, hidden: int, inputs: int) -> LtcParameters:
    rng = np.random.default_rng(seed)
    return LtcParameters(
        tau_raw=rng.uniform(-2.0, 2.0, hidden),
        b=rng.normal(0.0, 1.0, hidden),
        w_rec=rng.normal(0.0, 1.0, (hidden, hidden)),
        w_in=rng.normal(0.0, 1.0, (hidden, inputs)),
        readout_w=rng.normal(0.0, 1.0, hidden),
        readout_b=float(rng.normal()),
    )


class TestStepDynamics:
    """Closed-form behaviour of the semi-implicit update."""

    def test_pure_decay_single_step(self):
        """Should map h = 1 to 1/1.05 with zero weights, tau 1 and dt 0.05."""
        h = ltc_step(np.ones(3), np.zeros(2), quiet_params(3, 2), 0.05)
        np.testing.assert_allclose(h, 1.0 / 1.05, rtol=1e-14)

    @pytest.mark.parametrize("tau,dt", [(0.1, 0.05), (1.0, 0.05), (7.5, 0.3)])
    def test_bias_is_fixed_point(self, tau, dt):
        """Should keep h = b = 1 for any tau and dt."""
        params = quiet_params(2, 1, tau=tau, b=1.0)
        np.testing.assert_allclose(ltc_step(np.ones(2), np.array([0.4]), params, dt), 1.0, rtol=1e-14)

    def test_geometric_convergence_to_bias(self):
        """Should shrink |h - b| by exactly (1 + dt/tau) per step."""
        params = quiet_params(2, 1, b=np.array([0.5, -1.0]))
        params = LtcParameters.from_arrays({**params.as_arrays(), "tau_raw": np.array([0.3, -1.2])})
        h0 = np.array([2.0, 3.0])
        h = h0.copy()
        for _ in range(40):
            h = ltc_step(h, np.zeros(1), params, 0.05)
        expected = np.abs(h0 - params.b) / (1.0 + 0.05 / params.tau()) ** 40
        np.testing.assert_allclose(np.abs(h - params.b), expected, rtol=1e-12)

    def test_state_stays_bounded(self):
        """Should never leave max(|h0|, |b| + sum|w_rec| + sum|w_in|) per neuron."""
        params = noisy_params(4, 5, 3)
        bound = np.abs(params.b) + np.abs(params.w_rec).sum(axis=1) + np.abs(params.w_in).sum(axis=1)
        rng = np.random.default_rng(4)
        h = rng.normal(0.0, 10.0, 5)
        limit = np.maximum(np.abs(h), bound)
        for u in rng.normal(0.0, 5.0, (500, 3)):
            h = ltc_step(h, u, params, 0.05)
            assert np.all(np.abs(h) <= limit + 1e-12)

    def test_small_step_matches_continuous_rate(self):
        """Should approach (drive - h) / tau as dt goes to zero."""
        params = noisy_params(5, 4, 2)
        h = np.array([0.2, -0.4, 1.0, 0.0])
        u = np.array([0.7, -1.3])
        dt = 1e-6
        drive = params.b + np.tanh(h) @ params.w_rec.T + np.tanh(u) @ params.w_in.T
        rate = (drive - h) / params.tau()
        numeric = (ltc_step(h, u, params, dt) - h) / dt
        np.testing.assert_allclose(numeric, rate, rtol=1e-4, atol=1e-6)


class TestReadoutExamples:
    """Affine readout identities."""

    def test_constant_head(self):
        """Should return readout_b when readout_w is zero."""
        params = LtcParameters.from_arrays({**quiet_params(3, 1).as_arrays(), "readout_b": 0.5})
        assert readout(np.array([4.0, -2.0, 9.0]), params) == pytest.approx(0.5)

    def test_selector(self):
        """Should pick 2 * h_1 for readout_w = [2, 0, 0]."""
        params = LtcParameters.from_arrays({**quiet_params(3, 1).as_arrays(), "readout_w": np.array([2.0, 0.0, 0.0])})
        assert readout(np.array([1.0, 0.0, 0.0]), params) == pytest.approx(2.0)

    def test_affine_identity(self):
        """Should satisfy readout(a h1 + h2) = a readout(h1) + readout(h2) - a readout_b."""
        params = noisy_params(6, 4, 1)
        rng = np.random.default_rng(6)
        h1, h2, a = rng.normal(size=4), rng.normal(size=4), 2.5
        left = readout(a * h1 + h2, params)
        right = a * readout(h1, params) + readout(h2, params) - params.readout_b * a
        assert left == pytest.approx(right, rel=1e-12)


class TestChannelOrder:
    """Forward passes are bound to channel names, not column positions."""

    def test_permutation_is_bit_identical(self):
        """Should give bit-identical outputs when channels and w_in columns are permuted together."""
        params = noisy_params(7, 6, 4)
        names = ("F", "x", "F_x_interaction", "noise1")
        inputs = np.random.default_rng(7).standard_normal((200, 4))
        model = ObserverModel(params=params, channel_names=names)

        perm = [3, 0, 2, 1]
        permuted = ObserverModel(
            params=LtcParameters.from_arrays({**params.as_arrays(), "w_in": params.w_in[:, perm]}),
            channel_names=tuple(names[k] for k in perm),
        )
        hidden, estimate = forward(model, inputs)
        hidden_p, estimate_p = forward(permuted, inputs[:, perm])
        assert np.array_equal(hidden, hidden_p)
        assert np.array_equal(estimate, estimate_p)

    def test_zero_model_constant_output(self):
        """Should emit readout_b at every step when all weights are zero."""
        params = LtcParameters.from_arrays({**quiet_params(3, 2).as_arrays(), "readout_b": -0.75})
        model = ObserverModel(params=params, channel_names=("a", "b"))
        _, estimate = forward(model, np.random.default_rng(0).standard_normal((25, 2)))
        np.testing.assert_array_equal(estimate, np.full(25, -0.75))

    def test_restrict_to_physical_inputs(self):
        """Should select columns [0, 1] for {F, x} out of six channels, and all for the full set."""
        names = ("F", "x", "F_x_interaction", "noise1", "noise2", "noise3")
        model = ObserverModel(params=init_params(3, 6, seed=0), channel_names=names)
        assert restrict_channels(model, {"F", "x"}) == [0, 1]
        assert restrict_channels(model, set(names)) == list(range(6))

    def test_restrict_model_drops_columns(self):
        """Should keep the kept columns of w_in and every other parameter as is."""
        model = ObserverModel(params=init_params(3, 4, seed=2), channel_names=("F", "x", "noise1", "noise2"), seed=5)
        smaller = restrict_model(model, ["noise2", "F"])
        assert smaller.channel_names == ("F", "noise2")
        np.testing.assert_array_equal(smaller.params.w_in, model.params.w_in[:, [0, 3]])
        np.testing.assert_array_equal(smaller.params.w_rec, model.params.w_rec)
        assert smaller.seed == 5


class TestInitExamples:
    """Initialization bounds for the default architecture."""

    @pytest.mark.parametrize("seed", [0, 7, 123])
    def test_tau_within_bounds(self, seed):
        """Should start every time constant within [TAU_MIN, 10]."""
        tau = init_params(32, 6, seed=seed).tau()
        assert np.all((tau >= TAU_MIN) & (tau <= 10.0))

    def test_smallest_shapes(self):
        """Should build 1x1 weights for one neuron and one input."""
        p = init_params(1, 1, seed=3)
        assert p.w_rec.shape == (1, 1) and p.w_in.shape == (1, 1) and p.readout_w.shape == (1,)
