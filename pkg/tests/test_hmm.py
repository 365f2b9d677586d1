import math

import numpy as np
import pytest

from bolkhoj import hmm
from bolkhoj.hmm import (Hmm, HmmError, TrainConfig, baum_welch, concat_models,
                         flat_start, forward_loglik, init_from_labels,
                         load_model, make_free_end, make_left_to_right,
                         sample, sample_with_states, save_model, viterbi)
from conftest import (enumerate_best_path, enumerate_paths_loglik,
                      random_exit_mass_model, random_free_end_model)


def single_state_model(mean=0.0, var=1.0, dims=2):
    return Hmm(init_logp=[0.0], trans_logp=[[0.0]],
               means=np.full((1, dims), mean), variances=np.full((1, dims), var),
               topology=np.ones((1, 1), bool), final_logp=[0.0])


def test_forward_single_state_is_emission_sum():
    model = single_state_model()
    rng = np.random.default_rng(0)
    obs = rng.normal(size=(6, 2))
    expected = model.emission_logpdf(obs)[:, 0].sum()
    assert forward_loglik(model, obs) == pytest.approx(expected, abs=1e-12)


def test_forward_matches_enumeration_free_end():
    rng = np.random.default_rng(1)
    model = random_free_end_model(rng, 3, 2)
    obs = rng.normal(size=(4, 2))
    assert forward_loglik(model, obs) == pytest.approx(
        enumerate_paths_loglik(model, obs), abs=1e-9)


def test_forward_matches_enumeration_exit_mass():
    rng = np.random.default_rng(2)
    model = random_exit_mass_model(rng, 3, 2)
    obs = rng.normal(size=(4, 2))
    assert forward_loglik(model, obs) == pytest.approx(
        enumerate_paths_loglik(model, obs), abs=1e-9)


def test_forward_unreachable_final_state_is_neg_inf():
    # strict advance, 3 states, only 2 frames: the final state cannot be
    # reached, so no path terminates
    trans = np.full((3, 3), -np.inf)
    trans[0, 1] = 0.0
    trans[1, 2] = 0.0
    topology = trans > -np.inf
    model = Hmm([0.0, -np.inf, -np.inf], trans, np.zeros((3, 2)), np.ones((3, 2)),
                topology, [-np.inf, -np.inf, 0.0])
    obs = np.zeros((2, 2))
    assert forward_loglik(model, obs) == -np.inf


def test_forward_dimension_mismatch():
    model = single_state_model(dims=2)
    with pytest.raises(hmm.DimensionMismatch):
        forward_loglik(model, np.zeros((3, 5)))


def test_viterbi_single_state_path():
    model = single_state_model()
    obs = np.zeros((5, 2))
    path, lp = viterbi(model, obs)
    assert path == [0, 0, 0, 0, 0]
    assert lp == pytest.approx(forward_loglik(model, obs), abs=1e-12)


def test_viterbi_matches_enumeration():
    rng = np.random.default_rng(3)
    for trial in range(20):
        n = int(rng.integers(2, 4))
        model = random_exit_mass_model(rng, n, 2)
        obs = rng.normal(size=(3, 2))
        path, lp = viterbi(model, obs)
        ref_path, ref_lp = enumerate_best_path(model, obs)
        assert lp == pytest.approx(ref_lp, abs=1e-9)
        assert path == ref_path


def test_viterbi_tie_break_lowest_state():
    # two identical states: every path has equal probability, so the
    # backtrack must stay on state 0 throughout
    model = Hmm(init_logp=np.log([0.5, 0.5]),
                trans_logp=np.log(np.full((2, 2), 0.5)),
                means=np.zeros((2, 2)), variances=np.ones((2, 2)),
                topology=np.ones((2, 2), bool), final_logp=[0.0, 0.0])
    obs = np.zeros((4, 2))
    path, _ = viterbi(model, obs)
    assert path == [0, 0, 0, 0]


def test_viterbi_strict_chain_only_path():
    n = 4
    trans = np.full((n, n), -np.inf)
    for i in range(n - 1):
        trans[i, i + 1] = 0.0
    model = Hmm([0.0] + [-np.inf] * (n - 1), trans, np.zeros((n, 2)), np.ones((n, 2)),
                trans > -np.inf, [-np.inf] * (n - 1) + [0.0])
    path, lp = viterbi(model, np.zeros((n, 2)))
    assert path == list(range(n))
    assert lp > -np.inf


def test_viterbi_no_path_result():
    n = 3
    trans = np.full((n, n), -np.inf)
    for i in range(n - 1):
        trans[i, i + 1] = 0.0
    model = Hmm([0.0, -np.inf, -np.inf], trans, np.zeros((n, 2)), np.ones((n, 2)),
                trans > -np.inf, [-np.inf, -np.inf, 0.0])
    path, lp = viterbi(model, np.zeros((5, 2)))  # longer than the only chain
    assert path is None
    assert lp == -np.inf


def test_forward_geq_viterbi():
    rng = np.random.default_rng(4)
    for trial in range(50):
        n = int(rng.integers(1, 5))
        model = random_free_end_model(rng, n, 3)
        obs = rng.normal(size=(int(rng.integers(1, 7)), 3))
        f = forward_loglik(model, obs)
        _, v = viterbi(model, obs)
        assert f >= v - 1e-12


def test_forward_long_sequence_no_underflow():
    rng = np.random.default_rng(5)
    model = random_free_end_model(rng, 3, 2)
    obs = rng.normal(size=(10_000, 2))
    value = forward_loglik(model, obs)
    assert np.isfinite(value)


def test_validate_rejects_bad_rows():
    model = single_state_model()
    model.trans_logp = np.array([[math.log(0.5)]])  # row mass 0.5, no exit mass
    with pytest.raises(HmmError):
        model.validate()


def test_validate_rejects_variance_below_floor():
    model = single_state_model(var=1e-5)
    with pytest.raises(HmmError):
        model.validate()


def test_validate_rejects_finite_disallowed_transition():
    model = single_state_model()
    model.topology = np.zeros((1, 1), bool)
    model.final_logp = np.array([0.0])
    with pytest.raises(HmmError):
        model.validate()


# -- Baum-Welch -------------------------------------------------------------


def test_baum_welch_loglik_non_decreasing():
    rng = np.random.default_rng(6)
    gen = make_left_to_right(rng.normal(0, 2, (3, 3)), np.ones((3, 3)))
    data = [sample(gen, int(rng.integers(6, 12)), rng) for _ in range(8)]
    result = baum_welch(flat_start(3, data), data, TrainConfig(max_iters=15))
    diffs = np.diff(result.loglik_history)
    assert np.all(diffs >= -1e-6)
    result.model.validate()


def test_baum_welch_self_data_first_iteration_small_gain():
    # data sampled from the model itself: the first EM step cannot move
    # the likelihood much (threshold calibrated by the sampling run)
    rng = np.random.default_rng(7)
    gen = make_free_end([0.6, 0.4], [[0.7, 0.3], [0.4, 0.6]],
                        [[0.0, 0.0], [2.5, -2.5]], np.ones((2, 2)))
    frames = sample(gen, 500, rng)
    result = baum_welch(gen, [frames], TrainConfig(max_iters=2))
    gain_per_frame = (result.loglik_history[1] - result.loglik_history[0]) / 500
    assert 0.0 <= gain_per_frame <= 0.1


def test_baum_welch_identical_observations_floor_variance():
    frames = np.tile(np.array([1.0, -2.0, 0.5]), (10, 1))
    data = [frames, frames.copy()]
    result = baum_welch(flat_start(3, data), data, TrainConfig(max_iters=3))
    assert np.all(result.model.variances == result.model.variance_floor)


def test_baum_welch_zero_occupancy_keeps_parameters_and_flags():
    # T=1 sequences never leave state 0 of a left-to-right chain; give
    # state 0 a free end so those paths terminate
    gen = make_left_to_right(np.array([[0.0], [5.0], [9.0]]), np.ones((3, 1)))
    gen.final_logp = np.array([0.0, -np.inf, math.log(0.4)])
    data = [np.array([[0.1]]), np.array([[-0.2]])]
    before = gen.copy()
    result = baum_welch(gen, data, TrainConfig(max_iters=1))
    assert any("no occupancy" in line for line in result.report)
    np.testing.assert_allclose(result.model.means[1:], before.means[1:])
    np.testing.assert_allclose(result.model.variances[1:], before.variances[1:])


def test_baum_welch_empty_data_rejected():
    with pytest.raises(HmmError):
        baum_welch(single_state_model(), [], TrainConfig())


def test_baum_welch_saturated_exit_mass_survives_save_load(tmp_path):
    # every training sequence leaves the last state after exactly one
    # frame, pushing its exit mass toward 1; the trained model must stay
    # valid and distinguishable from a cost-free termination on reload
    gen = make_left_to_right(np.array([[0.0], [6.0], [12.0]]), np.ones((3, 1)))
    data = [np.array([[0.0], [0.1], [6.0], [6.1], [12.0]]) for _ in range(4)]
    result = baum_welch(flat_start(3, data), data, TrainConfig(max_iters=8))
    result.model.validate()
    path = tmp_path / "sat.hmm"
    save_model(result.model, path)
    load_model(path).validate()


def test_baum_welch_row_stochastic_after_training():
    rng = np.random.default_rng(8)
    gen = make_left_to_right(rng.normal(0, 2, (3, 2)), np.ones((3, 2)))
    data = [sample(gen, 10, rng) for _ in range(5)]
    result = baum_welch(flat_start(3, data), data, TrainConfig(max_iters=6))
    result.model.validate()  # row mass + exit mass, floors, init sum


# -- sampling ---------------------------------------------------------------


def test_sample_deterministic_for_seed():
    model = make_left_to_right(np.arange(6, dtype=float).reshape(3, 2), np.ones((3, 2)))
    a = sample(model, 12, seed=99)
    b = sample(model, 12, seed=99)
    np.testing.assert_array_equal(a.frames, b.frames)
    assert a.num_frames == 12 and a.dims == 2


def test_sample_mean_near_state_mean():
    model = single_state_model(mean=0.0, var=1e-3, dims=1)
    seq = sample(model, 100_000, seed=11)
    # standard error at var 1e-3 over 1e5 draws is ~1e-4
    assert abs(seq.frames.mean()) < 0.02


def test_sample_strict_chain_forced_path():
    n = 3
    trans = np.full((n, n), -np.inf)
    for i in range(n - 1):
        trans[i, i + 1] = 0.0
    model = Hmm([0.0, -np.inf, -np.inf], trans, np.zeros((n, 2)), np.ones((n, 2)),
                trans > -np.inf, [-np.inf, -np.inf, 0.0])
    _, states = sample_with_states(model, 3, seed=1)
    assert states == [0, 1, 2]


def test_sample_illegal_length_rejected():
    n = 3
    trans = np.full((n, n), -np.inf)
    for i in range(n - 1):
        trans[i, i + 1] = 0.0
    model = Hmm([0.0, -np.inf, -np.inf], trans, np.zeros((n, 2)), np.ones((n, 2)),
                trans > -np.inf, [-np.inf, -np.inf, 0.0])
    with pytest.raises(HmmError):
        sample(model, 2, seed=0)   # cannot reach the final state in 2 frames
    with pytest.raises(HmmError):
        sample(model, 5, seed=0)   # cannot stretch a no-loop chain to 5


# -- concatenation and persistence -------------------------------------------


def test_concat_preserves_parameters_and_exit_mass():
    rng = np.random.default_rng(12)
    a = make_left_to_right(rng.normal(size=(3, 2)), np.ones((3, 2)), self_loop=0.7)
    b = make_left_to_right(rng.normal(size=(3, 2)), np.ones((3, 2)), self_loop=0.5)
    joined = concat_models([a, b])
    joined.validate()
    assert joined.num_states == 6
    np.testing.assert_allclose(joined.means[:3], a.means)
    np.testing.assert_allclose(joined.means[3:], b.means)
    np.testing.assert_allclose(joined.trans_logp[:3, :3], a.trans_logp)
    # cross link carries the donor's exit probability into b's entry state
    assert joined.trans_logp[2, 3] == pytest.approx(a.final_logp[2] + b.init_logp[0])
    assert joined.final_logp[2] == -np.inf
    assert joined.final_logp[5] == pytest.approx(b.final_logp[2])


def test_init_from_labels():
    frames = [np.array([[0.0], [0.1], [5.0], [5.1], [9.0]]),
              np.array([[0.2], [5.2], [5.3], [9.1], [9.2]])]
    labels = [[0, 0, 1, 1, 2], [0, 1, 1, 2, 2]]
    model = init_from_labels(3, frames, labels)
    model.validate()
    assert model.means[0, 0] == pytest.approx(0.1)
    assert model.means[2, 0] == pytest.approx(np.mean([9.0, 9.1, 9.2]))


def test_model_file_round_trip(tmp_path):
    rng = np.random.default_rng(13)
    model = make_left_to_right(rng.normal(size=(3, 4)), rng.uniform(0.5, 2.0, (3, 4)))
    path = tmp_path / "m.hmm"
    save_model(model, path)
    text = path.read_text()
    assert text.startswith("#hmm v1 states=3 dims=4")
    assert "-inf" in text
    # stored transition values are base-10 logs
    first_trans = float(text.splitlines()[2].split()[1])
    assert first_trans == pytest.approx(model.trans_logp[0, 0] / math.log(10))
    loaded = load_model(path)
    np.testing.assert_allclose(loaded.trans_logp, model.trans_logp, atol=1e-12)
    np.testing.assert_allclose(loaded.means, model.means, atol=1e-12)
    np.testing.assert_allclose(loaded.variances, model.variances, atol=1e-12)
    np.testing.assert_allclose(loaded.final_logp, model.final_logp, atol=1e-12)
