import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import central_difference, relative_error
from tweetsent.features import IntSequence
from tweetsent.neural import (
    EpochTrace,
    NnModel,
    TrainConfig,
    TrainingDiverged,
    batch_loss,
    evaluate,
    forward,
    forward_batch,
    gradients,
    init_params,
    load_model,
    loss,
    model_from_dict,
    model_to_dict,
    predict_many,
    save_model,
    train,
)


def zero_model(V=4, d=3, h=2):
    return NnModel(np.zeros((V, d)), np.zeros((d, h)), np.zeros(h), np.zeros((h, 3)), np.zeros(3))


def random_batch(rng, n, L, V):
    lengths = rng.integers(0, L + 1, size=n)
    ids = np.zeros((n, L), dtype=np.int64)
    for i, k in enumerate(lengths):
        ids[i, :k] = rng.integers(1, V, size=k)
    return ids, lengths, rng.integers(0, 3, size=n)


def separable_data(n_per_class=20, L=3):
    # token 2 -> class 0, token 3 -> class 1, token 4 -> class 2
    rows, labels = [], []
    for c in range(3):
        for i in range(n_per_class):
            k = 1 + i % L
            rows.append([2 + c] * k + [0] * (L - k))
            labels.append(c)
    ids = np.array(rows)
    return ids, (ids != 0).sum(axis=1), np.array(labels)


# -- initialization ---------------------------------------------------------------


def test_init_is_seeded_and_pad_is_zero():
    a, b = init_params(5, 20), init_params(5, 20)
    for name, arr in a.params().items():
        assert np.array_equal(arr, b.params()[name])
    assert not np.array_equal(a.W1, init_params(6, 20).W1)
    assert np.all(a.embedding[0] == 0)
    assert np.all(np.abs(a.embedding) <= 0.05)
    assert np.all(a.b1 == 0) and np.all(a.b2 == 0)


def test_init_shapes():
    m = init_params(0, 7, d=1, h=1)
    shapes = {k: v.shape for k, v in m.params().items()}
    assert shapes == {"embedding": (7, 1), "W1": (1, 1), "b1": (1,), "W2": (1, 3), "b2": (3,)}
    assert init_params(0, 10).dims == (32, 16)
    with pytest.raises(ValueError):
        init_params(0, 0)


# -- forward -------------------------------------------------------------------------


def test_zero_params_give_uniform_output():
    p = forward(zero_model(), IntSequence((2, 3, 0), 2))
    assert np.allclose(p, 1 / 3, atol=1e-15)


def test_empty_sequence_depends_only_on_biases():
    m = init_params(1, 6, d=3, h=2)
    m = NnModel(m.embedding, m.W1, np.array([0.3, -0.2]), m.W2, np.array([0.1, 0.5, -0.4]))
    other = NnModel(m.embedding * 7, m.W1, m.b1, m.W2, m.b2)
    seq = IntSequence((0, 0, 0), 0)
    hidden = np.maximum(m.b1, 0)
    logits = hidden @ m.W2 + m.b2
    expected = np.exp(logits) / np.exp(logits).sum()
    assert np.allclose(forward(m, seq), expected, atol=1e-15)
    assert np.array_equal(forward(other, seq), forward(m, seq))


def test_hand_forward_pass():
    E = np.array([[0.0, 0.0], [0.1, -0.2], [0.4, 0.3]])
    W1 = np.array([[0.5, -1.0], [1.5, 0.25]])
    b1 = np.array([0.05, -0.1])
    W2 = np.array([[1.0, -0.5, 0.2], [0.3, 0.8, -1.1]])
    b2 = np.array([0.01, 0.02, -0.03])
    m = NnModel(E, W1, b1, W2, b2)
    # sequence [2, 1, 2, PAD]: mean of rows 2, 1, 2
    p0 = (0.4 + 0.1 + 0.4) / 3
    p1 = (0.3 - 0.2 + 0.3) / 3
    h0 = max(0.0, p0 * 0.5 + p1 * 1.5 + 0.05)
    h1 = max(0.0, p0 * -1.0 + p1 * 0.25 - 0.1)
    z = [h0 * 1.0 + h1 * 0.3 + 0.01, h0 * -0.5 + h1 * 0.8 + 0.02, h0 * 0.2 + h1 * -1.1 - 0.03]
    e = [math.exp(v) for v in z]
    expected = [v / sum(e) for v in e]
    got = forward(m, IntSequence((2, 1, 2, 0), 3))
    assert np.max(np.abs(got - expected)) <= 1e-12


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(0, 4))
def test_pad_invariance_and_normalization(seed, extra):
    rng = np.random.default_rng(seed)
    m = init_params(seed, 9, d=4, h=3)
    ids, lengths, _ = random_batch(rng, 5, 6, 9)
    padded = np.hstack([ids, np.zeros((5, extra), dtype=np.int64)])
    p = forward_batch(m, ids, lengths)
    assert np.array_equal(p, forward_batch(m, padded, lengths))
    assert np.allclose(p.sum(axis=1), 1, atol=1e-9)
    assert np.all(p > 0)


def test_id_out_of_range():
    with pytest.raises(IndexError):
        forward(zero_model(V=3), IntSequence((5,), 1))


# -- loss ------------------------------------------------------------------------------


def test_loss_values():
    assert loss(np.array([0.0, 1.0, 0.0]), 1) == 0.0
    assert math.isclose(loss(np.full(3, 1 / 3), 2), math.log(3), rel_tol=1e-12)
    assert math.isclose(loss(np.array([0.25, 0.5, 0.25]), 1), math.log(2), rel_tol=1e-12)
    # clamped, not infinite
    assert math.isclose(loss(np.array([0.0, 1.0, 0.0]), 0), -math.log(1e-12))


@given(st.lists(st.floats(0, 1), min_size=3, max_size=3), st.integers(0, 2))
def test_loss_non_negative(p, label):
    assert loss(np.array(p), label) >= 0


# -- gradients --------------------------------------------------------------------------


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradients_match_central_differences(seed):
    rng = np.random.default_rng(100 + seed)
    m = init_params(seed, 10, d=4, h=3)
    # larger weights keep relu units away from the kink
    params = {k: v * 4 if k != "embedding" else v * 20 for k, v in m.params().items()}
    params["b1"] = rng.uniform(-0.5, 0.5, 3)
    params["b2"] = rng.uniform(-0.5, 0.5, 3)
    params["embedding"][0] = 0
    m = NnModel(**params)
    ids, lengths, labels = random_batch(rng, 6, 5, 10)
    analytic = gradients(m, ids, lengths, labels)
    numeric = central_difference(lambda: batch_loss(m, ids, lengths, labels), m.params(), step=1e-5)
    for name in analytic:
        if name == "embedding":
            numeric[name][0] = 0.0  # PAD row is frozen
        assert relative_error(analytic[name], numeric[name]).max() < 1e-4, name


def test_output_bias_gradient_vanishes_by_symmetry():
    m = init_params(0, 5, d=3, h=2)
    m = NnModel(m.embedding, m.W1, m.b1, np.zeros((2, 3)), np.zeros(3))
    ids = np.array([[2, 3], [2, 3], [2, 3]])
    g = gradients(m, ids, np.array([2, 2, 2]), np.array([0, 1, 2]))
    assert np.allclose(g["b2"], 0, atol=1e-15)


def test_duplicated_batch_gives_same_gradient():
    rng = np.random.default_rng(3)
    m = init_params(3, 8, d=4, h=3)
    ids, lengths, labels = random_batch(rng, 1, 4, 8)
    one = gradients(m, ids, lengths, labels)
    two = gradients(m, np.vstack([ids, ids]), np.concatenate([lengths, lengths]), np.concatenate([labels, labels]))
    for name in one:
        assert np.allclose(one[name], two[name], rtol=1e-12, atol=1e-15)


def test_pad_row_gradient_is_zero():
    m = init_params(0, 6, d=3, h=2)
    ids = np.array([[1, 2, 0, 0]])
    assert np.all(gradients(m, ids, np.array([2]), np.array([1]))["embedding"][0] == 0)


# -- training ---------------------------------------------------------------------------


def test_zero_learning_rate_is_a_fixed_point():
    data = separable_data()
    m = init_params(0, 5, d=4, h=3)
    out, trace = train(m, data, TrainConfig(epochs=3, learning_rate=0.0))
    for name, arr in m.params().items():
        assert np.array_equal(arr, out.params()[name])
    assert len(set(trace.train_loss)) == 1


def test_separable_batch_loss_strictly_decreases():
    data = separable_data()
    m = init_params(0, 5, d=8, h=8)
    _, trace = train(m, data, TrainConfig(epochs=5, learning_rate=0.5, batch_size=60, validation_fraction=0.0))
    assert all(a > b for a, b in zip(trace.train_loss, trace.train_loss[1:]))


def test_training_is_deterministic_and_leaves_input_untouched():
    data = separable_data()
    m = init_params(2, 5, d=4, h=4)
    before = m.copy()
    cfg = TrainConfig(epochs=4, seed=9)
    a, ta = train(m, data, cfg)
    b, tb = train(m, data, cfg)
    assert ta == tb
    assert ta.to_csv() == tb.to_csv()
    assert all(np.array_equal(a.params()[k], b.params()[k]) for k in a.params())
    assert all(np.array_equal(before.params()[k], m.params()[k]) for k in m.params())
    assert np.all(a.embedding[0] == 0)


def test_trace_shape_and_csv():
    _, trace = train(init_params(0, 5, d=2, h=2), separable_data(), TrainConfig(epochs=2, validation_fraction=0.0))
    assert len(trace) == len(trace.val_loss) == len(trace.train_accuracy) == len(trace.val_accuracy) == 2
    lines = trace.to_csv().splitlines()
    assert lines[0] == "epoch,train_loss,val_loss,train_acc,val_acc"
    assert lines[1].split(",")[2] == "nan"


def test_divergence_is_reported():
    m = init_params(0, 5, d=4, h=4)
    with pytest.raises(TrainingDiverged):
        train(m, separable_data(), TrainConfig(epochs=3, learning_rate=1e300))


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(batch_size=0)
    with pytest.raises(ValueError):
        TrainConfig(validation_fraction=1.0)


# -- evaluation ---------------------------------------------------------------------------


def test_evaluate_examples():
    ids, lengths, labels = separable_data()
    m = zero_model(V=5)
    # constant prediction (class 0 by tie-break) on all-class-0 data
    zeros = np.zeros_like(labels)
    assert evaluate(m, ids, lengths, zeros) == 1.0
    # hand count: 4 docs, argmax is class 0 everywhere, labels 0,1,0,2 -> 2/4
    assert evaluate(m, ids[:4], lengths[:4], np.array([0, 1, 0, 2])) == 0.5
    trained, _ = train(init_params(0, 5, d=8, h=8), (ids, lengths, labels),
                       TrainConfig(epochs=60, learning_rate=0.5, validation_fraction=0.0))
    assert evaluate(trained, ids, lengths, labels) == 1.0
    assert np.array_equal(predict_many(trained, ids, lengths), labels)


# -- persistence ----------------------------------------------------------------------------


def test_model_round_trip(tmp_path):
    m = init_params(4, 12, d=5, h=3)
    save_model(m, tmp_path / "nn.json")
    loaded = load_model(tmp_path / "nn.json")
    assert all(np.array_equal(m.params()[k], loaded.params()[k]) for k in m.params())
    save_model(loaded, tmp_path / "b.json")
    assert (tmp_path / "nn.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_model_from_dict_checks():
    data = model_to_dict(init_params(0, 4, d=2, h=2))
    data["W1"] = [[1.0]]
    with pytest.raises(ValueError, match="W1"):
        model_from_dict(data)
    data = model_to_dict(init_params(0, 4, d=2, h=2))
    data["version"] = 7
    with pytest.raises(ValueError, match="version"):
        model_from_dict(data)


def test_epoch_trace_equality_semantics():
    assert EpochTrace([1.0], [2.0], [0.5], [0.5]) == EpochTrace([1.0], [2.0], [0.5], [0.5])
