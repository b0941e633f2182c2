"""Feedforward text classifier in numpy.

Architecture: embedding -> masked mean pool -> dense + relu -> dense ->
softmax over the three sentiment classes. Trained by plain mini-batch
gradient descent on mean cross-entropy, with hand-written backprop.

Batches are passed as ``(ids, lengths)``: an ``(n, max_len)`` integer array
of sequence ids and the true length of each row (see ``features``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import atomic_write_text
from .features import PAD, IntSequence

__all__ = [
    "N_CLASSES",
    "NnModel",
    "TrainConfig",
    "EpochTrace",
    "TrainingDiverged",
    "init_params",
    "forward",
    "forward_batch",
    "loss",
    "batch_loss",
    "gradients",
    "train",
    "evaluate",
    "predict_many",
    "save_model",
    "load_model",
]

N_CLASSES = 3
MODEL_VERSION = 1
PROB_FLOOR = 1e-12
EMBED_INIT_RANGE = 0.05
PARAM_NAMES = ("embedding", "W1", "b1", "W2", "b2")


class TrainingDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class NnModel:
    embedding: np.ndarray  # (V, d), row PAD fixed at zero
    W1: np.ndarray  # (d, h)
    b1: np.ndarray  # (h,)
    W2: np.ndarray  # (h, 3)
    b2: np.ndarray  # (3,)

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0]

    @property
    def dims(self) -> tuple[int, int]:
        return self.embedding.shape[1], self.W1.shape[1]

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> NnModel:
        return NnModel(**{k: v.copy() for k, v in self.params().items()})


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    learning_rate: float = 0.1
    batch_size: int = 32
    seed: int = 0
    validation_fraction: float = 0.1

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError("validation_fraction must lie in [0, 1)")


@dataclass
class EpochTrace:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    train_accuracy: list[float] = field(default_factory=list)
    val_accuracy: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.train_loss)

    def to_csv(self) -> str:
        """``epoch,train_loss,val_loss,train_acc,val_acc``; nan when there is
        no validation split."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["epoch", "train_loss", "val_loss", "train_acc", "val_acc"])
        for e in range(len(self)):
            writer.writerow([
                e + 1,
                repr(self.train_loss[e]),
                repr(self.val_loss[e]),
                repr(self.train_accuracy[e]),
                repr(self.val_accuracy[e]),
            ])
        return buf.getvalue()


def init_params(seed: int, vocab_size: int, d: int = 32, h: int = 16) -> NnModel:
    """Uniform embeddings in +-0.05 (PAD row zero), Glorot-uniform dense
    weights, zero biases."""
    if min(vocab_size, d, h) < 1:
        raise ValueError("vocab_size, d and h must all be >= 1")
    rng = np.random.default_rng(seed)
    embedding = rng.uniform(-EMBED_INIT_RANGE, EMBED_INIT_RANGE, size=(vocab_size, d))
    embedding[PAD] = 0.0
    lim1 = math.sqrt(6.0 / (d + h))
    W1 = rng.uniform(-lim1, lim1, size=(d, h))
    lim2 = math.sqrt(6.0 / (h + N_CLASSES))
    W2 = rng.uniform(-lim2, lim2, size=(h, N_CLASSES))
    return NnModel(embedding, W1, np.zeros(h), W2, np.zeros(N_CLASSES))


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _mask(ids: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    return np.arange(ids.shape[1])[None, :] < np.asarray(lengths)[:, None]


def _forward_cache(model: NnModel, ids: np.ndarray, lengths: np.ndarray):
    ids = np.asarray(ids)
    if ids.size and (ids.min() < 0 or ids.max() >= model.vocab_size):
        raise IndexError(f"sequence id outside vocabulary of size {model.vocab_size}")
    mask = _mask(ids, lengths)
    denom = np.maximum(mask.sum(axis=1), 1)[:, None].astype(np.float64)
    # masked positions contribute nothing, so padding is never read
    pooled = (model.embedding[ids] * mask[..., None]).sum(axis=1) / denom
    z1 = pooled @ model.W1 + model.b1
    hidden = np.maximum(z1, 0.0)
    logits = hidden @ model.W2 + model.b2
    return mask, denom, pooled, z1, hidden, _softmax(logits)


def forward_batch(model: NnModel, ids: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Class probabilities, shape ``(n, 3)``."""
    return _forward_cache(model, ids, lengths)[-1]


def forward(model: NnModel, seq: IntSequence) -> np.ndarray:
    ids = np.asarray(seq.ids, dtype=np.int64)[None, :]
    return forward_batch(model, ids, np.array([seq.true_length]))[0]


def loss(probs: np.ndarray, label: int) -> float:
    return float(-math.log(max(float(probs[int(label)]), PROB_FLOOR)))


def batch_loss(model: NnModel, ids, lengths, labels) -> float:
    """Mean cross-entropy over a batch."""
    probs = forward_batch(model, ids, lengths)
    labels = np.asarray(labels, dtype=np.int64)
    picked = np.maximum(probs[np.arange(len(labels)), labels], PROB_FLOOR)
    return float(-np.log(picked).mean())


def _loss_and_gradients(model: NnModel, ids, lengths, labels):
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)
    if n == 0:
        raise ValueError("gradients need a non-empty batch")
    ids = np.asarray(ids)
    mask, denom, pooled, z1, hidden, probs = _forward_cache(model, ids, lengths)
    rows = np.arange(n)
    value = float(-np.log(np.maximum(probs[rows, labels], PROB_FLOOR)).mean())

    dlogits = probs.copy()
    dlogits[rows, labels] -= 1.0
    dlogits /= n
    dW2 = hidden.T @ dlogits
    db2 = dlogits.sum(axis=0)
    dz1 = (dlogits @ model.W2.T) * (z1 > 0)
    dW1 = pooled.T @ dz1
    db1 = dz1.sum(axis=0)
    dpooled = dz1 @ model.W1.T  # (n, d)

    per_position = (dpooled / denom)[:, None, :] * mask[..., None]  # (n, L, d)
    dembedding = np.zeros_like(model.embedding)
    np.add.at(dembedding, ids.ravel(), per_position.reshape(-1, per_position.shape[-1]))
    dembedding[PAD] = 0.0
    return value, {"embedding": dembedding, "W1": dW1, "b1": db1, "W2": dW2, "b2": db2}


def gradients(model: NnModel, ids, lengths, labels) -> dict[str, np.ndarray]:
    """Analytic gradients of :func:`batch_loss` for every parameter.

    The probability floor is treated as inactive (it only matters once a
    true-class probability has underflowed below 1e-12).
    """
    return _loss_and_gradients(model, ids, lengths, labels)[1]


def predict_many(model: NnModel, ids, lengths) -> np.ndarray:
    # argmax takes the first maximum: ties go to the lowest class index
    return np.argmax(forward_batch(model, ids, lengths), axis=1)


def evaluate(model: NnModel, ids, lengths, labels) -> float:
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        return float("nan")
    return float(np.mean(predict_many(model, ids, lengths) == labels))


def _split_validation(n: int, fraction: float, rng: np.random.Generator):
    order = rng.permutation(n)
    n_val = math.floor(n * fraction)
    if n_val >= n:
        n_val = n - 1
    return np.sort(order[n_val:]), np.sort(order[:n_val])


def train(model: NnModel, train_data, config: TrainConfig = TrainConfig()) -> tuple[NnModel, EpochTrace]:
    """Train a copy of ``model`` on ``train_data = (ids, lengths, labels)``.

    A validation split of ``config.validation_fraction`` is carved off the
    training data first. Each epoch visits the remaining rows in a fresh
    seeded order, in mini-batches, applying ``param -= lr * grad``. After
    every epoch the full-pass loss and accuracy are recorded for both parts.
    Raises :class:`TrainingDiverged` if a batch loss becomes non-finite.
    """
    ids, lengths, labels = (np.asarray(a) for a in train_data)
    n = len(labels)
    if n == 0:
        raise ValueError("no training data")
    rng = np.random.default_rng(config.seed)
    fit_idx, val_idx = _split_validation(n, config.validation_fraction, rng)
    fit_ids, fit_len, fit_y = ids[fit_idx], lengths[fit_idx], labels[fit_idx]
    val_ids, val_len, val_y = ids[val_idx], lengths[val_idx], labels[val_idx]

    model = model.copy()
    params = model.params()
    trace = EpochTrace()
    lr = config.learning_rate
    for epoch in range(config.epochs):
        order = rng.permutation(len(fit_y))
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            # overflow shows up as a non-finite loss or parameter, reported below
            with np.errstate(over="ignore", invalid="ignore"):
                current, grads = _loss_and_gradients(model, fit_ids[batch], fit_len[batch], fit_y[batch])
            if not math.isfinite(current):
                raise TrainingDiverged(f"loss became non-finite in epoch {epoch + 1}")
            for name, g in grads.items():
                params[name] -= lr * g
            if not all(np.isfinite(p).all() for p in params.values()):
                raise TrainingDiverged(f"loss became non-finite in epoch {epoch + 1}")

        trace.train_loss.append(batch_loss(model, fit_ids, fit_len, fit_y))
        trace.train_accuracy.append(evaluate(model, fit_ids, fit_len, fit_y))
        if len(val_y):
            trace.val_loss.append(batch_loss(model, val_ids, val_len, val_y))
            trace.val_accuracy.append(evaluate(model, val_ids, val_len, val_y))
        else:
            trace.val_loss.append(float("nan"))
            trace.val_accuracy.append(float("nan"))
    return model, trace


# -- persistence ---------------------------------------------------------------
# JSON with shortest round-trip float reprs: exact, and byte-stable across runs.


def model_to_dict(model: NnModel, **extra) -> dict:
    d, h = model.dims
    data = {"kind": "neural", "version": MODEL_VERSION, "vocab_size": model.vocab_size, "d": d, "h": h}
    data.update({name: arr.tolist() for name, arr in model.params().items()})
    data.update(extra)
    return data


def model_from_dict(data: dict) -> NnModel:
    if data.get("kind") != "neural":
        raise ValueError("not a neural model")
    if data.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported neural model version {data.get('version')!r}")
    V, d, h = int(data["vocab_size"]), int(data["d"]), int(data["h"])
    shapes = {"embedding": (V, d), "W1": (d, h), "b1": (h,), "W2": (h, N_CLASSES), "b2": (N_CLASSES,)}
    arrays = {}
    for name, shape in shapes.items():
        arr = np.asarray(data[name], dtype=np.float64)
        if arr.shape != shape:
            raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
        arrays[name] = arr
    return NnModel(**arrays)


def save_model(model: NnModel, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(model_to_dict(model)) + "\n")


def load_model(path: str | Path) -> NnModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

