"""Multinomial Naive Bayes over bag-of-words counts, with additive smoothing."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse

from ._io import atomic_write_text
from .lexicon import SentimentLabel

__all__ = [
    "CLASSES",
    "ABSENT_LOG_PRIOR",
    "NbModel",
    "fit",
    "predict_log_posterior",
    "predict",
    "predict_many",
    "posterior_proba",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]

CLASSES = tuple(SentimentLabel)
MODEL_VERSION = 1

# finite stand-in for log(0) given to classes with no training documents:
# exp() of it is 0, yet adding finite likelihood terms never produces -inf or nan
ABSENT_LOG_PRIOR = -1e300


@dataclass(frozen=True)
class NbModel:
    class_log_prior: np.ndarray  # (K,)
    token_log_likelihood: np.ndarray  # (K, V)
    alpha: float
    classes: tuple[SentimentLabel, ...] = CLASSES

    @property
    def vocab_size(self) -> int:
        return self.token_log_likelihood.shape[1]

    @property
    def present(self) -> np.ndarray:
        """Mask of classes that had training documents."""
        return self.class_log_prior > ABSENT_LOG_PRIOR


def fit(matrix, labels: Sequence[int], alpha: float = 1.0, n_classes: int = len(CLASSES)) -> NbModel:
    """Estimate priors ``N_c / N`` and smoothed likelihoods
    ``(count(w, c) + alpha) / (total(c) + alpha * |V|)``, stored as logs."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    X = sparse.csr_matrix(matrix, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n_docs, n_terms = X.shape
    if n_docs == 0:
        raise ValueError("cannot fit on an empty training set")
    if y.shape != (n_docs,):
        raise ValueError(f"got {y.shape[0]} labels for {n_docs} documents")
    if y.min() < 0 or y.max() >= n_classes:
        raise ValueError("label out of range")

    onehot = np.zeros((n_docs, n_classes))
    onehot[np.arange(n_docs), y] = 1.0
    class_docs = onehot.sum(axis=0)
    counts = np.asarray((X.T @ onehot).T)  # (K, V)

    with np.errstate(divide="ignore"):
        log_prior = np.log(class_docs) - np.log(n_docs)
    absent = class_docs == 0
    if absent.any():
        missing = ", ".join(str(SentimentLabel(c)) for c in np.flatnonzero(absent))
        warnings.warn(f"no training documents for class(es): {missing}", stacklevel=2)
        log_prior[absent] = ABSENT_LOG_PRIOR

    smoothed = counts + alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    return NbModel(log_prior, log_likelihood, float(alpha), CLASSES[:n_classes])


def _as_dense_counts(vector, vocab_size: int) -> np.ndarray:
    if isinstance(vector, Mapping):
        dense = np.zeros(vocab_size)
        for col, count in vector.items():
            if not 0 <= col < vocab_size:
                raise IndexError(f"term index {col} outside vocabulary of size {vocab_size}")
            dense[col] = count
        return dense
    dense = np.asarray(vector, dtype=np.float64).ravel()
    if dense.shape != (vocab_size,):
        raise IndexError(f"count vector has length {dense.shape[0]}, expected {vocab_size}")
    return dense


def predict_log_posterior(vector, model: NbModel) -> np.ndarray:
    """Unnormalized log posterior per class for one count vector
    (``{term column: count}`` mapping or dense array)."""
    counts = _as_dense_counts(vector, model.vocab_size)
    return model.class_log_prior + model.token_log_likelihood @ counts


def _argmax(scores: np.ndarray, present: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. ties go to the lowest index
    masked = np.where(present, scores, -np.inf)
    return np.argmax(masked, axis=-1)


def predict(vector, model: NbModel) -> SentimentLabel:
    scores = predict_log_posterior(vector, model)
    return SentimentLabel(int(_argmax(scores, model.present)))


def _batch_scores(matrix, model: NbModel) -> np.ndarray:
    X = sparse.csr_matrix(matrix, dtype=np.float64)
    if X.shape[1] != model.vocab_size:
        raise IndexError(f"matrix has {X.shape[1]} terms, model has {model.vocab_size}")
    return np.asarray(X @ model.token_log_likelihood.T) + model.class_log_prior


def predict_many(matrix, model: NbModel) -> np.ndarray:
    """Predicted class index for each row of a document-term matrix."""
    return _argmax(_batch_scores(matrix, model), model.present)


def posterior_proba(matrix, model: NbModel) -> np.ndarray:
    """Normalized posteriors, one row per document."""
    scores = _batch_scores(matrix, model)
    scores = np.where(model.present, scores, -np.inf)
    scores -= scores.max(axis=1, keepdims=True)
    p = np.exp(scores)
    return p / p.sum(axis=1, keepdims=True)


# -- persistence ---------------------------------------------------------------
# Floats go through json, which writes the shortest repr that round-trips.


def model_to_dict(model: NbModel) -> dict:
    return {
        "kind": "naive_bayes",
        "version": MODEL_VERSION,
        "alpha": model.alpha,
        "classes": [str(c) for c in model.classes],
        "class_log_prior": model.class_log_prior.tolist(),
        "token_log_likelihood": model.token_log_likelihood.tolist(),
    }


def model_from_dict(data: dict) -> NbModel:
    if data.get("kind") != "naive_bayes":
        raise ValueError("not a Naive Bayes model")
    if data.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported Naive Bayes model version {data.get('version')!r}")
    classes = tuple(SentimentLabel.parse(c) for c in data["classes"])
    if classes != CLASSES[: len(classes)]:
        raise ValueError(f"unexpected class order {data['classes']}")
    loglik = np.asarray(data["token_log_likelihood"], dtype=np.float64).reshape(len(classes), -1)
    return NbModel(
        class_log_prior=np.asarray(data["class_log_prior"], dtype=np.float64),
        token_log_likelihood=loglik,
        alpha=float(data["alpha"]),
        classes=classes,
    )


def save_model(model: NbModel, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(model_to_dict(model)) + "\n")


def load_model(path: str | Path) -> NbModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
