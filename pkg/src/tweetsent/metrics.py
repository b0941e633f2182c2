"""Confusion matrix, accuracy, per-class precision/recall/F1 and a
classification report.

Rows of a confusion matrix are true classes, columns predicted classes.
Ratios with a zero denominator are reported as 0 and flagged.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lexicon import SentimentLabel

__all__ = [
    "ConfusionMatrix",
    "ClassMetrics",
    "EvaluationReport",
    "confusion",
    "accuracy",
    "f1_score",
    "class_metrics",
    "classification_report",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # (K, K) int64

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (counts < 0).any():
            raise ValueError("confusion counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def K(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self, class_names: Sequence[str] | None = None) -> str:
        names = list(class_names) if class_names is not None else _default_names(self.K)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["true"] + names)
        for name, row in zip(names, self.counts):
            writer.writerow([name] + [int(x) for x in row])
        return buf.getvalue()


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    # names of metrics whose denominator was zero
    zero_division: tuple[str, ...] = ()


def confusion(true_labels: Sequence[int], predicted_labels: Sequence[int], K: int = 3) -> ConfusionMatrix:
    t = np.asarray(true_labels, dtype=np.int64)
    p = np.asarray(predicted_labels, dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.size} true labels vs {p.size} predictions")
    if t.size and (min(t.min(), p.min()) < 0 or max(t.max(), p.max()) >= K):
        raise ValueError(f"label outside 0..{K - 1}")
    counts = np.zeros((K, K), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts)


def accuracy(matrix: ConfusionMatrix) -> float:
    """Trace over total; the multi-class form of (TP + TN) / all."""
    if matrix.total == 0:
        raise ValueError("accuracy of an empty confusion matrix")
    return float(np.trace(matrix.counts) / matrix.total)


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall (0 when both are 0)."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def class_metrics(matrix: ConfusionMatrix, c: int) -> ClassMetrics:
    if not 0 <= c < matrix.K:
        raise ValueError(f"class {c} outside 0..{matrix.K - 1}")
    tp = int(matrix.counts[c, c])
    predicted = int(matrix.counts[:, c].sum())
    actual = int(matrix.counts[c, :].sum())
    flags = []
    if predicted:
        precision = tp / predicted
    else:
        precision = 0.0
        flags.append("precision")
    if actual:
        recall = tp / actual
    else:
        recall = 0.0
        flags.append("recall")
    if precision + recall == 0:
        flags.append("f1")
    return ClassMetrics(precision, recall, f1_score(precision, recall), actual, tuple(flags))


@dataclass(frozen=True)
class EvaluationReport:
    matrix: ConfusionMatrix
    per_class: tuple[ClassMetrics, ...]
    accuracy: float
    macro: ClassMetrics
    weighted: ClassMetrics
    class_names: tuple[str, ...] = field(default=())

    def format(self) -> str:
        """Column-aligned text table, two decimals."""
        names = list(self.class_names)
        width = max([len(n) for n in names] + [len("weighted avg")])
        head = f"{'':>{width}}  {'precision':>9}  {'recall':>9}  {'f1-score':>9}  {'support':>9}"
        lines = [head, ""]

        def row(name, m):
            return f"{name:>{width}}  {m.precision:9.2f}  {m.recall:9.2f}  {m.f1:9.2f}  {m.support:9d}"

        for name, m in zip(names, self.per_class):
            lines.append(row(name, m))
        lines.append("")
        total = self.matrix.total
        lines.append(f"{'accuracy':>{width}}  {'':>9}  {'':>9}  {self.accuracy:9.2f}  {total:9d}")
        lines.append(row("macro avg", self.macro))
        lines.append(row("weighted avg", self.weighted))
        flagged = [f"{n}: {', '.join(m.zero_division)}" for n, m in zip(names, self.per_class) if m.zero_division]
        if flagged:
            lines.append("")
            lines.append("zero denominators (reported as 0): " + "; ".join(flagged))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["class", "precision", "recall", "f1", "support"])
        for name, m in zip(self.class_names, self.per_class):
            writer.writerow([name, repr(m.precision), repr(m.recall), repr(m.f1), m.support])
        return buf.getvalue()


def _default_names(K: int) -> list[str]:
    if K == len(SentimentLabel):
        return [str(label) for label in SentimentLabel]
    return [str(i) for i in range(K)]


def classification_report(matrix: ConfusionMatrix, class_names: Sequence[str] | None = None) -> EvaluationReport:
    """Per-class metrics, accuracy, and macro (unweighted) and
    support-weighted averages. Absent classes contribute zero rows."""
    if matrix.total == 0:
        raise ValueError("report on an empty confusion matrix")
    names = tuple(class_names) if class_names is not None else tuple(_default_names(matrix.K))
    per_class = tuple(class_metrics(matrix, c) for c in range(matrix.K))
    P = np.array([m.precision for m in per_class])
    R = np.array([m.recall for m in per_class])
    F = np.array([m.f1 for m in per_class])
    support = np.array([m.support for m in per_class], dtype=np.float64)
    total = int(support.sum())
    macro = ClassMetrics(float(P.mean()), float(R.mean()), float(F.mean()), total)
    w = support / support.sum()
    weighted = ClassMetrics(float(P @ w), float(R @ w), float(F @ w), total)
    return EvaluationReport(matrix, per_class, accuracy(matrix), macro, weighted, names)
