"""Vocabulary, bag-of-words count vectors and padded integer sequences.

A single :class:`Vocabulary` serves both classifiers. Sequence ids reserve
0 for padding and 1 for out-of-vocabulary tokens, so real tokens start at 2.
Count vectors and document-term matrices use *term columns* instead:
column ``j`` holds the token with sequence id ``j + 2``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy import sparse

from ._io import atomic_write_text
from .textprep import TokenizedDocument

__all__ = [
    "PAD",
    "OOV",
    "RESERVED",
    "TOKENIZER_VERSION",
    "Vocabulary",
    "IntSequence",
    "build_vocabulary",
    "vectorize_counts",
    "doc_term_matrix",
    "encode_sequence",
    "encode_batch",
    "default_max_len",
    "save_tokenizer",
    "load_tokenizer",
    "tokenizer_to_dict",
    "tokenizer_from_dict",
]

PAD = 0
OOV = 1
RESERVED = 2
TOKENIZER_VERSION = 1
_FORMAT = "tweetsent-tokenizer"

Doc = Union[TokenizedDocument, Sequence[str]]


def _terms(doc: Doc) -> list[str]:
    # features are built over stems
    if isinstance(doc, TokenizedDocument):
        return doc.stems
    return list(doc)


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    max_size: int
    min_df: int = 1
    index_of: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        index_of = {tok: i + RESERVED for i, tok in enumerate(self.tokens)}
        if len(index_of) != len(self.tokens):
            raise ValueError("vocabulary tokens must be unique")
        object.__setattr__(self, "index_of", index_of)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def n_ids(self) -> int:
        """Size of the id space, including PAD and OOV."""
        return len(self.tokens) + RESERVED

    def column(self, token: str) -> int | None:
        idx = self.index_of.get(token)
        return None if idx is None else idx - RESERVED


@dataclass(frozen=True)
class IntSequence:
    ids: tuple[int, ...]
    true_length: int

    def __post_init__(self):
        if not 0 <= self.true_length <= len(self.ids):
            raise ValueError("true_length out of range")
        if any(i == PAD for i in self.ids[: self.true_length]):
            raise ValueError("PAD inside the sequence body")
        if any(i != PAD for i in self.ids[self.true_length:]):
            raise ValueError("non-PAD id in the padding tail")


def build_vocabulary(docs: Sequence[Doc], max_size: int = 10_000, min_df: int = 1) -> Vocabulary:
    """Rank terms by corpus frequency (ties: lexicographic), keep those
    appearing in at least ``min_df`` documents, cap at ``max_size``."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    if not docs:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    freq: Counter[str] = Counter()
    df: Counter[str] = Counter()
    for doc in docs:
        terms = _terms(doc)
        freq.update(terms)
        df.update(set(terms))
    ranked = sorted((t for t in freq if df[t] >= min_df), key=lambda t: (-freq[t], t))
    return Vocabulary(tuple(ranked[:max_size]), max_size=max_size, min_df=min_df)


def vectorize_counts(doc: Doc, vocab: Vocabulary) -> dict[int, int]:
    """Sparse count vector ``{term column: count}``; OOV terms are dropped."""
    counts: dict[int, int] = {}
    for term in _terms(doc):
        col = vocab.column(term)
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    return counts


def doc_term_matrix(docs: Sequence[Doc], vocab: Vocabulary) -> sparse.csr_matrix:
    """Stack count vectors into an ``n_docs x len(vocab)`` CSR matrix."""
    rows, cols, vals = [], [], []
    for i, doc in enumerate(docs):
        for col, count in sorted(vectorize_counts(doc, vocab).items()):
            rows.append(i)
            cols.append(col)
            vals.append(count)
    return sparse.csr_matrix(
        (np.asarray(vals, dtype=np.int64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(len(docs), len(vocab)),
    )


def encode_sequence(doc: Doc, vocab: Vocabulary, max_len: int) -> IntSequence:
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    ids = [vocab.index_of.get(t, OOV) for t in _terms(doc)][:max_len]
    true_length = len(ids)
    ids += [PAD] * (max_len - true_length)
    return IntSequence(tuple(ids), true_length)


def encode_batch(docs: Sequence[Doc], vocab: Vocabulary, max_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Encode documents into an ``(n, max_len)`` id array and a length array."""
    ids = np.zeros((len(docs), max_len), dtype=np.int64)
    lengths = np.zeros(len(docs), dtype=np.int64)
    for i, doc in enumerate(docs):
        seq = encode_sequence(doc, vocab, max_len)
        ids[i] = seq.ids
        lengths[i] = seq.true_length
    return ids, lengths


def default_max_len(docs: Sequence[Doc]) -> int:
    """95th percentile of document lengths, rounded up (at least 1)."""
    lengths = [len(_terms(d)) for d in docs]
    if not lengths:
        return 1
    return max(1, math.ceil(float(np.percentile(lengths, 95))))


# -- persistence ------------------------------------------------------------------
#
# Tokenizer file (JSON object):
#   format:   "tweetsent-tokenizer"
#   version:  1
#   max_size: int
#   min_df:   int
#   tokens:   [str, ...]   position p has sequence id p + 2


def tokenizer_to_dict(vocab: Vocabulary) -> dict:
    return {
        "format": _FORMAT,
        "version": TOKENIZER_VERSION,
        "max_size": vocab.max_size,
        "min_df": vocab.min_df,
        "tokens": list(vocab.tokens),
    }


def tokenizer_from_dict(data: dict) -> Vocabulary:
    if not isinstance(data, dict) or data.get("format") != _FORMAT:
        raise ValueError("not a tokenizer file")
    if data.get("version") != TOKENIZER_VERSION:
        raise ValueError(
            f"tokenizer schema version {data.get('version')!r} is not supported "
            f"(expected {TOKENIZER_VERSION})"
        )
    return Vocabulary(tuple(data["tokens"]), max_size=int(data["max_size"]), min_df=int(data["min_df"]))


def save_tokenizer(vocab: Vocabulary, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(tokenizer_to_dict(vocab), ensure_ascii=False, indent=1) + "\n")


def load_tokenizer(path: str | Path) -> Vocabulary:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: unreadable tokenizer file: {exc}") from None
    return tokenizer_from_dict(data)
