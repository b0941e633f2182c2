"""AFINN lexicon scoring and three-way sentiment labels."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .textprep import clean_text, lowercase, tokenize

__all__ = [
    "SentimentLabel",
    "AfinnLexicon",
    "PolarityScore",
    "load_afinn",
    "parse_afinn",
    "default_lexicon",
    "score_document",
    "score_text",
    "label_from_score",
]

MAX_ABS_SCORE = 5


class SentimentLabel(enum.IntEnum):
    """Class indices shared by every classifier in the package."""

    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: str) -> SentimentLabel:
        try:
            return cls[value.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown sentiment label {value!r}") from None


@dataclass(frozen=True)
class AfinnLexicon:
    entries: dict[str, int]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def get(self, word: str, default=None):
        return self.entries.get(word, default)


@dataclass(frozen=True)
class PolarityScore:
    value: float
    hits: int

    def __post_init__(self):
        if not -1.0 <= self.value <= 1.0:
            raise ValueError(f"polarity {self.value} outside [-1, 1]")
        if self.hits == 0 and self.value != 0:
            raise ValueError("a score with no matched tokens must be 0")


def parse_afinn(text: str) -> AfinnLexicon:
    entries: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected word<TAB>score, got {line!r}")
        word, raw_score = parts
        try:
            score = int(raw_score)
        except ValueError:
            raise ValueError(f"line {lineno}: score {raw_score!r} is not an integer") from None
        if not -MAX_ABS_SCORE <= score <= MAX_ABS_SCORE:
            raise ValueError(f"line {lineno}: score {score} outside [-5, 5]")
        if word != word.lower():
            raise ValueError(f"line {lineno}: word {word!r} is not lowercase")
        if word in entries:
            raise ValueError(f"line {lineno}: duplicate word {word!r}")
        entries[word] = score
    return AfinnLexicon(entries)


def load_afinn(path: str | Path) -> AfinnLexicon:
    """Load a tab-separated ``word<TAB>score`` AFINN file."""
    return parse_afinn(Path(path).read_text(encoding="utf-8"))


_DEFAULT: AfinnLexicon | None = None


def default_lexicon() -> AfinnLexicon:
    """The bundled AFINN-111 word list (2,477 entries)."""
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("tweetsent.data").joinpath("AFINN-111.txt").read_text("utf-8")
        _DEFAULT = parse_afinn(text)
    return _DEFAULT


def score_document(tokens: Iterable[str], lex: AfinnLexicon) -> PolarityScore:
    """Mean matched AFINN score divided by 5, so the value lies in [-1, 1].

    Tokens are looked up as given (lowercase surface forms, not stems).
    """
    raw = 0
    hits = 0
    for token in tokens:
        score = lex.entries.get(token)
        if score is not None:
            raw += score
            hits += 1
    if hits == 0:
        return PolarityScore(0.0, 0)
    value = min(1.0, max(-1.0, raw / (MAX_ABS_SCORE * hits)))
    return PolarityScore(value, hits)


def score_text(raw: str, lex: AfinnLexicon | None = None) -> PolarityScore:
    """Clean, lowercase and tokenize ``raw``, then score it."""
    if lex is None:
        lex = default_lexicon()
    return score_document(tokenize(lowercase(clean_text(raw))), lex)


def label_from_score(score: PolarityScore | float, epsilon: float = 0.0) -> SentimentLabel:
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    value = score.value if isinstance(score, PolarityScore) else float(score)
    if value > epsilon:
        return SentimentLabel.POSITIVE
    if value < -epsilon:
        return SentimentLabel.NEGATIVE
    return SentimentLabel.NEUTRAL
