"""Tweet preprocessing: cleaning, case folding, tokenization, stopword
removal, stemming, rule-based POS tagging and noun-phrase chunking."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from . import porter

__all__ = [
    "POS_TAGS",
    "Token",
    "TokenizedDocument",
    "PipelineConfig",
    "clean_text",
    "lowercase",
    "tokenize",
    "remove_stopwords",
    "stem",
    "pos_tag",
    "chunk",
    "preprocess",
    "load_stopwords",
    "default_stopwords",
    "load_closed_class",
    "default_closed_class",
]

POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "DET", "PRON", "PREP", "CONJ", "NUM", "OTHER")

_HTML_TAG = re.compile(r"<[^>]*>")
_URL = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_MENTION = re.compile(r"@\w+")
_APOSTROPHE = re.compile(r"['’]")
_SPACES = re.compile(r"\s+")


def clean_text(raw: str) -> str:
    """Strip markup, URLs, mentions, digits and punctuation from a tweet.

    Hashtags keep their word. Apostrophes are deleted so contractions stay
    one word ("don't" -> "dont"); every other non-letter becomes a space.
    Letters outside ASCII are kept.

    >>> clean_text("War!!! 123 <b>now</b>")
    'War now'
    >>> clean_text("@user check http://x.y #peace")
    'check peace'
    """
    text = _HTML_TAG.sub(" ", raw)
    text = _URL.sub(" ", text)
    text = _MENTION.sub(" ", text)
    text = _APOSTROPHE.sub("", text)
    # keep letters and combining marks; \w would also admit numerics like "¼"
    text = "".join(ch if unicodedata.category(ch)[0] in "LM" else " " for ch in text)
    return _SPACES.sub(" ", text).strip()


def lowercase(text: str) -> str:
    return text.casefold()


def tokenize(text: str) -> list[str]:
    return text.split()


def remove_stopwords(tokens: Sequence[str], stoplist: Iterable[str]) -> list[str]:
    stoplist = stoplist if isinstance(stoplist, (set, frozenset)) else set(stoplist)
    return [t for t in tokens if t not in stoplist]


def stem(word: str) -> str:
    return porter.stem(word)


# -- word list files ---------------------------------------------------------


def _content_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _parse_stopwords(text: str) -> frozenset[str]:
    return frozenset(line.lower() for _, line in _content_lines(text))


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one word per line, ``#`` starts a comment line."""
    return _parse_stopwords(Path(path).read_text(encoding="utf-8"))


def default_stopwords() -> frozenset[str]:
    text = resources.files("tweetsent.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return _parse_stopwords(text)


def _parse_closed_class(text: str) -> dict[str, str]:
    table = {}
    for lineno, line in _content_lines(text):
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in POS_TAGS:
            raise ValueError(f"line {lineno}: expected word<TAB>TAG, got {line!r}")
        table[parts[0].lower()] = parts[1]
    return table


def load_closed_class(path: str | Path) -> dict[str, str]:
    return _parse_closed_class(Path(path).read_text(encoding="utf-8"))


_DEFAULT_CLOSED_CLASS: dict[str, str] | None = None


def default_closed_class() -> dict[str, str]:
    global _DEFAULT_CLOSED_CLASS
    if _DEFAULT_CLOSED_CLASS is None:
        text = resources.files("tweetsent.data").joinpath("closed_class.tsv").read_text("utf-8")
        _DEFAULT_CLOSED_CLASS = _parse_closed_class(text)
    return dict(_DEFAULT_CLOSED_CLASS)


# -- tagging and chunking ------------------------------------------------------

_SUFFIX_TAGS = (
    ("ly", "ADV"),
    ("ing", "VERB"),
    ("ed", "VERB"),
    ("ous", "ADJ"),
    ("ful", "ADJ"),
    ("ive", "ADJ"),
    ("able", "ADJ"),
)
# shortest remainder a suffix rule may leave behind ("red" is not red+ed)
_MIN_SUFFIX_BASE = 2


def _tag_one(token: str, closed_class: dict[str, str]) -> str:
    if token in closed_class:
        return closed_class[token]
    if token.isdigit():
        return "NUM"
    for suffix, tag in _SUFFIX_TAGS:
        if token.endswith(suffix) and len(token) - len(suffix) >= _MIN_SUFFIX_BASE:
            return tag
    if not any(ch.isalpha() for ch in token):
        return "OTHER"
    return "NOUN"


def pos_tag(tokens: Sequence[str], closed_class: dict[str, str] | None = None) -> list[str]:
    """Tag tokens by closed-class lookup, then suffix rules, then NOUN."""
    if closed_class is None:
        closed_class = default_closed_class()
    return [_tag_one(t, closed_class) for t in tokens]


def chunk(tagged: Sequence) -> list[tuple[int, int]]:
    """Find maximal ``DET? ADJ* NOUN+`` spans, scanning left to right.

    ``tagged`` may hold :class:`Token` objects or bare tag strings. Returns
    half-open ``(start, end)`` index ranges.
    """
    tags = [t.pos if isinstance(t, Token) else t for t in tagged]
    if any(tag is None for tag in tags):
        raise ValueError("chunk() needs every token tagged")
    spans = []
    i, n = 0, len(tags)
    while i < n:
        j = i
        if tags[j] == "DET":
            j += 1
        while j < n and tags[j] == "ADJ":
            j += 1
        k = j
        while k < n and tags[k] == "NOUN":
            k += 1
        if k > j:
            spans.append((i, k))
            i = k
        else:
            i += 1
    return spans


# -- documents and the full chain ------------------------------------------------


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    pos: str | None = None

    def __post_init__(self):
        if not self.surface or not self.stem:
            raise ValueError("token surface and stem must be non-empty")
        if self.pos is not None and self.pos not in POS_TAGS:
            raise ValueError(f"unknown POS tag {self.pos!r}")


@dataclass(frozen=True)
class TokenizedDocument:
    source_id: str
    tokens: tuple[Token, ...] = ()
    chunks: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.chunks is not None:
            prev_end = 0
            for start, end in self.chunks:
                if not (prev_end <= start < end <= len(self.tokens)):
                    raise ValueError(f"bad chunk range {(start, end)}")
                prev_end = end

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def stems(self) -> list[str]:
        return [t.stem for t in self.tokens]

    @property
    def tags(self) -> list[str | None]:
        return [t.pos for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class PipelineConfig:
    clean: bool = True
    lowercase: bool = True
    stopwords: bool = True
    stem: bool = True
    pos: bool = False
    chunk: bool = False
    stopword_list: str | None = None  # path; None means the bundled list
    stoplist: frozenset[str] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.stem and not self.lowercase:
            raise ValueError("the stem stage requires the lowercase stage")
        if self.chunk and not self.pos:
            raise ValueError("the chunk stage requires the pos stage")
        if self.stoplist is None:
            words = (
                load_stopwords(self.stopword_list)
                if self.stopword_list is not None
                else default_stopwords()
            )
            object.__setattr__(self, "stoplist", words)

    @classmethod
    def all_stages(cls, **overrides) -> PipelineConfig:
        return cls(**{"pos": True, "chunk": True, **overrides})

    @classmethod
    def disabled(cls) -> PipelineConfig:
        return cls(clean=False, lowercase=False, stopwords=False, stem=False,
                   pos=False, chunk=False)

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name)
                for name in ("clean", "lowercase", "stopwords", "stem", "pos", "chunk")}


def preprocess(raw: str, config: PipelineConfig | None = None, source_id: str = "") -> TokenizedDocument:
    """Run clean -> lowercase -> tokenize -> stopwords -> stem -> pos -> chunk."""
    if config is None:
        config = PipelineConfig()
    text = clean_text(raw) if config.clean else raw
    if config.lowercase:
        text = lowercase(text)
    surfaces = tokenize(text)
    if config.stopwords:
        surfaces = remove_stopwords(surfaces, config.stoplist)
    # a lone "s" stems to the empty string; keep the surface form instead
    stems = [stem(s) or s for s in surfaces] if config.stem else surfaces
    tags = pos_tag(surfaces) if config.pos else [None] * len(surfaces)
    tokens = tuple(Token(s, st, p) for s, st, p in zip(surfaces, stems, tags))
    chunks = tuple(chunk(tokens)) if config.chunk else None
    return TokenizedDocument(source_id, tokens, chunks)
