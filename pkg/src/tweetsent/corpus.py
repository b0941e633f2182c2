"""Loading, filtering, splitting and synthesizing tweet corpora."""

from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .lexicon import AfinnLexicon, SentimentLabel
from .textprep import clean_text

__all__ = [
    "TweetRecord",
    "Corpus",
    "SplitConfig",
    "WordPools",
    "parse_timestamp",
    "load_csv",
    "write_csv",
    "filter_relevant",
    "train_test_split",
    "load_pools",
    "default_pools",
    "generate_synthetic",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TweetRecord:
    id: str
    text: str
    timestamp: datetime | None = None
    label: SentimentLabel | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"record {self.id!r} has empty text")


@dataclass(frozen=True)
class Corpus:
    records: tuple[TweetRecord, ...] = ()
    # rows dropped by load_csv; not part of the corpus identity
    skipped: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise ValueError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)

    def __iter__(self) -> Iterator[TweetRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def texts(self) -> list[str]:
        return [r.text for r in self.records]

    @property
    def labels(self) -> list[SentimentLabel | None]:
        return [r.label for r in self.records]


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie strictly between 0 and 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


# -- CSV ----------------------------------------------------------------------


def parse_timestamp(value: str) -> datetime | None:
    """ISO-8601 datetime or date, as aware UTC. Returns None when unparseable.

    Naive datetimes are taken to be UTC.
    """
    value = value.strip()
    if not value:
        return None
    iso = value[:-1] + "+00:00" if value.endswith(("Z", "z")) else value
    try:
        ts = datetime.fromisoformat(iso)
    except ValueError:
        try:
            d = date.fromisoformat(value[:10])
        except ValueError:
            return None
        ts = datetime(d.year, d.month, d.day)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


_FIELDS = ("id", "date", "text", "label")


def load_csv(path: str | Path, mapping: Mapping[str, str] | None = None,
             strict: bool = False) -> Corpus:
    """Read tweets from a headed, comma-separated UTF-8 file.

    ``mapping`` maps logical fields (``id``, ``date``, ``text``, ``label``)
    to column names; unmapped fields use their own name. Only ``text`` is
    required. Rows with the wrong field count, blank text, a bad label or a
    repeated id are skipped and counted in ``Corpus.skipped``; with
    ``strict=True`` the first such row raises ``ValueError`` naming its row
    number (1-based, header is row 1).
    """
    columns = {f: f for f in _FIELDS}
    columns.update(mapping or {})
    path = Path(path)
    records = []
    skipped = 0
    seen_ids = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, no header row") from None
        position = {name: i for i, name in enumerate(header)}
        if columns["text"] not in position:
            raise ValueError(f"{path}: missing text column {columns['text']!r}")
        for name in ("id", "date", "label"):
            if mapping and name in mapping and mapping[name] not in position:
                raise ValueError(f"{path}: missing mapped column {mapping[name]!r}")
        col = {f: position.get(columns[f]) for f in _FIELDS}

        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            problem = None
            if len(row) != len(header):
                problem = f"expected {len(header)} fields, got {len(row)}"
            else:
                text = row[col["text"]]
                rec_id = row[col["id"]].strip() if col["id"] is not None else str(rowno - 2)
                label = None
                if not text.strip():
                    problem = "empty text"
                elif not rec_id:
                    problem = "empty id"
                elif rec_id in seen_ids:
                    problem = f"duplicate id {rec_id!r}"
                elif col["label"] is not None and row[col["label"]].strip():
                    try:
                        label = SentimentLabel.parse(row[col["label"]])
                    except ValueError as exc:
                        problem = str(exc)
            if problem is not None:
                if strict:
                    raise ValueError(f"{path}: row {rowno}: {problem}")
                skipped += 1
                continue
            ts = parse_timestamp(row[col["date"]]) if col["date"] is not None else None
            seen_ids.add(rec_id)
            records.append(TweetRecord(rec_id, text, ts, label))
    if skipped:
        log.warning("%s: skipped %d malformed rows", path, skipped)
    return Corpus(tuple(records), skipped=skipped)


def write_csv(corpus: Corpus, fh, extra: Mapping[str, Sequence] | None = None) -> None:
    """Write ``id,date,text,label`` (plus any ``extra`` columns) to an open text file."""
    extra = dict(extra or {})
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(list(_FIELDS) + list(extra))
    for i, rec in enumerate(corpus):
        row = [
            rec.id,
            rec.timestamp.isoformat() if rec.timestamp else "",
            rec.text,
            str(rec.label) if rec.label is not None else "",
        ]
        row += [values[i] for values in extra.values()]
        writer.writerow(row)


# -- filtering and splitting ------------------------------------------------------

_URL_OR_MENTION = re.compile(r"(?:https?://\S*|www\.\S*|@\w+)", re.IGNORECASE)


def _normalized(text: str) -> str:
    return " ".join(text.split())


def filter_relevant(corpus: Corpus) -> Corpus:
    """Drop URL/mention-only records, records empty after cleaning, and
    exact duplicates (after whitespace normalization; first one wins)."""
    kept = []
    seen = set()
    for rec in corpus:
        if not _URL_OR_MENTION.sub(" ", rec.text).strip():
            continue
        if not clean_text(rec.text):
            continue
        key = _normalized(rec.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(rec)
    return Corpus(tuple(kept))


def _train_count(n: int, fraction: float) -> int:
    # round first so that e.g. 100 * 0.29 = 28.999999999999996 still floors to 29
    return math.floor(round(n * fraction, 9))


def train_test_split(corpus: Corpus, config: SplitConfig = SplitConfig()) -> tuple[Corpus, Corpus]:
    """Seeded partition into (train, test); both keep the corpus order.

    The train part always has ``floor(n * train_fraction)`` records. In
    stratified mode each class gets ``floor(n_c * f)`` train records and the
    leftover slots go to the classes with the largest remainders.
    """
    n = len(corpus)
    if n == 0:
        raise ValueError("cannot split an empty corpus")
    n_train = _train_count(n, config.train_fraction)
    rng = np.random.default_rng(config.seed)

    if not config.stratified:
        chosen = rng.permutation(n)[:n_train]
    else:
        labels = corpus.labels
        if any(label is None for label in labels):
            raise ValueError("stratified split needs every record labelled")
        by_class: dict[int, list[int]] = {}
        for i, label in enumerate(labels):
            by_class.setdefault(int(label), []).append(i)
        classes = sorted(by_class)
        quota = {c: math.floor(len(by_class[c]) * config.train_fraction) for c in classes}
        remainder = sorted(
            classes,
            key=lambda c: (-(len(by_class[c]) * config.train_fraction - quota[c]), c),
        )
        for c in remainder[: n_train - sum(quota.values())]:
            quota[c] += 1
        chosen = []
        for c in classes:
            members = np.asarray(by_class[c])
            chosen.extend(rng.permutation(members)[: quota[c]].tolist())

    in_train = np.zeros(n, dtype=bool)
    in_train[np.asarray(chosen, dtype=int)] = True
    train = tuple(r for r, t in zip(corpus, in_train) if t)
    test = tuple(r for r, t in zip(corpus, in_train) if not t)
    return Corpus(train), Corpus(test)


# -- synthetic corpora ---------------------------------------------------------------

_POOL_NAMES = ("positive", "negative", "neutral", "filler")


@dataclass(frozen=True)
class WordPools:
    positive: tuple[str, ...] = ()
    negative: tuple[str, ...] = ()
    neutral: tuple[str, ...] = ()
    filler: tuple[str, ...] = ()

    def __post_init__(self):
        for name in _POOL_NAMES:
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not (self.positive or self.negative or self.neutral):
            raise ValueError("word pools are empty: need positive, negative or neutral words")
        sentiment = [set(self.positive), set(self.negative), set(self.neutral)]
        for i in range(3):
            for j in range(i + 1, 3):
                common = sentiment[i] & sentiment[j]
                if common:
                    raise ValueError(f"pools overlap: {sorted(common)}")

    def check_against(self, lex: AfinnLexicon) -> None:
        """Raise unless positive/negative words carry that sign in ``lex`` and
        neutral/filler words are absent from it."""
        bad = [w for w in self.positive if lex.get(w, 0) <= 0]
        bad += [w for w in self.negative if lex.get(w, 0) >= 0]
        bad += [w for w in self.neutral + self.filler if w in lex]
        if bad:
            raise ValueError(f"pool words disagree with the lexicon: {bad}")


def _parse_pools(text: str) -> WordPools:
    sections: dict[str, list[str]] = {name: [] for name in _POOL_NAMES}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in sections:
                raise ValueError(f"line {lineno}: unknown pool section [{current}]")
            continue
        if current is None:
            raise ValueError(f"line {lineno}: word outside any [section]")
        sections[current].append(line.lower())
    return WordPools(**sections)


def load_pools(path: str | Path) -> WordPools:
    return _parse_pools(Path(path).read_text(encoding="utf-8"))


def default_pools() -> WordPools:
    return _parse_pools(
        resources.files("tweetsent.data").joinpath("pools_default.txt").read_text("utf-8")
    )


# record "modes": which sentiment pools a synthetic tweet draws from
_MODE_WEIGHTS = {"positive": 0.35, "negative": 0.35, "neutral": 0.22, "mixed": 0.08}


def _available_modes(pools: WordPools) -> list[str]:
    modes = []
    if pools.positive:
        modes.append("positive")
    if pools.negative:
        modes.append("negative")
    if pools.neutral:
        modes.append("neutral")
    if pools.positive and pools.negative:
        modes.append("mixed")
    return modes


def _synthetic_text(rng: np.random.Generator, pools: WordPools, mode: str) -> str:
    words: list[str] = []
    if mode == "positive":
        words += rng.choice(pools.positive, size=rng.integers(1, 4)).tolist()
    elif mode == "negative":
        words += rng.choice(pools.negative, size=rng.integers(1, 4)).tolist()
    elif mode == "mixed":
        words += rng.choice(pools.positive, size=rng.integers(1, 3)).tolist()
        words += rng.choice(pools.negative, size=rng.integers(1, 3)).tolist()
    if pools.neutral:
        words += rng.choice(pools.neutral, size=rng.integers(1 if mode == "neutral" else 0, 4)).tolist()
    if pools.filler:
        words += rng.choice(pools.filler, size=rng.integers(2, 7)).tolist()
    words = [words[i] for i in rng.permutation(len(words))]

    # decorations exercised by the cleaner; they never carry sentiment
    if pools.neutral and rng.random() < 0.3:
        words.append("#" + str(rng.choice(pools.neutral)))
    if rng.random() < 0.25:
        words.insert(0, f"@user{int(rng.integers(0, 1000))}")
    if rng.random() < 0.2:
        words.append(f"https://t.co/{int(rng.integers(0, 10**6)):06d}")
    text = " ".join(words)
    if rng.random() < 0.5:
        text = text[:1].upper() + text[1:]
    if rng.random() < 0.4:
        text += str(rng.choice(["!", "!!", ".", "?", "..."]))
    return text


def generate_synthetic(n: int, seed: int, pools: WordPools | None = None,
                       start: date = date(2022, 3, 1), days: int = 60) -> Corpus:
    """Sample ``n`` unlabelled tweets from word pools.

    Each tweet is positive-only, negative-only, neutral (no sentiment words)
    or mixed, chosen among the modes the pools support. Timestamps fall on
    ``days`` consecutive days from ``start``. The output is a pure function
    of the arguments.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if pools is None:
        pools = default_pools()
    modes = _available_modes(pools)
    weights = np.array([_MODE_WEIGHTS[m] for m in modes])
    weights /= weights.sum()
    rng = np.random.default_rng(seed)
    base = datetime(start.year, start.month, start.day, tzinfo=timezone.utc)
    width = len(str(n - 1))
    records = []
    for i in range(n):
        mode = modes[int(rng.choice(len(modes), p=weights))]
        text = _synthetic_text(rng, pools, mode)
        offset = int(rng.integers(0, days * 86400))
        ts = datetime.fromtimestamp(base.timestamp() + offset, tz=timezone.utc)
        records.append(TweetRecord(f"s{i:0{width}d}", text, ts))
    return Corpus(tuple(records))
