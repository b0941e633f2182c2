"""Descriptive statistics for a corpus and their CSV / SVG renderings:
tweet-length histogram, per-label word frequencies, polarity-score
histogram and a daily mean-sentiment series."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

from ._io import atomic_write_text
from .corpus import Corpus
from .lexicon import PolarityScore, SentimentLabel
from .textprep import TokenizedDocument

__all__ = [
    "Histogram",
    "FrequencyTable",
    "DailySentiment",
    "tweet_length_histogram",
    "wordcloud_frequencies",
    "score_distribution",
    "daily_sentiment",
    "render_bar_chart",
    "emit_chart",
    "frequencies_csv",
    "SVG_WIDTH",
    "SVG_HEIGHT",
]

SVG_WIDTH = 800
SVG_HEIGHT = 400


@dataclass(frozen=True)
class Histogram:
    """Bins ``[e0, e1), [e1, e2), ..., [e_{n-1}, e_n]``; the last one is closed."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]
    title: str = ""
    xlabel: str = ""
    ylabel: str = "tweets"

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.edges) != len(self.counts) + 1:
            raise ValueError("need exactly one more edge than counts")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("edges must be strictly ascending")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bin_start", "bin_end", "count"])
        for a, b, c in zip(self.edges, self.edges[1:], self.counts):
            writer.writerow([_num(a), _num(b), c])
        return buf.getvalue()


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple[tuple[str, int], ...]
    top_k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((t, int(c)) for t, c in self.entries))
        if any(c <= 0 for _, c in self.entries):
            raise ValueError("frequency counts must be positive")
        if list(self.entries) != sorted(self.entries, key=lambda e: (-e[1], e[0])):
            raise ValueError("entries must be sorted by count desc, token asc")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DailySentiment:
    points: tuple[tuple[date, float, int], ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["date", "mean_polarity", "count"])
        for day, mean, count in self.points:
            writer.writerow([day.isoformat(), repr(mean), count])
        return buf.getvalue()


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _bin_counts(values: np.ndarray, edges: np.ndarray) -> list[int]:
    n_bins = len(edges) - 1
    idx = np.searchsorted(edges, values, side="right") - 1
    idx = np.clip(idx, 0, n_bins - 1)  # the top edge belongs to the last bin
    return np.bincount(idx, minlength=n_bins).tolist()


def tweet_length_histogram(corpus: Corpus, bin_width: int = 20, unit: str = "chars") -> Histogram:
    """Histogram of raw tweet lengths in characters (``unit="tokens"`` counts
    whitespace tokens instead). Bins start at 0 and are ``bin_width`` wide."""
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if unit == "chars":
        lengths = np.array([len(r.text) for r in corpus])
    elif unit == "tokens":
        lengths = np.array([len(r.text.split()) for r in corpus])
    else:
        raise ValueError(f"unknown length unit {unit!r}")
    n_bins = max(1, math.ceil(lengths.max() / bin_width))
    edges = np.arange(n_bins + 1) * bin_width
    return Histogram(tuple(edges), tuple(_bin_counts(lengths, edges)),
                     title="Tweet length distribution", xlabel=f"length ({unit})")


def wordcloud_frequencies(groups: Mapping[SentimentLabel, Iterable], top_k: int | None = 50) -> dict[SentimentLabel, FrequencyTable]:
    """Top-``top_k`` token counts per label. Documents may be
    :class:`TokenizedDocument` (surface forms are counted) or token lists.
    ``top_k=None`` keeps every token."""
    if top_k is not None and top_k < 1:
        raise ValueError("top_k must be >= 1")
    tables = {}
    for label, docs in groups.items():
        counter: Counter[str] = Counter()
        for doc in docs:
            counter.update(doc.surfaces if isinstance(doc, TokenizedDocument) else doc)
        entries = sorted(counter.items(), key=lambda e: (-e[1], e[0]))
        if top_k is not None:
            entries = entries[:top_k]
        tables[label] = FrequencyTable(tuple(entries), top_k)
    return tables


def frequencies_csv(tables: Mapping[SentimentLabel, FrequencyTable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "token", "count"])
    for label in sorted(tables):
        for token, count in tables[label].entries:
            writer.writerow([str(label), token, count])
    return buf.getvalue()


def score_distribution(scores: Sequence[PolarityScore | float], n_bins: int = 20) -> Histogram:
    """Histogram of polarity values over ``n_bins`` equal bins on [-1, 1]."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    values = np.array([s.value if isinstance(s, PolarityScore) else float(s) for s in scores], dtype=np.float64)
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    counts = _bin_counts(values, edges) if values.size else [0] * n_bins
    return Histogram(tuple(edges), tuple(counts), title="AFINN polarity distribution", xlabel="polarity")


def daily_sentiment(corpus: Corpus, scores: Sequence[PolarityScore | float]) -> DailySentiment:
    """Mean polarity per UTC calendar day; undated records are left out."""
    if len(scores) != len(corpus):
        raise ValueError("scores must align with corpus records")
    by_day: dict[date, list[float]] = defaultdict(list)
    for rec, s in zip(corpus, scores):
        if rec.timestamp is None:
            continue
        by_day[rec.timestamp.date()].append(s.value if isinstance(s, PolarityScore) else float(s))
    points = tuple(
        (day, min(1.0, max(-1.0, math.fsum(vals) / len(vals))), len(vals))
        for day, vals in sorted(by_day.items())
    )
    return DailySentiment(points)


# -- SVG ------------------------------------------------------------------------
# Fixed 800x400 canvas. Bars are <rect class="bar">, one per bin or token,
# left to right; the title and axis labels are <text> elements. Coordinates
# are written with two decimals so output bytes depend only on the input.

_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 60, 20, 40, 70


def _f(x: float) -> str:
    return f"{x:.2f}"


def render_bar_chart(labels: Sequence[str], values: Sequence[float], title: str = "",
                     xlabel: str = "", ylabel: str = "") -> str:
    if not values:
        raise ValueError("nothing to chart")
    plot_w = SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    vmax = max(max(values), 1)
    slot = plot_w / len(values)
    bar_w = max(slot * 0.8, 0.5)
    base_y = _MARGIN_TOP + plot_h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<line x1="{_MARGIN_LEFT}" y1="{base_y}" x2="{SVG_WIDTH - _MARGIN_RIGHT}" y2="{base_y}" stroke="black"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" y2="{base_y}" stroke="black"/>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{_MARGIN_TOP + 4}" text-anchor="end" font-size="10">{_num(vmax)}</text>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{base_y}" text-anchor="end" font-size="10">0</text>',
    ]
    # label every bar when few, otherwise about 10 evenly spaced ticks
    step = 1 if len(values) <= 20 else math.ceil(len(values) / 10)
    for i, (label, value) in enumerate(zip(labels, values)):
        h = plot_h * value / vmax
        x = _MARGIN_LEFT + i * slot + (slot - bar_w) / 2
        out.append(
            f'<rect class="bar" x="{_f(x)}" y="{_f(base_y - h)}" width="{_f(bar_w)}" '
            f'height="{_f(h)}" fill="#4878a8"><title>{escape(str(label))}: {_num(value)}</title></rect>'
        )
        if i % step == 0:
            cx = _MARGIN_LEFT + (i + 0.5) * slot
            out.append(
                f'<text x="{_f(cx)}" y="{base_y + 14}" text-anchor="end" font-size="10" '
                f'transform="rotate(-45 {_f(cx)} {base_y + 14})">{escape(str(label))}</text>'
            )
    out.append(f'<text x="{SVG_WIDTH / 2:.0f}" y="{SVG_HEIGHT - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(
        f'<text x="14" y="{_MARGIN_TOP + plot_h / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {_MARGIN_TOP + plot_h / 2:.0f})">{escape(ylabel)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _chart_svg(data, title: str | None) -> str:
    if isinstance(data, Histogram):
        labels = [f"{_num(round(a, 6))}" for a in data.edges[:-1]]
        return render_bar_chart(labels, list(data.counts), title if title is not None else data.title,
                                data.xlabel, data.ylabel)
    if isinstance(data, FrequencyTable):
        if not data.entries:
            raise ValueError("nothing to chart")
        tokens, counts = zip(*data.entries)
        return render_bar_chart(tokens, counts, title or "", "token", "count")
    raise TypeError(f"cannot chart {type(data).__name__}")


def emit_chart(data: Histogram | FrequencyTable, path: str | Path, title: str | None = None) -> None:
    """Write ``data`` as a self-contained SVG bar chart."""
    atomic_write_text(path, _chart_svg(data, title))
