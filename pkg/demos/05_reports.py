"""
Descriptive reports and charts
==============================

Length histogram, polarity distribution, per-label word frequencies and a
daily sentiment series, written as CSV and static SVG bar charts.
Pass a directory to keep the files; otherwise they go to a temp dir.
"""

import sys
import tempfile
from pathlib import Path

from tweetsent import corpus, lexicon, report
from tweetsent.textprep import PipelineConfig, preprocess

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="tweetsent-report-"))
out.mkdir(parents=True, exist_ok=True)

tweets = corpus.filter_relevant(corpus.generate_synthetic(1000, seed=3))
lex = lexicon.default_lexicon()
scores = [lexicon.score_text(r.text, lex) for r in tweets]

lengths = report.tweet_length_histogram(tweets, bin_width=20)
print(lengths.to_csv())
report.emit_chart(lengths, out / "length_histogram.svg")

dist = report.score_distribution(scores, n_bins=20)
report.emit_chart(dist, out / "score_distribution.svg")

###############################################################################
# Word clouds are shown as ranked frequency tables, counted over surface
# forms after stopword removal.

cfg = PipelineConfig(stem=False)
groups = {label: [] for label in lexicon.SentimentLabel}
for rec, s in zip(tweets, scores):
    groups[lexicon.label_from_score(s)].append(preprocess(rec.text, cfg))
tables = report.wordcloud_frequencies(groups, top_k=10)
for label, table in tables.items():
    print(f"{label:>9}:", ", ".join(f"{t} {n}" for t, n in table.entries[:6]))
    report.emit_chart(table, out / f"words_{label}.svg", title=f"Most frequent {label} words")

series = report.daily_sentiment(tweets, scores)
for day, mean, n in series.points[:5]:
    print(f"  {day}  {mean:+.3f}  ({n} tweets)")

print("wrote", sorted(p.name for p in out.iterdir()), "to", out)
