"""
Lexicon labels on a synthetic corpus
====================================

Score tweets with the bundled AFINN-111 word list and turn the polarity
into a three-way label. The corpus comes from the seeded generator, so
every run prints the same thing.
"""

from collections import Counter

from tweetsent import corpus, lexicon, report

lex = lexicon.default_lexicon()
print(f"AFINN-111: {len(lex)} entries, good={lex.get('good')}, terrible={lex.get('terrible')}")

# polarity = summed valence / (5 * matched words), so it lies in [-1, 1]
for text in ("What a great day, love it", "Terrible attack on the city", "Troops at the border"):
    s = lexicon.score_text(text, lex)
    print(f"  {s.value:+.3f} ({s.hits} hits)  {lexicon.label_from_score(s)}  {text!r}")

###############################################################################
# A seeded corpus. Word pools are drawn so positive and negative words come
# from the lexicon and neutral ones do not.

tweets = corpus.filter_relevant(corpus.generate_synthetic(500, seed=7))
for rec in list(tweets)[:4]:
    print(" ", rec.timestamp.date(), rec.text)

scores = [lexicon.score_text(r.text, lex) for r in tweets]
labels = Counter(str(lexicon.label_from_score(s)) for s in scores)
print("label counts:", dict(sorted(labels.items())))

# a wider neutral band moves weak scores out of the polar classes
banded = Counter(str(lexicon.label_from_score(s, epsilon=0.3)) for s in scores)
print("epsilon 0.3: ", dict(sorted(banded.items())))

hist = report.score_distribution(scores, n_bins=10)
for a, b, n in zip(hist.edges, hist.edges[1:], hist.counts):
    print(f"  [{a:+.1f}, {b:+.1f})  {'#' * (n // 5)} {n}")
