"""
Preprocessing a tweet
=====================

Walk one tweet through the text chain: cleaning, case folding,
tokenizing, stopword removal, Porter stemming, then the optional
part-of-speech tags and noun-phrase chunks.
"""

from tweetsent import textprep
from tweetsent.porter import stem

raw = "@newsdesk Peace talks RESUMED today!!! The quick ceasefire is holding https://t.co/xyz #peace"

# cleaning drops markup, links, mentions, digits and punctuation
cleaned = textprep.clean_text(raw)
print("cleaned:  ", cleaned)

tokens = textprep.tokenize(textprep.lowercase(cleaned))
print("tokens:   ", tokens)

content = textprep.remove_stopwords(tokens, textprep.default_stopwords())
print("content:  ", content)
print("stems:    ", [stem(t) for t in content])

# Porter is suffix stripping, not lemmatization
for word in ("relational", "generalizations", "hopping", "ponies", "playing"):
    print(f"  {word:>16} -> {stem(word)}")

###############################################################################
# The same chain in one call. Tags are heuristic (closed-class list plus
# suffix rules) and only feed reporting; chunks are DET? ADJ* NOUN+ spans.

cfg = textprep.PipelineConfig.all_stages()
doc = textprep.preprocess(raw, cfg, source_id="t1")
for tok in doc.tokens:
    print(f"  {tok.surface:>10}  {tok.stem:>10}  {tok.pos}")
print("noun phrases:", [" ".join(doc.surfaces[a:b]) for a, b in doc.chunks])

# keep the stopwords to see determiners join their nouns. Auxiliaries are
# not in the closed-class list, so "is" falls through to NOUN and gets
# pulled into the first phrase.
keep = textprep.PipelineConfig(stopwords=False, pos=True, chunk=True)
doc = textprep.preprocess("The quick ceasefire is holding in the capital", keep)
print("with stopwords:", [" ".join(doc.surfaces[a:b]) for a, b in doc.chunks])
