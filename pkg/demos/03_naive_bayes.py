"""
Naive Bayes on bag-of-words counts
==================================

Label 2,000 synthetic tweets with the lexicon, split 80/20, fit a
Laplace-smoothed multinomial Naive Bayes model and print the
classification report.
"""

import numpy as np

from tweetsent import corpus, features, lexicon, metrics, naive_bayes
from tweetsent.textprep import PipelineConfig, preprocess

lex = lexicon.default_lexicon()
raw = corpus.filter_relevant(corpus.generate_synthetic(2000, seed=42))
labelled = corpus.Corpus(tuple(
    corpus.TweetRecord(r.id, r.text, r.timestamp, lexicon.label_from_score(lexicon.score_text(r.text, lex)))
    for r in raw
))
train, test = corpus.train_test_split(labelled, corpus.SplitConfig(0.8, seed=42))
print(f"{len(train)} train / {len(test)} test")

cfg = PipelineConfig()
train_docs = [preprocess(r.text, cfg) for r in train]
test_docs = [preprocess(r.text, cfg) for r in test]

vocab = features.build_vocabulary(train_docs)
X_train = features.doc_term_matrix(train_docs, vocab)
print(f"vocabulary {len(vocab)} terms, top five {vocab.tokens[:5]}")

model = naive_bayes.fit(X_train, [int(r.label) for r in train], alpha=1.0)
predicted = naive_bayes.predict_many(features.doc_term_matrix(test_docs, vocab), model)

matrix = metrics.confusion([int(r.label) for r in test], predicted)
print(matrix.to_csv())
print(metrics.classification_report(matrix).format())

###############################################################################
# Which words pull hardest toward each class: the log-likelihood ratio
# against the mean of the other classes.

ll = model.token_log_likelihood
for c, label in enumerate(model.classes):
    others = np.delete(ll, c, axis=0).mean(axis=0)
    top = np.argsort(-(ll[c] - others))[:6]
    print(f"{label:>9}: {', '.join(vocab.tokens[i] for i in top)}")
