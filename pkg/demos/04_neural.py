"""
A small neural classifier
=========================

Encode tweets as padded id sequences, train the embedding / mean-pool /
relu / softmax network with mini-batch gradient descent, and check the
saved tokenizer reproduces the encoding.

Labels come from the lexicon, which is a deterministic function of the
words, so near-perfect test accuracy says the network learned the lexicon
rule, not that it generalizes to human judgements.
"""

import tempfile
from pathlib import Path

from tweetsent import corpus, features, lexicon, neural
from tweetsent.textprep import PipelineConfig, preprocess

lex = lexicon.default_lexicon()
raw = corpus.generate_synthetic(2000, seed=42)
labels = [int(lexicon.label_from_score(lexicon.score_text(r.text, lex))) for r in raw]
labelled = corpus.Corpus(tuple(
    corpus.TweetRecord(r.id, r.text, r.timestamp, lexicon.SentimentLabel(y)) for r, y in zip(raw, labels)
))
train, test = corpus.train_test_split(labelled, corpus.SplitConfig(0.8, seed=42))

cfg = PipelineConfig()
train_docs = [preprocess(r.text, cfg) for r in train]
test_docs = [preprocess(r.text, cfg) for r in test]
vocab = features.build_vocabulary(train_docs)
max_len = features.default_max_len(train_docs)
print(f"{vocab.n_ids} ids (PAD=0, OOV=1), sequences padded to {max_len}")

ids, lengths = features.encode_batch(train_docs, vocab, max_len)
print("first sequence:", ids[0].tolist(), "length", int(lengths[0]))

model = neural.init_params(seed=42, vocab_size=vocab.n_ids)
model, trace = neural.train(model, (ids, lengths, [int(r.label) for r in train]), neural.TrainConfig(seed=42))
print(trace.to_csv())

test_ids, test_lengths = features.encode_batch(test_docs, vocab, max_len)
print(f"test accuracy {neural.evaluate(model, test_ids, test_lengths, [int(r.label) for r in test]):.4f}")

###############################################################################
# The tokenizer is saved as JSON; reloading it gives the same encoding.

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "tokenizer.json"
    features.save_tokenizer(vocab, path)
    reloaded = features.load_tokenizer(path)
    again, _ = features.encode_batch(test_docs, reloaded, max_len)
    print("encoding preserved:", (again == test_ids).all())

for text in ("so grateful for the peace talks", "panic and fear after the attack", "minister at the summit"):
    seq = features.encode_sequence(preprocess(text, cfg), vocab, max_len)
    probs = neural.forward(model, seq)
    print(f"  {lexicon.SentimentLabel(int(probs.argmax()))!s:>9} {probs.round(3)}  {text!r}")
