"""Command-line front end.

    tweetsent synth     --n 2000 --seed 42 --out corpus.csv
    tweetsent label     --corpus corpus.csv --out labelled.csv
    tweetsent split     --corpus labelled.csv --seed 42 --out-train train.csv --out-test test.csv
    tweetsent train-nb  --train train.csv --model-out nb.json
    tweetsent train-nn  --train train.csv --seed 42 --model-out nn.json --tokenizer-out tok.json --trace-out trace.csv
    tweetsent evaluate  --model nb.json --test test.csv --report-out reports/
    tweetsent predict   --model nb.json --text "what a great day"
    tweetsent report    --corpus labelled.csv --out-dir figures/

Every subcommand also reads ``--config FILE`` (``key = value`` lines, keys
named like the long flags); flags given on the command line win.

Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import features, lexicon, metrics, naive_bayes, neural, report
from ._io import atomic_open, atomic_write_text
from .textprep import PipelineConfig, preprocess

log = logging.getLogger("tweetsent")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- helpers ---------------------------------------------------------------------


def _read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _pipeline_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        clean=not args.no_clean,
        lowercase=not args.no_lowercase,
        stopwords=not args.no_stopwords,
        stem=not args.no_stem,
        stopword_list=args.stopwords,
    )


def _pipeline_to_dict(cfg: PipelineConfig) -> dict:
    return {**cfg.flags(), "stoplist": sorted(cfg.stoplist)}


def _pipeline_from_dict(data: dict) -> PipelineConfig:
    flags = {k: bool(data[k]) for k in ("clean", "lowercase", "stopwords", "stem", "pos", "chunk")}
    return PipelineConfig(**flags, stoplist=frozenset(data["stoplist"]))


def _tokenizer_fingerprint(vocab: features.Vocabulary) -> str:
    canonical = json.dumps(features.tokenizer_to_dict(vocab), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _labelled(path: str) -> corpus_mod.Corpus:
    c = corpus_mod.load_csv(path)
    if len(c) == 0:
        raise UsageError(f"{path}: no usable rows")
    if any(label is None for label in c.labels):
        raise UsageError(f"{path}: every row needs a label (run `tweetsent label` first)")
    return c


def _lexicon(path: str | None) -> lexicon.AfinnLexicon:
    return lexicon.load_afinn(path) if path else lexicon.default_lexicon()


def _require_seed(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required")
    return int(args.seed)


def _load_bundle(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not a model file ({exc})") from None


class _Classifier:
    """A loaded model plus everything needed to turn raw text into a prediction."""

    def __init__(self, model_path: str, tokenizer_path: str | None):
        bundle = _load_bundle(model_path)
        kind = bundle.get("kind")
        self.pipeline = _pipeline_from_dict(bundle["pipeline"])
        if kind == "naive_bayes":
            self.kind = kind
            self.vocab = features.tokenizer_from_dict(bundle["tokenizer"])
            self.model = naive_bayes.model_from_dict(bundle)
            if tokenizer_path is not None:
                self._check_tokenizer(features.load_tokenizer(tokenizer_path), _tokenizer_fingerprint(self.vocab))
        elif kind == "neural":
            self.kind = kind
            if tokenizer_path is None:
                raise UsageError("neural models need --tokenizer")
            ref = bundle["tokenizer"]
            if ref.get("version") != features.TOKENIZER_VERSION:
                raise UsageError(
                    f"model was trained with tokenizer version {ref.get('version')!r}, "
                    f"this build reads version {features.TOKENIZER_VERSION}"
                )
            try:
                vocab = features.load_tokenizer(tokenizer_path)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            self._check_tokenizer(vocab, ref["sha256"])
            self.vocab = vocab
            self.max_len = int(bundle["max_len"])
            self.model = neural.model_from_dict(bundle)
        else:
            raise UsageError(f"{model_path}: unknown model kind {kind!r}")

    @staticmethod
    def _check_tokenizer(vocab, expected_sha):
        if _tokenizer_fingerprint(vocab) != expected_sha:
            raise UsageError("tokenizer does not match the one the model was trained with")

    def proba(self, texts: list[str]) -> np.ndarray:
        docs = [preprocess(t, self.pipeline) for t in texts]
        if self.kind == "naive_bayes":
            return naive_bayes.posterior_proba(features.doc_term_matrix(docs, self.vocab), self.model)
        ids, lengths = features.encode_batch(docs, self.vocab, self.max_len)
        return neural.forward_batch(self.model, ids, lengths)

    def predict(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros(0, dtype=np.int64)
        if self.kind == "naive_bayes":
            docs = [preprocess(t, self.pipeline) for t in texts]
            return naive_bayes.predict_many(features.doc_term_matrix(docs, self.vocab), self.model)
        return np.argmax(self.proba(texts), axis=1)


# -- subcommands -------------------------------------------------------------------


def cmd_synth(args):
    seed = _require_seed(args)
    pools = corpus_mod.load_pools(args.pools) if args.pools else corpus_mod.default_pools()
    c = corpus_mod.generate_synthetic(int(args.n), seed, pools)
    with atomic_open(args.out) as fh:
        corpus_mod.write_csv(c, fh)
    log.info("wrote %d synthetic tweets to %s", len(c), args.out)


def cmd_label(args):
    c = corpus_mod.load_csv(args.corpus)
    if not args.no_filter:
        c = corpus_mod.filter_relevant(c)
    lex = _lexicon(args.lexicon)
    eps = float(args.epsilon)
    records, polarity = [], []
    for rec in c:
        score = lexicon.score_text(rec.text, lex)
        label = lexicon.label_from_score(score, eps)
        records.append(corpus_mod.TweetRecord(rec.id, rec.text, rec.timestamp, label))
        polarity.append(repr(score.value))
    with atomic_open(args.out) as fh:
        corpus_mod.write_csv(corpus_mod.Corpus(tuple(records)), fh, extra={"polarity": polarity})
    log.info("labelled %d tweets", len(records))


def cmd_split(args):
    seed = _require_seed(args)
    c = corpus_mod.load_csv(args.corpus)
    cfg = corpus_mod.SplitConfig(float(args.fraction), seed, bool(args.stratified))
    train, test = corpus_mod.train_test_split(c, cfg)
    with atomic_open(args.out_train) as fh:
        corpus_mod.write_csv(train, fh)
    with atomic_open(args.out_test) as fh:
        corpus_mod.write_csv(test, fh)
    log.info("split %d tweets into %d train / %d test", len(c), len(train), len(test))


def cmd_train_nb(args):
    c = _labelled(args.train)
    pipeline = _pipeline_from_args(args)
    docs = [preprocess(r.text, pipeline) for r in c]
    vocab = features.build_vocabulary(docs, int(args.max_size), int(args.min_df))
    y = np.array([int(r.label) for r in c])
    model = naive_bayes.fit(features.doc_term_matrix(docs, vocab), y, float(args.alpha))
    bundle = naive_bayes.model_to_dict(model)
    bundle["pipeline"] = _pipeline_to_dict(pipeline)
    bundle["tokenizer"] = features.tokenizer_to_dict(vocab)
    atomic_write_text(args.model_out, json.dumps(bundle) + "\n")
    log.info("trained Naive Bayes on %d tweets, %d terms", len(c), len(vocab))


def cmd_train_nn(args):
    seed = _require_seed(args)
    c = _labelled(args.train)
    pipeline = _pipeline_from_args(args)
    docs = [preprocess(r.text, pipeline) for r in c]
    vocab = features.build_vocabulary(docs, int(args.max_size), int(args.min_df))
    max_len = int(args.max_len) if args.max_len else features.default_max_len(docs)
    ids, lengths = features.encode_batch(docs, vocab, max_len)
    y = np.array([int(r.label) for r in c])
    config = neural.TrainConfig(
        epochs=int(args.epochs),
        learning_rate=float(args.lr),
        batch_size=int(args.batch_size),
        seed=seed,
        validation_fraction=float(args.val_fraction),
    )
    model = neural.init_params(seed, vocab.n_ids, int(args.dim), int(args.hidden))
    model, trace = neural.train(model, (ids, lengths, y), config)

    bundle = neural.model_to_dict(model)
    bundle["max_len"] = max_len
    bundle["pipeline"] = _pipeline_to_dict(pipeline)
    bundle["tokenizer"] = {"version": features.TOKENIZER_VERSION, "sha256": _tokenizer_fingerprint(vocab)}
    bundle["train_config"] = {
        "epochs": config.epochs, "learning_rate": config.learning_rate,
        "batch_size": config.batch_size, "seed": config.seed,
        "validation_fraction": config.validation_fraction,
    }
    atomic_write_text(args.model_out, json.dumps(bundle) + "\n")
    features.save_tokenizer(vocab, args.tokenizer_out)
    if args.trace_out:
        atomic_write_text(args.trace_out, trace.to_csv())
    log.info("trained neural model: final train loss %.4f", trace.train_loss[-1] if len(trace) else float("nan"))


def cmd_evaluate(args):
    clf = _Classifier(args.model, args.tokenizer)
    c = _labelled(args.test)
    predicted = clf.predict(c.texts)
    matrix = metrics.confusion([int(r.label) for r in c], predicted, len(lexicon.SentimentLabel))
    rep = metrics.classification_report(matrix)
    text = rep.format()
    sys.stdout.write(text)
    if args.report_out:
        out = Path(args.report_out)
        out.mkdir(parents=True, exist_ok=True)
        atomic_write_text(out / "report.txt", text)
        atomic_write_text(out / "classes.csv", rep.to_csv())
        atomic_write_text(out / "confusion.csv", matrix.to_csv())


def cmd_predict(args):
    if (args.text is None) == (args.file is None):
        raise UsageError("give exactly one of --text or --file")
    if args.text is not None:
        texts = [args.text]
    else:
        texts = [line for line in Path(args.file).read_text(encoding="utf-8").splitlines() if line.strip()]
    clf = _Classifier(args.model, args.tokenizer)
    probs = clf.proba(texts)
    labels = clf.predict(texts)
    for label, p in zip(labels, probs):
        print(f"{lexicon.SentimentLabel(int(label))}\t{p[int(label)]:.4f}")


def cmd_report(args):
    c = corpus_mod.load_csv(args.corpus)
    if len(c) == 0:
        raise UsageError(f"{args.corpus}: no usable rows")
    lex = _lexicon(args.lexicon)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    scores = [lexicon.score_text(r.text, lex) for r in c]
    labels = [r.label if r.label is not None else lexicon.label_from_score(s) for r, s in zip(c, scores)]

    lengths = report.tweet_length_histogram(c, int(args.bin_width))
    atomic_write_text(out / "length_histogram.csv", lengths.to_csv())
    report.emit_chart(lengths, out / "length_histogram.svg")

    dist = report.score_distribution(scores, int(args.score_bins))
    atomic_write_text(out / "score_distribution.csv", dist.to_csv())
    report.emit_chart(dist, out / "score_distribution.svg")

    pipeline = PipelineConfig(stem=False)
    groups = {label: [] for label in lexicon.SentimentLabel}
    for rec, label in zip(c, labels):
        groups[label].append(preprocess(rec.text, pipeline))
    tables = report.wordcloud_frequencies(groups, int(args.top_k))
    atomic_write_text(out / "word_frequencies.csv", report.frequencies_csv(tables))
    for label, table in tables.items():
        if len(table):
            report.emit_chart(table, out / f"words_{label}.svg", title=f"Most frequent {label} words")

    atomic_write_text(out / "daily_sentiment.csv", report.daily_sentiment(c, scores).to_csv())
    log.info("wrote report files to %s", out)


# -- parser ------------------------------------------------------------------------


def _add_pipeline_flags(p):
    g = p.add_argument_group("preprocessing")
    g.add_argument("--no-clean", action="store_true", help="skip text cleaning")
    g.add_argument("--no-lowercase", action="store_true", help="skip case folding (implies --no-stem)")
    g.add_argument("--no-stopwords", action="store_true", help="keep stopwords")
    g.add_argument("--no-stem", action="store_true", help="skip Porter stemming")
    g.add_argument("--stopwords", metavar="FILE", help="stopword list (default: bundled English list)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tweetsent", description="Tweet sentiment pipeline.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", metavar="FILE", help="key = value defaults for this command")
        p.set_defaults(func=func)
        return p

    p = command("synth", cmd_synth, "generate a synthetic tweet corpus")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--pools", metavar="FILE", help="word-pool file (default: bundled pools)")
    p.add_argument("--out", required=True)

    p = command("label", cmd_label, "attach AFINN labels and polarity")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", metavar="FILE", help="AFINN file (default: bundled AFINN-111)")
    p.add_argument("--epsilon", type=float, default=0.0, help="neutral band half-width")
    p.add_argument("--no-filter", action="store_true", help="keep duplicates and empty tweets")
    p.add_argument("--out", required=True)

    p = command("split", cmd_split, "seeded train/test split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--fraction", type=float, default=0.8, help="train fraction")
    p.add_argument("--seed", type=int)
    p.add_argument("--stratified", action="store_true")
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)

    p = command("train-nb", cmd_train_nb, "train the Naive Bayes classifier")
    p.add_argument("--train", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-size", type=int, default=10_000)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--model-out", required=True)
    _add_pipeline_flags(p)

    p = command("train-nn", cmd_train_nn, "train the neural classifier")
    p.add_argument("--train", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--val-fraction", type=float, default=0.1)
    p.add_argument("--dim", type=int, default=32, help="embedding width")
    p.add_argument("--hidden", type=int, default=16, help="hidden layer width")
    p.add_argument("--max-len", type=int, help="sequence length (default: 95th percentile)")
    p.add_argument("--max-size", type=int, default=10_000)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--model-out", required=True)
    p.add_argument("--tokenizer-out", required=True)
    p.add_argument("--trace-out")
    _add_pipeline_flags(p)

    p = command("evaluate", cmd_evaluate, "score a model on labelled data")
    p.add_argument("--model", required=True)
    p.add_argument("--tokenizer")
    p.add_argument("--test", required=True)
    p.add_argument("--report-out", metavar="DIR")

    p = command("predict", cmd_predict, "label new text")
    p.add_argument("--model", required=True)
    p.add_argument("--tokenizer")
    p.add_argument("--text")
    p.add_argument("--file", help="one tweet per line")

    p = command("report", cmd_report, "descriptive figures and CSVs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", metavar="FILE")
    p.add_argument("--bin-width", type=int, default=20)
    p.add_argument("--score-bins", type=int, default=20)
    p.add_argument("--top-k", type=int, default=30)
    p.add_argument("--out-dir", required=True)
    parser.subcommands = sub.choices
    return parser


def _config_path(argv: list[str]) -> str | None:
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], path: str) -> None:
    """Turn config values into defaults of the chosen subcommand, so that
    command-line flags still override them."""
    values = _read_config(path)
    command = next((a for a in argv if a in parser.subcommands), None)
    if command is None:
        return
    subparser = parser.subcommands[command]
    known = {a.dest for a in subparser._actions}
    unknown = sorted(set(values) - known - {"config"})
    if unknown:
        raise UsageError(f"{path}: unknown keys {unknown}")
    for action in subparser._actions:
        if action.dest not in values:
            continue
        raw = values[action.dest]
        if isinstance(action, argparse._StoreTrueAction):
            action.default = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                action.default = action.type(raw) if action.type else raw
            except ValueError:
                raise UsageError(f"{path}: bad value for {action.dest}: {raw!r}") from None
        action.required = False


def _parse(argv):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    config = _config_path(argv)
    if config:
        _apply_config(parser, argv, config)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    try:
        args = _parse(argv)
    except UsageError as exc:
        print(f"tweetsent: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (UsageError, ValueError, FileNotFoundError, IsADirectoryError, KeyError) as exc:
        print(f"tweetsent: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"tweetsent: failed: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
