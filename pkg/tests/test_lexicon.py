import pytest
from hypothesis import given
from hypothesis import strategies as st

from tweetsent.lexicon import (
    AfinnLexicon,
    PolarityScore,
    SentimentLabel,
    default_lexicon,
    label_from_score,
    load_afinn,
    parse_afinn,
    score_document,
    score_text,
)

LEX = default_lexicon()
WORDS = sorted(LEX.entries)


def test_bundled_afinn_111():
    assert len(LEX) == 2477
    assert LEX.get("good") == 3
    assert LEX.get("abandon") == -2
    assert LEX.get("bad") == -3
    assert all(-5 <= v <= 5 for v in LEX.entries.values())


def test_load_afinn_file(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("good\t3\nabandon\t-2\n", encoding="utf-8")
    assert load_afinn(path).entries == {"good": 3, "abandon": -2}


@pytest.mark.parametrize(
    "text, lineno",
    [("good\t3\nbad\tx\n", 2), ("good 3\n", 1), ("good\t6\n", 1), ("good\t3\ngood\t2\n", 2), ("Good\t3\n", 1)],
)
def test_load_afinn_errors_name_the_line(text, lineno):
    with pytest.raises(ValueError, match=f"line {lineno}"):
        parse_afinn(text)


def test_load_afinn_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_afinn(tmp_path / "nope.txt")


def test_score_examples():
    assert score_document(["good"], LEX) == PolarityScore(0.6, 1)
    assert score_document([], LEX) == PolarityScore(0.0, 0)
    assert score_document(["good", "bad"], LEX) == PolarityScore(0.0, 2)


def test_score_uses_surface_forms():
    # "killed" is an entry, its stem "kill" also is; an unknown inflection is not
    assert score_document(["killed"], LEX).hits == 1
    assert score_document(["goods"], LEX).hits == 0


def test_score_text_cleans_first():
    s = score_text("@user GOOD news!!! http://x.y", LEX)
    assert s == PolarityScore(0.6, 1)


def test_label_examples():
    assert label_from_score(PolarityScore(0.6, 1)) is SentimentLabel.POSITIVE
    assert label_from_score(PolarityScore(0.0, 0)) is SentimentLabel.NEUTRAL
    assert label_from_score(-0.05, epsilon=0.1) is SentimentLabel.NEUTRAL
    assert label_from_score(-0.2, epsilon=0.1) is SentimentLabel.NEGATIVE
    with pytest.raises(ValueError):
        label_from_score(0.5, epsilon=-0.1)


def test_label_order_and_parsing():
    assert [int(x) for x in SentimentLabel] == [0, 1, 2]
    assert SentimentLabel.parse(" Positive ") is SentimentLabel.POSITIVE
    assert str(SentimentLabel.NEGATIVE) == "negative"
    with pytest.raises(ValueError):
        SentimentLabel.parse("happy")


tokens = st.lists(st.one_of(st.sampled_from(WORDS), st.sampled_from(["zzz", "war", "troops"])), max_size=30)


@given(tokens)
def test_scale_bound(doc):
    s = score_document(doc, LEX)
    assert -1 <= s.value <= 1
    if s.hits == 0:
        assert s.value == 0


@given(tokens)
def test_antisymmetry(doc):
    flipped = AfinnLexicon({w: -v for w, v in LEX.entries.items()})
    assert score_document(doc, flipped).value == -score_document(doc, LEX).value


@given(tokens, st.sampled_from([w for w in WORDS if LEX.get(w) > 0]))
def test_appending_positive_word_never_lowers_raw_sum(doc, word):
    def raw(d):
        return sum(LEX.get(t, 0) for t in d)

    before = score_document(doc, LEX)
    after = score_document(doc + [word], LEX)
    assert raw(doc + [word]) > raw(doc)
    assert after.hits == before.hits + 1


@given(tokens)
def test_labels_total_and_deterministic(doc):
    a = label_from_score(score_document(doc, LEX))
    b = label_from_score(score_document(doc, LEX))
    assert a is b and a in SentimentLabel
