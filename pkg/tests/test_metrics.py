import random

import pytest

from oracles import oracle_rouge
from sumalign.lexalign import AlignConfig, align_lexical
from sumalign.metrics import QuadrantLabel, TooShort, classify_quadrant, novel_ngrams, rouge_n
from sumalign.textmodel import Span, tokenize

CONTENT_WORDS = ["zeph", "quill", "brox", "klim", "vant", "jorn"]


# ------------------------------------------------------------------ rouge


def test_rouge1_hand_example():
    triple = rouge_n(tokenize("the cat sat"), tokenize("the cat ran"), 1)
    assert triple.precision == pytest.approx(2 / 3, abs=1e-12)
    assert triple.recall == pytest.approx(2 / 3, abs=1e-12)
    assert triple.f1 == pytest.approx(2 / 3, abs=1e-12)


def test_rouge_identical_texts():
    text = tokenize("a b c d")
    for n in (1, 2, 3, 4):
        triple = rouge_n(text, text, n)
        assert (triple.precision, triple.recall, triple.f1) == (1.0, 1.0, 1.0)


def test_rouge2_hand_example():
    triple = rouge_n(tokenize("a b c"), tokenize("a b d"), 2)
    assert triple.precision == 0.5
    assert triple.recall == 0.5


def test_rouge_too_short():
    with pytest.raises(TooShort):
        rouge_n(tokenize("a"), tokenize("a b"), 2)
    with pytest.raises(TooShort):
        rouge_n(tokenize(""), tokenize("a"), 1)


def test_rouge_clipping_uses_multisets():
    # "b" appears twice in generated but once in reference: clipped to one hit.
    triple = rouge_n(tokenize("a b"), tokenize("b b"), 1)
    assert triple.precision == 0.5
    assert triple.recall == 0.5


def test_rouge_oracle_equivalence_small():
    rng = random.Random(4242)
    for _ in range(300):
        n = rng.randint(1, 3)
        ref = tokenize(" ".join(rng.choices(CONTENT_WORDS, k=rng.randint(n, 25))))
        gen = tokenize(" ".join(rng.choices(CONTENT_WORDS, k=rng.randint(n, 25))))
        triple = rouge_n(ref, gen, n)
        p, r, f1 = oracle_rouge(list(ref.norms()), list(gen.norms()), n)
        assert abs(triple.precision - p) <= 1e-12
        assert abs(triple.recall - r) <= 1e-12
        assert abs(triple.f1 - f1) <= 1e-12


# ------------------------------------------------------------------ quadrants


def test_quadrant_probes_in_order():
    taus = dict(tau_lex=0.5, tau_sem=0.5)
    assert classify_quadrant(0.9, 0.9, **taus) == QuadrantLabel.EXTRACTION
    assert classify_quadrant(0.1, 0.9, **taus) == QuadrantLabel.ABSTRACTION
    assert classify_quadrant(0.1, 0.1, **taus) == QuadrantLabel.HALLUCINATION
    assert classify_quadrant(0.9, 0.1, **taus) == QuadrantLabel.MISINTERPRETATION


def test_quadrant_boundary_counts_as_high():
    assert classify_quadrant(0.5, 0.5, 0.5, 0.5) == QuadrantLabel.EXTRACTION


def test_quadrant_monotone_rescaling_invariance():
    rng = random.Random(88)
    transforms = [lambda x: 2.0 * x + 0.25, lambda x: x * x * x, lambda x: 0.5 * x - 0.125]
    for _ in range(300):
        lex = round(rng.uniform(0, 1), 3)
        sem = round(rng.uniform(-1, 1), 3)
        tau_lex = round(rng.uniform(0, 1), 3)
        tau_sem = round(rng.uniform(-1, 1), 3)
        base = classify_quadrant(lex, sem, tau_lex, tau_sem)
        f = rng.choice(transforms)
        assert classify_quadrant(f(lex), f(sem), f(tau_lex), f(tau_sem)) == base


# ------------------------------------------------------------------ novel content


def test_inserted_name_tokens_flagged():
    source = tokenize("a columnist reflects on the coast")
    summary = tokenize("David Wheeler reflects.")
    report = novel_ngrams(source, summary, 1, content_only=True)
    assert report.token_set() == {"david", "wheeler"}
    assert [ng.spans for ng in report.ngrams] == [(Span(0, 1),), (Span(1, 2),)]


def test_identical_texts_nothing_novel():
    text = tokenize("one two three")
    for n in (1, 2, 3):
        assert novel_ngrams(text, text, n).ngrams == ()


def test_stopword_only_ngrams_dropped():
    report = novel_ngrams(tokenize("brox"), tokenize("the of"), 1, content_only=True)
    assert report.ngrams == ()
    kept = novel_ngrams(tokenize("brox"), tokenize("the of"), 1, content_only=False)
    assert kept.token_set() == {"the", "of"}


def test_novel_bigrams_with_all_occurrences():
    source = tokenize("zeph quill brox")
    summary = tokenize("quill vant quill vant")
    report = novel_ngrams(source, summary, 2)
    grams = {ng.tokens: ng.spans for ng in report.ngrams}
    assert grams == {
        ("quill", "vant"): (Span(0, 2), Span(2, 4)),
        ("vant", "quill"): (Span(1, 3),),
    }


def test_short_summary_empty_report():
    assert novel_ngrams(tokenize("a b c"), tokenize("a"), 3).ngrams == ()


def test_self_novelty_empty_random():
    rng = random.Random(5)
    for _ in range(50):
        text = tokenize(" ".join(rng.choices(CONTENT_WORDS, k=rng.randint(1, 20))))
        for n in (1, 2, 3):
            assert novel_ngrams(text, text, n).ngrams == ()


def test_no_novel_unigrams_implies_full_coverage():
    rng = random.Random(31)
    stop_and_content = CONTENT_WORDS + ["the", "of"]
    for _ in range(100):
        source = tokenize(" ".join(rng.choices(stop_and_content, k=rng.randint(3, 25))))
        summary = tokenize(" ".join(rng.choices([t.norm for t in source.tokens], k=rng.randint(1, 12))))
        if not summary.content_indices():
            continue
        assert novel_ngrams(source, summary, 1).ngrams == ()
        alignment = align_lexical(source, summary, AlignConfig(min_n=1))
        assert alignment.coverage == 1.0


def test_invalid_n_rejected():
    with pytest.raises(ValueError):
        novel_ngrams(tokenize("a"), tokenize("a"), 0)
    with pytest.raises(ValueError):
        rouge_n(tokenize("a"), tokenize("a"), 0)
