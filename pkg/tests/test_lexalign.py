import dataclasses
import random
import time

import pytest

from oracles import oracle_maximal_matches
from sumalign.lexalign import (
    AlignConfig,
    MismatchedNormalization,
    NoContentTokens,
    align_lexical,
    build_ngram_index,
    coverage_fraction,
)
from sumalign.textmodel import Span, tokenize

# Alphabet of content words only: none are stopwords, so the default
# drop_stopword_only filter stays inert for oracle comparisons.
CONTENT_ALPHABET = ["zeph", "quill", "brox", "klim", "vant", "jorn", "wex", "pyre"]
MIXED_ALPHABET = CONTENT_ALPHABET[:5] + ["the", "of", "and"]


def spans(matches):
    return [
        (m.summary_span.start_token, m.summary_span.end_token, [(s.start_token, s.end_token) for s in m.source_spans])
        for m in matches
    ]


def filtered_oracle(source, summary, cfg):
    out = []
    for s, e, occs in oracle_maximal_matches(list(source.norms()), list(summary.norms())):
        if e - s < cfg.min_n:
            continue
        if cfg.drop_stopword_only and all(
            t.is_stop or t.is_punct for t in summary.tokens[s:e]
        ):
            continue
        out.append((s, e, occs))
    return out


def test_index_contains_all_ngrams_up_to_max():
    index = build_ngram_index(tokenize("a b a"), 2)
    as_pairs = {k: [(s.start_token, s.end_token) for s in v] for k, v in index.items()}
    assert as_pairs == {
        "a": [(0, 1), (2, 3)],
        "b": [(1, 2)],
        "a b": [(0, 2)],
        "b a": [(1, 3)],
    }


def test_index_empty_source():
    assert build_ngram_index(tokenize(""), 3) == {}


def test_index_n_capped_by_length():
    index = build_ngram_index(tokenize("x"), 5)
    assert list(index) == ["x"]


def test_index_requires_positive_max_n():
    with pytest.raises(ValueError):
        build_ngram_index(tokenize("a"), 0)


def test_quick_brown_fox():
    source = tokenize("the quick brown fox jumps over")
    summary = tokenize("quick brown fox leaps")
    alignment = align_lexical(source, summary)
    assert spans(alignment.matches) == [(0, 3, [(1, 4)])]
    assert alignment.matches[0].length == 3
    assert alignment.coverage == pytest.approx(0.75)
    assert coverage_fraction(alignment, summary) == pytest.approx(0.75)


def test_self_alignment_single_full_match():
    text = tokenize("one crisp morning light")
    alignment = align_lexical(text, text)
    assert spans(alignment.matches) == [(0, 4, [(0, 4)])]
    assert alignment.coverage == 1.0


def test_disjoint_vocabulary():
    alignment = align_lexical(tokenize("alpha beta"), tokenize("gamma delta"))
    assert alignment.matches == ()
    assert alignment.coverage == 0.0


def test_overlapping_maximal_matches_both_reported():
    source = tokenize("zeph quill vant quill brox")
    summary = tokenize("zeph quill brox")
    alignment = align_lexical(source, summary)
    assert spans(alignment.matches) == [(0, 2, [(0, 2)]), (1, 3, [(3, 5)])]


def test_all_source_occurrences_listed_sorted():
    source = tokenize("wex pyre wex pyre")
    summary = tokenize("wex pyre")
    alignment = align_lexical(source, summary)
    assert spans(alignment.matches) == [(0, 2, [(0, 2), (2, 4)])]


def test_min_n_filters_short_matches():
    source = tokenize("zeph quill brox")
    summary = tokenize("zeph vant quill brox")
    cfg = AlignConfig(min_n=2)
    alignment = align_lexical(source, summary, cfg)
    assert spans(alignment.matches) == [(2, 4, [(1, 3)])]


def test_stopword_only_matches_dropped_by_default():
    source = tokenize("the quick fox")
    summary = tokenize("the fox")
    assert spans(align_lexical(source, summary).matches) == [(1, 2, [(2, 3)])]
    kept = align_lexical(source, summary, AlignConfig(drop_stopword_only=False))
    assert spans(kept.matches) == [(0, 1, [(0, 1)]), (1, 2, [(2, 3)])]


def test_mismatched_normalizer_rejected():
    source = tokenize("a b")
    summary = dataclasses.replace(tokenize("a"), normalizer="legacy")
    with pytest.raises(MismatchedNormalization):
        align_lexical(source, summary)


def test_coverage_requires_content_tokens():
    source = tokenize("the of")
    summary = tokenize("the of")
    alignment = align_lexical(source, summary)
    assert alignment.coverage == 0.0
    with pytest.raises(NoContentTokens):
        coverage_fraction(alignment, summary)


def test_empty_summary_no_matches():
    alignment = align_lexical(tokenize("a b c"), tokenize(""))
    assert alignment.matches == ()
    assert alignment.coverage == 0.0


@pytest.mark.parametrize("alphabet", [CONTENT_ALPHABET, MIXED_ALPHABET])
def test_oracle_equivalence_randomized(alphabet):
    rng = random.Random(20240811)
    cfg = AlignConfig()
    for _ in range(200):
        source = tokenize(" ".join(rng.choices(alphabet, k=rng.randint(0, 30))))
        summary = tokenize(" ".join(rng.choices(alphabet, k=rng.randint(0, 20))))
        assert spans(align_lexical(source, summary, cfg).matches) == filtered_oracle(source, summary, cfg)


def test_min_n_monotonicity():
    rng = random.Random(7)
    for _ in range(50):
        source = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=rng.randint(1, 25))))
        summary = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=rng.randint(1, 15))))
        previous = None
        for min_n in (1, 2, 3):
            got = {m.summary_span for m in align_lexical(source, summary, AlignConfig(min_n=min_n)).matches}
            if previous is not None:
                assert got <= previous
            previous = got


def test_every_match_occurs_in_both_texts():
    rng = random.Random(99)
    for _ in range(50):
        source = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=rng.randint(1, 30))))
        summary = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=rng.randint(1, 15))))
        src_norms, sum_norms = source.norms(), summary.norms()
        for match in align_lexical(source, summary).matches:
            span = match.summary_span
            seq = sum_norms[span.start_token : span.end_token]
            assert match.length == len(seq)
            for occ in match.source_spans:
                assert src_norms[occ.start_token : occ.end_token] == seq


def test_large_input_performance_smoke():
    rng = random.Random(5)
    source = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=10_000)))
    summary = tokenize(" ".join(rng.choices(CONTENT_ALPHABET, k=200)))
    start = time.perf_counter()
    alignment = align_lexical(source, summary)
    elapsed = time.perf_counter() - start
    assert alignment.matches
    # Generous CI bound; the design target is far lower on commodity hardware.
    assert elapsed < 1.0, f"alignment took {elapsed:.3f}s"


def test_coverage_span_type():
    source = tokenize("alpha beta gamma")
    summary = tokenize("beta gamma")
    alignment = align_lexical(source, summary)
    assert alignment.matches[0].summary_span == Span(0, 2)
