"""Overlap metrics and the four-quadrant behavior classifier.

The quadrant labels split summary behavior along a lexical axis (shared-span
coverage) and a semantic axis (greedy embedding-match score).
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .textmodel import Span, TokenizedText

DEFAULT_TAU_LEX = 0.5
DEFAULT_TAU_SEM = 0.5


class TooShort(ValueError):
    """A text has fewer tokens than the requested n-gram order."""


@dataclass(frozen=True)
class RougeTriple:
    precision: float
    recall: float
    f1: float
    n: int


class QuadrantLabel(str, enum.Enum):
    EXTRACTION = "extraction"
    ABSTRACTION = "abstraction"
    HALLUCINATION = "hallucination"
    MISINTERPRETATION = "misinterpretation"


@dataclass(frozen=True)
class NovelNGram:
    tokens: tuple[str, ...]
    spans: tuple[Span, ...]


@dataclass(frozen=True)
class NovelContentReport:
    """Summary n-grams with zero source occurrences under normalization."""

    n: int
    content_only: bool
    ngrams: tuple[NovelNGram, ...]

    def token_set(self) -> set[str]:
        return {tok for ng in self.ngrams for tok in ng.tokens}


def _ngram_counts(norms: tuple[str, ...], n: int) -> Counter:
    return Counter(norms[i : i + n] for i in range(len(norms) - n + 1))


def rouge_n(reference: TokenizedText, generated: TokenizedText, n: int) -> RougeTriple:
    """Clipped n-gram overlap over normalized tokens, without stemming or stopword removal."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(reference) < n or len(generated) < n:
        raise TooShort(f"need at least {n} tokens, got {len(reference)} reference / {len(generated)} generated")
    ref_counts = _ngram_counts(reference.norms(), n)
    gen_counts = _ngram_counts(generated.norms(), n)
    clipped = sum(min(count, ref_counts[gram]) for gram, count in gen_counts.items())
    precision = clipped / sum(gen_counts.values())
    recall = clipped / sum(ref_counts.values())
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return RougeTriple(precision=precision, recall=recall, f1=f1, n=n)


def classify_quadrant(
    lexical_score: float,
    semantic_score: float,
    tau_lex: float = DEFAULT_TAU_LEX,
    tau_sem: float = DEFAULT_TAU_SEM,
) -> QuadrantLabel:
    """Threshold the two scores into a behavior quadrant; boundaries count as high."""
    high_lex = lexical_score >= tau_lex
    high_sem = semantic_score >= tau_sem
    if high_lex and high_sem:
        return QuadrantLabel.EXTRACTION
    if high_sem:
        return QuadrantLabel.ABSTRACTION
    if high_lex:
        return QuadrantLabel.MISINTERPRETATION
    return QuadrantLabel.HALLUCINATION


def novel_ngrams(
    source: TokenizedText, summary: TokenizedText, n: int, content_only: bool = True
) -> NovelContentReport:
    """Summary n-grams absent from the source, with every summary occurrence.

    With ``content_only``, n-grams made up entirely of stopwords and punctuation
    are dropped.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    source_grams = set(_ngram_counts(source.norms(), n))
    sum_norms = summary.norms()
    occurrences: dict[tuple[str, ...], list[Span]] = {}
    order: list[tuple[str, ...]] = []
    for i in range(len(sum_norms) - n + 1):
        gram = sum_norms[i : i + n]
        if gram in source_grams:
            continue
        if content_only and all(
            t.is_stop or t.is_punct for t in summary.tokens[i : i + n]
        ):
            continue
        if gram not in occurrences:
            occurrences[gram] = []
            order.append(gram)
        occurrences[gram].append(Span(i, i + n))
    return NovelContentReport(
        n=n,
        content_only=content_only,
        ngrams=tuple(NovelNGram(tokens=gram, spans=tuple(occurrences[gram])) for gram in order),
    )
