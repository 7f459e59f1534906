"""Maximal shared n-gram alignment between two tokenized texts.

A summary span is reported when its normalized token sequence occurs in the
source and the span cannot be stretched by one token on either side while
still occurring there. Each reported span carries every source occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .textmodel import Span, TokenizedText


class MismatchedNormalization(ValueError):
    """The two texts were produced with different normalizer versions."""


class NoContentTokens(ValueError):
    """Coverage is undefined for a text with no non-stopword, non-punctuation tokens."""


@dataclass(frozen=True)
class AlignConfig:
    """Knobs for lexical alignment; serialized into cache headers.

    ``max_n`` bounds n-gram index construction only; reported matches are always
    maximal regardless of length.
    """

    min_n: int = 1
    drop_stopword_only: bool = True
    max_n: int | None = None

    def to_dict(self) -> dict:
        return {"min_n": self.min_n, "drop_stopword_only": self.drop_stopword_only, "max_n": self.max_n}

    @classmethod
    def from_dict(cls, data: dict) -> "AlignConfig":
        return cls(
            min_n=int(data["min_n"]),
            drop_stopword_only=bool(data["drop_stopword_only"]),
            max_n=None if data.get("max_n") is None else int(data["max_n"]),
        )


@dataclass(frozen=True)
class LexMatch:
    """One maximal shared span of the summary with all its source occurrences."""

    summary_span: Span
    source_spans: tuple[Span, ...]
    length: int


@dataclass(frozen=True)
class LexicalAlignment:
    matches: tuple[LexMatch, ...]
    coverage: float


# Normalized n-gram key -> source spans, sorted by start token.
NGramIndex = dict[str, list[Span]]


def ngram_key(norms) -> str:
    return " ".join(norms)


def build_ngram_index(source: TokenizedText, max_n: int) -> NGramIndex:
    """Index every source n-gram for 1 <= n <= min(max_n, len(source)) by normalized key."""
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    norms = source.norms()
    index: NGramIndex = {}
    for n in range(1, min(max_n, len(norms)) + 1):
        for i in range(len(norms) - n + 1):
            index.setdefault(ngram_key(norms[i : i + n]), []).append(Span(i, i + n))
    return index


class _SuffixAutomaton:
    """Suffix automaton over a token-id sequence; linear build, hash transitions."""

    def __init__(self, seq: list[int]):
        self.next: list[dict[int, int]] = [{}]
        self.link: list[int] = [-1]
        self.length: list[int] = [0]
        # End position of the token run that created the state; -1 for clones.
        self.own_end: list[int] = [-1]
        last = 0
        for pos, sym in enumerate(seq):
            last = self._extend(sym, pos, last)
        self._children: list[list[int]] | None = None

    def _extend(self, sym: int, pos: int, last: int) -> int:
        nxt, link, length, own = self.next, self.link, self.length, self.own_end
        cur = len(length)
        nxt.append({})
        link.append(-1)
        length.append(length[last] + 1)
        own.append(pos)
        p = last
        while p != -1 and sym not in nxt[p]:
            nxt[p][sym] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
            return cur
        q = nxt[p][sym]
        if length[p] + 1 == length[q]:
            link[cur] = q
            return cur
        clone = len(length)
        nxt.append(dict(nxt[q]))
        link.append(link[q])
        length.append(length[p] + 1)
        own.append(-1)
        while p != -1 and nxt[p].get(sym) == q:
            nxt[p][sym] = clone
            p = link[p]
        link[q] = clone
        link[cur] = clone
        return cur

    def _link_children(self) -> list[list[int]]:
        if self._children is None:
            children: list[list[int]] = [[] for _ in self.length]
            for state in range(1, len(self.length)):
                children[self.link[state]].append(state)
            self._children = children
        return self._children

    def end_positions(self, state: int) -> list[int]:
        """All end positions (inclusive token index) of the substrings in a state's class."""
        children = self._link_children()
        ends: list[int] = []
        stack = [state]
        while stack:
            v = stack.pop()
            if self.own_end[v] >= 0:
                ends.append(self.own_end[v])
            stack.extend(children[v])
        return ends

    def matching_statistics(self, seq: list[int]) -> tuple[list[int], list[int]]:
        """For each prefix end e (1-based), the longest suffix of seq[:e] occurring in
        the automaton's text, plus the automaton state representing that match."""
        longest = [0] * (len(seq) + 1)
        states = [0] * (len(seq) + 1)
        v, cur = 0, 0
        for j, sym in enumerate(seq):
            while True:
                trans = self.next[v]
                if sym in trans:
                    v = trans[sym]
                    cur += 1
                    break
                if v == 0:
                    cur = 0
                    break
                v = self.link[v]
                cur = self.length[v]
            longest[j + 1] = cur
            states[j + 1] = v
        return longest, states


def _symbol_ids(source: TokenizedText, summary: TokenizedText) -> tuple[list[int], list[int]]:
    table: dict[str, int] = {}
    out = []
    for text in (source, summary):
        out.append([table.setdefault(norm, len(table)) for norm in text.norms()])
    return out[0], out[1]


def align_lexical(source: TokenizedText, summary: TokenizedText, cfg: AlignConfig = AlignConfig()) -> LexicalAlignment:
    """All maximal shared summary spans, with every source occurrence of each.

    Spans shorter than ``cfg.min_n`` are dropped, as are spans made up entirely of
    stopwords and punctuation when ``cfg.drop_stopword_only`` is set.
    """
    if source.normalizer != summary.normalizer:
        raise MismatchedNormalization(
            f"source normalized with {source.normalizer!r}, summary with {summary.normalizer!r}"
        )
    if cfg.min_n < 1:
        raise ValueError(f"min_n must be >= 1, got {cfg.min_n}")

    matches: list[LexMatch] = []
    if len(source) and len(summary):
        src_syms, sum_syms = _symbol_ids(source, summary)
        sam = _SuffixAutomaton(src_syms)
        longest, states = sam.matching_statistics(sum_syms)
        m = len(sum_syms)
        for end in range(1, m + 1):
            length = longest[end]
            if length < 1:
                continue
            # Right-maximal unless the match through the next token strictly grows.
            if end < m and longest[end + 1] > length:
                continue
            if length < cfg.min_n:
                continue
            span = Span(end - length, end)
            if cfg.drop_stopword_only and not _has_content(summary, span):
                continue
            source_spans = sorted(
                (Span(p - length + 1, p + 1) for p in sam.end_positions(states[end])),
                key=lambda s: s.start_token,
            )
            matches.append(LexMatch(summary_span=span, source_spans=tuple(source_spans), length=length))
        matches.sort(key=lambda m: m.summary_span.start_token)

    alignment = LexicalAlignment(matches=tuple(matches), coverage=0.0)
    content = summary.content_indices()
    coverage = _coverage(alignment, content) if content else 0.0
    return LexicalAlignment(matches=alignment.matches, coverage=coverage)


def _has_content(text: TokenizedText, span: Span) -> bool:
    return any(
        not text.tokens[i].is_stop and not text.tokens[i].is_punct
        for i in range(span.start_token, span.end_token)
    )


def _coverage(alignment: LexicalAlignment, content_indices: list[int]) -> float:
    covered = set()
    for match in alignment.matches:
        covered.update(range(match.summary_span.start_token, match.summary_span.end_token))
    return sum(1 for i in content_indices if i in covered) / len(content_indices)


def coverage_fraction(alignment: LexicalAlignment, summary: TokenizedText) -> float:
    """Fraction of the summary's content tokens inside at least one match span."""
    content = summary.content_indices()
    if not content:
        raise NoContentTokens(f"summary {summary.field_id!r} has no content tokens")
    return _coverage(alignment, content)
