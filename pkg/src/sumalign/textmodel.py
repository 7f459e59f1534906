"""Tokenization, normalization, and the document/span data model shared by all analyses."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

TOKENIZER_VERSION = "ws-punct-1"
NORMALIZER_VERSION = "nfkc-casefold-1"

# Fields a corpus item can carry; generated summaries use "generated[k]".
DOCUMENT_FIELD = "document"
REFERENCE_FIELD = "reference"


def generated_field(index: int) -> str:
    return f"generated[{index}]"


@dataclass(frozen=True)
class Token:
    """One token of a text, tied back to the original string by character offsets."""

    surface: str
    start: int
    end: int
    norm: str
    is_stop: bool
    is_punct: bool


@dataclass(frozen=True)
class Span:
    """Half-open token-index range [start_token, end_token)."""

    start_token: int
    end_token: int

    def __post_init__(self) -> None:
        if not (0 <= self.start_token < self.end_token):
            raise ValueError(f"invalid span [{self.start_token}, {self.end_token})")

    def __len__(self) -> int:
        return self.end_token - self.start_token


@dataclass(frozen=True)
class TokenizedText:
    """A raw string plus its tokens; offsets are Unicode scalar indices into ``raw``."""

    raw: str
    tokens: tuple[Token, ...]
    field_id: str = DOCUMENT_FIELD
    normalizer: str = NORMALIZER_VERSION

    def __len__(self) -> int:
        return len(self.tokens)

    def norms(self) -> tuple[str, ...]:
        return tuple(t.norm for t in self.tokens)

    def content_indices(self) -> list[int]:
        """Indices of tokens that are neither stopwords nor punctuation."""
        return [i for i, t in enumerate(self.tokens) if not t.is_stop and not t.is_punct]

    def char_span(self, span: Span) -> tuple[int, int]:
        """Character offsets covering a token span, for display highlighting."""
        if span.end_token > len(self.tokens):
            raise ValueError(f"span {span} exceeds token count {len(self.tokens)}")
        return self.tokens[span.start_token].start, self.tokens[span.end_token - 1].end


class StopList:
    """Immutable stopword membership set; entries are stored in normalized form."""

    def __init__(self, words, name: str = "custom"):
        self.words = frozenset(normalize(w) for w in words)
        self.name = name

    def __contains__(self, norm: str) -> bool:
        return norm in self.words

    def __len__(self) -> int:
        return len(self.words)


def normalize(surface: str) -> str:
    """NFKC-normalized, case-folded form of a surface string.

    Iterates the two steps to a fixpoint so normalize(normalize(s)) == normalize(s)
    holds even for exotic case/compatibility interactions.
    """
    current = surface
    for _ in range(8):
        folded = unicodedata.normalize("NFKC", current).casefold()
        if folded == current:
            return folded
        current = folded
    return current


def is_stopword(norm: str, stoplist: StopList) -> bool:
    """Membership test against a stopword list; the input must already be normalized."""
    return norm in stoplist


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def _is_punct_surface(surface: str) -> bool:
    return bool(surface) and all(_is_punct_char(ch) for ch in surface)


def load_stoplist(path=None) -> StopList:
    """Read a stopword file: UTF-8, one token per line, '#' starts a comment line."""
    if path is None:
        text = resources.files("sumalign.data").joinpath("stopwords_en.txt").read_text("utf-8")
        name = "builtin-en"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        name = str(path)
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return StopList(words, name=name)


@lru_cache(maxsize=1)
def default_stoplist() -> StopList:
    return load_stoplist()


def tokenize(text: str, field_id: str = DOCUMENT_FIELD, stoplist: StopList | None = None) -> TokenizedText:
    """Split a string on whitespace, separating punctuation runs from word runs.

    Every non-whitespace character lands in exactly one token; offsets are recorded
    so the original text can always be re-displayed around each token.
    """
    stop = stoplist if stoplist is not None else default_stoplist()
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        punct = _is_punct_char(text[i])
        j = i + 1
        while j < n and not text[j].isspace() and _is_punct_char(text[j]) == punct:
            j += 1
        surface = text[i:j]
        norm = normalize(surface)
        tokens.append(
            Token(
                surface=surface,
                start=i,
                end=j,
                norm=norm,
                is_stop=is_stopword(norm, stop),
                is_punct=punct,
            )
        )
        i = j
    return TokenizedText(raw=text, tokens=tuple(tokens), field_id=field_id)


def detokenize(text: TokenizedText) -> str:
    """Token surfaces joined by single spaces; tokenizing the result reproduces the surfaces."""
    return " ".join(t.surface for t in text.tokens)
