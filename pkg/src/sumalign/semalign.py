"""Embedding providers, cosine similarity matrices, and greedy-match aggregation.

Vectors are never computed here: static embeddings come from a text file, and
contextual embeddings are ingested from files precomputed by an external model,
keyed by (field, token position).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .textmodel import TokenizedText, generated_field, normalize


class EmbeddingFileError(ValueError):
    """Base class for malformed embedding inputs."""


class BadHeader(EmbeddingFileError):
    pass


class DimensionMismatch(EmbeddingFileError):
    pass


class DuplicateToken(EmbeddingFileError):
    pass


class TokenCountMismatch(EmbeddingFileError):
    """A contextual file's vector counts disagree with the example's tokenization."""


class MissingEmbedding(EmbeddingFileError):
    """A contextual file has no entry for the requested example."""


class ZeroVector(ValueError):
    """Cosine similarity is undefined for zero vectors; callers must mask them."""


class EmptyComparison(ValueError):
    """Every row or every column of the matrix is masked."""


class StaticEmbeddings:
    """One vector per normalized vocabulary token; out-of-vocabulary lookups are absent."""

    kind = "static"

    def __init__(self, vectors: dict[str, np.ndarray], source: str = "memory"):
        if not vectors:
            raise EmbeddingFileError("empty vocabulary")
        dims = {v.shape for v in vectors.values()}
        if len(dims) != 1:
            raise DimensionMismatch(f"inconsistent vector shapes: {sorted(dims)}")
        self.dim = len(next(iter(vectors.values())))
        self._vectors = vectors
        self.source = source

    def vector(self, field_id: str, index: int, norm: str) -> np.ndarray | None:
        return self._vectors.get(norm)

    def descriptor(self) -> dict:
        digest = hashlib.sha256()
        for token in sorted(self._vectors):
            digest.update(token.encode("utf-8"))
            digest.update(self._vectors[token].astype("<f8").tobytes())
        return {"kind": self.kind, "dim": self.dim, "content": digest.hexdigest()}

    def for_example(self, example) -> "StaticEmbeddings":
        return self


def load_static_embeddings(path) -> StaticEmbeddings:
    """Parse a static embedding file: "<vocab> <dim>" header, then token + floats per line."""
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise BadHeader(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise BadHeader(f"{path}: header must be '<vocab_size> <dim>', got {lines[0]!r}")
    try:
        vocab_size, dim = int(head[0]), int(head[1])
    except ValueError:
        raise BadHeader(f"{path}: non-integer header {lines[0]!r}") from None
    if vocab_size < 1 or dim < 1:
        raise BadHeader(f"{path}: vocab_size and dim must be positive")
    if len(lines) - 1 != vocab_size:
        raise BadHeader(f"{path}: header declares {vocab_size} rows, file has {len(lines) - 1}")

    vectors: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split()
        token, values = normalize(parts[0]), parts[1:]
        if len(values) != dim:
            raise DimensionMismatch(f"{path}:{line_no}: expected {dim} floats, got {len(values)}")
        if token in vectors:
            raise DuplicateToken(f"{path}:{line_no}: duplicate token {token!r}")
        try:
            vectors[token] = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError:
            raise EmbeddingFileError(f"{path}:{line_no}: malformed float") from None
    return StaticEmbeddings(vectors, source=str(path))


class ContextualEmbeddings:
    """Per-position vectors for one example; every token of every field has one."""

    kind = "contextual"

    def __init__(self, fields: dict[str, np.ndarray], example_id: str, source: str = "memory"):
        dims = {arr.shape[1] for arr in fields.values() if arr.size}
        if len(dims) > 1:
            raise DimensionMismatch(f"inconsistent vector dimensions across fields: {sorted(dims)}")
        if not dims:
            raise EmbeddingFileError(f"example {example_id!r}: no vectors in any field")
        self.dim = dims.pop()
        self._fields = fields
        self.example_id = example_id
        self.source = source

    def vector(self, field_id: str, index: int, norm: str) -> np.ndarray:
        return self._fields[field_id][index]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "source": self.source}


class ContextualStore:
    """All records of a contextual embedding file, ready to bind to examples."""

    kind = "contextual"

    def __init__(self, records: dict[str, dict], content_hash: str, source: str = "memory"):
        self.records = records
        self.content_hash = content_hash
        self.source = source

    @classmethod
    def load(cls, path) -> "ContextualStore":
        with open(path, "rb") as fh:
            raw = fh.read()
        records: dict[str, dict] = {}
        for line_no, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingFileError(f"{path}:{line_no}: {exc}") from None
            if not isinstance(record, dict) or "id" not in record or "fields" not in record:
                raise EmbeddingFileError(f"{path}:{line_no}: expected an object with 'id' and 'fields'")
            records[str(record["id"])] = record["fields"]
        return cls(records, content_hash=hashlib.sha256(raw).hexdigest(), source=str(path))

    def for_example(self, example) -> ContextualEmbeddings:
        if example.id not in self.records:
            raise MissingEmbedding(f"no contextual vectors for example {example.id!r}")
        return contextual_from_record(self.records[example.id], example, source=self.source)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "content": self.content_hash}


def _field_array(vectors, field_id: str, expected_tokens: int, example_id: str) -> np.ndarray:
    if len(vectors) != expected_tokens:
        raise TokenCountMismatch(
            f"example {example_id!r}, field {field_id!r}: {len(vectors)} vectors for "
            f"{expected_tokens} tokens (tokenizer drift between producer and consumer?)"
        )
    try:
        arr = np.asarray(vectors, dtype=np.float64)
    except ValueError:
        raise DimensionMismatch(f"example {example_id!r}, field {field_id!r}: ragged vector rows") from None
    if expected_tokens and arr.ndim != 2:
        raise DimensionMismatch(f"example {example_id!r}, field {field_id!r}: ragged vector rows")
    return arr.reshape(expected_tokens, -1) if expected_tokens else arr.reshape(0, 0)


def contextual_from_record(fields: dict, example, source: str = "memory") -> ContextualEmbeddings:
    """Bind one parsed contextual record to an example, validating token counts."""
    generated = fields.get("generated", [])
    if len(generated) != len(example.generated):
        raise TokenCountMismatch(
            f"example {example.id!r}: {len(generated)} generated vector lists for "
            f"{len(example.generated)} generated summaries"
        )
    arrays = {
        "document": _field_array(fields.get("document", []), "document", len(example.document), example.id),
        "reference": _field_array(fields.get("reference", []), "reference", len(example.reference), example.id),
    }
    for k, gen in enumerate(example.generated):
        field_id = generated_field(k)
        arrays[field_id] = _field_array(generated[k], field_id, len(gen.text), example.id)
    return ContextualEmbeddings(arrays, example_id=example.id, source=source)


def load_contextual_embeddings(path, example) -> ContextualEmbeddings:
    """Load the contextual vectors of one example from a precomputed file."""
    return ContextualStore.load(path).for_example(example)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against floating-point drift."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shape {u.shape} vs {v.shape}")
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity is undefined for zero vectors")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


@dataclass
class SimilarityMatrix:
    """Cosine scores with rows = summary tokens, cols = source tokens.

    Entries on masked rows/columns are undefined; consumers must skip them.
    """

    scores: np.ndarray
    row_mask: np.ndarray  # True = masked (punctuation / absent / zero vector)
    col_mask: np.ndarray

    @property
    def transposed(self) -> "SimilarityMatrix":
        return SimilarityMatrix(scores=self.scores.T, row_mask=self.col_mask, col_mask=self.row_mask)


def _token_vectors(text: TokenizedText, provider) -> tuple[np.ndarray, np.ndarray]:
    """Per-token unit vectors plus a mask; punctuation, absent, and zero vectors mask out."""
    dim = provider.dim
    vectors = np.zeros((len(text), dim), dtype=np.float64)
    mask = np.ones(len(text), dtype=bool)
    for i, token in enumerate(text.tokens):
        if token.is_punct:
            continue
        vec = provider.vector(text.field_id, i, token.norm)
        if vec is None:
            continue
        vectors[i] = vec
        mask[i] = False
    norms = np.linalg.norm(vectors, axis=1)
    zero = norms == 0.0
    mask |= zero
    norms[zero] = 1.0
    vectors /= norms[:, None]
    vectors[mask] = 0.0
    return vectors, mask


def similarity_matrix(source: TokenizedText, summary: TokenizedText, provider) -> SimilarityMatrix:
    """Score every unmasked (summary token, source token) pair under the provider."""
    src_vecs, col_mask = _token_vectors(source, provider)
    sum_vecs, row_mask = _token_vectors(summary, provider)
    scores = np.clip(sum_vecs @ src_vecs.T, -1.0, 1.0)
    scores[row_mask, :] = 0.0
    scores[:, col_mask] = 0.0
    return SimilarityMatrix(scores=scores, row_mask=row_mask, col_mask=col_mask)


def best_matches(matrix: SimilarityMatrix, k: int) -> list[list[tuple[int, float]]]:
    """Per row, the k best unmasked columns, score-descending with ties by column index.

    Masked rows yield empty lists; short sources yield fewer than k entries.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n_rows = matrix.scores.shape[0]
    take = min(k, int((~matrix.col_mask).sum()))
    if take == 0:
        return [[] for _ in range(n_rows)]
    masked = np.where(matrix.col_mask[None, :], -np.inf, matrix.scores)
    out: list[list[tuple[int, float]]] = []
    if k == 1:
        # np.argmax picks the lowest index among ties, matching the sort order below.
        best_cols = np.argmax(masked, axis=1)
        for r in range(n_rows):
            if matrix.row_mask[r]:
                out.append([])
            else:
                c = int(best_cols[r])
                out.append([(c, float(matrix.scores[r, c]))])
        return out
    for r in range(n_rows):
        if matrix.row_mask[r]:
            out.append([])
            continue
        order = np.argsort(-masked[r], kind="stable")[:take]
        out.append([(int(c), float(matrix.scores[r, c])) for c in order])
    return out


@dataclass(frozen=True)
class BERTScoreTriple:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "BERTScoreTriple":
        denom = precision + recall
        f1 = 2.0 * precision * recall / denom if denom > 0 else 0.0
        return cls(precision=precision, recall=recall, f1=f1)


def bertscore(matrix: SimilarityMatrix) -> BERTScoreTriple:
    """Greedy max-then-average aggregation: row maxima average to precision,
    column maxima to recall. No idf weighting."""
    row_best = [m[0][1] for m in best_matches(matrix, 1) if m]
    col_best = [m[0][1] for m in best_matches(matrix.transposed, 1) if m]
    if not row_best or not col_best:
        raise EmptyComparison("all rows or all columns are masked")
    return BERTScoreTriple.from_pr(
        precision=sum(row_best) / len(row_best),
        recall=sum(col_best) / len(col_best),
    )


@dataclass(frozen=True)
class SemanticAlignment:
    """Ranked source matches per summary token plus the aggregate score triple.

    ``rows[i]`` is empty when summary token i is masked; ``source_best[j]`` is None
    when source token j is masked.
    """

    rows: tuple[tuple[tuple[int, float], ...], ...]
    source_best: tuple[float | None, ...]
    aggregate: BERTScoreTriple

    def best_score(self, row: int) -> float | None:
        return self.rows[row][0][1] if self.rows[row] else None


def semantic_alignment(
    source: TokenizedText, summary: TokenizedText, provider, top_k: int = 10
) -> SemanticAlignment:
    """Build the per-token ranked matches and aggregate scores for one text pair."""
    matrix = similarity_matrix(source, summary, provider)
    ranked = best_matches(matrix, top_k)
    col_best = best_matches(matrix.transposed, 1)
    return SemanticAlignment(
        rows=tuple(tuple(row) for row in ranked),
        source_best=tuple(m[0][1] if m else None for m in col_best),
        aggregate=bertscore(matrix),
    )
