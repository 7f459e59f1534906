"""Corpus ingestion, full precomputation of annotations, and the cache format.

The cache is JSON Lines: a version-1 header describing exactly how the
annotations were produced (so readers can reject stale caches), then one
fully-annotated example per line, in input order, with deterministic bytes.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
from dataclasses import dataclass
from enum import Enum

from .lexalign import AlignConfig, LexicalAlignment, LexMatch, align_lexical
from .metrics import (
    DEFAULT_TAU_LEX,
    DEFAULT_TAU_SEM,
    NovelContentReport,
    NovelNGram,
    QuadrantLabel,
    RougeTriple,
    TooShort,
    classify_quadrant,
    novel_ngrams,
    rouge_n,
)
from .semalign import BERTScoreTriple, SemanticAlignment, semantic_alignment
from .textmodel import (
    DOCUMENT_FIELD,
    NORMALIZER_VERSION,
    REFERENCE_FIELD,
    TOKENIZER_VERSION,
    Span,
    StopList,
    Token,
    TokenizedText,
    default_stoplist,
    generated_field,
    tokenize,
)

CACHE_FORMAT = "sumalign-cache"
CACHE_VERSION = 1
DEFAULT_NOVEL_N = 1


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class SchemaError(ValueError):
    def __init__(self, line_no: int, field: str, message: str):
        self.line_no = line_no
        self.field = field
        super().__init__(f"line {line_no}, field {field!r}: {message}")


class DuplicateId(ValueError):
    pass


class FingerprintMismatch(ValueError):
    pass


class VersionError(ValueError):
    pass


class AnnotationError(RuntimeError):
    """Raised under --fail-fast when an example cannot be annotated."""

    def __init__(self, example_id: str, message: str):
        self.example_id = example_id
        super().__init__(f"example {example_id!r}: {message}")


class PairType(Enum):
    DOC_GENERATED = "doc_generated"
    DOC_REFERENCE = "doc_reference"
    REFERENCE_GENERATED = "reference_generated"


@dataclass(frozen=True)
class GeneratedSummary:
    model: str
    text: TokenizedText


@dataclass(frozen=True)
class ExampleRecord:
    id: str
    document: TokenizedText
    reference: TokenizedText
    generated: tuple[GeneratedSummary, ...]


@dataclass(frozen=True)
class PipelineConfig:
    align: AlignConfig = AlignConfig()
    tau_lex: float = DEFAULT_TAU_LEX
    tau_sem: float = DEFAULT_TAU_SEM
    top_k: int = 10
    novel_n: int = DEFAULT_NOVEL_N

    def to_dict(self) -> dict:
        return {
            "align": self.align.to_dict(),
            "taxonomy": {"tau_lex": self.tau_lex, "tau_sem": self.tau_sem},
            "semantic": {"top_k": self.top_k},
            "novel": {"n": self.novel_n},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        return cls(
            align=AlignConfig.from_dict(data["align"]),
            tau_lex=float(data["taxonomy"]["tau_lex"]),
            tau_sem=float(data["taxonomy"]["tau_sem"]),
            top_k=int(data["semantic"]["top_k"]),
            novel_n=int(data.get("novel", {}).get("n", DEFAULT_NOVEL_N)),
        )


@dataclass(frozen=True)
class PairAnnotations:
    pair: PairType
    gen: int | None
    lexical: LexicalAlignment
    semantic: SemanticAlignment
    rouge1: RougeTriple | None
    rouge2: RougeTriple | None
    quadrant: QuadrantLabel
    lexical_score: float
    semantic_score: float
    novel: NovelContentReport


@dataclass(frozen=True)
class CachedExample:
    example: ExampleRecord
    pairs: tuple[PairAnnotations, ...]

    def annotations(self, pair: PairType, gen: int | None) -> PairAnnotations | None:
        for ann in self.pairs:
            if ann.pair == pair and ann.gen == gen:
                return ann
        return None


@dataclass
class CachedCorpus:
    fingerprint: str
    config: dict
    examples: list[CachedExample]

    def model_labels(self) -> list[str]:
        return sorted({gen.model for ex in self.examples for gen in ex.example.generated})


@dataclass
class BuildReport:
    path: str
    fingerprint: str
    written: int
    errors: list[tuple[str, str]]


# --------------------------------------------------------------------------- corpus input


def _coerce_id(value, line_no: int) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    raise SchemaError(line_no, "id", f"expected string, got {type(value).__name__}")


def _required_text(record: dict, field: str, line_no: int) -> str:
    if field not in record:
        raise SchemaError(line_no, field, "missing required field")
    value = record[field]
    if not isinstance(value, str):
        raise SchemaError(line_no, field, f"expected string, got {type(value).__name__}")
    return value


def _generated_entries(record: dict, line_no: int) -> list[tuple[str, str]]:
    raw = record.get("generated", [])
    if not isinstance(raw, list):
        raise SchemaError(line_no, "generated", f"expected array, got {type(raw).__name__}")
    entries: list[tuple[str, str]] = []
    for k, item in enumerate(raw):
        if isinstance(item, str):
            entries.append((f"model_{k}", item))
        elif isinstance(item, dict):
            model = item.get("model")
            text = item.get("text")
            if not isinstance(model, str) or not isinstance(text, str):
                raise SchemaError(line_no, "generated", f"entry {k} needs string 'model' and 'text'")
            entries.append((model, text))
        else:
            raise SchemaError(line_no, "generated", f"entry {k} must be an object or a string")
    return entries


def load_jsonl(path, stoplist: StopList | None = None) -> list[ExampleRecord]:
    """Parse and tokenize a corpus file with one JSON object per line."""
    stop = stoplist if stoplist is not None else default_stoplist()
    records: list[ExampleRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, exc.msg) from None
            if not isinstance(record, dict):
                raise ParseError(line_no, f"expected a JSON object, got {type(record).__name__}")
            example_id = _coerce_id(record["id"], line_no) if "id" in record else str(line_no)
            if example_id in seen:
                raise DuplicateId(f"line {line_no}: duplicate example id {example_id!r}")
            seen.add(example_id)
            document = _required_text(record, "document", line_no)
            reference = _required_text(record, "reference", line_no)
            generated = tuple(
                GeneratedSummary(model=model, text=tokenize(text, generated_field(k), stop))
                for k, (model, text) in enumerate(_generated_entries(record, line_no))
            )
            records.append(
                ExampleRecord(
                    id=example_id,
                    document=tokenize(document, DOCUMENT_FIELD, stop),
                    reference=tokenize(reference, REFERENCE_FIELD, stop),
                    generated=generated,
                )
            )
    return records


def enumerate_pairs(example: ExampleRecord) -> list[tuple[PairType, int | None]]:
    """The analysis pairs an example supports: document/reference once, the two
    generated-summary comparisons once per summary. Pairs involving an empty
    reference are skipped."""
    has_reference = len(example.reference) > 0
    pairs: list[tuple[PairType, int | None]] = []
    if has_reference:
        pairs.append((PairType.DOC_REFERENCE, None))
    pairs.extend((PairType.DOC_GENERATED, k) for k in range(len(example.generated)))
    if has_reference:
        pairs.extend((PairType.REFERENCE_GENERATED, k) for k in range(len(example.generated)))
    return pairs


def pair_texts(example: ExampleRecord, pair: PairType, gen: int | None) -> tuple[TokenizedText, TokenizedText]:
    """(source side, summary side) for a pair; raises IndexError on a bad gen index."""
    if pair == PairType.DOC_REFERENCE:
        return example.document, example.reference
    if gen is None or not (0 <= gen < len(example.generated)):
        raise IndexError(f"generated index {gen} out of range for example {example.id!r}")
    if pair == PairType.DOC_GENERATED:
        return example.document, example.generated[gen].text
    return example.reference, example.generated[gen].text


# --------------------------------------------------------------------------- annotation


def _rouge_or_none(reference: TokenizedText, generated: TokenizedText, n: int) -> RougeTriple | None:
    try:
        return rouge_n(reference, generated, n)
    except TooShort:
        return None


def annotate_example(example: ExampleRecord, provider_store, config: PipelineConfig) -> CachedExample:
    """Compute every annotation for every pair of one example."""
    provider = provider_store.for_example(example)
    annotations = []
    for pair, gen in enumerate_pairs(example):
        source, summary = pair_texts(example, pair, gen)
        lexical = align_lexical(source, summary, config.align)
        semantic = semantic_alignment(source, summary, provider, config.top_k)
        quadrant = classify_quadrant(lexical.coverage, semantic.aggregate.f1, config.tau_lex, config.tau_sem)
        annotations.append(
            PairAnnotations(
                pair=pair,
                gen=gen,
                lexical=lexical,
                semantic=semantic,
                rouge1=_rouge_or_none(source, summary, 1),
                rouge2=_rouge_or_none(source, summary, 2),
                quadrant=quadrant,
                lexical_score=lexical.coverage,
                semantic_score=semantic.aggregate.f1,
                novel=novel_ngrams(source, summary, config.novel_n, content_only=True),
            )
        )
    return CachedExample(example=example, pairs=tuple(annotations))


# --------------------------------------------------------------------------- serialization

_CANON = {"sort_keys": True, "ensure_ascii": False, "separators": (",", ":")}


def canonical_json(data) -> str:
    return json.dumps(data, **_CANON)


def compute_fingerprint(config_dict: dict) -> str:
    return hashlib.sha256(canonical_json(config_dict).encode("utf-8")).hexdigest()


def fingerprint_config(config: PipelineConfig, provider_descriptor: dict, stoplist: StopList | None = None) -> dict:
    stop = stoplist if stoplist is not None else default_stoplist()
    digest = hashlib.sha256("\n".join(sorted(stop.words)).encode("utf-8")).hexdigest()
    return {
        "tokenizer": TOKENIZER_VERSION,
        "normalizer": NORMALIZER_VERSION,
        "stopwords": digest,
        "provider": provider_descriptor,
        **config.to_dict(),
    }


def _span_to_json(span: Span) -> list[int]:
    return [span.start_token, span.end_token]


def _text_to_json(text: TokenizedText) -> dict:
    return {
        "raw": text.raw,
        "field": text.field_id,
        "normalizer": text.normalizer,
        "tokens": [
            {"start": t.start, "end": t.end, "norm": t.norm, "stop": t.is_stop, "punct": t.is_punct}
            for t in text.tokens
        ],
    }


def _text_from_json(data: dict) -> TokenizedText:
    raw = data["raw"]
    tokens = tuple(
        Token(
            surface=raw[t["start"] : t["end"]],
            start=t["start"],
            end=t["end"],
            norm=t["norm"],
            is_stop=t["stop"],
            is_punct=t["punct"],
        )
        for t in data["tokens"]
    )
    return TokenizedText(raw=raw, tokens=tokens, field_id=data["field"], normalizer=data["normalizer"])


def _rouge_to_json(triple: RougeTriple | None) -> dict | None:
    if triple is None:
        return None
    return {"precision": triple.precision, "recall": triple.recall, "f1": triple.f1, "n": triple.n}


def _rouge_from_json(data: dict | None) -> RougeTriple | None:
    if data is None:
        return None
    return RougeTriple(precision=data["precision"], recall=data["recall"], f1=data["f1"], n=data["n"])


def _pair_to_json(ann: PairAnnotations) -> dict:
    return {
        "pair": ann.pair.value,
        "gen": ann.gen,
        "lexical": {
            "coverage": ann.lexical.coverage,
            "matches": [
                {
                    "summary_span": _span_to_json(m.summary_span),
                    "source_spans": [_span_to_json(s) for s in m.source_spans],
                    "length": m.length,
                }
                for m in ann.lexical.matches
            ],
        },
        "semantic": {
            "rows": [[[c, s] for c, s in row] for row in ann.semantic.rows],
            "source_best": list(ann.semantic.source_best),
            "bertscore": {
                "precision": ann.semantic.aggregate.precision,
                "recall": ann.semantic.aggregate.recall,
                "f1": ann.semantic.aggregate.f1,
            },
        },
        "rouge1": _rouge_to_json(ann.rouge1),
        "rouge2": _rouge_to_json(ann.rouge2),
        "quadrant": ann.quadrant.value,
        "scores": {"lexical": ann.lexical_score, "semantic": ann.semantic_score},
        "novel": {
            "n": ann.novel.n,
            "content_only": ann.novel.content_only,
            "ngrams": [
                {"tokens": list(ng.tokens), "spans": [_span_to_json(s) for s in ng.spans]}
                for ng in ann.novel.ngrams
            ],
        },
    }


def _pair_from_json(data: dict) -> PairAnnotations:
    lexical = LexicalAlignment(
        matches=tuple(
            LexMatch(
                summary_span=Span(*m["summary_span"]),
                source_spans=tuple(Span(*s) for s in m["source_spans"]),
                length=m["length"],
            )
            for m in data["lexical"]["matches"]
        ),
        coverage=data["lexical"]["coverage"],
    )
    bs = data["semantic"]["bertscore"]
    semantic = SemanticAlignment(
        rows=tuple(tuple((c, s) for c, s in row) for row in data["semantic"]["rows"]),
        source_best=tuple(data["semantic"]["source_best"]),
        aggregate=BERTScoreTriple(precision=bs["precision"], recall=bs["recall"], f1=bs["f1"]),
    )
    novel = NovelContentReport(
        n=data["novel"]["n"],
        content_only=data["novel"]["content_only"],
        ngrams=tuple(
            NovelNGram(tokens=tuple(ng["tokens"]), spans=tuple(Span(*s) for s in ng["spans"]))
            for ng in data["novel"]["ngrams"]
        ),
    )
    return PairAnnotations(
        pair=PairType(data["pair"]),
        gen=data["gen"],
        lexical=lexical,
        semantic=semantic,
        rouge1=_rouge_from_json(data["rouge1"]),
        rouge2=_rouge_from_json(data["rouge2"]),
        quadrant=QuadrantLabel(data["quadrant"]),
        lexical_score=data["scores"]["lexical"],
        semantic_score=data["scores"]["semantic"],
        novel=novel,
    )


def cached_example_to_dict(cached: CachedExample) -> dict:
    ex = cached.example
    return {
        "id": ex.id,
        "document": _text_to_json(ex.document),
        "reference": _text_to_json(ex.reference),
        "generated": [{"model": g.model, "text": _text_to_json(g.text)} for g in ex.generated],
        "pairs": [_pair_to_json(p) for p in cached.pairs],
    }


def cached_example_from_dict(data: dict) -> CachedExample:
    example = ExampleRecord(
        id=data["id"],
        document=_text_from_json(data["document"]),
        reference=_text_from_json(data["reference"]),
        generated=tuple(
            GeneratedSummary(model=g["model"], text=_text_from_json(g["text"])) for g in data["generated"]
        ),
    )
    return CachedExample(example=example, pairs=tuple(_pair_from_json(p) for p in data["pairs"]))


# --------------------------------------------------------------------------- build / read

_WORKER: dict = {}


def _init_worker(provider_store, config: PipelineConfig) -> None:
    _WORKER["store"] = provider_store
    _WORKER["config"] = config


def _annotate_to_line(example: ExampleRecord) -> tuple[str, str | None, str | None]:
    try:
        cached = annotate_example(example, _WORKER["store"], _WORKER["config"])
        return example.id, canonical_json(cached_example_to_dict(cached)), None
    except Exception as exc:
        return example.id, None, f"{type(exc).__name__}: {exc}"


def build_cache(
    corpus: list[ExampleRecord],
    provider_store,
    config: PipelineConfig,
    out_path,
    stoplist: StopList | None = None,
    fail_fast: bool = False,
    jobs: int = 1,
) -> BuildReport:
    """Annotate every example and write the cache; failed examples are collected
    and reported unless ``fail_fast`` aborts on the first one."""
    header_config = fingerprint_config(config, provider_store.descriptor(), stoplist)
    fingerprint = compute_fingerprint(header_config)
    header = {
        "format": CACHE_FORMAT,
        "version": CACHE_VERSION,
        "fingerprint": fingerprint,
        "config": header_config,
    }

    errors: list[tuple[str, str]] = []
    written = 0
    with open(out_path, "w", encoding="utf-8", newline="\n") as out:
        out.write(canonical_json(header) + "\n")
        if jobs <= 1:
            _init_worker(provider_store, config)
            results = map(_annotate_to_line, corpus)
            written, errors = _drain(results, out, fail_fast)
        else:
            with multiprocessing.Pool(jobs, initializer=_init_worker, initargs=(provider_store, config)) as pool:
                results = pool.imap(_annotate_to_line, corpus, chunksize=8)
                written, errors = _drain(results, out, fail_fast)
    return BuildReport(path=str(out_path), fingerprint=fingerprint, written=written, errors=errors)


def _drain(results, out, fail_fast: bool) -> tuple[int, list[tuple[str, str]]]:
    written = 0
    errors: list[tuple[str, str]] = []
    for example_id, line, error in results:
        if error is not None:
            if fail_fast:
                raise AnnotationError(example_id, error)
            errors.append((example_id, error))
            continue
        out.write(line + "\n")
        written += 1
    return written, errors


def read_cache(path, expected_fingerprint: str | None = None) -> CachedCorpus:
    """Load a cache file, verifying format version and fingerprint integrity."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise VersionError(f"{path}: empty file is not a cache")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError:
        raise VersionError(f"{path}: first line is not a JSON header") from None
    if not isinstance(header, dict) or header.get("format") != CACHE_FORMAT:
        raise VersionError(f"{path}: not a {CACHE_FORMAT} file")
    if header.get("version") != CACHE_VERSION:
        raise VersionError(f"{path}: unsupported cache version {header.get('version')!r}")
    if set(header) != {"format", "version", "fingerprint", "config"}:
        raise VersionError(f"{path}: malformed header keys {sorted(header)}")
    if compute_fingerprint(header["config"]) != header["fingerprint"]:
        raise FingerprintMismatch(f"{path}: header fingerprint does not match its config")
    if expected_fingerprint is not None and header["fingerprint"] != expected_fingerprint:
        raise FingerprintMismatch(
            f"{path}: cache fingerprint {header['fingerprint'][:12]}... does not match "
            f"expected {expected_fingerprint[:12]}..."
        )
    examples = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise ParseError(line_no, "blank line inside cache body")
        try:
            examples.append(cached_example_from_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"truncated or corrupt cache line: {exc.msg}") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(line_no, f"malformed cache record: {exc}") from None
    return CachedCorpus(fingerprint=header["fingerprint"], config=header["config"], examples=examples)
