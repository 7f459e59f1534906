"""Read-only JSON API over a prebuilt annotation cache.

Every response is a lookup into the in-memory corpus; nothing is recomputed
per request. Span payloads carry character offsets so clients never have to
re-tokenize.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .pipeline import CachedCorpus, CachedExample, PairAnnotations, PairType
from .textmodel import Span, TokenizedText

DEFAULT_HOVER_K = 10


def _span_payload(text: TokenizedText, span: Span) -> dict:
    chars = text.char_span(span)
    return {"tokens": [span.start_token, span.end_token], "chars": [chars[0], chars[1]]}


def _text_payload(text: TokenizedText) -> dict:
    return {
        "raw": text.raw,
        "tokens": [
            {"start": t.start, "end": t.end, "norm": t.norm, "stop": t.is_stop, "punct": t.is_punct}
            for t in text.tokens
        ],
    }


def _match_payload(source: TokenizedText, index: int, score: float) -> dict:
    token = source.tokens[index]
    return {"index": index, "chars": [token.start, token.end], "score": score}


def _alignment_payload(ann: PairAnnotations, source: TokenizedText, summary: TokenizedText) -> dict:
    return {
        "pair": ann.pair.value,
        "gen": ann.gen,
        "lexical": {
            "coverage": ann.lexical.coverage,
            "matches": [
                {
                    "summary_span": _span_payload(summary, m.summary_span),
                    "source_spans": [_span_payload(source, s) for s in m.source_spans],
                    "length": m.length,
                }
                for m in ann.lexical.matches
            ],
        },
        "semantic": {
            "rows": [
                {
                    "best": row[0][1] if row else None,
                    "matches": [_match_payload(source, c, s) for c, s in row],
                }
                for row in ann.semantic.rows
            ],
            "source_best": list(ann.semantic.source_best),
            "bertscore": {
                "precision": ann.semantic.aggregate.precision,
                "recall": ann.semantic.aggregate.recall,
                "f1": ann.semantic.aggregate.f1,
            },
        },
        "rouge1": _rouge_payload(ann.rouge1),
        "rouge2": _rouge_payload(ann.rouge2),
        "quadrant": ann.quadrant.value,
        "scores": {"lexical": ann.lexical_score, "semantic": ann.semantic_score},
        "novel": {
            "n": ann.novel.n,
            "content_only": ann.novel.content_only,
            "ngrams": [
                {"tokens": list(ng.tokens), "spans": [_span_payload(summary, s) for s in ng.spans]}
                for ng in ann.novel.ngrams
            ],
        },
    }


def _rouge_payload(triple) -> dict | None:
    if triple is None:
        return None
    return {"precision": triple.precision, "recall": triple.recall, "f1": triple.f1, "n": triple.n}


def create_app(corpus: CachedCorpus | None = None, allow_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    app = FastAPI(title="sumalign", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(allow_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    app.state.corpus = corpus

    def require_corpus() -> CachedCorpus:
        if app.state.corpus is None:
            raise HTTPException(status_code=503, detail="corpus not loaded yet")
        return app.state.corpus

    def get_example(index: str) -> tuple[int, CachedExample]:
        data = require_corpus()
        try:
            i = int(index)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"example index must be an integer, got {index!r}")
        if not (0 <= i < len(data.examples)):
            raise HTTPException(status_code=404, detail=f"example index {i} out of range")
        return i, data.examples[i]

    def get_pair(cached: CachedExample, pair: str, gen: int | None) -> PairAnnotations:
        try:
            pair_type = PairType(pair)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown pair type {pair!r}")
        gen_index = None if pair_type == PairType.DOC_REFERENCE else (gen if gen is not None else 0)
        ann = cached.annotations(pair_type, gen_index)
        if ann is None:
            raise HTTPException(status_code=404, detail=f"pair {pair!r} with gen={gen_index} not available")
        return ann

    def pair_sides(cached: CachedExample, ann: PairAnnotations) -> tuple[TokenizedText, TokenizedText]:
        ex = cached.example
        if ann.pair == PairType.DOC_REFERENCE:
            return ex.document, ex.reference
        if ann.pair == PairType.DOC_GENERATED:
            return ex.document, ex.generated[ann.gen].text
        return ex.reference, ex.generated[ann.gen].text

    @app.get("/corpus")
    def corpus_metadata() -> dict:
        data = require_corpus()
        return {
            "examples": len(data.examples),
            "fingerprint": data.fingerprint,
            "config": data.config,
            "models": data.model_labels(),
        }

    @app.get("/example/{index}")
    def example_detail(index: str) -> dict:
        i, cached = get_example(index)
        ex = cached.example
        return {
            "index": i,
            "id": ex.id,
            "document": _text_payload(ex.document),
            "reference": _text_payload(ex.reference),
            "generated": [{"model": g.model, "text": _text_payload(g.text)} for g in ex.generated],
            "pairs": [{"pair": ann.pair.value, "gen": ann.gen} for ann in cached.pairs],
        }

    @app.get("/example/{index}/alignment")
    def example_alignment(index: str, pair: str, gen: int | None = None) -> dict:
        _, cached = get_example(index)
        ann = get_pair(cached, pair, gen)
        source, summary = pair_sides(cached, ann)
        return _alignment_payload(ann, source, summary)

    @app.get("/example/{index}/hover")
    def example_hover(
        index: str, pair: str, token: int, gen: int | None = None, k: int = Query(DEFAULT_HOVER_K)
    ) -> dict:
        if k < 1:
            raise HTTPException(status_code=400, detail=f"k must be >= 1, got {k}")
        _, cached = get_example(index)
        ann = get_pair(cached, pair, gen)
        source, summary = pair_sides(cached, ann)
        if not (0 <= token < len(summary)):
            raise HTTPException(status_code=404, detail=f"token index {token} out of range")
        row = ann.semantic.rows[token][:k]
        return {
            "token": token,
            "best_score": row[0][1] if row else None,
            "matches": [_match_payload(source, c, s) for c, s in row],
        }

    @app.get("/example/{index}/globalview")
    def example_globalview(index: str, pair: str, gen: int | None = None, buckets: int = 50) -> dict:
        if buckets < 1:
            raise HTTPException(status_code=400, detail=f"buckets must be >= 1, got {buckets}")
        _, cached = get_example(index)
        ann = get_pair(cached, pair, gen)
        source, _ = pair_sides(cached, ann)
        total = len(source)
        effective = min(buckets, total)
        covered = [False] * total
        for match in ann.lexical.matches:
            for span in match.source_spans:
                for i in range(span.start_token, span.end_token):
                    covered[i] = True
        sizes = [0] * effective
        hits = [0] * effective
        best: list[float | None] = [None] * effective
        for i in range(total):
            b = i * effective // total
            sizes[b] += 1
            if covered[i]:
                hits[b] += 1
            score = ann.semantic.source_best[i]
            if score is not None and (best[b] is None or score > best[b]):
                best[b] = score
        return {
            "pair": ann.pair.value,
            "gen": ann.gen,
            "buckets": effective,
            "density": [hits[b] / sizes[b] for b in range(effective)],
            "semantic": best,
        }

    return app


def load_and_create_app(cache_path, allow_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    from .pipeline import read_cache

    return create_app(read_cache(cache_path), allow_origins=allow_origins)
