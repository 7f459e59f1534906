"""Release acceptance suite.

Each test exercises one acceptance criterion end to end and prints a single
verdict line, so `pytest tests/test_acceptance.py -s` reads as a checklist.
"""

import json
import os
import random
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from oracles import oracle_maximal_matches, oracle_rouge
from sumalign import (
    AlignConfig,
    PipelineConfig,
    QuadrantLabel,
    align_lexical,
    bertscore,
    build_cache,
    classify_quadrant,
    load_jsonl,
    read_cache,
    rouge_n,
    similarity_matrix,
    tokenize,
)
from sumalign.pipeline import PairType, annotate_example
from sumalign.semalign import ContextualStore, SimilarityMatrix, StaticEmbeddings, cosine, semantic_alignment
from sumalign.server import create_app

ALPHABET = ["zeph", "quill", "brox", "klim", "vant", "jorn", "wex", "pyre"]  # 8 symbols


def verdict(name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[ACCEPTANCE] {status} {name}{suffix}")
    assert passed, f"{name}{suffix}"


def random_text(rng: random.Random, max_len: int, min_len: int = 0):
    return tokenize(" ".join(rng.choices(ALPHABET, k=rng.randint(min_len, max_len))))


def as_tuples(matches):
    return [
        (m.summary_span.start_token, m.summary_span.end_token, [(s.start_token, s.end_token) for s in m.source_spans])
        for m in matches
    ]


def injective_provider(words, dim=12, seed=0):
    rng = np.random.default_rng(seed)
    vectors = {}
    for w in sorted(set(words)):
        vec = rng.normal(size=dim)
        vectors[w] = vec / np.linalg.norm(vec)
    return StaticEmbeddings(vectors)


def test_lexical_oracle_equivalence():
    rng = random.Random(0xACCE97)
    cfg = AlignConfig()  # content-only alphabet keeps the stopword filter inert
    cases = 1000
    start = time.perf_counter()
    for _ in range(cases):
        source = random_text(rng, 50)
        summary = random_text(rng, 50)
        got = as_tuples(align_lexical(source, summary, cfg).matches)
        want = oracle_maximal_matches(list(source.norms()), list(summary.norms()))
        assert got == want
    elapsed = time.perf_counter() - start
    verdict(
        "lexical alignment equals brute-force maximal-substring oracle",
        elapsed < 30.0,
        f"{cases} cases exact in {elapsed:.1f}s",
    )


def test_rouge_oracle_equivalence():
    rng = random.Random(0xB0B)
    cases = 1000
    worst = 0.0
    for _ in range(cases):
        n = rng.randint(1, 3)
        ref = random_text(rng, 30, min_len=n)
        gen = random_text(rng, 30, min_len=n)
        triple = rouge_n(ref, gen, n)
        p, r, f1 = oracle_rouge(list(ref.norms()), list(gen.norms()), n)
        worst = max(worst, abs(triple.precision - p), abs(triple.recall - r), abs(triple.f1 - f1))
        assert worst <= 1e-12
    verdict("clipped n-gram overlap equals exhaustive counting oracle", True, f"{cases} cases, max |delta| {worst:.2e}")


def test_semantic_self_consistency():
    rng = random.Random(0x5EED)
    vocab = [f"w{i}" for i in range(40)]
    provider = injective_provider(vocab, seed=9)
    worst = 0.0
    for _ in range(100):
        text = tokenize(" ".join(rng.choices(vocab, k=rng.randint(1, 30))))
        triple = bertscore(similarity_matrix(text, text, provider))
        worst = max(worst, abs(triple.precision - 1), abs(triple.recall - 1), abs(triple.f1 - 1))
        assert worst < 1e-9

    nprng = np.random.default_rng(4)
    scale_worst = 0.0
    for _ in range(200):
        u = nprng.normal(size=8)
        v = nprng.normal(size=8)
        c = float(nprng.uniform(1e-3, 1e3))
        scale_worst = max(scale_worst, abs(cosine(c * u, v) - cosine(u, v)))
        assert scale_worst < 1e-9
    verdict(
        "self-comparison scores (1,1,1) and cosine is scale invariant",
        True,
        f"max self-score error {worst:.1e}, max scale drift {scale_worst:.1e}",
    )


def test_hand_matrix_aggregation():
    matrix = SimilarityMatrix(
        scores=np.array([[1.0, 0.0], [0.0, 0.5]]),
        row_mask=np.array([False, False]),
        col_mask=np.array([False, False]),
    )
    triple = bertscore(matrix)
    verdict(
        "hand matrix [[1,0],[0,0.5]] aggregates to exactly 0.75/0.75/0.75",
        (triple.precision, triple.recall, triple.f1) == (0.75, 0.75, 0.75),
        f"got ({triple.precision}, {triple.recall}, {triple.f1})",
    )


def test_taxonomy_mapping():
    labels = [
        classify_quadrant(0.9, 0.9, 0.5, 0.5),
        classify_quadrant(0.1, 0.9, 0.5, 0.5),
        classify_quadrant(0.1, 0.1, 0.5, 0.5),
        classify_quadrant(0.9, 0.1, 0.5, 0.5),
    ]
    expected = [
        QuadrantLabel.EXTRACTION,
        QuadrantLabel.ABSTRACTION,
        QuadrantLabel.HALLUCINATION,
        QuadrantLabel.MISINTERPRETATION,
    ]
    verdict(
        "score probes map to the four behavior quadrants in order",
        labels == expected,
        ", ".join(l.value for l in labels),
    )


def test_case_study_fixture(fixture_cached):
    config = fixture_cached.config
    tau_sem = config["taxonomy"]["tau_sem"]
    coast = fixture_cached.examples[0]
    inserted = {
        "breeze-base": {"david", "wheeler"},
        "drift-xl": {"maren", "callow"},
    }
    ok = True
    details = []
    for gen_index, gen in enumerate(coast.example.generated):
        if gen.model not in inserted:
            continue
        ann = coast.annotations(PairType.DOC_GENERATED, gen_index)
        novel = ann.novel.token_set()
        ok &= novel == inserted[gen.model]
        ok &= ann.semantic_score < tau_sem
        ok &= ann.quadrant == QuadrantLabel.HALLUCINATION
        details.append(f"{gen.model}: novel={sorted(novel)}, sem={ann.semantic_score:.3f}, {ann.quadrant.value}")
    verdict(
        "case-study summaries flag exactly the inserted names and land in the hallucination quadrant",
        ok,
        "; ".join(details),
    )


def _synthetic_corpus(path: Path, examples: int, seed: int) -> None:
    rng = random.Random(seed)
    vocab = [f"word{i:03d}" for i in range(200)]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(examples):
            record = {
                "id": f"synth-{i}",
                "document": " ".join(rng.choices(vocab, k=800)),
                "reference": " ".join(rng.choices(vocab, k=40)),
                "generated": [
                    {"model": f"m{k}", "text": " ".join(rng.choices(vocab, k=40))} for k in range(4)
                ],
            }
            fh.write(json.dumps(record) + "\n")


def test_pipeline_determinism_and_roundtrip(tmp_path, fixture_corpus, fixture_provider):
    config = PipelineConfig()

    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    build_cache(fixture_corpus, fixture_provider, config, out1)
    build_cache(fixture_corpus, fixture_provider, config, out2)
    identical = out1.read_bytes() == out2.read_bytes()

    loaded = read_cache(out1)
    roundtrip_ok = len(loaded.examples) == len(fixture_corpus)
    for example, cached in zip(fixture_corpus, loaded.examples):
        roundtrip_ok &= cached == annotate_example(example, fixture_provider, config)

    corpus_path = tmp_path / "synthetic.jsonl"
    _synthetic_corpus(corpus_path, 1000, seed=77)
    corpus = load_jsonl(corpus_path)
    vocab = [f"word{i:03d}" for i in range(200)]
    rng = np.random.default_rng(13)
    provider = StaticEmbeddings({w: rng.normal(size=16) for w in vocab})
    start = time.perf_counter()
    report = build_cache(corpus, provider, config, tmp_path / "synthetic.cache.jsonl", jobs=1)
    elapsed = time.perf_counter() - start
    throughput_ok = report.written == 1000 and not report.errors and elapsed < 120.0

    verdict(
        "cache builds are byte-deterministic, lossless on reload, and fast enough",
        identical and roundtrip_ok and throughput_ok,
        f"determinism={identical}, roundtrip={roundtrip_ok}, 1000 examples in {elapsed:.1f}s",
    )


def test_server_consistency(fixture_cached):
    client = TestClient(create_app(fixture_cached))
    checked = 0
    consistent = True
    for i, cached in enumerate(fixture_cached.examples):
        for ann in cached.pairs:
            params = {"pair": ann.pair.value}
            if ann.gen is not None:
                params["gen"] = ann.gen
            alignment = client.get(f"/example/{i}/alignment", params=params).json()
            for t, row in enumerate(alignment["semantic"]["rows"]):
                hover = client.get(f"/example/{i}/hover", params={**params, "token": t}).json()
                consistent &= hover["best_score"] == row["best"]
                checked += 1

    codes_ok = (
        client.get("/example/abc").status_code == 400
        and client.get("/example/99").status_code == 404
        and client.get("/example/0/alignment", params={"pair": "bogus"}).status_code == 400
        and client.get("/example/0/alignment", params={"pair": "doc_generated", "gen": 9}).status_code == 404
        and client.get("/example/0/hover", params={"pair": "doc_generated", "gen": 0, "token": 999}).status_code == 404
        and client.get("/example/0/globalview", params={"pair": "doc_reference", "buckets": 0}).status_code == 400
    )
    verdict(
        "hover scores match alignment payloads and invalid requests get 4xx",
        consistent and codes_ok,
        f"{checked} hover/alignment pairs compared",
    )


REFERENCE_FIXTURE_ENV = "SUMALIGN_REFERENCE_FIXTURE_DIR"


def test_reference_model_scores_fixture_gated():
    """Optional: checks recorded hover scores against vectors from the external
    contextual model (corpus.jsonl + contextual.jsonl in the env-named directory)."""
    root = os.environ.get(REFERENCE_FIXTURE_ENV)
    if not root:
        print(f"[ACCEPTANCE] SKIP reference-model hover scores ({REFERENCE_FIXTURE_ENV} not set)")
        pytest.skip("reference contextual fixture not supplied")
    root = Path(root)
    corpus = load_jsonl(root / "corpus.jsonl")
    store = ContextualStore.load(root / "contextual.jsonl")

    man_scores: list[tuple[float, str]] = []
    david_scores: list[tuple[float, str]] = []
    for example in corpus:
        provider = store.for_example(example)
        for gen in example.generated:
            sa = semantic_alignment(example.reference, gen.text, provider)
            for t, token in enumerate(gen.text.tokens):
                if token.norm not in ("man", "david") or not sa.rows[t]:
                    continue
                best_col, best = sa.rows[t][0]
                target = example.reference.tokens[best_col].norm
                if token.norm == "man":
                    man_scores.append((best, target))
                else:
                    david_scores.append((best, target))

    ok = (
        len(man_scores) >= 2
        and len(david_scores) >= 1
        and abs(man_scores[0][0] - 0.21) <= 0.01
        and man_scores[0][1] == "timothy"
        and abs(man_scores[1][0] - 0.02) <= 0.01
        and abs(david_scores[0][0] - 0.28) <= 0.01
        and david_scores[0][1] == "timothy"
    )
    verdict(
        "reference-model hover scores reproduce the recorded values",
        ok,
        f"man={man_scores[:2]}, david={david_scores[:1]}",
    )
