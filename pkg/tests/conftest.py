import sys
from pathlib import Path

import pytest

from sumalign import PipelineConfig, build_cache, load_jsonl, load_static_embeddings, read_cache

sys.path.insert(0, str(Path(__file__).resolve().parent))

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_jsonl(FIXTURES / "case_study.jsonl")


@pytest.fixture(scope="session")
def fixture_provider():
    return load_static_embeddings(FIXTURES / "static_vectors.txt")


@pytest.fixture(scope="session")
def fixture_cache_path(tmp_path_factory, fixture_corpus, fixture_provider):
    path = tmp_path_factory.mktemp("cache") / "case_study.cache.jsonl"
    report = build_cache(fixture_corpus, fixture_provider, PipelineConfig(), path)
    assert not report.errors
    return path


@pytest.fixture(scope="session")
def fixture_cached(fixture_cache_path):
    return read_cache(fixture_cache_path)
