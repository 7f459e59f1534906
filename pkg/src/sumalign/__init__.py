"""Lexical and semantic alignment analysis for abstractive summarization output."""

from .lexalign import AlignConfig, LexicalAlignment, LexMatch, align_lexical, build_ngram_index, coverage_fraction
from .metrics import NovelContentReport, QuadrantLabel, RougeTriple, classify_quadrant, novel_ngrams, rouge_n
from .pipeline import (
    CachedCorpus,
    CachedExample,
    ExampleRecord,
    PairType,
    PipelineConfig,
    build_cache,
    enumerate_pairs,
    load_jsonl,
    read_cache,
)
from .semalign import (
    BERTScoreTriple,
    SemanticAlignment,
    SimilarityMatrix,
    bertscore,
    best_matches,
    cosine,
    load_contextual_embeddings,
    load_static_embeddings,
    semantic_alignment,
    similarity_matrix,
)
from .textmodel import Span, StopList, Token, TokenizedText, is_stopword, load_stoplist, normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "AlignConfig",
    "BERTScoreTriple",
    "CachedCorpus",
    "CachedExample",
    "ExampleRecord",
    "LexMatch",
    "LexicalAlignment",
    "NovelContentReport",
    "PairType",
    "PipelineConfig",
    "QuadrantLabel",
    "RougeTriple",
    "SemanticAlignment",
    "SimilarityMatrix",
    "Span",
    "StopList",
    "Token",
    "TokenizedText",
    "align_lexical",
    "bertscore",
    "best_matches",
    "build_cache",
    "build_ngram_index",
    "classify_quadrant",
    "cosine",
    "coverage_fraction",
    "enumerate_pairs",
    "is_stopword",
    "load_contextual_embeddings",
    "load_jsonl",
    "load_static_embeddings",
    "load_stoplist",
    "normalize",
    "novel_ngrams",
    "read_cache",
    "rouge_n",
    "semantic_alignment",
    "similarity_matrix",
    "tokenize",
]
