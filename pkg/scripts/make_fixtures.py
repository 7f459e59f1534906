"""Regenerate the bundled case-study fixtures.

Writes fixtures/case_study.jsonl and fixtures/static_vectors.txt. The vectors
are constructed geometrically over a shared topic axis plus one identity axis
per word, so pairwise cosines are exact by design:

  ordinary vs ordinary        0.60
  paraphrase vs its target    0.85
  inserted name vs ordinary  -0.41
  inserted name vs name       0.28

That makes verbatim copies score high, paraphrases score high, and summaries
built around unsupported names score low, with wide margins around the 0.5
quadrant thresholds.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from sumalign.textmodel import tokenize

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

EXAMPLES = [
    {
        "id": "coast-letter",
        "document": (
            "In a letter from our travel desk, a columnist reflects on the silence of the "
            "northern coast. The writer describes empty harbours, shuttered inns, and the "
            "slow return of seabirds after winter. Local fishermen say the season will be "
            "short this year."
        ),
        "reference": "Columnist Timothy Winslow reflects on the silence of the northern coast.",
        "generated": [
            {
                "model": "anchor-large",
                "text": (
                    "The writer describes empty harbours, shuttered inns, and the slow "
                    "return of seabirds after winter."
                ),
            },
            {"model": "breeze-base", "text": "David Wheeler reflects."},
            {
                "model": "current-small",
                "text": "A journalist recalls quiet harbour towns waiting for spring.",
            },
            {"model": "drift-xl", "text": "Maren Callow reflects."},
        ],
    },
    {
        "id": "harbour-festival",
        "document": (
            "The harbour festival returned to Brindle Cove on Saturday after a three year "
            "pause. Volunteers strung lanterns along the quay, and the evening ended with a "
            "parade of small boats. Organisers said attendance was the highest in a decade, "
            "though the weather stayed cold. A local choir performed on the quay at dusk."
        ),
        "reference": (
            "The harbour festival returned to Brindle Cove and ended with a parade of small boats."
        ),
        "generated": [
            {
                "model": "anchor-large",
                "text": (
                    "Volunteers strung lanterns along the quay, and the evening ended with "
                    "a parade of small boats."
                ),
            },
            {
                "model": "breeze-base",
                "text": "Lantern displays and a boat procession marked the festival's return.",
            },
        ],
    },
]

# Paraphrase word -> the document word it should sit close to.
PARAPHRASES = {
    "journalist": "columnist",
    "recalls": "reflects",
    "quiet": "silence",
    "towns": "inns",
    "spring": "winter",
    "waiting": "pause",
    "harbour": "harbours",
    "lantern": "lanterns",
    "boat": "boats",
    "procession": "parade",
    "displays": "strung",
    "marked": "ended",
    "return": "returned",
}

# Tokens that play the role of inserted names in the case study.
NAMES = {"timothy", "winslow", "david", "wheeler", "maren", "callow"}

BASE_SHARE = 0.6  # ordinary-vs-ordinary cosine
PARA_COS = 0.85  # paraphrase-vs-target cosine
NAME_COS = 0.28  # name-vs-name cosine


def collect_vocab() -> list[str]:
    vocab: set[str] = set()
    for example in EXAMPLES:
        texts = [example["document"], example["reference"]]
        texts.extend(entry["text"] for entry in example["generated"])
        for text in texts:
            for token in tokenize(text).tokens:
                if not token.is_punct:
                    vocab.add(token.norm)
    return sorted(vocab)


def build_vectors(vocab: list[str]) -> dict[str, list[float]]:
    axis = {word: i + 1 for i, word in enumerate(vocab)}
    dim = len(vocab) + 1
    c0 = math.sqrt(BASE_SHARE)
    s0 = math.sqrt(1.0 - BASE_SHARE)
    c_para = (PARA_COS - BASE_SHARE) / (1.0 - BASE_SHARE)
    s_para = math.sqrt(1.0 - c_para * c_para)
    c_name = math.sqrt(NAME_COS)
    s_name = math.sqrt(1.0 - NAME_COS)

    vectors: dict[str, list[float]] = {}
    for word in vocab:
        vec = [0.0] * dim
        if word in NAMES:
            vec[0] = -c_name
            vec[axis[word]] = s_name
        elif word in PARAPHRASES:
            target = PARAPHRASES[word]
            vec[0] = c0
            vec[axis[target]] = s0 * c_para
            vec[axis[word]] = s0 * s_para
        else:
            vec[0] = c0
            vec[axis[word]] = s0
        vectors[word] = vec
    return vectors


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    corpus_path = FIXTURES / "case_study.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for example in EXAMPLES:
            fh.write(json.dumps(example, ensure_ascii=False) + "\n")

    vocab = collect_vocab()
    missing_targets = set(PARAPHRASES.values()) - set(vocab)
    if missing_targets:
        raise SystemExit(f"paraphrase targets missing from corpus vocabulary: {sorted(missing_targets)}")
    vectors = build_vectors(vocab)
    vectors_path = FIXTURES / "static_vectors.txt"
    with open(vectors_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vocab)} {len(vocab) + 1}\n")
        for word in vocab:
            values = " ".join(f"{v:.10g}" for v in vectors[word])
            fh.write(f"{word} {values}\n")

    print(f"wrote {corpus_path}")
    print(f"wrote {vectors_path} ({len(vocab)} words, dim {len(vocab) + 1})")


if __name__ == "__main__":
    main()
