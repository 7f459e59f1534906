"""Corpus-level score report: a delimited table plus summary figures.

Reads a built cache and writes one row per analysis pair, alongside PNG
figures (quadrant scatter, score distributions, novel-content counts).
"""

from __future__ import annotations

import csv
from pathlib import Path

from .pipeline import CachedCorpus, PairType

CSV_COLUMNS = [
    "example_index",
    "example_id",
    "pair",
    "gen",
    "model",
    "lexical_coverage",
    "bertscore_precision",
    "bertscore_recall",
    "bertscore_f1",
    "rouge1_f1",
    "rouge2_f1",
    "quadrant",
    "novel_ngrams",
]

QUADRANT_CORNERS = {
    "extraction": (1.0, 1.0),
    "abstraction": (0.0, 1.0),
    "hallucination": (0.0, 0.0),
    "misinterpretation": (1.0, 0.0),
}


def iter_rows(corpus: CachedCorpus):
    for i, cached in enumerate(corpus.examples):
        for ann in cached.pairs:
            model = cached.example.generated[ann.gen].model if ann.gen is not None else ""
            yield {
                "example_index": i,
                "example_id": cached.example.id,
                "pair": ann.pair.value,
                "gen": "" if ann.gen is None else ann.gen,
                "model": model,
                "lexical_coverage": f"{ann.lexical_score:.6f}",
                "bertscore_precision": f"{ann.semantic.aggregate.precision:.6f}",
                "bertscore_recall": f"{ann.semantic.aggregate.recall:.6f}",
                "bertscore_f1": f"{ann.semantic.aggregate.f1:.6f}",
                "rouge1_f1": "" if ann.rouge1 is None else f"{ann.rouge1.f1:.6f}",
                "rouge2_f1": "" if ann.rouge2 is None else f"{ann.rouge2.f1:.6f}",
                "quadrant": ann.quadrant.value,
                "novel_ngrams": len(ann.novel.ngrams),
            }


def write_scores(corpus: CachedCorpus, path, delimiter: str = ",") -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, delimiter=delimiter)
        writer.writeheader()
        for row in iter_rows(corpus):
            writer.writerow(row)
    return path


def render_figures(corpus: CachedCorpus, out_dir) -> list[Path]:
    """Render the report figures into ``out_dir`` and return their paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    taxonomy = corpus.config.get("taxonomy", {})
    tau_lex = taxonomy.get("tau_lex", 0.5)
    tau_sem = taxonomy.get("tau_sem", 0.5)

    pair_points: dict[str, list[tuple[float, float]]] = {p.value: [] for p in PairType}
    novel_by_model: dict[str, int] = {}
    for cached in corpus.examples:
        for ann in cached.pairs:
            pair_points[ann.pair.value].append((ann.lexical_score, ann.semantic_score))
            if ann.pair == PairType.DOC_GENERATED and ann.gen is not None:
                model = cached.example.generated[ann.gen].model
                novel_by_model[model] = novel_by_model.get(model, 0) + len(ann.novel.ngrams)

    paths = []

    fig, ax = plt.subplots(figsize=(6, 6))
    for pair, points in pair_points.items():
        if points:
            xs, ys = zip(*points)
            ax.scatter(xs, ys, label=pair, alpha=0.7, s=30)
    ax.axvline(tau_lex, color="grey", linestyle="--", linewidth=1)
    ax.axhline(tau_sem, color="grey", linestyle="--", linewidth=1)
    for label, (cx, cy) in QUADRANT_CORNERS.items():
        ax.annotate(
            label,
            xy=(cx, cy),
            xycoords="axes fraction",
            ha="right" if cx else "left",
            va="top" if cy else "bottom",
            fontsize=9,
            color="dimgrey",
        )
    ax.set_xlabel("lexical coverage")
    ax.set_ylabel("semantic score (f1)")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("Summary behavior quadrants")
    fig.tight_layout()
    scatter_path = out_dir / "quadrant_scatter.png"
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)
    paths.append(scatter_path)

    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    all_points = [pt for pts in pair_points.values() for pt in pts]
    if all_points:
        axes[0].hist([p[0] for p in all_points], bins=20, range=(0, 1), color="steelblue")
        axes[1].hist([p[1] for p in all_points], bins=20, range=(-1, 1), color="indianred")
    axes[0].set_title("lexical coverage")
    axes[1].set_title("semantic score (f1)")
    for ax in axes:
        ax.set_ylabel("pairs")
    fig.tight_layout()
    hist_path = out_dir / "score_histograms.png"
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)
    paths.append(hist_path)

    fig, ax = plt.subplots(figsize=(6, 4))
    if novel_by_model:
        models = sorted(novel_by_model)
        ax.bar(models, [novel_by_model[m] for m in models], color="darkseagreen")
        ax.tick_params(axis="x", rotation=30)
    ax.set_ylabel("novel content n-grams vs document")
    ax.set_title("Unsupported content by model")
    fig.tight_layout()
    novel_path = out_dir / "novel_content.png"
    fig.savefig(novel_path, dpi=150)
    plt.close(fig)
    paths.append(novel_path)

    return paths


def write_report(corpus: CachedCorpus, out_dir, delimiter: str = ",") -> list[Path]:
    """The full report: scores table plus figures, all under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = "tsv" if delimiter == "\t" else "csv"
    paths = [write_scores(corpus, out_dir / f"scores.{suffix}", delimiter=delimiter)]
    paths.extend(render_figures(corpus, out_dir))
    return paths
