"""Static report rendering: matplotlib figures next to delimited output.

Every figure is written together with a CSV holding the exact counts it
draws, so downstream analysis never has to scrape pixels. Tag-cloud font
sizes scale with the square root of the count to keep long-tail terms
legible.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import aggregate
from .indexing import FilterContext, Index

_CLOUD_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def render_tag_cloud(terms: list[aggregate.TermCount], path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.set_axis_off()
    ax.set_title(title)
    if terms:
        top = terms[0].count
        x, y, row_height = 0.02, 0.88, 0.0
        for i, tc in enumerate(terms):
            size = 9 + 18 * math.sqrt(tc.count / top)
            # crude width estimate keeps the flow layout deterministic
            width = 0.011 * size / 16 * (len(tc.term) + 2)
            if x + width > 0.98:
                x = 0.02
                y -= row_height + 0.03
                row_height = 0.0
            if y < 0.02:
                break
            ax.text(x, y, tc.term, fontsize=size, color=_CLOUD_COLORS[i % len(_CLOUD_COLORS)],
                    transform=ax.transAxes, va="top")
            x += width
            row_height = max(row_height, 0.05 * size / 16)
    else:
        ax.text(0.5, 0.5, "no terms", ha="center", transform=ax.transAxes)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_heat_map(matrix: aggregate.HeatMatrix, path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 6))
    ax.set_title(title)
    if matrix.cells:
        im = ax.imshow(matrix.cells, cmap="YlOrRd", aspect="auto")
        ax.set_xticks(range(len(matrix.x_terms)), matrix.x_terms, rotation=45, ha="right")
        ax.set_yticks(range(len(matrix.y_terms)), matrix.y_terms)
        fig.colorbar(im, ax=ax, label="evidence docs")
    else:
        ax.set_axis_off()
        ax.text(0.5, 0.5, "empty matrix", ha="center", transform=ax.transAxes)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_histogram(buckets: list[tuple[str, int]], path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.set_title(title)
    if buckets:
        labels = [b for b, _ in buckets]
        ax.bar(range(len(buckets)), [n for _, n in buckets], color="#1f77b4")
        ax.set_xticks(range(len(buckets)), labels, rotation=45, ha="right")
        ax.set_ylabel("evidence docs")
    else:
        ax.set_axis_off()
        ax.text(0.5, 0.5, "no dated documents", ha="center", transform=ax.transAxes)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def write_report(
    index: Index,
    ctx: FilterContext,
    out_dir: str | Path,
    cloud_fields: tuple[str, ...] = ("subject", "object", "relation_type", "functional_type"),
    heat_x: str = "subject",
    heat_y: str = "object",
    k: int = 30,
    kx: int = 10,
    ky: int = 10,
    granularity: str = "month",
) -> list[Path]:
    """Render the standard aggregation report; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for field in cloud_fields:
        terms = aggregate.tag_cloud(index, ctx, field, k)
        csv_path = out / f"tagcloud_{field}.csv"
        png_path = out / f"tagcloud_{field}.png"
        write_csv(csv_path, ["term", "count"], [[t.term, t.count] for t in terms])
        render_tag_cloud(terms, png_path, f"Top {field} terms")
        written += [csv_path, png_path]

    matrix = aggregate.heat_map(index, ctx, heat_x, heat_y, kx, ky)
    csv_path = out / f"heatmap_{heat_y}_x_{heat_x}.csv"
    png_path = out / f"heatmap_{heat_y}_x_{heat_x}.png"
    write_csv(
        csv_path,
        [f"{heat_y}\\{heat_x}"] + matrix.x_terms,
        [[y] + row for y, row in zip(matrix.y_terms, matrix.cells)],
    )
    render_heat_map(matrix, png_path, f"{heat_y} x {heat_x} interactions")
    written += [csv_path, png_path]

    buckets = aggregate.date_histogram(index, ctx, granularity)
    csv_path = out / "histogram.csv"
    png_path = out / "histogram.png"
    write_csv(csv_path, ["bucket", "count"], [[b, n] for b, n in buckets])
    render_histogram(buckets, png_path, f"Evidence by publish {granularity}")
    written += [csv_path, png_path]

    m = aggregate.metrics(index, ctx)
    csv_path = out / "metrics.csv"
    write_csv(
        csv_path,
        ["metric", "value"],
        [["evidence_count", m.evidence_count], ["article_count", m.article_count]],
    )
    written.append(csv_path)
    return written
