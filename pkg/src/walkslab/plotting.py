"""Figure rendering for exported tables.

Each export can drop a PNG next to its CSV: walk and rho-phi tables render
as value heatmaps over the grid indices, the xyz table as a bar chart of
attained colors.  Infinite cell values are masked.
"""
from __future__ import annotations

from collections import Counter
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _cell_value(text: str) -> float:
    if not text:
        return float("nan")
    try:
        return float(int(text))
    except ValueError:
        return float("nan")  # infinite ordinal values are masked


def render_matrix_png(path: str, title: str, axis_labels: Sequence[str],
                      matrix: List[List[float]]) -> None:
    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.imshow(matrix, origin="lower", cmap="viridis", interpolation="nearest")
    ax.set_title(title)
    ax.set_xlabel("beta (grid index)")
    ax.set_ylabel("alpha (grid index)")
    step = max(1, len(axis_labels) // 12)
    ticks = list(range(0, len(axis_labels), step))
    ax.set_xticks(ticks)
    ax.set_xticklabels([axis_labels[i] for i in ticks], rotation=90, fontsize=6)
    ax.set_yticks(ticks)
    ax.set_yticklabels([axis_labels[i] for i in ticks], fontsize=6)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_walks_png(path: str, grid_labels: Sequence[str], rows) -> None:
    n = len(grid_labels)
    matrix = [[float("nan")] * n for _ in range(n)]
    for idx, row in enumerate(rows):
        i, j = divmod(idx, n)
        matrix[i][j] = _cell_value(row[2])
    render_matrix_png(path, "walk length rho2", grid_labels, matrix)


def render_rhophi_png(path: str, grid_labels: Sequence[str], rows) -> None:
    matrix = [[_cell_value(cell) for cell in row[1:]] for row in rows]
    render_matrix_png(path, "rho_phi values", grid_labels, matrix)


def render_xyz_png(path: str, rows) -> None:
    counts = Counter(row[4] or "-" for row in rows)
    labels = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(labels)), [counts[k] for k in labels], color="#33657a")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_xlabel("color index")
    ax.set_ylabel("chains")
    ax.set_title("triple colors over the family")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
