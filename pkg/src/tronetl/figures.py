"""Render stat results as bar-chart figures next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _shorten(label: str, limit: int = 24) -> str:
    label = str(label)
    return label if len(label) <= limit else label[: limit - 1] + "…"


def render_bar_chart(stat_name: str, columns: list[str], rows: list[dict],
                     out_path) -> Path:
    """Horizontal bar chart: first column as labels, last numeric column as
    values. Returns the written path."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    label_col = columns[0]
    value_col = columns[-1]
    labels = [_shorten(r[label_col]) for r in rows]
    values = [r[value_col] for r in rows]

    height = max(2.5, 0.28 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(10, height))
    positions = range(len(rows))
    ax.barh(positions, values, color="#3572b0")
    ax.set_yticks(list(positions))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()  # largest on top
    ax.set_xlabel(value_col)
    ax.set_title(stat_name.replace("_", " "))
    ax.grid(axis="x", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
