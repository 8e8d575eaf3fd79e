"""SVG barcode rendering."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

DIM_COLORS = ("tab:red", "tab:blue", "tab:green", "tab:purple", "tab:orange", "tab:brown")
MAX_TICK_LABELS = 24


def render_barcode_svg(
    barcodes: Mapping[int, Sequence[tuple]],
    levels: Sequence[Fraction],
    path: str,
    title: Optional[str] = None,
) -> None:
    """One horizontal line per bar, grouped by dimension from the top.

    ``barcodes`` maps a dimension to (birth, death) pairs with ``None`` for
    an unbounded death; empty dimensions are left out.
    """
    plt.rcParams["svg.hashsalt"] = "hammology"
    plt.rcParams["svg.fonttype"] = "none"
    levels = sorted(set(levels))
    top = float(levels[-1]) if levels else 1.0
    right = top * 1.1 if top > 0 else 1.0
    dims = [k for k in sorted(barcodes) if barcodes[k]]
    rows = sum(len(barcodes[k]) for k in dims)
    fig, ax = plt.subplots(figsize=(7, max(2.0, 0.35 * rows + 1.2)))
    y = rows
    for k in dims:
        color = DIM_COLORS[k % len(DIM_COLORS)]
        bars = sorted(barcodes[k], key=lambda b: (b[0], b[1] is None, b[1] or 0))
        for i, (b, d) in enumerate(bars):
            end = right if d is None else float(d)
            ax.hlines(y, float(b), end, colors=color, linewidth=2.5, label=f"dimension {k}" if i == 0 else None)
            if d is None:
                ax.plot([end], [y], marker=">", color=color, markersize=6)
            y -= 1
        y -= 0.5
    ticks = [float(v) for v in levels]
    ax.set_xticks(ticks)
    if len(ticks) <= MAX_TICK_LABELS:
        ax.set_xticklabels([str(v) for v in levels], rotation=45 if len(ticks) > 8 else 0, fontsize=8)
    else:
        ax.set_xticklabels([])
    ax.set_yticks([])
    ax.set_xlim(min(0.0, ticks[0] if ticks else 0.0) - 0.05 * right, right * 1.03)
    ax.set_xlabel("filtration level")
    if title:
        ax.set_title(title)
    if dims:
        ax.legend(loc="lower right", fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
