"""Success-rate figure for experiment sweeps."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_success(rows: Sequence[dict], path: Path) -> Path:
    """One line per strategy: fraction of exact recoveries against the budget fraction."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for strategy in dict.fromkeys(r["strategy"] for r in rows):
        pts = [(float(r["budget_fraction"]), int(r["successes"]) / int(r["trials"]))
               for r in rows if r["strategy"] == strategy]
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=strategy)
    if rows:
        ax.set_title(f"{rows[0]['regime']}: {rows[0]['params']}", fontsize=8)
    ax.set_xlabel("edit budget / block length")
    ax.set_ylabel("exact recovery rate")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return Path(path)
