"""Summary figure for a verification run (pass/fail and timing per check)."""

from __future__ import annotations

from typing import Sequence

from .report import VerificationReport


def render_report_figure(reports: Sequence[VerificationReport], path: str) -> None:
    """Horizontal bar chart of per-check runtime, colored by outcome."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.check_id for r in reports]
    times = [max(r.elapsed, 1e-4) for r in reports]
    colors = ["#2e7d32" if r.passed else "#c62828" for r in reports]

    height = max(2.5, 0.35 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(8, height))
    ypos = range(len(reports))
    ax.barh(ypos, times, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("elapsed [s]")
    ax.set_xscale("log")
    n_pass = sum(r.passed for r in reports)
    ax.set_title(f"identity suite: {n_pass}/{len(reports)} passed")
    for y, r in zip(ypos, reports):
        ax.text(
            max(r.elapsed, 1e-4),
            y,
            " pass" if r.passed else " FAIL",
            va="center",
            fontsize=7,
            color="#444444",
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
