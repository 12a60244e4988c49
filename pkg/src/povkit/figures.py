"""Matplotlib figure rendering for the report pipeline.

Every figure is written to a file next to its tidy CSV twin; the CSV is
the source of truth, the PNG a convenience rendering. Uses the Agg
backend with pinned rcParams so identical inputs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

_SCENARIO_STYLE = {
    "s1_growth": ("#1f77b4", "growth shock only"),
    "s2_gini_up": ("#d62728", "growth + inequality up"),
    "s3_inclusion_up": ("#2ca02c", "growth + inclusion up"),
}


def _new_figure(ncols: int = 1, width: float = 6.0, height: float = 4.0):
    fig, axes = plt.subplots(1, ncols, figsize=(width * ncols, height))
    return fig, axes


def _save(fig, path: str | Path) -> None:
    fig.savefig(Path(path), format="png", bbox_inches="tight",
                metadata={"Software": "povkit"})
    plt.close(fig)


def inclusion_scatter(rows, path: str | Path) -> None:
    """Two panels: headcount vs inclusion index, Gini vs inclusion index.

    ``rows`` is an iterable of (fii, headcount, gini) triples.
    """
    rows = list(rows)
    fii = [r[0] for r in rows]
    headcount = [r[1] for r in rows]
    gini = [r[2] for r in rows]
    with plt.rc_context(_RC):
        fig, (ax1, ax2) = _new_figure(ncols=2, width=4.5, height=3.5)
        ax1.scatter(fii, headcount, s=8, alpha=0.5, color="#1f77b4")
        ax1.set_xlabel("Financial inclusion index")
        ax1.set_ylabel("Poverty headcount")
        ax1.set_title("Panel A: poverty")
        ax2.scatter(fii, gini, s=8, alpha=0.5, color="#d62728")
        ax2.set_xlabel("Financial inclusion index")
        ax2.set_ylabel("Gini")
        ax2.set_title("Panel B: inequality")
        _save(fig, path)


def coefficient_plot(items, path: str | Path, title: str = "") -> None:
    """Point estimates with confidence whiskers, one row per term.

    ``items`` is an iterable of (label, estimate, ci_low, ci_high).
    """
    items = list(items)
    labels = [it[0] for it in items]
    est = [it[1] for it in items]
    lo = [it[1] - it[2] for it in items]
    hi = [it[3] - it[1] for it in items]
    positions = range(len(items))
    with plt.rc_context(_RC):
        fig, ax = _new_figure(width=5.5, height=1.0 + 0.7 * len(items))
        ax.errorbar(est, positions, xerr=[lo, hi], fmt="o", color="#1f77b4",
                    ecolor="#1f77b4", capsize=3)
        ax.axvline(0.0, color="0.4", linewidth=0.8)
        ax.set_yticks(list(positions))
        ax.set_yticklabels(labels)
        ax.invert_yaxis()
        ax.set_xlabel("Marginal effect on poverty change")
        if title:
            ax.set_title(title)
        _save(fig, path)


def interaction_profile(grid, path: str | Path, moderator_label: str,
                        effect_label: str) -> None:
    """Marginal-effect line with a confidence band over a moderator grid.

    ``grid`` is an iterable of (moderator_value, estimate, ci_low, ci_high).
    """
    grid = list(grid)
    x = [g[0] for g in grid]
    est = [g[1] for g in grid]
    lo = [g[2] for g in grid]
    hi = [g[3] for g in grid]
    with plt.rc_context(_RC):
        fig, ax = _new_figure(width=5.5, height=4.0)
        ax.plot(x, est, color="#1f77b4")
        ax.fill_between(x, lo, hi, color="#1f77b4", alpha=0.2, linewidth=0)
        ax.axhline(0.0, color="0.4", linewidth=0.8)
        ax.set_xlabel(moderator_label)
        ax.set_ylabel(effect_label)
        _save(fig, path)


def global_paths(series, path: str | Path, title: str = "") -> None:
    """Poverty-rate paths per scenario.

    ``series`` maps scenario name -> iterable of (year, rate).
    """
    with plt.rc_context(_RC):
        fig, ax = _new_figure(width=5.5, height=4.0)
        for name in sorted(series):
            color, label = _SCENARIO_STYLE.get(name, ("0.3", name))
            points = sorted(series[name])
            ax.plot([p[0] for p in points], [p[1] for p in points],
                    marker="o", color=color, label=label)
        ax.set_xlabel("Year")
        ax.set_ylabel("Poverty headcount rate")
        ax.xaxis.set_major_locator(matplotlib.ticker.MaxNLocator(integer=True))
        ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        _save(fig, path)
