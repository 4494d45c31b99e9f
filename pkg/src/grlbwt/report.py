"""Stats report formatting and figure rendering."""

from __future__ import annotations

import os

from .pipeline import PipelineStats

COLUMNS = [
    "level",
    "n",
    "sigma",
    "dict_symbols",
    "phrases",
    "pbwt_runs",
    "empty_count",
    "cdict_pairs",
    "bwt_runs",
    "chain_walk_steps",
]


def format_stats_tsv(stats: PipelineStats) -> str:
    """Per-round table plus a summary block, tab-delimited."""
    lines = ["\t".join(COLUMNS)]
    for r in stats.rounds:
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    r.level,
                    r.n,
                    r.sigma,
                    r.dict_symbols,
                    r.phrase_count,
                    r.pbwt_runs,
                    r.empty_count,
                    r.cdict_pairs,
                    r.bwt_runs,
                    r.chain_walk_steps,
                )
            )
        )
    lines.append(f"# h\t{stats.h}")
    lines.append(f"# n\t{stats.n}")
    lines.append(f"# k\t{stats.k}")
    lines.append(f"# r\t{stats.final_runs}")
    lines.append(f"# n/r\t{stats.runs_ratio:.4f}")
    return "\n".join(lines) + "\n"


def render_figures(stats: PipelineStats, out_dir: str, stem: str = "report") -> list[str]:
    """Render per-round size and compression figures as PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    levels = [r.level for r in stats.rounds]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(levels, [r.n for r in stats.rounds], marker="o", label="text length")
    ax1.plot(levels, [max(r.bwt_runs, 1) for r in stats.rounds], marker="s", label="BWT runs")
    ax1.plot(levels, [max(r.pbwt_runs, 1) for r in stats.rounds], marker="^", label="partial BWT runs")
    ax1.set_yscale("log")
    ax1.set_xlabel("round")
    ax1.set_ylabel("count")
    ax1.set_title("per-round sizes")
    ax1.legend(fontsize=8)

    ax2.plot(levels, [max(r.dict_symbols, 1) for r in stats.rounds], marker="o", label="dictionary symbols")
    ax2.plot(levels, [max(r.cdict_pairs, 1) for r in stats.rounds], marker="s", label="compressed pair slots")
    ax2.set_yscale("log")
    ax2.set_xlabel("round")
    ax2.set_ylabel("symbols")
    ax2.set_title(f"dictionary compression (n/r = {stats.runs_ratio:.2f})")
    ax2.legend(fontsize=8)

    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_rounds.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]
