"""Optional matplotlib renderings of a report, written next to the CSV output."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .harness import ExperimentReport  # noqa: E402

_COLORS = {"s1": "tab:blue", "s2": "tab:orange", "s3": "tab:green",
           "s4": "tab:red", "gasc": "tab:purple", "gdesc": "tab:brown"}


def _curve_figure(report: ExperimentReport, x_attr: str, xlabel: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in report.strategies:
        curve = report.curves[s]
        ax.plot(getattr(curve, x_attr), curve.mean_found,
                label=s.upper(), color=_COLORS.get(s))
    ax.set_xlabel(xlabel)
    ax.set_ylabel("mean friend IDs found")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_figures(report: ExperimentReport, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [outdir / "curves_requests.png", outdir / "curves_time.png",
             outdir / "victims_reached.png"]
    _curve_figure(report, "requests", "requests issued", paths[0])
    _curve_figure(report, "times", "simulated time (s)", paths[1])

    fig, ax = plt.subplots(figsize=(5, 4))
    names = report.strategies
    ax.bar(range(len(names)), [report.victims_reached[s] for s in names],
           color=[_COLORS.get(s) for s in names])
    ax.set_xticks(range(len(names)), [s.upper() for s in names])
    ax.set_ylabel("victims with at least one friend found")
    fig.tight_layout()
    fig.savefig(paths[2], dpi=120)
    plt.close(fig)
    return paths
