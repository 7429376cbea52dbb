"""Figures and delimited tables for experiment reports."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (5 ** 0.5 - 1) / 2
STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 5.0 * GOLDEN),
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}

CSV_FIELDS = ("trial", "generator", "n", "k", "epsilon", "body", "method", "outputSize", "sizeRatio",
              "oracleRatio", "valid", "wallTime")


def write_csv(report, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        w.writeheader()
        for rec, t in zip(report.records, report.timings):
            w.writerow({**rec, "wallTime": f"{t:.6f}"})
    return path


def _group(records, key):
    out = {}
    for r in records:
        out.setdefault(key(r), []).append(r)
    return out


def plot_report(report, directory) -> list:
    """Render the suite's figures as PNG files in ``directory``; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    with plt.rc_context(STYLE):
        recs = [r for r in report.records if r.get("sizeRatio") is not None]
        if recs:
            fig, ax = plt.subplots()
            groups = _group(recs, lambda r: f"{r.get('method', '')}/{r.get('body', '')}")
            for label, rs in sorted(groups.items()):
                ax.scatter([r["n"] / r["k"] for r in rs], [r["sizeRatio"] for r in rs], s=10, label=label, alpha=0.8)
            ax.set_xscale("log")
            ax.set_xlabel("n / k")
            ax.set_ylabel("size / (n / k)")
            ax.set_title(f"{report.suite}: size ratio")
            ax.legend(frameon=False)
            written.append(directory / f"{report.suite}-ratio.png")
            fig.savefig(written[-1])
            plt.close(fig)
        sized = [r for r in report.records if r.get("sizeBound")]
        if sized:
            fig, ax = plt.subplots()
            ax.scatter([r["sizeBound"] for r in sized], [r["outputSize"] for r in sized], s=10)
            top = max(r["sizeBound"] for r in sized)
            ax.plot([0, top], [0, top], lw=0.8, color="0.4")
            ax.set_xlabel("size bound")
            ax.set_ylabel("net size")
            ax.set_title(f"{report.suite}: net size against bound")
            written.append(directory / f"{report.suite}-size.png")
            fig.savefig(written[-1])
            plt.close(fig)
        oracle = [r for r in report.records if r.get("oracleRatio") is not None]
        if oracle:
            fig, ax = plt.subplots()
            ax.hist([r["oracleRatio"] for r in oracle], bins=12, color="#4eb3d3")
            ax.set_xlabel("greedy cover / optimal cover")
            ax.set_ylabel("instances")
            written.append(directory / f"{report.suite}-oracle.png")
            fig.savefig(written[-1])
            plt.close(fig)
    return written
