"""Render simulation CSV output as error-rate curves or coefficient bar charts.

The input is the simulator's delimited output: a header row naming the
columns, then one row per run. Everything here is file-in/file-out; the only
coupling to the simulator is that CSV schema.

The virtual column channel_eps is derived on the fly from the channel column
(the mean crossover rate of the mixture), so curves can put the noise level
on the x axis without the simulator writing a redundant column.
"""

import csv
from dataclasses import dataclass
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

__all__ = [
    "CurveSpec",
    "PlotError",
    "channel_mean_eps",
    "load_rows",
    "column",
    "plot_curves",
    "plot_bars",
]

__version__ = "0.1.0"


class PlotError(ValueError):
    """Raised when the input table cannot back the requested plot."""


@dataclass(frozen=True)
class CurveSpec:
    """What to plot: input table, column roles, scale, and output path."""

    path: str
    x: str = "channel_eps"
    y: str = "p_hat"
    group: Optional[str] = None
    logy: bool = False
    out: str = "curve.png"


def channel_mean_eps(spec: str) -> float:
    """Mean crossover rate of a channel spec string.

    Accepts the two forms the simulator writes: "bsc:EPS" and
    "bms:P@EPS,P@EPS,..." where the probabilities sum to one.
    """
    kind, _, rest = spec.partition(":")
    try:
        if kind == "bsc" and rest:
            return float(rest)
        if kind == "bms" and rest:
            total = 0.0
            for part in rest.split(","):
                p, sep, e = part.partition("@")
                if not sep:
                    raise ValueError(part)
                total += float(p) * float(e)
            return total
    except ValueError:
        pass
    raise PlotError(f"cannot read a crossover rate out of channel spec {spec!r}")


def load_rows(path: str) -> List[Dict[str, str]]:
    """Read the CSV into dict rows, failing on tables with no data rows."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise PlotError(f"{path} has no data rows")
    return rows


def column(rows: List[Dict[str, str]], name: str) -> List[str]:
    """One column as strings, deriving channel_eps from channel if needed."""
    if name not in rows[0]:
        if name == "channel_eps" and "channel" in rows[0]:
            return [str(channel_mean_eps(row["channel"])) for row in rows]
        raise PlotError(f"column {name!r} not in CSV header")
    return [row[name] for row in rows]


def plot_curves(spec: CurveSpec) -> Dict[str, int]:
    """Write one line per group to spec.out and return per-group point counts.

    Rows are sorted by the x column inside each group. When the table carries
    ci_low and ci_high columns each line gets a shaded band whose bounds are
    those values, passed through untouched.
    """
    rows = load_rows(spec.path)
    xs = [float(v) for v in column(rows, spec.x)]
    ys = [float(v) for v in column(rows, spec.y)]
    groups = column(rows, spec.group) if spec.group else ["all"] * len(rows)
    has_ci = "ci_low" in rows[0] and "ci_high" in rows[0]

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    counts: Dict[str, int] = {}
    for label in sorted(set(groups)):
        picked = sorted((i for i, g in enumerate(groups) if g == label),
                        key=lambda i: xs[i])
        gx = [xs[i] for i in picked]
        gy = [ys[i] for i in picked]
        ax.plot(gx, gy, marker="o", label=label)
        if has_ci:
            lo = [float(rows[i]["ci_low"]) for i in picked]
            hi = [float(rows[i]["ci_high"]) for i in picked]
            ax.fill_between(gx, lo, hi, alpha=0.2)
        counts[label] = len(picked)
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    if spec.group is not None:
        ax.legend(title=spec.group)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150, metadata={"Software": "rmplots"})
    plt.close(fig)
    return counts


def plot_bars(spec: CurveSpec) -> Dict[str, int]:
    """Write a bar chart (one bar per row, labelled by the x column) and
    return the bar count under the single group key "all"."""
    rows = load_rows(spec.path)
    labels = column(rows, spec.x)
    ys = [float(v) for v in column(rows, spec.y)]

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.bar(range(len(ys)), ys)
    ax.set_xticks(range(len(ys)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150, metadata={"Software": "rmplots"})
    plt.close(fig)
    return {"all": len(ys)}
