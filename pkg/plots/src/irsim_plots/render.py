"""Render the three figure reproductions from sweep CSVs.

Input is the simulator's CSV schema (scheme, metric, alpha_c, snr_db,
mean_bpcu, stderr_bpcu, trials). One axes per figure: SNR in dB against
rate in bpcu, one labeled curve per (scheme, metric, alpha_c) group, a
dashed threshold line on the common-rate figure, and error bars at
+-2 standard errors wherever they would be visible.
"""

import csv
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ["scheme", "metric", "alpha_c", "snr_db", "mean_bpcu", "stderr_bpcu", "trials"]
FIGURE_IDS = ("fig2", "fig3", "fig4")
ERROR_BAR_FLOOR = 0.01  # bpcu; below this the bars would just clutter

# stable hash salt so SVG output is reproducible across runs
plt.rcParams["svg.hashsalt"] = "irsim-plots"


class SchemaError(Exception):
    """The CSV columns do not match the simulator schema."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    csv_path: str
    output_path: str
    threshold_bpcu: float = 4.0

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure {self.figure_id!r}, expected one of {FIGURE_IDS}")


@dataclass(frozen=True)
class RenderResult:
    """Self-report of what was drawn, for checks and logging."""

    curves: int
    threshold_line: bool
    output_path: str
    xlabel: str
    ylabel: str


def load_rows(csv_path):
    """Parse and schema-check a sweep CSV; returns a list of row dicts."""
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError("empty file: expected the sweep CSV header")
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"missing column {missing[0]!r}")
        if header != REQUIRED_COLUMNS:
            extra = [c for c in header if c not in REQUIRED_COLUMNS]
            if extra:
                raise SchemaError(f"unexpected column {extra[0]!r}")
            raise SchemaError(f"columns out of order: {header}")
        rows = []
        for line_no, record in enumerate(reader, start=2):
            if len(record) != len(REQUIRED_COLUMNS):
                raise SchemaError(f"line {line_no}: expected {len(REQUIRED_COLUMNS)} fields")
            row = dict(zip(REQUIRED_COLUMNS, record))
            try:
                row["alpha_c"] = None if row["alpha_c"] == "" else float(row["alpha_c"])
                for field in ("snr_db", "mean_bpcu", "stderr_bpcu"):
                    row[field] = float(row[field])
                row["trials"] = int(row["trials"])
            except ValueError as exc:
                raise SchemaError(f"line {line_no}: {exc}") from exc
            rows.append(row)
    return rows


def _curve_label(scheme, metric, alpha):
    if metric == "common_rate_user1":
        label = f"{scheme}, user 1"
    elif metric == "common_rate_user2":
        label = f"{scheme}, user 2"
    else:
        label = scheme
    if alpha is not None and metric == "sum_rate":
        label += f" (alpha_c={alpha:g})"
    return label


def render(spec: FigureSpec) -> RenderResult:
    """Draw one figure and write it to spec.output_path."""
    rows = load_rows(spec.csv_path)
    groups = {}
    for row in rows:
        groups.setdefault((row["scheme"], row["metric"], row["alpha_c"]), []).append(row)
    if not groups:
        warnings.warn(f"{spec.csv_path}: no data rows, rendering empty axes")

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=120)
    for key in sorted(groups, key=lambda k: (k[0], k[1], -1.0 if k[2] is None else k[2])):
        pts = sorted(groups[key], key=lambda r: r["snr_db"])
        xs = [r["snr_db"] for r in pts]
        ys = [r["mean_bpcu"] for r in pts]
        errs = [2 * r["stderr_bpcu"] for r in pts]
        label = _curve_label(*key)
        if max(r["stderr_bpcu"] for r in pts) > ERROR_BAR_FLOOR:
            ax.errorbar(xs, ys, yerr=errs, marker="o", markersize=3, capsize=2, label=label)
        else:
            ax.plot(xs, ys, marker="o", markersize=3, label=label)
    threshold_line = spec.figure_id == "fig2"
    if threshold_line:
        ax.axhline(
            spec.threshold_bpcu,
            linestyle="--",
            color="0.4",
            linewidth=1.0,
            label=f"{spec.threshold_bpcu:g} bpcu requirement",
        )
    xlabel, ylabel = "SNR [dB]", "ergodic rate [bpcu]"
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    if groups or threshold_line:
        ax.legend(fontsize=8)
    fig.tight_layout()
    # SVG embeds a creation date by default; drop it so output is reproducible
    metadata = {"Date": None} if str(spec.output_path).endswith(".svg") else None
    fig.savefig(spec.output_path, metadata=metadata)
    plt.close(fig)
    return RenderResult(len(groups), threshold_line, spec.output_path, xlabel, ylabel)
