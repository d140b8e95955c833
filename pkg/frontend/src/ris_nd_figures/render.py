"""Render ris-nd result CSVs into the published figure layouts.

Pure function of CSV content: no simulation here.  The expected schema is
the simulator's output contract; Monte Carlo rows are drawn as markers with
error bars, rows with architecture == "theory" as lines.  Outage and BER
panels use a log y-axis.
"""
from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "ris-nd-figures"  # deterministic ids
import matplotlib.pyplot as plt  # noqa: E402

REQUIRED_COLUMNS = ("scenario_id", "figure", "sweep_name", "sweep_value",
                    "architecture", "metric", "mean", "stderr", "trials",
                    "failures", "seed")

FIGURE_IDS = ("5", "6", "7", "8a", "8b", "9a", "9b", "9c",
              "10a", "10b", "10c", "10d", "10e", "10f")

ARCH_LABEL = {
    "conventional": "conventional (diagonal)",
    "nondiag": "non-diagonal (proposed)",
    "fully": "fully-connected",
    "group": "group-connected",
}
ARCH_COLOR = {
    "conventional": "tab:red",
    "nondiag": "tab:blue",
    "fully": "tab:green",
    "group": "tab:orange",
}
MARKERS = ("o", "s", "^", "d", "v", "p", "*", "x")


class SchemaError(ValueError):
    pass


def load_rows(csv_paths) -> list[dict]:
    """Read one or more result CSVs; raises SchemaError on missing columns."""
    if isinstance(csv_paths, (str, os.PathLike)):
        csv_paths = [csv_paths]
    rows: list[dict] = []
    for path in csv_paths:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing columns {missing}")
            for raw in reader:
                rows.append({
                    **raw,
                    "sweep_value": float(raw["sweep_value"]),
                    "mean": float(raw["mean"]),
                    "stderr": float(raw["stderr"]),
                })
    if not rows:
        raise SchemaError("no data rows in " + ", ".join(map(str, csv_paths)))
    return rows


def _lin2db(x: float) -> float:
    return 10.0 * math.log10(x)


def _series(rows, key):
    """Group rows by key(row) -> sorted (x, y, yerr) triples."""
    out: dict = {}
    for r in rows:
        out.setdefault(key(r), []).append((r["sweep_value"], r["mean"], r["stderr"]))
    return {k: sorted(v) for k, v in out.items()}


def _plot_mc_and_theory(ax, rows, metric, x_in_db=False, sweep=None):
    mc = [r for r in rows if r["metric"] == metric and r["architecture"] != "theory"
          and (sweep is None or r["sweep_name"] == sweep)]
    th = [r for r in rows if r["metric"] == metric and r["architecture"] == "theory"
          and (sweep is None or r["sweep_name"] == sweep)]
    for i, (arch, pts) in enumerate(sorted(_series(mc, lambda r: r["architecture"]).items())):
        x, y, e = zip(*pts)
        if x_in_db:
            x = [_lin2db(v) for v in x]
        ax.errorbar(x, y, yerr=e, marker=MARKERS[i % len(MARKERS)], linestyle="-",
                    capsize=2.5, color=ARCH_COLOR.get(arch),
                    label=ARCH_LABEL.get(arch, arch))
    for sid, pts in sorted(_series(th, lambda r: r["scenario_id"]).items()):
        x, y, _ = zip(*pts)
        if x_in_db:
            x = [_lin2db(v) for v in x]
        ax.plot(x, y, linestyle="--", color="black", alpha=0.7,
                label=sid.replace("theory-", "theory: "))


def _family_plot(ax, rows, metric):
    """One curve per (scenario variant, architecture) pair."""
    mc = [r for r in rows if r["metric"] == metric and r["architecture"] != "theory"]
    fams = _series(mc, lambda r: (r["scenario_id"], r["architecture"]))
    for i, ((sid, arch), pts) in enumerate(sorted(fams.items())):
        x, y, e = zip(*pts)
        tag = sid.split("-", 1)[1] if "-" in sid else sid
        ax.errorbar(x, y, yerr=e, marker=MARKERS[i % len(MARKERS)],
                    linestyle="-" if arch == "nondiag" else ":",
                    color=ARCH_COLOR.get(arch), capsize=2.5,
                    label=f"{ARCH_LABEL.get(arch, arch)}, {tag}")


def build_figure(figure_id: str, rows: list[dict]):
    """Matplotlib Figure for one published-figure layout."""
    fid = str(figure_id).lower()
    if fid not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}")

    if fid == "7":
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        for ax, metric, title in zip(axes, ("impedances", "control_load"),
                                     ("configurable impedances", "control-link load")):
            sub = [r for r in rows if r["metric"] == metric]
            if not sub:
                raise SchemaError(f"no {metric} rows for figure 7")
            for i, (arch, pts) in enumerate(sorted(
                    _series(sub, lambda r: r["architecture"]).items())):
                x, y, _ = zip(*pts)
                ax.plot(x, y, marker=MARKERS[i % len(MARKERS)],
                        color=ARCH_COLOR.get(arch), label=ARCH_LABEL.get(arch, arch))
            ax.set_xlabel("number of RIS elements N")
            ax.set_ylabel(title)
            ax.set_xscale("log", base=2)
            ax.set_yscale("log")
            ax.grid(True, which="both", alpha=0.3)
            ax.legend(fontsize=8)
        fig.suptitle("architecture complexity")
        fig.tight_layout()
        return fig

    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    if fid == "5":
        _plot_mc_and_theory(ax, rows, "gain")
        ax.set_xlabel("number of RIS elements N")
        ax.set_ylabel("normalized channel gain")
        ax.set_xscale("log", base=2)
        ax.set_ylim(0.0, 1.05)
    elif fid == "6":
        _plot_mc_and_theory(ax, rows, "gain", x_in_db=True)
        ax.set_xlabel("BS-RIS Rician factor (dB)")
        ax.set_ylabel("normalized channel gain")
        ax.set_ylim(0.0, 1.05)
    elif fid == "8a":
        _plot_mc_and_theory(ax, rows, "outage")
        ax.set_xlabel("number of RIS elements N")
        ax.set_ylabel("outage probability")
        ax.set_yscale("log")
    elif fid == "8b":
        _plot_mc_and_theory(ax, rows, "ber", x_in_db=True)
        ax.set_xlabel(r"$\rho$ (dB)")
        ax.set_ylabel("average BER")
        ax.set_yscale("log")
    elif fid == "9a":
        _plot_mc_and_theory(ax, rows, "rate")
        ax.set_xlabel("RIS-user distance (m)")
        ax.set_ylabel("achievable rate (bits/s/Hz)")
    elif fid == "9b":
        _plot_mc_and_theory(ax, rows, "rate")
        ax.set_xlabel("number of RIS elements N")
        ax.set_ylabel("achievable rate (bits/s/Hz)")
    elif fid == "9c":
        _plot_mc_and_theory(ax, rows, "rate", sweep="iteration")
        ax.set_xlabel("iteration")
        ax.set_ylabel("achievable rate (bits/s/Hz)")
    else:  # 10a..10f
        _family_plot(ax, rows, "rate")
        ax.set_xlabel("number of RIS elements N")
        ax.set_ylabel("achievable rate (bits/s/Hz)")
    if not ax.lines and not ax.containers:
        raise SchemaError(f"no rows matched figure {figure_id!r}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(figure_id: str, csv_paths, out_path: str) -> list[str]:
    """Render one figure id from CSVs; writes SVG and PNG, returns the paths."""
    rows = load_rows(csv_paths)
    fig = build_figure(figure_id, rows)
    os.makedirs(out_path, exist_ok=True)
    written = []
    for ext in ("svg", "png"):
        target = os.path.join(out_path, f"fig{figure_id}.{ext}")
        # drop the embedded creation date so re-renders are byte-identical
        meta = {"Date": None} if ext == "svg" else None
        fig.savefig(target, dpi=150, metadata=meta)
        written.append(target)
    plt.close(fig)
    return written
