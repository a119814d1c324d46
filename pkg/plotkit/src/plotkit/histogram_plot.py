"""Overlay per-round score-term histograms for the logged strategies.

Usage: python -m plotkit.histogram_plot rounds.csv [more.csv ...] --out out.png
       [--report report.json ...]

Vertical markers come from the predictions recorded in the given
report.json files; nothing is recomputed here.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .tables import RoundsTable, TableFormatError

STRATEGY_COLORS = {
    "honest": "#1f77b4",
    "epr": "#2ca02c",
    "heterodyne": "#d62728",
    "splitting": "#ff7f0e",
    "guessed-angle": "#9467bd",
}
BIN_COUNT = 80


def _load_markers(report_paths) -> dict:
    markers = {}
    for path in report_paths:
        with open(path) as handle:
            report = json.load(handle)
        predicted = report.get("predictions", {}).get("score_mean")
        if predicted is not None:
            markers[report["scenario"]] = float(predicted)
    return markers


def plot_score_histograms(rounds_csvs, out_png, report_jsons=()) -> dict:
    """Draw overlaid per-round term histograms, one per logged strategy.

    Returns the rendered data: common bin edges, per-strategy densities and
    the marker positions taken from the reports.
    """
    if isinstance(rounds_csvs, (str, bytes)):
        rounds_csvs = [rounds_csvs]
    table = RoundsTable.load(*rounds_csvs)
    strategies = table.strategies()
    if len(strategies) < 2:
        warnings.warn(
            f"only one strategy ({strategies[0]}) present; drawing a single histogram",
            stacklevel=2,
        )

    # shared bins wide enough for every strategy's bulk
    upper = max(np.quantile(table.strategy_terms[s], 0.995) for s in strategies)
    edges = np.linspace(0.0, max(upper, 1e-6), BIN_COUNT + 1)
    densities = {}
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=120)
    for strategy in strategies:
        terms = np.asarray(table.strategy_terms[strategy])
        density, _ = np.histogram(terms, bins=edges, density=True)
        densities[strategy] = density
        colour = STRATEGY_COLORS.get(strategy)
        ax.stairs(density, edges, label=strategy, color=colour, linewidth=1.4)

    markers = _load_markers(report_jsons)
    for scenario, value in sorted(markers.items()):
        ax.axvline(
            value,
            color=STRATEGY_COLORS.get(scenario, "black"),
            linestyle=":",
            linewidth=1.0,
            label=f"{scenario} predicted mean",
        )

    ax.set_xlabel("per-round score term")
    ax.set_ylabel("density")
    ax.set_title("Score-term distributions by strategy")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_png, metadata={"Software": None})
    plt.close(fig)

    return {
        "strategies": strategies,
        "bin_edges": edges.tolist(),
        "densities": {name: dens.tolist() for name, dens in densities.items()},
        "markers": markers,
        "out": str(out_png),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("rounds_csvs", nargs="+", help="rounds.csv files (schema-checked)")
    parser.add_argument("--report", action="append", default=[], help="report.json for markers")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        result = plot_score_histograms(args.rounds_csvs, args.out, report_jsons=args.report)
    except TableFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result['out']} ({', '.join(result['strategies'])})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
