"""Render the security-region figure from a sweep.csv file.

Usage: python -m plotkit.security_plot sweep.csv out.png
"""

from __future__ import annotations

import argparse
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap

from .tables import SweepTable, TableFormatError

REGION_ORDER = ("Insecure", "Unknown", "Secure")
REGION_COLORS = {"Insecure": "#c0392b", "Unknown": "#95a5a6", "Secure": "#27ae60"}
E_OVER_4 = float(np.e / 4.0)


def _cell_edges(values):
    values = np.asarray(values, dtype=float)
    if values.size == 1:
        half = max(0.05, abs(values[0]) * 0.1)
        return np.array([values[0] - half, values[0] + half])
    mids = (values[1:] + values[:-1]) / 2.0
    first = values[0] - (mids[0] - values[0])
    last = values[-1] + (values[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def plot_security_region(sweep_csv, out_png) -> dict:
    """Draw the (t, u) region heatmap plus the analytic boundary curves.

    Returns the rendered data: grid values, the region label at every cell
    as encoded in the drawn mesh, and the overlaid boundary curves.
    """
    table = SweepTable.load(sweep_csv)
    t_values = table.t_values()
    u_values = table.u_values()
    mesh = np.empty((len(u_values), len(t_values)), dtype=int)
    for i, u in enumerate(u_values):
        for j, t in enumerate(t_values):
            mesh[i, j] = REGION_ORDER.index(table.region_at(t, u))

    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=120)
    cmap = ListedColormap([REGION_COLORS[name] for name in REGION_ORDER])
    ax.pcolormesh(
        _cell_edges(t_values),
        _cell_edges(u_values),
        mesh,
        cmap=cmap,
        vmin=-0.5,
        vmax=len(REGION_ORDER) - 0.5,
        alpha=0.85,
    )

    # analytic boundaries: the known-attack line t = 1/2 and the positive
    # entropy-gap curve u = (t 4/e - 1)/2 meeting u = 0 at t = e/4
    ax.axvline(0.5, color="black", linestyle="--", linewidth=1.2, label="t = 1/2")
    t_curve = np.linspace(E_OVER_4, max(max(t_values), 1.0), 200)
    u_curve = (t_curve * 4.0 / np.e - 1.0) / 2.0
    ax.plot(t_curve, u_curve, color="black", linewidth=1.4, label="u = (t 4/e - 1)/2")

    ax.set_xlabel("transmittance t")
    ax.set_ylabel("excess noise u")
    ax.set_title("CV position verification: security region")
    handles = [
        plt.Rectangle((0, 0), 1, 1, facecolor=REGION_COLORS[name], alpha=0.85)
        for name in REGION_ORDER
    ]
    ax.legend(
        handles + ax.get_lines(),
        list(REGION_ORDER) + [line.get_label() for line in ax.get_lines()],
        loc="upper left",
        fontsize=8,
    )
    ax.set_xlim(_cell_edges(t_values)[[0, -1]])
    ax.set_ylim(_cell_edges(u_values)[[0, -1]])
    fig.tight_layout()
    fig.savefig(out_png, metadata={"Software": None})
    plt.close(fig)

    labels = {
        (t, u): REGION_ORDER[mesh[i, j]]
        for i, u in enumerate(u_values)
        for j, t in enumerate(t_values)
    }
    return {
        "t_values": t_values,
        "u_values": u_values,
        "labels": labels,
        "boundary_t": 0.5,
        "boundary_curve": list(zip(t_curve.tolist(), u_curve.tolist())),
        "out": str(out_png),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("sweep_csv", help="sweep.csv written by the simulator")
    parser.add_argument("out_png", help="output image path")
    args = parser.parse_args(argv)
    try:
        result = plot_security_region(args.sweep_csv, args.out_png)
    except TableFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result['out']} ({len(result['labels'])} grid cells)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
