"""Rendering PL maps to files: a vector figure plus exact breakpoints.

The figure shows the identity diagonal for reference, the graph of the
map as a polyline and its breakpoints as markers; coordinates become
floats only at draw time.  The companion CSV keeps the breakpoints exact,
one ``p/q`` pair per line.
"""

from __future__ import annotations

import csv
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .plmaps import PLMap


def _window(m: PLMap, window=None):
    if window is not None:
        lo, hi = Fraction(window[0]), Fraction(window[1])
        if lo >= hi:
            raise ValueError(f"empty plotting window [{lo}, {hi}]")
        return lo, hi
    if m.is_identity:
        return Fraction(-1), Fraction(1)
    lo = min(m.points[0][0], m.points[0][1]) - 1
    return lo, m.points[-1][0] + 1


def plot_map(m: PLMap, path, *, title=None, window=None):
    """Draw ``m`` against the identity diagonal and save the figure.

    The output format follows the extension of ``path``.  The graph runs
    edge to edge of the window (derived from the breakpoints when not
    given) and passes through every breakpoint inside it.
    """
    lo, hi = _window(m, window)
    xs = [lo] + [x for x, _ in m.points if lo < x < hi] + [hi]
    ys = [m(x) for x in xs]
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.plot([float(lo), float(hi)], [float(lo), float(hi)],
            linestyle="--", linewidth=0.8, color="0.6", label="identity")
    ax.plot([float(x) for x in xs], [float(y) for y in ys],
            linewidth=1.6, color="C0", label="map")
    inside = [(float(x), float(y)) for x, y in m.points if lo <= x <= hi]
    if inside:
        ax.plot([p[0] for p in inside], [p[1] for p in inside],
                "o", markersize=4.5, color="C0")
    ax.set_aspect("equal")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    ax.legend(loc="upper left", fontsize="small")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def breakpoints_csv(m: PLMap, path):
    """Write the breakpoints as CSV, coordinates as exact ``p/q`` text."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x", "y"])
        for x, y in m.points:
            writer.writerow([str(x), str(y)])
    return path
