"""Figure rendering for polygon and pole data.

All figures go straight to files through the Agg backend; nothing here
opens a window.  Exact rationals are converted to floats at the last
moment, for drawing only.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .newton import NewtonPolygon, matrix_charpoly
from .opers import rs_pole_bounds


def newton_polygon_figure(conn, path, rep_which=None, title=None):
    """Scatter the charpoly valuations and draw the lower hull."""
    mat = conn.matrix(rep_which) if hasattr(conn, "matrix") else conn
    poly = NewtonPolygon(matrix_charpoly(mat))
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [p[0] for p in poly.points]
    ys = [float(p[1]) for p in poly.points]
    ax.scatter(xs, ys, marker="o", zorder=3, label="ord of coefficient")
    hx = [v[0] for v in poly.vertices]
    hy = [float(v[1]) for v in poly.vertices]
    ax.plot(hx, hy, "-", zorder=2, label="lower hull")
    for x1, y1, x2, y2, slope, length in poly.edges():
        ax.annotate(
            "slope %s" % (-slope,),
            ((x1 + x2) / 2, (float(y1) + float(y2)) / 2),
            textcoords="offset points", xytext=(4, 4), fontsize=8,
        )
    ax.set_xlabel("power of X")
    ax.set_ylabel("valuation")
    ax.set_title(title or "Newton polygon")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def pole_pattern_figure(oper, path, title=None):
    """Pole order of each canonical coefficient against the RS bound."""
    bounds = rs_pole_bounds(oper.algebra)
    profile = oper.pole_profile()
    slots = list(range(1, len(bounds) + 1))
    orders = [0 if p is None else float(p) for p in profile]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(slots, orders, width=0.5, label="pole order of v_i")
    ax.step(
        [s - 0.5 for s in slots] + [slots[-1] + 0.5],
        [float(b) for b in bounds] + [float(bounds[-1])],
        where="post", linestyle="--", label="regular singular bound d_i",
    )
    ax.set_xticks(slots)
    ax.set_xlabel("slot")
    ax.set_ylabel("pole order")
    ax.set_title(title or "canonical coefficient poles")
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
