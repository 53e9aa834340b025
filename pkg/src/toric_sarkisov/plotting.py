"""SVG figures of geography slices.  Coordinates are converted to floats for display only."""

from __future__ import annotations

import hashlib
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from . import serialize  # noqa: E402
from .geography import GeographySlice  # noqa: E402

VIEWPORT = 800
DPI = 72  # SVG user units are points, so the viewBox is VIEWPORT x VIEWPORT
SIZE_INCHES = VIEWPORT / DPI


def model_hash(key) -> str:
    return hashlib.sha256(serialize.dumps(key).encode()).hexdigest()


def model_colours(keys) -> dict:
    """Distinct colours for the models of one figure, ordered by model hash."""
    cmap = plt.get_cmap("tab20")
    ordered = sorted(set(keys), key=model_hash)
    return {k: cmap((2 * i + i // 10) % 20) for i, k in enumerate(ordered)}


def _xy(points) -> list[tuple[float, float]]:
    return [(float(p[0]), float(p[1])) for p in points]


def _chamber_edges(ch) -> list[tuple[int, int]]:
    return [s[1] for s in ch.strata if s[0] == "edge"]


def draw_slice(sl: GeographySlice, ax, marks: Sequence = ()) -> None:
    region = _xy(sl.region)
    ax.add_patch(Polygon(region, closed=True, fill=False, linestyle="--", linewidth=0.8, edgecolor="0.5"))
    colours = model_colours([ch.key for ch in sl.chambers])
    for ch in sorted(sl.chambers, key=lambda c: -c.dimension):
        pts = _xy(ch.closure)
        colour = colours[ch.key]
        if ch.dimension == 2:
            ax.add_patch(Polygon(pts, closed=True, facecolor=colour, edgecolor="0.2", linewidth=0.6, alpha=0.75))
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            ax.text(cx, cy, f"C{ch.id}", ha="center", va="center", fontsize=9)
        else:
            # lower-dimensional chambers may be disconnected, so draw their strata
            for s in ch.strata:
                seg = _xy(sl.stratum_closure(s))
                if s[0] == "edge":
                    ax.plot([p[0] for p in seg], [p[1] for p in seg], color=colour, linewidth=3)
                elif ch.dimension == 0 or not any(s[1] in e for e in _chamber_edges(ch)):
                    ax.plot([seg[0][0]], [seg[0][1]], "o", color=colour, markersize=6)
    if len(sl.effective) >= 3:
        ax.add_patch(Polygon(_xy(sl.effective), closed=True, fill=False, linewidth=2.6, edgecolor="black"))
    verts = sl.arrangement.vertices
    for kind, s in sl.nonbig:
        if kind == "edge":
            a, b = _xy([verts[s[0]], verts[s[1]]])
            ax.plot([a[0], b[0]], [a[1], b[1]], color="crimson", linewidth=1.6)
    ax.plot([0.0], [0.0], "k+", markersize=10)
    ax.annotate("D†", (0.0, 0.0), textcoords="offset points", xytext=(6, 6), fontsize=11)
    for n, p in enumerate(marks, 1):
        x, y = float(p[0]), float(p[1])
        ax.plot([x], [y], "s", color="black", markersize=6)
        ax.annotate(str(n), (x, y), textcoords="offset points", xytext=(6, -12), fontsize=10, weight="bold")
    xs = [p[0] for p in region] or [0.0]
    ys = [p[1] for p in region] or [0.0]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    ax.set_ylim(min(ys) - pad, max(ys) + pad)
    ax.set_aspect("auto")
    ax.set_xlabel("s")
    ax.set_ylabel("t")


def save_slice_svg(sl: GeographySlice, path: str, marks: Sequence = (), title: Optional[str] = None) -> None:
    """Write the slice figure; identical input gives identical bytes."""
    with plt.rc_context({"svg.hashsalt": "toric-sarkisov", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(SIZE_INCHES, SIZE_INCHES), dpi=DPI)
        draw_slice(sl, ax, marks)
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def save_empty_svg(path: str, title: str = "empty") -> None:
    with plt.rc_context({"svg.hashsalt": "toric-sarkisov", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(SIZE_INCHES, SIZE_INCHES), dpi=DPI)
        ax.set_title(title)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
