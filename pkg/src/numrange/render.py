"""Rendering of rank-k range families: SVG curves and matplotlib reports.

The SVG emitter is byte-deterministic for fixed input: fixed number
formatting, fixed palette, no timestamps.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import ConvexRegion, EllipseDisc, ellipse_boundary

# k = 1 red, k = 2 blue, k = 3 black, then extras
PALETTE = ("#d62728", "#1f77b4", "#000000", "#2ca02c", "#9467bd", "#8c564b")

_CURVE_SAMPLES = 256


def _fmt(x):
    return f"{x:.6f}"


def region_outline(region, ellipse=None, samples=_CURVE_SAMPLES):
    """Boundary points of one rank-k range (ellipse preferred when known)."""
    if ellipse is not None and ellipse.semi_minor > 0.0:
        return ellipse_boundary(ellipse, samples)
    if ellipse is not None:
        u = np.exp(1j * ellipse.rotation)
        return np.array([ellipse.center - ellipse.semi_major * u,
                         ellipse.center + ellipse.semi_major * u])
    return region.vertices()


def svg_document(entries, margin=0.05):
    """SVG 1.1 document for a family of rank-k ranges.

    Parameters
    ----------
    entries : list of dicts with keys ``k``, ``region`` (ConvexRegion),
        and optionally ``ellipse`` (EllipseDisc); empty regions are skipped.
    margin : float
        Fractional margin added around the bounding box.

    Returns
    -------
    str
        One ``path`` element per boundary and ``circle`` elements for the
        foci of closed-form components.
    """
    pts = []
    drawn = []
    for entry in entries:
        region = entry["region"]
        if region.is_empty:
            continue
        ellipse = entry.get("ellipse")
        outline = region_outline(region, ellipse)
        pts.append(outline)
        if ellipse is not None:
            pts.append(np.asarray(ellipse.foci, dtype=complex))
        drawn.append((entry["k"], outline, ellipse, region))
    if not pts:
        cloud = np.array([0.0 + 0.0j])
    else:
        cloud = np.concatenate(pts)
    x0, x1 = float(cloud.real.min()), float(cloud.real.max())
    y0, y1 = float(cloud.imag.min()), float(cloud.imag.max())
    span = max(x1 - x0, y1 - y0, 1e-6)
    pad = margin * span
    x0 -= pad
    y0 -= pad
    width = (x1 - x0) + pad
    height = (y1 - y0) + pad
    stroke = 0.005 * max(width, height)

    # SVG y grows downward: flip the imaginary axis
    def sx(z):
        return _fmt(z.real)

    def sy(z):
        return _fmt(-z.imag)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
         f'viewBox="{_fmt(x0)} {_fmt(-(y0 + height))} {_fmt(width)} {_fmt(height)}">'),
    ]
    for k, outline, ellipse, region in drawn:
        color = PALETTE[(k - 1) % len(PALETTE)]
        if region.kind == ConvexRegion.POINT and ellipse is None:
            z = region.data
            lines.append(f'<circle cx="{sx(z)}" cy="{sy(z)}" r="{_fmt(stroke * 2)}" '
                         f'fill="{color}"/>')
            continue
        if len(outline) == 1:
            z = outline[0]
            lines.append(f'<circle cx="{sx(z)}" cy="{sy(z)}" r="{_fmt(stroke * 2)}" '
                         f'fill="{color}"/>')
        else:
            coords = " L ".join(f"{sx(z)} {sy(z)}" for z in outline)
            closer = " Z" if len(outline) > 2 else ""
            lines.append(f'<path d="M {coords}{closer}" fill="none" '
                         f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>')
        if ellipse is not None:
            for f in ellipse.foci:
                lines.append(f'<circle cx="{sx(f)}" cy="{sy(f)}" '
                             f'r="{_fmt(stroke * 1.5)}" fill="{color}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def figure_document(entries, title=None):
    """Matplotlib figure with the nested rank-k boundaries and foci."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for entry in entries:
        region = entry["region"]
        if region.is_empty:
            continue
        k = entry["k"]
        ellipse = entry.get("ellipse")
        color = PALETTE[(k - 1) % len(PALETTE)]
        outline = region_outline(region, ellipse)
        if len(outline) == 1:
            ax.plot(outline.real, outline.imag, "o", color=color, markersize=5,
                    label=rf"$\Lambda_{{{k}}}$")
        else:
            closed = np.append(outline, outline[0]) if len(outline) > 2 else outline
            ax.plot(closed.real, closed.imag, "-", color=color, linewidth=1.4,
                    label=rf"$\Lambda_{{{k}}}$")
        if ellipse is not None:
            foci = np.asarray(ellipse.foci)
            ax.plot(foci.real, foci.imag, ".", color=color, markersize=8)
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    if ax.has_data():
        ax.legend(loc="upper right", fontsize=9)
    fig.tight_layout()
    return fig


def save_figure(fig, path, dpi=150):
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
