"""Command-line front end.

Subcommands:

* ``compute`` -- one rank-k range as a region JSON document
* ``verify``  -- closed-form route against the generic engine (Hausdorff)
* ``curve``   -- SVG of all nonempty rank-k boundaries with foci
* ``member``  -- point membership with margin
* ``report``  -- CSV summary + boundary table + matplotlib figure + SVG

Exit codes: 0 success, 1 error, 2 empty region, 3 non-member.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import engine, structured
from .errors import (
    CapacityError,
    EmptyRegionError,
    HypothesisError,
    NoClosedFormError,
    NumrangeError,
    StructureError,
)
from .geometry import (
    ConvexRegion,
    EllipseDisc,
    hausdorff_distance,
    region_from_ellipse,
)
from .linalg import as_matrix, frobenius
from .render import figure_document, save_figure, svg_document

_DOC_SAMPLES = 256


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def load_matrix_document(path):
    """Matrix JSON -> (ndarray, meta dict).

    Schema: {"n": int, "m": int, "entries": [[re, im], ...], "meta": {...}}
    with row-major entries.
    """
    with open(path) as fh:
        doc = json.load(fh)
    for key in ("n", "m", "entries"):
        if key not in doc:
            raise ValueError(f"matrix document is missing field '{key}'")
    n, m = int(doc["n"]), int(doc["m"])
    entries = doc["entries"]
    if len(entries) != n * m:
        raise ValueError(
            f"field 'entries' has {len(entries)} pairs, expected n*m = {n * m}")
    flat = np.array([complex(float(re), float(im)) for re, im in entries])
    mat = flat.reshape(n, m)
    return as_matrix(mat), dict(doc.get("meta") or {})


def save_matrix_document(path, matrix, name=None, r=None):
    m = as_matrix(matrix)
    meta = {}
    if name is not None:
        meta["name"] = name
    if r is not None:
        meta["r"] = int(r)
    doc = {
        "n": m.shape[0],
        "m": m.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
        "meta": meta,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _pair(z):
    return [float(z.real), float(z.imag)]


def _ellipse_payload(e):
    return {
        "center": _pair(e.center),
        "semi_major": float(e.semi_major),
        "semi_minor": float(e.semi_minor),
        "rotation": float(e.rotation % (2.0 * math.pi)),
        "foci": [_pair(f) for f in e.foci],
    }


def region_document(region, k, grid, tol, route, certificate=None, ellipse=None):
    """Region JSON payload for one computed rank-k range."""
    if region.kind == ConvexRegion.EMPTY:
        data = []
    elif region.kind == ConvexRegion.POINT:
        data = [_pair(region.data)]
    elif region.kind == ConvexRegion.SEGMENT:
        data = [_pair(region.data[0]), _pair(region.data[1])]
    else:
        data = [_pair(v) for v in region.vertices()]
    doc = {
        "kind": region.kind,
        "k": int(k),
        "grid": int(grid),
        "tol": float(tol),
        "data": data,
        "route": route,
    }
    if certificate is not None:
        doc["certificate_theta"] = float(certificate % (2.0 * math.pi))
    if ellipse is not None:
        doc["ellipse"] = _ellipse_payload(ellipse)
    return doc


def region_from_document(doc):
    """Inverse of ``region_document`` for the region part."""
    kind = doc["kind"]
    data = [complex(re, im) for re, im in doc["data"]]
    if kind == ConvexRegion.EMPTY:
        return ConvexRegion.empty()
    if kind == ConvexRegion.POINT:
        return ConvexRegion.point(data[0])
    if kind == ConvexRegion.SEGMENT:
        return ConvexRegion.segment(data[0], data[1])
    return ConvexRegion.polygon(data)


def parse_complex(text):
    """Parse 'a+bi' style complex literals ('2.5', '1-i', '3i', '-0.5+2i')."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if s.endswith("+") or s.endswith("-"):
        raise ValueError(f"cannot parse complex number from {text!r}")
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex number from {text!r}") from exc


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

def _closed_entry(entry):
    """(region, ellipse) view of one closed-form table entry."""
    if isinstance(entry, EllipseDisc):
        return region_from_ellipse(entry, _DOC_SAMPLES), entry
    return entry, None


def compute_route(matrix, k, grid, tol, route="auto", r=None):
    """One rank-k range along the requested route.

    Returns (route_tag, region, ellipse_or_None, certificate_or_None).
    """
    if route not in ("auto", "generic", "closed"):
        raise ValueError(f"unknown route {route!r}")
    if route in ("auto", "closed"):
        try:
            tag, entries = structured.closed_form_ranges(matrix, r=r)
            region, ellipse = _closed_entry(entries[k - 1])
            return tag, region, ellipse, None
        except (NoClosedFormError, HypothesisError, StructureError,
                CapacityError):
            if route == "closed":
                raise
    result = engine.rank_k_range(matrix, k, grid=grid, tol=tol)
    return "generic", result.region, None, result.emptiness_certificate


def all_ranges(matrix, grid, tol, route="auto", r=None):
    """Every rank-k range, reusing one support grid on the generic route.

    Returns a list of dicts with keys k, route, region, ellipse, certificate.
    """
    m = as_matrix(matrix, square=True)
    n = m.shape[0]
    entries = None
    tag = "generic"
    if route in ("auto", "closed"):
        try:
            tag, table = structured.closed_form_ranges(m, r=r)
            entries = [_closed_entry(t) for t in table]
        except (NoClosedFormError, HypothesisError, StructureError,
                CapacityError):
            if route == "closed":
                raise
    out = []
    if entries is not None:
        for k in range(1, n + 1):
            region, ellipse = entries[k - 1]
            out.append({"k": k, "route": tag, "region": region,
                        "ellipse": ellipse, "certificate": None})
        return out
    samples = engine.support_grid(m, grid)
    for k in range(1, n + 1):
        res = engine.rank_k_range(m, k, grid=grid, tol=tol, samples=samples)
        out.append({"k": k, "route": "generic", "region": res.region,
                    "ellipse": None, "certificate": res.emptiness_certificate})
    return out


def _region_diameter(region, ellipse=None):
    if ellipse is not None:
        return 2.0 * ellipse.semi_major
    v = region.vertices()
    if len(v) <= 1:
        return 0.0
    if len(v) == 2:
        return float(abs(v[1] - v[0]))
    diff = v[:, None] - v[None, :]
    return float(np.max(np.abs(diff)))


def verify_routes(matrix, k, grid, r=None):
    """Closed form against the generic engine for one k.

    Returns (distance, threshold, closed_tag).  Raises NoClosedFormError
    when only the generic route applies.
    """
    m = as_matrix(matrix, square=True)
    try:
        tag, entries = structured.closed_form_ranges(m, r=r)
    except (HypothesisError, StructureError, CapacityError) as exc:
        raise NoClosedFormError(f"closed-form route unavailable: {exc}") from exc
    closed_region, ellipse = _closed_entry(entries[k - 1])
    generic = engine.rank_k_range(m, k, grid=grid).region
    scale = max(1.0, frobenius(m))
    diam = _region_diameter(closed_region, ellipse)
    threshold = 5.0 * engine.discretization_bound(diam, grid) + 1e-9 * scale
    if closed_region.is_empty or generic.is_empty:
        distance = 0.0 if closed_region.kind == generic.kind else math.inf
    else:
        distance = hausdorff_distance(closed_region, generic)
    return distance, threshold, tag


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _write_json(doc, out):
    text = json.dumps(doc, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_compute(args):
    matrix, meta = load_matrix_document(args.input)
    r = args.r if args.r is not None else meta.get("r")
    tol = args.tol if args.tol is not None else 1e-9 * max(1.0, frobenius(matrix))
    tag, region, ellipse, certificate = compute_route(
        matrix, args.k, args.grid, tol, route=args.route, r=r)
    doc = region_document(region, args.k, args.grid, tol, tag,
                          certificate=certificate, ellipse=ellipse)
    _write_json(doc, args.out)
    return 2 if region.is_empty else 0


def cmd_verify(args):
    matrix, meta = load_matrix_document(args.input)
    r = args.r if args.r is not None else meta.get("r")
    distance, threshold, tag = verify_routes(matrix, args.k, args.grid, r=r)
    ok = distance <= threshold
    print(f"route {tag}: hausdorff {distance:.6e} threshold {threshold:.6e} "
          f"-> {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_curve(args):
    matrix, meta = load_matrix_document(args.input)
    r = args.r if args.r is not None else meta.get("r")
    tol = 1e-9 * max(1.0, frobenius(matrix))
    entries = all_ranges(matrix, args.grid, tol, route=args.route, r=r)
    text = svg_document(entries)
    Path(args.out).write_text(text)
    return 0


def cmd_member(args):
    matrix, meta = load_matrix_document(args.input)
    point = parse_complex(args.point)
    tol = args.tol if args.tol is not None else 1e-9 * max(1.0, frobenius(matrix))
    margin = engine.membership_margin(matrix, args.k, point, grid=args.grid)
    inside = margin >= -tol
    print(f"point {args.point}: {'in' if inside else 'out'} "
          f"(margin {margin:.6e})")
    return 0 if inside else 3


def cmd_report(args):
    matrix, meta = load_matrix_document(args.input)
    name = meta.get("name") or Path(args.input).stem
    r = args.r if args.r is not None else meta.get("r")
    tol = 1e-9 * max(1.0, frobenius(matrix))
    entries = all_ranges(matrix, args.grid, tol, route=args.route, r=r)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    summary_path = outdir / f"{name}_regions.csv"
    with open(summary_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "kind", "route", "center_re", "center_im",
                         "semi_major", "semi_minor", "rotation", "n_vertices",
                         "diameter"])
        for entry in entries:
            region = entry["region"]
            ellipse = entry["ellipse"]
            diam = _region_diameter(region, ellipse)
            if ellipse is not None:
                center = ellipse.center
                row = [entry["k"], region.kind, entry["route"],
                       f"{center.real:.12g}", f"{center.imag:.12g}",
                       f"{ellipse.semi_major:.12g}", f"{ellipse.semi_minor:.12g}",
                       f"{ellipse.rotation:.12g}", len(region.vertices()),
                       f"{diam:.12g}"]
            else:
                v = region.vertices()
                center = complex(np.mean(v)) if len(v) else 0j
                row = [entry["k"], region.kind, entry["route"],
                       f"{center.real:.12g}", f"{center.imag:.12g}",
                       "", "", "", len(v), f"{diam:.12g}"]
            writer.writerow(row)

    boundary_path = outdir / f"{name}_boundary.csv"
    with open(boundary_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "index", "re", "im"])
        for entry in entries:
            region = entry["region"]
            if region.is_empty:
                continue
            from .render import region_outline

            outline = region_outline(region, entry["ellipse"])
            for i, z in enumerate(outline):
                writer.writerow([entry["k"], i, f"{z.real:.17g}", f"{z.imag:.17g}"])

    fig_path = outdir / f"{name}_figure.png"
    save_figure(figure_document(entries, title=name), fig_path)
    svg_path = outdir / f"{name}_curve.svg"
    svg_path.write_text(svg_document(entries))
    print(f"wrote {summary_path}")
    print(f"wrote {boundary_path}")
    print(f"wrote {fig_path}")
    print(f"wrote {svg_path}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="numrange",
        description="Higher rank numerical ranges: generic half-plane engine "
                    "and closed-form elliptical components, cross-verified.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k=False):
        p.add_argument("input", help="matrix JSON document")
        if k:
            p.add_argument("--k", type=int, required=True, help="rank index")
        p.add_argument("--grid", type=int, default=engine.DEFAULT_GRID,
                       help="support-angle grid size (default 720)")
        p.add_argument("--r", type=int, default=None,
                       help="block split override (default: metadata or scan)")

    p = sub.add_parser("compute", help="compute one rank-k range")
    common(p, k=True)
    p.add_argument("--tol", type=float, default=None,
                   help="emptiness tolerance (default 1e-9 * scale)")
    p.add_argument("--route", choices=["auto", "generic", "closed"],
                   default="auto")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="cross-check closed form vs engine")
    common(p, k=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curve", help="render all boundaries to SVG")
    common(p)
    p.add_argument("--route", choices=["auto", "generic", "closed"],
                   default="auto")
    p.add_argument("--out", required=True, help="SVG output path")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("member", help="point membership test")
    common(p, k=True)
    p.add_argument("--point", required=True, help="complex point, e.g. '1.5-0.5i'")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("report", help="CSV tables, matplotlib figure, and SVG")
    common(p)
    p.add_argument("--route", choices=["auto", "generic", "closed"],
                   default="auto")
    p.add_argument("--out-dir", default="report", help="output directory")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumrangeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
