"""Self-contained SVG renderings: region decompositions, numerical ranges,
raw curves.  No external references; files stay small by decimating long
polylines and rounding coordinates."""

import numpy as np

_FILL_NEGATIVE = {0: "#ffffff", 1: "#c9dcee", 2: "#7aa3c4", 3: "#46729a"}
_HATCH = (
    '<pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" '
    'patternTransform="rotate(45)"><rect width="6" height="6" fill="{base}"/>'
    '<line x1="0" y1="0" x2="0" y2="6" stroke="#555555" stroke-width="1.5"/>'
    "</pattern>")


def _fill_for(winding):
    base = _FILL_NEGATIVE.get(min(abs(winding), 3), "#46729a")
    if winding > 0:
        return "url(#hatch)", base
    return base, None


def _fmt(x):
    return f"{x:.5g}"


def _poly_path(coords, flip, stride=1):
    pts = coords[::stride] if len(coords) > 2400 else coords
    parts = [f"M {_fmt(pts[0][0])} {_fmt(flip - pts[0][1])}"]
    parts.extend(f"L {_fmt(x)} {_fmt(flip - y)}" for x, y in pts[1:])
    parts.append("Z")
    return " ".join(parts)


def _document(xmin, ymin, width, height, body, defs=""):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(xmin)} {_fmt(ymin)} {_fmt(width)} {_fmt(height)}">\n'
        f"<defs>{defs}</defs>\n{body}\n</svg>\n")


def render_regions(decomp, path, intersections=None):
    """Curve plus shaded winding regions, labels, and the marked origin."""
    disc = decomp.disc
    xmin, xmax, ymin, ymax = disc.bounding_box
    pad = 0.1 * max(xmax - xmin, ymax - ymin, 1e-9)
    xmin, xmax = xmin - pad, xmax + pad
    ymin, ymax = ymin - pad, ymax + pad
    flip = ymin + ymax  # mirror y inside the viewBox
    size = max(xmax - xmin, ymax - ymin)
    stroke = 0.004 * size

    body = []
    needs_hatch = None
    faces = sorted((c for c in decomp.components if c.geometry is not None),
                   key=lambda c: -c.area)
    for comp in faces:
        fill, hatch_base = _fill_for(comp.winding)
        if hatch_base:
            needs_hatch = hatch_base
        rings = [comp.geometry] if comp.geometry.geom_type == "Polygon" \
            else list(comp.geometry.geoms)
        for poly in rings:
            d = _poly_path(list(poly.exterior.coords), flip, stride=2)
            for hole in poly.interiors:
                d += " " + _poly_path(list(hole.coords), flip, stride=2)
            body.append(f'<path d="{d}" fill="{fill}" fill-rule="evenodd" '
                        f'stroke="none"/>')
    pts = disc.points
    stride = max(1, pts.size // 4000)
    coords = [(p.real, p.imag) for p in pts[::stride]]
    body.append(f'<path d="{_poly_path(coords, flip)}" fill="none" '
                f'stroke="#222222" stroke-width="{_fmt(stroke)}"/>')
    for comp in faces:
        rx, ry = comp.representative.real, comp.representative.imag
        body.append(
            f'<text x="{_fmt(rx)}" y="{_fmt(flip - ry)}" '
            f'font-size="{_fmt(0.035 * size)}" text-anchor="middle" '
            f'fill="#111111">w={comp.winding}</text>')
    if intersections:
        for p in intersections:
            body.append(f'<circle cx="{_fmt(p.location.real)}" '
                        f'cy="{_fmt(flip - p.location.imag)}" '
                        f'r="{_fmt(0.008 * size)}" fill="#cc3333"/>')
    body.append(f'<circle cx="0" cy="{_fmt(flip)}" r="{_fmt(0.01 * size)}" '
                f'fill="none" stroke="#cc0000" stroke-width="{_fmt(stroke)}"/>')
    body.append(f'<line x1="{_fmt(-0.015 * size)}" y1="{_fmt(flip)}" '
                f'x2="{_fmt(0.015 * size)}" y2="{_fmt(flip)}" '
                f'stroke="#cc0000" stroke-width="{_fmt(stroke)}"/>')
    defs = _HATCH.format(base=needs_hatch) if needs_hatch else ""
    doc = _document(xmin, ymin, xmax - xmin, ymax - ymin,
                    "\n".join(body), defs)
    with open(path, "w") as fh:
        fh.write(doc)


def render_numrange(boundary, path, extra_points=None):
    """Numerical range boundary polyline with optional sample overlays."""
    pts = boundary.boundary_points
    xs, ys = pts.real, pts.imag
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    pad = 0.15 * max(xmax - xmin, ymax - ymin, 1e-9)
    xmin, xmax, ymin, ymax = xmin - pad, xmax + pad, ymin - pad, ymax + pad
    flip = ymin + ymax
    size = max(xmax - xmin, ymax - ymin)
    coords = [(p.real, p.imag) for p in pts]
    body = [f'<path d="{_poly_path(coords, flip)}" fill="#dbe7f3" '
            f'stroke="#33517a" stroke-width="{_fmt(0.004 * size)}"/>']
    if extra_points is not None:
        for z in extra_points:
            body.append(f'<circle cx="{_fmt(z.real)}" cy="{_fmt(flip - z.imag)}" '
                        f'r="{_fmt(0.006 * size)}" fill="#aa4444"/>')
    body.append(f'<circle cx="0" cy="{_fmt(flip)}" r="{_fmt(0.008 * size)}" '
                f'fill="#cc0000"/>')
    with open(path, "w") as fh:
        fh.write(_document(xmin, ymin, xmax - xmin, ymax - ymin, "\n".join(body)))


def render_curve(disc, path):
    """Just the discretized curve and the origin."""
    xmin, xmax, ymin, ymax = disc.bounding_box
    pad = 0.1 * max(xmax - xmin, ymax - ymin, 1e-9)
    xmin, xmax, ymin, ymax = xmin - pad, xmax + pad, ymin - pad, ymax + pad
    flip = ymin + ymax
    size = max(xmax - xmin, ymax - ymin)
    pts = disc.points
    stride = max(1, pts.size // 4000)
    coords = [(p.real, p.imag) for p in pts[::stride]]
    body = [f'<path d="{_poly_path(coords, flip)}" fill="none" '
            f'stroke="#222222" stroke-width="{_fmt(0.004 * size)}"/>',
            f'<circle cx="0" cy="{_fmt(flip)}" r="{_fmt(0.01 * size)}" '
            f'fill="none" stroke="#cc0000" stroke-width="{_fmt(0.004 * size)}"/>']
    with open(path, "w") as fh:
        fh.write(_document(xmin, ymin, xmax - xmin, ymax - ymin, "\n".join(body)))
