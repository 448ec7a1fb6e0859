"""Planar topology of the symbol curve.

Winding numbers, self-intersections with local sector analysis, the region
decomposition of the complement of F(T), membership queries against the
spectrum masks, and the boundary index that controls dim ker T_F when 0 lies
on the curve.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy import ndimage

from ._errors import (
    DegenerateOverlap,
    NearCurve,
    OnBoundary,
    ResolutionTooCoarse,
    UnwrapFailure,
)
from .symbols import TWO_PI, derivative, evaluate

__all__ = [
    "winding_number", "self_intersections", "region_decomposition",
    "in_unbounded_complement", "w_plus", "classify_intersections",
    "IntersectionPoint", "IntersectionSet", "RegionComponent",
    "RegionDecomposition", "AhernClarkIndex",
    "NearCurve", "DegenerateOverlap", "ResolutionTooCoarse", "OnBoundary",
    "UnwrapFailure",
]

# Rounding slack beyond which a winding quadrature is considered ambiguous.
_ROUND_TOL = 0.25
# Parameter separation (in discretization steps) below which a segment pair is
# ordinary self-adjacency rather than a self-intersection.
_SEP_STEPS = 5
_CLUSTER_STEPS = 3


def winding_number(disc, lam, prox_tol=None):
    """Winding number of the discretized curve around lam.

    Sums the signed turning angles of p_i - lam.  Raises NearCurve when lam is
    within prox_tol of the polyline or when the angle sum is not clearly an
    integer multiple of 2*pi.
    """
    lam = complex(lam)
    if not np.isfinite(lam.real) or not np.isfinite(lam.imag):
        raise ValueError("winding query point must be finite")
    if prox_tol is None:
        prox_tol = 0.5 * float(disc.chord_lengths.max())
    dist = disc.distance_to(lam)
    if dist < prox_tol:
        raise NearCurve(lam, dist)
    rel = disc.points - lam
    raw = float(np.sum(np.angle(np.roll(rel, -1) / rel)) / TWO_PI)
    nearest = round(raw)
    if abs(raw - nearest) > _ROUND_TOL:
        raise NearCurve(lam, dist, f"winding quadrature ambiguous (raw={raw:.3f})")
    return int(nearest)


@dataclass(frozen=True)
class IntersectionPoint:
    """One self-intersection of the curve with its local data."""

    location: complex
    params: tuple            # incident parameter values on [0, 2*pi)
    tangents: tuple          # dF/dtheta at each incident parameter
    tangential: bool
    sector_windings: tuple = ()   # cyclic, as sampled around the point
    classification: str = "Unclassified"
    sector_sides: tuple = ()      # tangential only: windings on the two sides
    sector_between: tuple = ()    # tangential only: windings between the arcs
    notes: tuple = ()


@dataclass(frozen=True, eq=False)
class IntersectionSet:
    points: tuple
    disc: object = field(repr=False, default=None)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _segment_pairs(disc):
    """Candidate segment index pairs via bounding-box binning."""
    n = disc.size
    a = disc.points
    b = np.roll(a, -1)
    step = max(float(np.median(disc.chord_lengths)), 1e-300)
    cell = 4.0 * step
    lo_x = np.minimum(a.real, b.real)
    hi_x = np.maximum(a.real, b.real)
    lo_y = np.minimum(a.imag, b.imag)
    hi_y = np.maximum(a.imag, b.imag)
    buckets = {}
    ix0 = np.floor(lo_x / cell).astype(int)
    ix1 = np.floor(hi_x / cell).astype(int)
    iy0 = np.floor(lo_y / cell).astype(int)
    iy1 = np.floor(hi_y / cell).astype(int)
    for i in range(n):
        for cx in range(ix0[i], ix1[i] + 1):
            for cy in range(iy0[i], iy1[i] + 1):
                buckets.setdefault((cx, cy), []).append(i)
    # Parameter separation below 5 nominal steps is ordinary self-adjacency,
    # measured in theta so graded sample grids are handled correctly.
    sep_theta = _SEP_STEPS * (TWO_PI / n)
    theta = disc.theta
    pairs = set()
    for members in buckets.values():
        m = len(members)
        if m < 2:
            continue
        for u in range(m):
            for v in range(u + 1, m):
                i, j = members[u], members[v]
                if i > j:
                    i, j = j, i
                if min(j - i, n - (j - i)) <= 1:
                    continue
                dth = abs(theta[j] - theta[i])
                if min(dth, TWO_PI - dth) > sep_theta:
                    pairs.add((i, j))
    return pairs


def _cross(o, p, q):
    return (p - o).real * (q - o).imag - (p - o).imag * (q - o).real


def _segment_intersection(a0, a1, b0, b1):
    """Crossing point of two segments, or None."""
    d1 = a1 - a0
    d2 = b1 - b0
    denom = d1.real * d2.imag - d1.imag * d2.real
    if denom == 0:
        return None
    s = ((b0 - a0).real * d2.imag - (b0 - a0).imag * d2.real) / denom
    t = ((b0 - a0).real * d1.imag - (b0 - a0).imag * d1.real) / denom
    if -1e-9 <= s <= 1 + 1e-9 and -1e-9 <= t <= 1 + 1e-9:
        return a0 + s * d1, s, t
    return None


def _segment_min_distance(a0, a1, b0, b1):
    from .symbols import _point_segment_distance
    cands = [
        _point_segment_distance(a0, np.array([b0]), np.array([b1]))[0],
        _point_segment_distance(a1, np.array([b0]), np.array([b1]))[0],
        _point_segment_distance(b0, np.array([a0]), np.array([a1]))[0],
        _point_segment_distance(b1, np.array([a0]), np.array([a1]))[0],
    ]
    return float(min(cands))


def self_intersections(disc, probe_windings=True):
    """Locate the finite set of self-intersections of the curve.

    Transversal crossings come from exact segment-pair intersections;
    tangential contacts from near-miss pairs whose tangent lines are almost
    parallel.  Raises DegenerateOverlap when two arcs coincide over a run of
    consecutive segments, which violates the finite-intersection hypothesis.
    """
    if disc.degenerate:
        return IntersectionSet(points=(), disc=disc)
    n = disc.size
    a = disc.points
    b = np.roll(a, -1)
    step = max(float(np.median(disc.chord_lengths)), 1e-300)
    cluster_radius = _CLUSTER_STEPS * step
    contact_tol = 0.75 * step

    hits = []        # (point, param_i, param_j, miss_distance)
    coincident = set()
    for (i, j) in sorted(_segment_pairs(disc)):
        res = _segment_intersection(a[i], b[i], a[j], b[j])
        if res is not None:
            p, s, t = res
            hits.append((p, i + s, j + t, 0.0))
            d = _segment_min_distance(a[i], b[i], a[j], b[j])
        else:
            d = _segment_min_distance(a[i], b[i], a[j], b[j])
            if d < contact_tol:
                hits.append(((a[i] + b[i] + a[j] + b[j]) / 4.0,
                             i + 0.5, j + 0.5, d))
        if d < 0.05 * step:
            coincident.add(i)
            coincident.add(j)

    # A long consecutive run of segments that sit exactly on top of another
    # part of the curve means an arc is retraced: reject rather than emit
    # unbounded intersection lists.  Genuine tangencies only pin a few
    # segments this hard (separation grows quadratically from the contact).
    if coincident:
        idxs = sorted(coincident)
        run = best = 1
        for u in range(1, len(idxs)):
            run = run + 1 if idxs[u] - idxs[u - 1] <= 2 else 1
            best = max(best, run)
        if best > 25:
            raise DegenerateOverlap(
                f"{best} consecutive segments coincide with another arc")

    if not hits:
        return IntersectionSet(points=(), disc=disc)

    # Cluster hits in the plane (single linkage), then merge incident
    # parameters within 5 steps.
    clusters = []
    for p, si, sj, d in hits:
        touched = [cl for cl in clusters
                   if any(abs(p - q) < cluster_radius for q in cl["loc"])]
        if touched:
            target = touched[0]
            target["loc"].append(p)
            target["params"].extend([si, sj])
            target["dist"].append(d)
            for other in touched[1:]:
                target["loc"].extend(other["loc"])
                target["params"].extend(other["params"])
                target["dist"].extend(other["dist"])
                clusters.remove(other)
        else:
            clusters.append({"loc": [p], "params": [si, sj], "dist": [d]})

    def theta_of(s):
        idx = int(s) % n
        frac = s - int(s)
        th0 = disc.theta[idx]
        gap = (disc.theta[(idx + 1) % n] - th0) % TWO_PI
        return (th0 + frac * gap) % TWO_PI

    sep_theta = 2.0 * _SEP_STEPS * (TWO_PI / n)
    points = []
    for cl in clusters:
        # closest-approach hit anchors the location
        loc = complex(cl["loc"][int(np.argmin(cl["dist"]))])
        groups = []
        for th in sorted(theta_of(s) for s in cl["params"]):
            for g in groups:
                d = abs(th - g[-1])
                if min(d, TWO_PI - d) <= sep_theta:
                    g.append(th)
                    break
            else:
                groups.append([th])
        # Wraparound: first and last group may be the same incidence.
        if len(groups) > 1:
            d = (groups[0][0] - groups[-1][-1]) % TWO_PI
            if d <= sep_theta:
                groups[0].extend(groups.pop())
        params = []
        for g in groups:
            # circular mean (groups may straddle theta = 0)
            ref = g[0]
            offs = [((th - ref + np.pi) % TWO_PI) - np.pi for th in g]
            params.append(float((ref + np.mean(offs)) % TWO_PI))
        params = tuple(sorted(params))
        tangents = tuple(complex(derivative(disc.symbol, t)) for t in params)
        tangential = False
        if len(params) == 2:
            t0, t1 = tangents
            if abs(t0) > 0 and abs(t1) > 0:
                ang = abs(np.angle((t1 / t0)))
                ang = min(ang, abs(np.pi - ang))
                tangential = ang < 0.12
        sector = ()
        if probe_windings and len(params) == 2:
            sector = _sector_windings(disc, loc, tangents, tangential, cluster_radius)
        points.append(IntersectionPoint(
            location=loc, params=params, tangents=tangents,
            tangential=tangential, sector_windings=sector))
    points.sort(key=lambda p: (p.location.real, p.location.imag))
    return IntersectionSet(points=tuple(points), disc=disc)


def _probe(disc, center, direction, radius, clearance=0.5):
    """Winding at center + r*direction with a clearance-aware tolerance.

    clearance is the expected distance to the curve in units of r; the probe
    accepts when the curve stays beyond 40 percent of it, and shrinks or
    grows r otherwise.
    """
    for r in (radius, 0.5 * radius, 2.0 * radius, 0.25 * radius, 4.0 * radius):
        z = center + r * direction
        try:
            return winding_number(disc, z, prox_tol=0.4 * clearance * r)
        except NearCurve:
            continue
    return None


def _sector_windings(disc, loc, tangents, tangential, radius):
    """Cyclic sector windings around an intersection point.

    Transversal points probe the four bisector directions of the incident
    rays, with tolerances scaled to each sector's angular width.  Tangential
    points are handled in classify_intersections, where the curvature split
    is available; here they get the two side probes only.
    """
    t0, t1 = (t / abs(t) for t in tangents)
    if not tangential:
        angles = sorted(np.angle([t0, -t0, t1, -t1]))
        out = []
        for k in range(4):
            a0 = angles[k]
            a1 = angles[(k + 1) % 4] + (TWO_PI if k == 3 else 0.0)
            bis = np.exp(1j * (a0 + a1) / 2.0)
            half = max((a1 - a0) / 2.0, 1e-3)
            out.append(_probe(disc, loc, bis, 2.0 * radius,
                              clearance=np.sin(half)))
        return tuple(out)
    nhat = 1j * t0
    side_a = _probe(disc, loc, nhat, 4.0 * radius)
    side_b = _probe(disc, loc, -nhat, 4.0 * radius)
    return (side_a, side_b)


@dataclass(frozen=True, eq=False)
class RegionComponent:
    """One connected component of the complement of the curve."""

    label: int
    winding: int
    bounded: bool
    representative: complex
    area: float
    adjacent: tuple = ()
    geometry: object = field(repr=False, default=None)  # shapely polygon, None for the unbounded face
    inradius: float = 0.0

    def contains(self, z):
        import shapely
        z = complex(z)
        if self.geometry is None:
            return False
        return bool(shapely.contains_xy(self.geometry, [z.real], [z.imag])[0])


@dataclass(frozen=True, eq=False)
class RegionDecomposition:
    """Exact arrangement of C \\ F(T) with winding-labeled faces.

    Faces come from polygonizing the noded curve, so components survive any
    scale contrast (a unit-size pocket inside a curve thousands of units
    across is still a face).  The grid attributes only control rendering
    resolution; point location and connectivity are arrangement-exact.
    """

    disc: object
    components: tuple
    grid: int
    sliver_count: int = 0

    @property
    def prox_tol(self):
        """Query-side curve proximity tolerance."""
        return 1e-9 * self.disc.diameter

    @cached_property
    def unbounded(self):
        return next(c for c in self.components if not c.bounded)

    def omega(self, j):
        """Components with |winding| == j."""
        return [c for c in self.components if abs(c.winding) == j]

    def omega_plus(self, j):
        """Components with |winding| > j."""
        return [c for c in self.components if abs(c.winding) > j]

    @property
    def max_abs_winding(self):
        return max(abs(c.winding) for c in self.components)

    def on_curve(self, lam, tol=None):
        return self.disc.distance_to(lam) <= (self.prox_tol if tol is None else tol)

    def component_at(self, lam):
        """Smallest face containing lam; the unbounded component when none.

        Returns None when lam lies on the curve within prox_tol.
        """
        lam = complex(lam)
        if self.on_curve(lam):
            return None
        hits = [c for c in self.components if c.bounded and c.contains(lam)]
        if not hits:
            return self.unbounded
        return min(hits, key=lambda c: c.area)

    def winding_at(self, lam):
        comp = self.component_at(lam)
        if comp is None:
            raise NearCurve(complex(lam), self.disc.distance_to(lam))
        return comp.winding

    def in_spectrum(self, lam):
        """lam in sigma(T_F) = curve plus nonzero-winding components."""
        if self.on_curve(lam):
            return True
        return self.component_at(lam).winding != 0

    def zero_faces(self):
        return [c for c in self.components if c.winding == 0]

    @cached_property
    def _zero_face_graph(self):
        """Connected components of closure(zero faces), the traversable part
        of the complement of int(sigma).  Closures meeting in a point (an
        intersection of the curve) connect their faces."""
        import shapely
        zeros = self.zero_faces()
        idx = {c.label: i for i, c in enumerate(zeros)}
        parent = list(range(len(zeros)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        tol = max(self.prox_tol, 1e-12)
        for i, ci in enumerate(zeros):
            for j in range(i + 1, len(zeros)):
                cj = zeros[j]
                gi = ci.geometry if ci.geometry is not None else None
                gj = cj.geometry if cj.geometry is not None else None
                if gi is None or gj is None:
                    # unbounded face: touches a bounded face when that face
                    # reaches the outer envelope of the curve
                    other = cj if gi is None else ci
                    if other.geometry is not None and \
                            other.geometry.exterior.distance(self._outer_ring) <= tol:
                        union(i, j)
                    continue
                if gi.distance(gj) <= tol:
                    union(i, j)
        groups = {}
        for c in zeros:
            groups.setdefault(find(idx[c.label]), []).append(c.label)
        return {c.label: find(idx[c.label]) for c in zeros}, groups

    @cached_property
    def _outer_ring(self):
        import shapely
        from shapely.ops import unary_union
        polys = [c.geometry for c in self.components if c.geometry is not None]
        merged = unary_union(polys)
        return merged.boundary

    def connected_complement_of_interior(self, intersections=None):
        """True when closure(zero-winding faces) is a single connected set."""
        _, groups = self._zero_face_graph
        return len(groups) == 1

    def complement_of_interior_reaches_infinity(self, lam, intersections=None):
        """Whether lam joins the unbounded face inside C minus int(sigma)."""
        lam = complex(lam)
        comp = None
        if self.on_curve(lam):
            # on the curve: traversable iff some zero face closure meets lam
            import shapely
            pt = shapely.geometry.Point(lam.real, lam.imag)
            tol = max(self.prox_tol, 1e-12)
            cands = [c for c in self.zero_faces()
                     if c.geometry is not None and c.geometry.distance(pt) <= tol]
            if not cands:
                # interior-of-spectrum arc or a wholly surrounded point
                raise OnBoundary(f"{lam} lies on an interior spectrum arc")
            comp = cands[0]
        else:
            comp = self.component_at(lam)
            if comp.winding != 0:
                return False
        labels_to_group, groups = self._zero_face_graph
        return labels_to_group[comp.label] == labels_to_group[self.unbounded.label]

    def as_dict(self):
        return {
            "grid": self.grid,
            "sliver_faces_dropped": self.sliver_count,
            "components": [
                {"label": c.label, "winding": c.winding, "bounded": c.bounded,
                 "representative": [c.representative.real, c.representative.imag],
                 "area": c.area if c.bounded else None,
                 "inradius": c.inradius,
                 "adjacent": list(c.adjacent)}
                for c in self.components],
        }


def _face_polygons(disc):
    """Noded arrangement faces of the closed polyline, largest first."""
    import shapely
    from shapely.geometry import LineString
    from shapely.ops import polygonize, unary_union

    pts = disc.points
    coords = np.column_stack([pts.real, pts.imag])
    coords = np.vstack([coords, coords[:1]])
    merged = unary_union(LineString(coords))
    return sorted(polygonize(merged), key=lambda p: -p.area)


def region_decomposition(disc, grid=512, max_grid=4096):
    """Decompose C \\ F(T) into winding-labeled connected components.

    Builds the exact planar arrangement of the discretized curve, carves the
    overlap out of nested faces, probes one winding number per face at its
    deepest interior point, and records adjacency across shared boundary
    arcs.  ``grid`` is kept as the rendering resolution for exports; the
    decomposition itself is grid-free.  Raises ResolutionTooCoarse when the
    curve is degenerate or every face is a numerical sliver.
    """
    from shapely import maximum_inscribed_circle
    from shapely.ops import unary_union

    if disc.degenerate:
        raise ResolutionTooCoarse("degenerate (constant) curve has no regions")

    polys = _face_polygons(disc)
    area_floor = (1e-7 * disc.diameter) ** 2
    sliver_count = sum(1 for p in polys if p.area < area_floor)
    polys = [p for p in polys if p.area >= area_floor]
    if not polys:
        raise ResolutionTooCoarse("no resolvable faces in the arrangement")

    # Carve nested faces: each face minus the faces strictly inside it.
    faces = []
    for i, p in enumerate(polys):
        inner = [q for q in polys[i + 1:] if p.contains(q.representative_point())]
        geom = p
        if inner:
            geom = p.difference(unary_union(inner))
        faces.append(geom)

    components = []
    for i, geom in enumerate(faces):
        probe = maximum_inscribed_circle(geom)
        center = complex(probe.coords[0][0], probe.coords[0][1])
        inradius = float(probe.length)
        wind = None
        for cand in (center,
                     complex(*geom.representative_point().coords[0])):
            try:
                wind = winding_number(disc, cand, prox_tol=0.0)
                rep = cand
                break
            except NearCurve:
                continue
        if wind is None:
            sliver_count += 1
            continue
        components.append(RegionComponent(
            label=i + 1, winding=wind, bounded=True, representative=rep,
            area=float(geom.area), geometry=geom, inradius=inradius))

    if not components:
        raise ResolutionTooCoarse("no face admits a clean winding probe")

    # Synthetic unbounded face, winding 0 by definition of a compact curve.
    xmin, xmax, ymin, ymax = disc.bounding_box
    far = complex(xmax + (xmax - xmin + 1.0), ymax + (ymax - ymin + 1.0))
    unbounded = RegionComponent(
        label=len(components) + 1, winding=0, bounded=False,
        representative=far, area=float("inf"), geometry=None)
    components.append(unbounded)

    components = _attach_adjacency(components, disc)
    return RegionDecomposition(disc=disc, components=tuple(components),
                               grid=int(grid), sliver_count=sliver_count)


def _attach_adjacency(components, disc):
    """Adjacency = positive-length shared boundary between face closures."""
    import shapely
    from shapely.ops import unary_union

    bounded = [c for c in components if c.geometry is not None]
    unbounded = next(c for c in components if c.geometry is None)
    floor = 1e-6 * disc.diameter
    adj = {c.label: set() for c in components}
    for i, ci in enumerate(bounded):
        for cj in bounded[i + 1:]:
            shared = ci.geometry.boundary.intersection(cj.geometry.boundary)
            if shared.length > floor:
                adj[ci.label].add(cj.label)
                adj[cj.label].add(ci.label)
    outer = unary_union([c.geometry for c in bounded]).boundary
    for ci in bounded:
        shared = ci.geometry.boundary.intersection(outer)
        if shared.length > floor:
            adj[ci.label].add(unbounded.label)
            adj[unbounded.label].add(ci.label)
    return [replace(c, adjacent=tuple(sorted(adj[c.label]))) for c in components]


def in_unbounded_complement(decomp, lam, mode="complement_of_curve",
                            intersections=None):
    """Whether lam connects to infinity through the chosen complement set.

    Modes: complement_of_curve (faces of the curve arrangement),
    complement_of_spectrum (zero-winding faces only, separated by the curve),
    complement_of_interior_spectrum (zero faces glued along boundary arcs and
    intersection points).  Raises OnBoundary when lam sits on the blocking
    set's boundary within tolerance.
    """
    lam = complex(lam)
    if mode == "complement_of_curve":
        if decomp.on_curve(lam):
            raise OnBoundary(f"{lam} lies on the curve")
        return not decomp.component_at(lam).bounded
    if mode == "complement_of_spectrum":
        if decomp.on_curve(lam):
            raise OnBoundary(f"{lam} lies on the curve, hence in the spectrum")
        comp = decomp.component_at(lam)
        if comp.winding != 0:
            return False
        return not comp.bounded
    if mode == "complement_of_interior_spectrum":
        return decomp.complement_of_interior_reaches_infinity(lam, intersections)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class AhernClarkIndex:
    """Boundary winding index controlling dim ker T_F for 0 on the curve.

    value is exact (a Fraction) when the unwrapped variation snaps to a
    multiple of 1/6 within 1e-3; validity marks both a nonvanishing-derivative
    parametrization and an integer-consistent snap.
    """

    value: object          # Fraction when snapped, else float
    float_value: float
    zero_count: int
    zero_params: tuple
    arc_variations: tuple
    validity: bool
    notes: tuple = ()

    @property
    def kernel_dimension(self):
        v = float(self.float_value)
        return max(0, int(round(-v))) if abs(v - round(v)) < 1e-9 else 0


_ZERO_TOL_FACTOR = 1e-9


def _refine_zero(symbol, th0, span):
    """Damped Newton on |F|^2 from th0; returns the refined parameter."""
    th = float(th0)
    g = abs(evaluate(symbol, th)) ** 2
    for _ in range(60):
        f = evaluate(symbol, th)
        fp = derivative(symbol, th)
        grad = 2.0 * (np.conj(f) * fp).real
        fpp_h = 1e-6 * span
        grad2 = (abs(evaluate(symbol, th + fpp_h)) ** 2
                 - 2 * abs(f) ** 2
                 + abs(evaluate(symbol, th - fpp_h)) ** 2) / fpp_h ** 2
        if grad2 <= 0 or not np.isfinite(grad2):
            break
        step = -grad / grad2
        step = float(np.clip(step, -span, span))
        new = th + step
        gn = abs(evaluate(symbol, new)) ** 2
        damp = 0
        while gn > g and damp < 30:
            step *= 0.5
            new = th + step
            gn = abs(evaluate(symbol, new)) ** 2
            damp += 1
        if abs(step) < 1e-15:
            th = new
            break
        th, g = new, gn
    return th % TWO_PI


def _unwrapped_variation(symbol, t_lo, t_hi, depth_limit=12):
    """Total continuous variation of arg F over [t_lo, t_hi]."""
    n = 512
    ts = np.linspace(t_lo, t_hi, n)
    for depth in range(depth_limit):
        vals = evaluate(symbol, ts)
        args = np.angle(vals)
        jumps = np.diff(args)
        jumps = (jumps + np.pi) % TWO_PI - np.pi
        bad = np.abs(jumps) >= np.pi / 2
        if not bad.any():
            return float(jumps.sum())
        mids = (ts[:-1][bad] + ts[1:][bad]) / 2.0
        ts = np.sort(np.concatenate([ts, mids]))
        if ts.size > 1 << 22:
            break
    raise UnwrapFailure(
        f"argument jumps not resolvable on [{t_lo:.6f}, {t_hi:.6f}]")


def w_plus(symbol, disc):
    """Ahern-Clark index: (sum of arc argument variations + m*pi) / (2*pi).

    m counts zeros of F on the circle (|F| minima refined by damped Newton and
    accepted below 1e-9 * max|F|); argument jumps at the zeros are discarded.
    With no zeros the value is cross-checked against the winding number at 0.
    """
    notes = []
    n = max(8192, 4 * disc.size)
    th = np.arange(n) * (TWO_PI / n)
    mags = np.abs(evaluate(symbol, th))
    max_mag = float(mags.max())
    zero_tol = _ZERO_TOL_FACTOR * max_mag

    coarse = mags < 0.05 * max_mag
    zeros = []
    if coarse.any():
        lab, num = ndimage.label(coarse)
        # wraparound group
        if num > 1 and lab[0] and lab[-1]:
            lab[lab == lab[-1]] = lab[0]
        for g in np.unique(lab[lab > 0]):
            idx = np.nonzero(lab == g)[0]
            th0 = th[idx[np.argmin(mags[idx])]]
            span = TWO_PI / n * max(4, idx.size)
            cand = _refine_zero(symbol, th0, span)
            if abs(evaluate(symbol, cand)) < zero_tol:
                zeros.append(cand)
    zeros = sorted(set(round(z, 12) % TWO_PI for z in zeros))
    merged = []
    for z in zeros:
        if not merged or min(abs(z - merged[-1]), TWO_PI - abs(z - merged[-1])) > 1e-8:
            merged.append(z)
    if len(merged) > 1 and TWO_PI - abs(merged[-1] - merged[0]) < 1e-8:
        merged.pop()
    zeros = merged
    m = len(zeros)

    min_deriv = float(np.min(np.abs(derivative(symbol, th))))
    max_deriv = float(np.max(np.abs(derivative(symbol, th))))
    deriv_ok = max_deriv > 0 and min_deriv > 1e-6 * max_deriv
    if not deriv_ok:
        notes.append("derivative floor violated; index reported without validity")

    if m == 0:
        var = _unwrapped_variation(symbol, 0.0, TWO_PI)
        raw = var / TWO_PI
        snapped = round(raw)
        if abs(raw - snapped) > 1e-3:
            raise UnwrapFailure(
                f"zero-free symbol gave non-integer variation {raw:.6f}; "
                "a zero of F was probably missed")
        try:
            wn = winding_number(disc, 0.0)
            if wn != snapped:
                notes.append(f"unwrap gave {snapped} but winding at 0 is {wn}")
        except NearCurve:
            notes.append("0 is near the curve; winding cross-check skipped")
        return AhernClarkIndex(
            value=Fraction(snapped), float_value=float(snapped),
            zero_count=0, zero_params=(), arc_variations=(float(var),),
            validity=deriv_ok and not notes, notes=tuple(notes))

    # Per-arc variation between consecutive zeros, shrinking toward the
    # endpoints geometrically until the variation stabilizes.  For sampled
    # symbols the shrink stops at the local knot spacing: inside the first
    # knot gap the interpolant's phase is an artifact of its finite slope,
    # not data.
    def eps_floor(theta_zero, arc):
        if symbol.kind == "fourier":
            return arc * 1e-12
        gaps = np.abs((symbol.theta - theta_zero + np.pi) % TWO_PI - np.pi)
        gaps = gaps[gaps > 1e-13]
        return max(float(gaps.min()), arc * 1e-12)

    variations = []
    total = 0.0
    for i, z0 in enumerate(zeros):
        z1 = zeros[(i + 1) % m]
        arc = (z1 - z0) % TWO_PI
        if arc == 0.0:
            arc = TWO_PI
        lo = eps_floor(z0, arc)
        hi = eps_floor(z1, arc)
        prev = None
        var = None
        for k in range(2, 13):
            eps = 10.0 ** -k
            var = _unwrapped_variation(symbol, z0 + max(arc * eps, lo),
                                       z0 + arc - max(arc * eps, hi))
            if prev is not None and abs(var - prev) < 1e-4:
                break
            if max(arc * eps, lo) == lo and max(arc * eps, hi) == hi:
                break
            prev = var
        variations.append(float(var))
        total += var

    raw = (total + m * np.pi) / TWO_PI
    sixth = round(raw * 6.0) / 6.0
    if abs(raw - sixth) <= 1e-3:
        value = Fraction(round(raw * 6.0), 6)
        integer = value.denominator == 1
        if not integer:
            notes.append("non-integer index: smoothness hypotheses violated")
        return AhernClarkIndex(
            value=value, float_value=float(value), zero_count=m,
            zero_params=tuple(zeros), arc_variations=tuple(variations),
            validity=deriv_ok and integer, notes=tuple(notes))
    notes.append(f"index {raw:.6f} does not snap to a sixth")
    return AhernClarkIndex(
        value=float(raw), float_value=float(raw), zero_count=m,
        zero_params=tuple(zeros), arc_variations=tuple(variations),
        validity=False, notes=tuple(notes))


def _strand_curvature(symbol, theta, tau):
    """Signed curvature of the strand at theta, in the frame (tau, i*tau)."""
    h = 1e-4
    p0 = evaluate(symbol, theta)
    offsets = []
    for s in (-2 * h, -h, h, 2 * h):
        q = evaluate(symbol, theta + s)
        rel = (q - p0) / tau
        offsets.append((rel.real, rel.imag))
    ss = np.array([o[0] for o in offsets])
    ys = np.array([o[1] for o in offsets])
    if np.max(np.abs(ss)) == 0:
        return 0.0
    coef = np.polyfit(ss, ys, 2)
    return 2.0 * float(coef[0])


def classify_intersections(decomp, inters):
    """Fill in Type I-IV classifications for simple intersection points.

    With L the largest |winding| among the four local sectors: a transversal
    point with sectors {L, L-1, L-1, L-2} is Type III; a tangential point with
    those sectors is Type IV; a tangential point with {L, L, L-1, L-1} is Type
    II when the two L-sectors lie between the tangent arcs and Type I when
    they lie on the two sides.  Anything inconsistent stays Unclassified.
    """
    disc = decomp.disc
    step = max(float(np.median(disc.chord_lengths)), 1e-300)
    out = []
    for pt in inters:
        if len(pt.params) != 2:
            out.append(replace(pt, classification="Unclassified",
                               notes=pt.notes + ("not a simple intersection",)))
            continue
        if not pt.tangential:
            sect = pt.sector_windings
            if len(sect) != 4 or any(s is None for s in sect):
                sect = _sector_windings(disc, pt.location, pt.tangents, False,
                                        _CLUSTER_STEPS * step)
            if len(sect) == 4 and all(s is not None for s in sect):
                mags = sorted(abs(s) for s in sect)
                L = mags[-1]
                if mags == [L - 2, L - 1, L - 1, L]:
                    out.append(replace(pt, classification="TypeIII",
                                       sector_windings=tuple(sect)))
                    continue
            out.append(replace(pt, classification="Unclassified",
                               sector_windings=tuple(sect),
                               notes=pt.notes + ("inconsistent transversal sectors",)))
            continue

        tau = pt.tangents[0] / abs(pt.tangents[0])
        k0 = _strand_curvature(disc.symbol, pt.params[0], tau)
        k1 = _strand_curvature(disc.symbol, pt.params[1], tau)
        if abs(k0 - k1) < 1e-9:
            out.append(replace(pt, classification="Unclassified",
                               notes=pt.notes + ("tangential strands not separable",)))
            continue
        nhat = 1j * tau
        sides = []
        for sign in (1.0, -1.0):
            sides.append(_probe(disc, pt.location, sign * nhat, 6.0 * step))
        between = []
        smax = min(0.35 * np.sqrt(8.0 * step / abs(k0 - k1)), 0.1 * disc.diameter)
        for sgn in (1.0, -1.0):
            got = None
            for s0 in (smax, 0.6 * smax, 0.3 * smax, 1.7 * smax):
                z = (pt.location + sgn * s0 * tau
                     + ((k0 + k1) / 4.0) * s0 ** 2 * nhat)
                try:
                    got = winding_number(disc, z, prox_tol=0.1 * abs(k0 - k1) * s0 ** 2)
                    break
                except NearCurve:
                    continue
            between.append(got)
        sect = tuple(sides) + tuple(between)
        if any(s is None for s in sect):
            out.append(replace(pt, classification="Unclassified",
                               sector_sides=tuple(sides), sector_between=tuple(between),
                               notes=pt.notes + ("tangential probes ambiguous",)))
            continue
        mags = sorted(abs(s) for s in sect)
        L = mags[-1]
        cls = "Unclassified"
        note = ()
        if mags == [L - 1, L - 1, L, L]:
            between_mags = sorted(abs(s) for s in between)
            side_mags = sorted(abs(s) for s in sides)
            if between_mags == [L, L] and side_mags == [L - 1, L - 1]:
                cls = "TypeII"
            elif side_mags == [L, L] and between_mags == [L - 1, L - 1]:
                cls = "TypeI"
            else:
                note = ("mixed equal-winding arrangement",)
        elif mags == [L - 2, L - 1, L - 1, L]:
            cls = "TypeIV"
        else:
            note = ("sector multiset matches no figure",)
        out.append(replace(pt, classification=cls,
                           sector_windings=sect,
                           sector_sides=tuple(sides), sector_between=tuple(between),
                           notes=pt.notes + note))
    return IntersectionSet(points=tuple(out), disc=disc)
