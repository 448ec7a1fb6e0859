"""Finite-matrix operator analysis.

Numerical range boundaries by support-function sweeps, Kreiss constants of
regions sampled on offset curves, sectorial angle estimation, the contour
functional calculus for fractional powers, and branch-rotated matrix
logarithms.  Everything here works on dense complex matrices at desk scale.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from ._errors import QuadratureNotConverged, RayHitsSpectrum, SpectrumOutside

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Regions


@dataclass(frozen=True)
class Sector:
    """Open sector of half-angle omega with vertex at 0; omega=0 is the ray."""

    omega: float

    def __post_init__(self):
        if not 0.0 <= self.omega < np.pi:
            raise ValueError("sector half-angle must lie in [0, pi)")

    def contains(self, z, tol=0.0):
        z = complex(z)
        if abs(z) <= tol:
            return True
        return abs(np.angle(z)) <= self.omega + tol / max(abs(z), 1e-300)

    def distance(self, z):
        z = complex(z)
        r = abs(z)
        if r == 0.0:
            return 0.0
        phi = abs(np.angle(z))
        if phi <= self.omega:
            return 0.0
        if phi <= self.omega + np.pi / 2:
            return r * np.sin(phi - self.omega)
        return r

    def sample_outside(self, distances, scale, per_curve):
        pts = []
        for d in distances:
            # Offset copies of the two rays plus a fan around the vertex, which
            # is where Jordan structure at 0 shows up.
            radii = np.geomspace(max(d, 1e-3 * scale) * 1e-2, 10.0 * scale,
                                 max(4, per_curve // 2))
            for sgn in (1.0, -1.0):
                normal = np.exp(1j * sgn * (self.omega + np.pi / 2))
                ray = np.exp(1j * sgn * self.omega)
                pts.extend(r * ray + d * normal for r in radii)
            fan = np.linspace(self.omega + 0.05, np.pi, 8)
            pts.extend(d * np.exp(1j * sgn * a) for a in fan for sgn in (1.0, -1.0))
        return [z for z in pts if not self.contains(z)]

    def as_dict(self):
        return {"kind": "sector", "omega": self.omega}


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def contains(self, z, tol=0.0):
        return abs(complex(z) - self.center) <= self.radius + tol

    def distance(self, z):
        return max(0.0, abs(complex(z) - self.center) - self.radius)

    def sample_outside(self, distances, scale, per_curve):
        angles = np.linspace(0.0, TWO_PI, per_curve, endpoint=False)
        pts = []
        for d in distances:
            pts.extend(self.center + (self.radius + d) * np.exp(1j * angles))
        return pts

    def as_dict(self):
        return {"kind": "disk", "center": [self.center.real, self.center.imag],
                "radius": self.radius}


@dataclass(frozen=True)
class DiskExteriorComplementClip:
    """The clipped disk exterior {|z| <= clip_radius} minus D(center, radius).

    The hole is assumed to sit inside the clip circle, which is the shape the
    rolling-disk argument uses.
    """

    center: complex
    radius: float
    clip_radius: float

    def contains(self, z, tol=0.0):
        z = complex(z)
        return (abs(z) <= self.clip_radius + tol
                and abs(z - self.center) >= self.radius - tol)

    def distance(self, z):
        z = complex(z)
        if self.contains(z):
            return 0.0
        if abs(z - self.center) < self.radius:
            return self.radius - abs(z - self.center)
        return abs(z) - self.clip_radius

    def sample_outside(self, distances, scale, per_curve):
        angles = np.linspace(0.0, TWO_PI, per_curve, endpoint=False)
        pts = []
        for d in distances:
            if d < self.radius:
                pts.extend(self.center + (self.radius - d) * np.exp(1j * angles))
            pts.extend((self.clip_radius + d) * np.exp(1j * angles))
        return [z for z in pts if not self.contains(z)]

    def as_dict(self):
        return {"kind": "disk_exterior_clip",
                "center": [self.center.real, self.center.imag],
                "radius": self.radius, "clip_radius": self.clip_radius}


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon, vertices positively oriented."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)
        area = 0.0
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            area += v.real * w.imag - w.real * v.imag
        if area <= 0:
            raise ValueError("vertices must be positively oriented")

    def contains(self, z, tol=0.0):
        z = complex(z)
        for i, v in enumerate(self.vertices):
            w = self.vertices[(i + 1) % len(self.vertices)]
            if ((w - v).real * (z - v).imag - (w - v).imag * (z - v).real) < -tol:
                return False
        return True

    def distance(self, z):
        if self.contains(z):
            return 0.0
        z = complex(z)
        best = np.inf
        for i, v in enumerate(self.vertices):
            w = self.vertices[(i + 1) % len(self.vertices)]
            d = w - v
            t = ((z - v) * d.conjugate()).real / max(abs(d) ** 2, 1e-300)
            t = min(1.0, max(0.0, t))
            best = min(best, abs(z - (v + t * d)))
        return best

    def sample_outside(self, distances, scale, per_curve):
        pts = []
        n = len(self.vertices)
        per_edge = max(2, per_curve // n)
        for d in distances:
            for i, v in enumerate(self.vertices):
                w = self.vertices[(i + 1) % n]
                normal = -1j * (w - v) / max(abs(w - v), 1e-300)
                for t in np.linspace(0.0, 1.0, per_edge, endpoint=False):
                    pts.append(v + t * (w - v) + d * normal)
                pts.append(v + d * (v - (v + w) / 2) / max(abs(v - (v + w) / 2), 1e-300))
        return [z for z in pts if not self.contains(z)]

    def as_dict(self):
        return {"kind": "polygon",
                "vertices": [[v.real, v.imag] for v in self.vertices]}


@dataclass(frozen=True, eq=False)
class NumericalRangeHull:
    """Region given by support samples of a numerical range boundary."""

    angles: np.ndarray
    support: np.ndarray
    boundary_points: np.ndarray

    def contains(self, z, tol=0.0):
        z = complex(z)
        proj = (z * np.exp(-1j * self.angles)).real
        return bool(np.all(proj <= self.support + tol))

    def distance(self, z):
        z = complex(z)
        proj = (z * np.exp(-1j * self.angles)).real
        return float(max(0.0, np.max(proj - self.support)))

    def sample_outside(self, distances, scale, per_curve):
        stride = max(1, self.angles.size // per_curve)
        pts = []
        for d in distances:
            pts.extend(self.boundary_points[::stride]
                       + d * np.exp(1j * self.angles[::stride]))
        return [z for z in pts if not self.contains(z)]

    def as_dict(self):
        return {"kind": "numerical_range_hull",
                "angles": self.angles.tolist(),
                "support": self.support.tolist()}


# ---------------------------------------------------------------------------
# Numerical range


@dataclass(frozen=True, eq=False)
class NumericalRangeBoundary:
    """Support sweep of W(T): angle, support value, attaining boundary point."""

    angles: np.ndarray
    support: np.ndarray
    boundary_points: np.ndarray

    @cached_property
    def hull(self):
        return NumericalRangeHull(self.angles, self.support, self.boundary_points)

    @property
    def numerical_radius(self):
        return float(np.max(np.abs(self.boundary_points)))

    def convexity_defect(self):
        """Max violation of the support inequality on consecutive triples."""
        s = self.support
        step = self.angles[1] - self.angles[0]
        lhs = np.roll(s, 1) + np.roll(s, -1)
        return float(np.max(2.0 * s * np.cos(step) - lhs))

    def as_dict(self):
        return {"angles": self.angles.tolist(),
                "support": self.support.tolist(),
                "boundary": [[p.real, p.imag] for p in self.boundary_points]}


def numerical_range(matrix, num_angles=720):
    """Boundary of W(T) by extreme eigenpairs of rotated Hermitian parts.

    For each direction theta the largest eigenvalue of the Hermitian part of
    e^{-i theta} T is the support value, and the Rayleigh quotient of its
    eigenvector recovers the attaining boundary point.
    """
    T = np.asarray(matrix, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("need a square matrix")
    if num_angles < 8:
        raise ValueError("need at least 8 angles")
    angles = np.arange(num_angles) * (TWO_PI / num_angles)
    support = np.empty(num_angles)
    boundary = np.empty(num_angles, dtype=complex)
    for k, th in enumerate(angles):
        B = np.exp(-1j * th) * T
        H = (B + B.conj().T) / 2.0
        vals, vecs = scipy.linalg.eigh(H)
        support[k] = vals[-1]
        x = vecs[:, -1]
        boundary[k] = complex(x.conj() @ (T @ x))
    return NumericalRangeBoundary(angles, support, boundary)


def zero_in_interior_numrange(matrix_or_boundary, margin=1e-9, num_angles=720):
    """True iff 0 is strictly inside the numerical-range hull."""
    nr = matrix_or_boundary
    if not isinstance(nr, NumericalRangeBoundary):
        nr = numerical_range(nr, num_angles)
    return bool(np.all(nr.support > margin))


# ---------------------------------------------------------------------------
# Kreiss constants


@dataclass(frozen=True, eq=False)
class KreissEstimate:
    """Sampled lower bound for sup dist(z, region) * ||(z-T)^{-1}||.

    The bound is a max over nonnegative sampled ratios, hence monotone under
    extra samples.  finite is a heuristic: the sup is called finite when
    doubling the sampling budget grows the bound by less than 5 percent.
    """

    region: object
    lower_bound: float
    doubled_bound: float
    finite: bool
    far_field_bound: float
    samples: tuple = field(repr=False, default=())

    def as_dict(self, max_samples=200):
        samp = self.samples[:max_samples]
        return {"region": self.region.as_dict(),
                "lower_bound": self.lower_bound,
                "doubled_bound": self.doubled_bound,
                "finite": self.finite,
                "far_field_bound": self.far_field_bound,
                "samples": [[z.real, z.imag, r] for z, r in samp]}


_OFFSET_DECADES = (1e-3, 1e-2, 1e-1, 1.0, 10.0)


def _worker_cap():
    import os
    try:
        return max(1, int(os.environ.get("TOEPLITZ_EMBED_THREADS", "1")))
    except ValueError:
        return 1


def _ratio_samples(T, region, scale, per_curve, distances=_OFFSET_DECADES):
    n = T.shape[0]
    eye = np.eye(n)
    pts = []
    for z in region.sample_outside([d * scale for d in distances],
                                   scale, per_curve):
        z = complex(z)
        d = region.distance(z)
        if d > 0.0:
            pts.append((z, d))
    norm_t = float(np.linalg.norm(T, 2))
    ring = 2.0 * max(norm_t, 1e-9)
    for z in ring * np.exp(1j * np.linspace(0, TWO_PI, 32, endpoint=False)):
        z = complex(z)
        d = region.distance(z)
        if d > 0.0:
            pts.append((z, d))

    def ratio(item):
        z, d = item
        smin = np.linalg.svd(z * eye - T, compute_uv=False)[-1]
        return None if smin == 0.0 else (z, d / smin)

    workers = _worker_cap()
    if workers > 1 and len(pts) > 64:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(ratio, pts))
    else:
        results = [ratio(item) for item in pts]
    return [r for r in results if r is not None]


def kreiss_constant(T, region, budget=200):
    """Estimate the Kreiss constant of T with respect to region.

    Samples offset curves at distances 1e-3..10 times the natural scale
    outside the region boundary plus a far-field ring at |z| = 2||T||, and
    reports max dist(z, region)/sigma_min(z - T).  Requires the spectrum
    inside the closed region (SpectrumOutside otherwise).  Far outside, the
    ratio obeys 1 + (R + ||T||)/(|z| - ||T||), reported as far_field_bound.
    """
    T = np.asarray(matrix_or(T), dtype=complex)
    eigs = np.linalg.eigvals(T)
    norm_t = float(np.linalg.norm(T, 2))
    scale = max(norm_t, 1e-9)
    slack = 1e-9 * scale
    for e in eigs:
        if not region.contains(e, tol=slack):
            raise SpectrumOutside(complex(e))

    samples = _ratio_samples(T, region, scale, per_curve=max(8, budget))
    bound = max((r for _, r in samples), default=0.0)
    # The doubled budget also refines the offset ladder, so an unbounded sup
    # (a Jordan structure pressed against the boundary) keeps growing instead
    # of stabilizing on a fixed set of distances.
    finer = tuple(_OFFSET_DECADES) + tuple(d / 3.0 for d in _OFFSET_DECADES)
    samples2 = _ratio_samples(T, region, scale, per_curve=max(16, 2 * budget),
                              distances=finer)
    bound2 = max((r for _, r in samples2), default=0.0)
    growth = (bound2 - bound) / bound if bound > 0 else 0.0
    ring_r = 2.0 * scale
    far_field = 1.0 + (ring_r + norm_t) / max(ring_r - norm_t, 1e-9)
    return KreissEstimate(region=region, lower_bound=float(bound),
                          doubled_bound=float(bound2),
                          finite=bool(growth < 0.05),
                          far_field_bound=float(far_field),
                          samples=tuple(sorted(samples2, key=lambda s: -s[1])))


def matrix_or(T):
    """Accept TruncatedToeplitz or a plain array."""
    return T.matrix if hasattr(T, "matrix") else T


# ---------------------------------------------------------------------------
# Sectorial angle and calculus


@dataclass(frozen=True)
class SectorialAngleResult:
    omega: float | None
    kreiss: KreissEstimate | None
    tried: tuple
    diagnostics: tuple = ()

    @property
    def not_sectorial(self):
        return self.omega is None


def sectorial_angle(T, angles=None, budget=120):
    """Smallest tested half-angle whose sector has a finite Kreiss estimate.

    The spectral arguments give a hard floor; candidate angles below it are
    skipped.  Finiteness is the sampled-sup stabilization heuristic from
    kreiss_constant, so the answer carries its diagnostics rather than a
    proof.  Returns a result with omega=None when no sector below pi works.
    """
    T = np.asarray(matrix_or(T), dtype=complex)
    eigs = np.linalg.eigvals(T)
    scale = max(float(np.linalg.norm(T, 2)), 1e-12)
    big = np.abs(eigs) > 1e-12 * scale
    floor = float(np.max(np.abs(np.angle(eigs[big])))) if big.any() else 0.0
    if floor >= np.pi - 1e-12:
        return SectorialAngleResult(
            omega=None, kreiss=None, tried=(),
            diagnostics=("an eigenvalue lies on the closed negative axis",))

    if angles is None:
        grid = np.unique(np.concatenate([
            [floor], np.pi * np.arange(1, 64) / 64.0]))
        angles = [a for a in grid if a >= floor - 1e-12 and a < np.pi]
    else:
        angles = sorted(a for a in angles if 0 <= a < np.pi)

    tried = []
    for omega in angles:
        if omega < floor - 1e-12:
            tried.append((omega, "spectrum outside"))
            continue
        try:
            est = kreiss_constant(T, Sector(float(omega)), budget=budget)
        except SpectrumOutside:
            tried.append((omega, "spectrum outside"))
            continue
        tried.append((omega, est.doubled_bound if est else None))
        if est.finite:
            return SectorialAngleResult(omega=float(omega), kreiss=est,
                                        tried=tuple(tried))
    return SectorialAngleResult(
        omega=None, kreiss=None, tried=tuple(tried),
        diagnostics=("no tested sector stabilized",))


def _power_contour(T, t, omega_prime, radius, nodes):
    """Quadrature of z^t (z-T)^{-1} dz/(2 pi i) over the sector boundary."""
    n = T.shape[0]
    eye = np.eye(n)
    acc = np.zeros((n, n), dtype=complex)
    xs, ws = np.polynomial.legendre.leggauss(nodes)

    def resolvent(z):
        return np.linalg.solve(z * eye - T, eye)

    # Rays, substituting z = u^2 to absorb the endpoint singularity of z^t.
    umax = np.sqrt(radius)
    u = umax * (xs + 1.0) / 2.0
    wu = ws * umax / 2.0
    for sgn, orient in ((-1.0, +1.0), (+1.0, -1.0)):
        ray = np.exp(1j * sgn * omega_prime)
        for uk, wk in zip(u, wu):
            z = (uk ** 2) * ray
            if uk == 0.0:
                continue
            acc += orient * wk * (z ** t) * resolvent(z) * 2.0 * uk * ray
    # Arc at |z| = radius from -omega' to +omega'.
    phi = omega_prime * xs
    wphi = ws * omega_prime
    for pk, wk in zip(phi, wphi):
        z = radius * np.exp(1j * pk)
        acc += wk * (z ** t) * resolvent(z) * 1j * z
    return acc / (2j * np.pi)


def sectorial_power(T, t, omega_prime=None, radius=None, nodes=200, tol=1e-8):
    """z^t(T) through the clipped-sector contour calculus.

    omega_prime defaults to the midpoint of the estimated sectorial angle and
    pi; the clip radius to 2||T||.  Nodes double until the result moves by
    less than tol in spectral norm (QuadratureNotConverged otherwise).
    """
    T = np.asarray(matrix_or(T), dtype=complex)
    if t <= 0:
        raise ValueError("t must be positive")
    norm_t = float(np.linalg.norm(T, 2))
    if omega_prime is None:
        res = sectorial_angle(T)
        if res.not_sectorial:
            raise SpectrumOutside(None, "matrix is not sectorial")
        omega_prime = (res.omega + np.pi) / 2.0
    if not 0 < omega_prime < np.pi:
        raise ValueError("omega_prime must lie in (0, pi)")
    radius = radius or 2.0 * max(norm_t, 1e-9)
    if radius <= norm_t:
        raise ValueError("contour radius must exceed ||T||")

    prev = _power_contour(T, t, omega_prime, radius, nodes)
    for _ in range(5):
        nodes *= 2
        cur = _power_contour(T, t, omega_prime, radius, nodes)
        if np.linalg.norm(cur - prev, 2) <= tol * max(1.0, np.linalg.norm(cur, 2)):
            return cur
        prev = cur
    raise QuadratureNotConverged(
        f"power contour did not stabilize below {tol} at {nodes} nodes")


def matrix_log_off_ray(T, alpha):
    """Branch-rotated logarithm with cut along the ray of angle alpha.

    Rotates the forbidden ray to the negative axis, applies the inverse
    scaling-and-squaring principal logarithm, and rotates back:
    log_alpha(T) = logm(e^{-i(alpha-pi)} T) + i(alpha-pi).
    Raises RayHitsSpectrum when an eigenvalue sits on the closed ray or at 0.
    """
    T = np.asarray(matrix_or(T), dtype=complex)
    eigs = np.linalg.eigvals(T)
    scale = max(float(np.max(np.abs(eigs))), 1e-300)
    for e in eigs:
        if abs(e) < 1e-12 * scale:
            raise RayHitsSpectrum(complex(e), "eigenvalue at the branch point 0")
        w = e * np.exp(-1j * alpha)
        if w.real >= 0 and abs(w.imag) < 1e-9 * scale:
            raise RayHitsSpectrum(complex(e))
    rot = np.exp(-1j * (alpha - np.pi))
    log_rotated = scipy.linalg.logm(rot * T)
    return log_rotated + 1j * (alpha - np.pi) * np.eye(T.shape[0])
