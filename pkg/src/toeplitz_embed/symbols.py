"""Symbols on the unit circle: evaluation, discretization, Toeplitz truncations.

A symbol is a complex-valued function F on the unit circle, given either by
finitely many Fourier coefficients or by samples of a closed parametric curve.
Everything downstream (winding analysis, Hardy-space projections, truncated
Toeplitz matrices) consumes the two views exposed here: pointwise evaluation
F(e^{i theta}) and the coefficient sequence c_k.
"""

from dataclasses import dataclass, field
from functools import cached_property
import warnings

import numpy as np
from scipy.interpolate import CubicSpline

from ._errors import AliasWarning, RefinementOverflow

TWO_PI = 2.0 * np.pi

# Adaptive discretization limits.
_MAX_POINTS = 1 << 20
_TURN_LIMIT = np.pi / 8


@dataclass(frozen=True, eq=False)
class Symbol:
    """A circle function, either a trigonometric polynomial or a sampled curve.

    For the ``fourier`` variant, ``coeffs`` maps integer frequencies k to
    complex coefficients c_k and evaluation is the exact sum of c_k e^{ik
    theta}.  For the ``sampled`` variant, ``theta``/``values`` hold samples of
    a closed curve at strictly increasing parameters in [0, 2 pi); evaluation
    interpolates with a periodic cubic spline.
    """

    kind: str
    coeffs: dict | None = None
    theta: np.ndarray | None = None
    values: np.ndarray | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind == "fourier":
            if not self.coeffs or not any(c != 0 for c in self.coeffs.values()):
                raise ValueError("fourier symbol needs at least one nonzero coefficient")
        elif self.kind == "sampled":
            th = np.asarray(self.theta, dtype=float)
            vals = np.asarray(self.values, dtype=complex)
            if th.ndim != 1 or th.shape != vals.shape or th.size < 16:
                raise ValueError("sampled symbol needs >= 16 matching samples")
            if np.any(np.diff(th) <= 0) or th[0] < 0 or th[-1] >= TWO_PI:
                raise ValueError("sample parameters must be strictly increasing in [0, 2*pi)")
            object.__setattr__(self, "theta", th)
            object.__setattr__(self, "values", vals)
        else:
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    @classmethod
    def from_coeffs(cls, coeffs, name=None):
        clean = {int(k): complex(c) for k, c in coeffs.items() if c != 0}
        return cls(kind="fourier", coeffs=clean, name=name)

    @classmethod
    def from_samples(cls, theta, values, name=None):
        return cls(kind="sampled", theta=np.asarray(theta, float),
                   values=np.asarray(values, complex), name=name)

    @classmethod
    def from_function(cls, fn, num_samples=1024, name=None):
        """Sample a callable F(theta) uniformly and wrap it as a sampled symbol."""
        th = np.arange(num_samples) * (TWO_PI / num_samples)
        return cls.from_samples(th, np.asarray(fn(th), complex), name=name)

    @cached_property
    def _freqs(self):
        ks = np.array(sorted(self.coeffs), dtype=int)
        cs = np.array([self.coeffs[int(k)] for k in ks], dtype=complex)
        return ks, cs

    @cached_property
    def _spline(self):
        th = np.append(self.theta, self.theta[0] + TWO_PI)
        vals = np.append(self.values, self.values[0])
        return CubicSpline(th, vals, bc_type="periodic")

    @property
    def max_frequency(self):
        if self.kind == "fourier":
            return int(max(abs(k) for k in self.coeffs))
        return self.theta.size // 4

    def __repr__(self):
        tag = self.name or self.kind
        size = len(self.coeffs) if self.kind == "fourier" else self.theta.size
        return f"Symbol({tag}, {self.kind}, {size} terms)"


def evaluate(symbol, theta):
    """Evaluate F(e^{i theta}); 2*pi-periodic, vectorized over theta."""
    th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    if symbol.kind == "fourier":
        ks, cs = symbol._freqs
        out = np.exp(1j * th[:, None] * ks[None, :]) @ cs
    else:
        out = symbol._spline(th)
    return complex(out[0]) if scalar else out


def derivative(symbol, theta):
    """Evaluate dF/dtheta; exact term-wise for the fourier variant."""
    th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    if symbol.kind == "fourier":
        ks, cs = symbol._freqs
        out = np.exp(1j * th[:, None] * ks[None, :]) @ (1j * ks * cs)
    else:
        out = symbol._spline(th, 1)
    return complex(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class CurveDiscretization:
    """Polyline proxy for the closed curve F(T).

    ``theta`` holds N parameters, ``points`` and ``tangents`` the matching
    values of F and dF/dtheta.  Segment i joins point i to point i+1 (mod N);
    ``refined`` marks segments produced by adaptive bisection.  A degenerate
    discretization (constant symbol) keeps 16 coincident points.
    """

    symbol: Symbol
    theta: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    refined: np.ndarray
    target_step: float
    degenerate: bool = False

    @property
    def size(self):
        return self.points.size

    @cached_property
    def segment_starts(self):
        return self.points

    @cached_property
    def segment_ends(self):
        return np.roll(self.points, -1)

    @cached_property
    def chord_lengths(self):
        return np.abs(self.segment_ends - self.segment_starts)

    @cached_property
    def curve_length(self):
        return float(self.chord_lengths.sum())

    @cached_property
    def diameter(self):
        pts = self.points
        return float(max(np.ptp(pts.real), np.ptp(pts.imag)) * np.sqrt(2.0)) or 1.0

    @cached_property
    def bounding_box(self):
        pts = self.points
        return (float(pts.real.min()), float(pts.real.max()),
                float(pts.imag.min()), float(pts.imag.max()))

    @cached_property
    def _kdtree(self):
        from scipy.spatial import cKDTree
        return cKDTree(np.column_stack([self.points.real, self.points.imag]))

    def distance_to(self, z):
        """Distance from z to the polyline (exact over segments near z)."""
        z = complex(z)
        k = min(24, self.size)
        _, idx = self._kdtree.query([z.real, z.imag], k=k)
        idx = np.atleast_1d(idx)
        cand = np.unique(np.concatenate([idx, (idx - 1) % self.size]))
        a = self.points[cand]
        b = self.points[(cand + 1) % self.size]
        return float(np.min(_point_segment_distance(z, a, b)))


def _point_segment_distance(z, a, b):
    ab = b - a
    denom = np.abs(ab) ** 2
    t = np.zeros_like(denom)
    nz = denom > 0
    t[nz] = np.clip(((z - a[nz]) * np.conj(ab[nz])).real / denom[nz], 0.0, 1.0)
    return np.abs(z - (a + t * ab))


def discretize(symbol, target_step):
    """Discretize the curve adaptively.

    Segments are bisected until every chord is at most ``target_step`` and the
    turning angle at each interior vertex is below pi/8.  Raises
    RefinementOverflow past 2**20 points, which signals a near-singular
    parametrization rather than a resolvable curve.
    """
    if target_step <= 0:
        raise ValueError("target_step must be positive")

    if symbol.kind == "fourier":
        th = np.arange(256) * (TWO_PI / 256)
    else:
        # Start from the sample knots so exact touch points stay vertices.
        th = symbol.theta.copy()
        if th.size < 256:
            fill = np.arange(256) * (TWO_PI / 256)
            th = np.unique(np.concatenate([th, fill]))
    pts = evaluate(symbol, th)

    scale = float(np.max(np.abs(pts))) or 1.0
    if np.max(np.abs(pts - pts[0])) < 1e-12 * (1.0 + scale):
        th = np.arange(16) * (TWO_PI / 16)
        pts = evaluate(symbol, th)
        return CurveDiscretization(symbol, th, pts, derivative(symbol, th),
                                   np.zeros(16, bool), float(target_step), degenerate=True)

    depth = np.zeros(th.size, dtype=int)
    while True:
        chords = np.abs(np.roll(pts, -1) - pts)
        segs = np.roll(pts, -1) - pts
        prev = np.roll(segs, 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            turn = np.abs(np.angle(segs / np.where(prev == 0, 1, prev)))
        turn[(chords == 0) | (np.abs(prev) == 0)] = 0.0
        bad = (chords > target_step) | (turn > _TURN_LIMIT) | (np.roll(turn, -1) > _TURN_LIMIT)
        if not bad.any():
            break
        if th.size + bad.sum() > _MAX_POINTS:
            raise RefinementOverflow(
                f"curve refinement needs more than {_MAX_POINTS} points")
        gaps = (np.roll(th, -1) - th) % TWO_PI
        mids = th + gaps / 2.0
        new_th = np.sort(np.concatenate([th, np.mod(mids[bad], TWO_PI)]))
        new_depth = np.zeros(new_th.size, dtype=int)
        keep = np.searchsorted(new_th, th)
        new_depth[keep] = depth
        inserted = np.ones(new_th.size, bool)
        inserted[keep] = False
        new_depth[inserted] = 1
        th, depth = new_th, new_depth
        pts = evaluate(symbol, th)

    refined = (depth > 0) | (np.roll(depth, -1) > 0)
    return CurveDiscretization(symbol, th, pts, derivative(symbol, th),
                               refined, float(target_step))


@dataclass(frozen=True, eq=False)
class TruncatedToeplitz:
    """The n x n matrix (c_{j-k}) of Fourier coefficients of the symbol."""

    symbol: Symbol
    n: int
    matrix: np.ndarray

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix, 2))


def fourier_coefficients(symbol, max_k, num_samples=None):
    """Coefficients c_k for |k| <= max_k, by exact lookup or FFT analysis."""
    if symbol.kind == "fourier":
        return {k: symbol.coeffs.get(k, 0.0 + 0.0j) for k in range(-max_k, max_k + 1)}
    source = symbol.theta.size
    if source < 4 * max(max_k, 1):
        warnings.warn(
            f"{source} samples resolve frequencies only up to ~{source // 4}; "
            f"requested |k| <= {max_k}", AliasWarning, stacklevel=2)
    m = num_samples or max(256, 1 << int(np.ceil(np.log2(4 * max(max_k, 1)))))
    th = np.arange(m) * (TWO_PI / m)
    spectrum = np.fft.fft(evaluate(symbol, th)) / m
    out = {}
    for k in range(-max_k, max_k + 1):
        out[k] = complex(spectrum[k % m])
    return out


def toeplitz_truncation(symbol, n):
    """Compression of T_F to the span of 1, z, ..., z^{n-1}."""
    if n < 1:
        raise ValueError("truncation order must be >= 1")
    coeffs = fourier_coefficients(symbol, n - 1 if n > 1 else 1)
    col = np.array([coeffs.get(j, 0j) for j in range(n)], dtype=complex)
    row = np.array([coeffs.get(-j, 0j) for j in range(n)], dtype=complex)
    from scipy.linalg import toeplitz as _toeplitz
    return TruncatedToeplitz(symbol, n, _toeplitz(col, row))


@dataclass(frozen=True)
class HypothesisReport:
    """Numerical verdicts on the smoothness/geometry hypotheses for a symbol.

    h1: F is C^{1+eps}-like with nonvanishing derivative (derivative floor plus
        coefficient-decay proxy; a confidence, not a proof).
    h2: the curve self-intersects finitely many times, with no overlapping arcs.
    h3: every winding number of the curve is <= 0.
    h3bis: the winding numbers have a constant sign.
    """

    h1: bool
    h2: bool
    h3: bool
    h3bis: bool
    min_abs_derivative: float
    max_abs_derivative: float
    decay_exponent: float | None
    smoothness_confidence: float
    windings: tuple
    intersection_count: int
    notes: tuple = field(default_factory=tuple)

    def as_dict(self):
        return {
            "h1": self.h1, "h2": self.h2, "h3": self.h3, "h3bis": self.h3bis,
            "min_abs_derivative": self.min_abs_derivative,
            "max_abs_derivative": self.max_abs_derivative,
            "decay_exponent": self.decay_exponent,
            "smoothness_confidence": self.smoothness_confidence,
            "windings": list(self.windings),
            "intersection_count": self.intersection_count,
            "notes": list(self.notes),
        }


# Scale-invariant floor for the H1 nonvanishing test.
DERIV_TOL_FACTOR = 1e-6
# Decay proxy: sum |k|^(1+eps0) |c_k| with eps0 = 0.51 needs |c_k| = o(k^-2.51).
DECAY_EXPONENT_NEEDED = 2.51


def check_hypotheses(symbol, disc, decomposition=None, intersections=None):
    """Test H1/H2/H3/H3bis at numerical fidelity; never raises.

    The region decomposition and intersection set are computed on demand when
    not supplied by the caller.
    """
    from . import topology

    notes = []
    th = np.arange(4096) * (TWO_PI / 4096)
    dvals = np.abs(derivative(symbol, th))
    if not disc.degenerate:
        dvals = np.concatenate([dvals, np.abs(disc.tangents)])
    min_d, max_d = float(dvals.min()), float(dvals.max())
    deriv_ok = min_d > DERIV_TOL_FACTOR * max_d and max_d > 0

    decay = None
    if symbol.kind == "fourier":
        smooth_conf = 1.0
    else:
        coeffs = fourier_coefficients(symbol, symbol.theta.size // 4)
        ks = np.array([k for k in coeffs if abs(k) >= 4])
        mags = np.array([abs(coeffs[int(k)]) for k in ks])
        keep = mags > 1e-14 * (mags.max() or 1.0)
        if keep.sum() >= 4:
            slope, _ = np.polyfit(np.log(np.abs(ks[keep])), np.log(mags[keep]), 1)
            decay = float(-slope)
            smooth_conf = float(np.clip((decay - 1.5) / (DECAY_EXPONENT_NEEDED - 1.5), 0.0, 1.0))
        else:
            smooth_conf = 1.0  # spectrum already negligible beyond a few modes
    h1 = bool(deriv_ok and smooth_conf >= 0.5)
    if not deriv_ok:
        notes.append("derivative magnitude falls below the scale-invariant floor")

    if intersections is None:
        try:
            intersections = topology.self_intersections(disc)
            h2 = True
        except topology.DegenerateOverlap:
            intersections = None
            h2 = False
            notes.append("overlapping arcs detected (H2(b) violated)")
    else:
        h2 = True
    count = len(intersections.points) if intersections is not None else -1

    if decomposition is None:
        decomposition = topology.region_decomposition(disc)
    winds = tuple(sorted(c.winding for c in decomposition.components))
    h3 = all(w <= 0 for w in winds)
    h3bis = h3 or all(w >= 0 for w in winds)

    return HypothesisReport(
        h1=h1, h2=h2, h3=h3, h3bis=h3bis,
        min_abs_derivative=min_d, max_abs_derivative=max_d,
        decay_exponent=decay, smoothness_confidence=smooth_conf,
        windings=winds, intersection_count=count, notes=tuple(notes))


def reflect(symbol):
    """The symbol f(z) = F(1/z); its Toeplitz operator is the adjoint of T_F."""
    if symbol.kind == "fourier":
        return Symbol.from_coeffs({-k: c for k, c in symbol.coeffs.items()},
                                  name=f"reflect({symbol.name or 'F'})")
    th = np.mod(-symbol.theta[::-1], TWO_PI)
    vals = symbol.values[::-1].copy()
    order = np.argsort(th)
    th, vals = th[order], vals[order]
    keep = np.concatenate([[True], np.diff(th) > 0])
    return Symbol.from_samples(th[keep], vals[keep],
                               name=f"reflect({symbol.name or 'F'})")
