"""Explicit two-by-two semigroup on the doubly wound region.

When the curve is a figure-eight inside a loop, the kernel components over
the winding -2 region carry an explicit one-parameter family: two analytic
extensions zeta_1, zeta_2 of the boundary inverse-parametrization, a branch
logarithm with its shifted twin (log_2 = log_1 + 2 pi i), and the family

    B_t = alpha_t / (z2 - z1) * [[z2 - E z1,  z1 z2 (E - 1)],
                                 [1 - E,      E z2 - z1   ]],   E = e^{2 pi i t},

which satisfies B_{s+t} = B_t B_s identically and B_1 = lambda I.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.stats import qmc

from ._errors import OnBranchCut, SeparationFailure

TWO_PI = 2.0 * np.pi


def branch_log(w, interval):
    """Logarithm with the argument chosen in the open interval (length 2 pi).

    Raises OnBranchCut when w lies on the cut ray (argument at the interval
    endpoints) or at 0.
    """
    lo, hi = interval
    if not np.isclose(hi - lo, TWO_PI):
        raise ValueError("branch interval must have length 2*pi")
    w = np.asarray(w, dtype=complex)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    if np.any(w == 0):
        raise OnBranchCut("logarithm of 0")
    arg = np.angle(w)
    arg = arg + TWO_PI * np.ceil((lo - arg) / TWO_PI)
    # values landing on the endpoints sit on the cut
    edge = np.minimum(np.abs(arg - lo), np.abs(arg - hi))
    if np.any(edge < 1e-12):
        raise OnBranchCut(f"argument pinned to the cut at {interval}")
    out = np.log(np.abs(w)) + 1j * arg
    return complex(out[0]) if scalar else out


def zeta_circle_arc(lam, center, radius, nu, interval=(-np.pi / 2, 3 * np.pi / 2)):
    """exp(log_interval((lam - center)/radius) / nu): the circle-arc extension."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if nu <= 1:
        raise ValueError("the winding speed nu must exceed 1")
    return np.exp(branch_log((np.asarray(lam, complex) - center) / radius,
                             interval) / nu)


@dataclass(frozen=True, eq=False)
class ZetaPair:
    """Two analytic extensions on the doubly wound region, plus its samples.

    The circle-arc variant uses conjugate centers c1 = conj(c2) with
    r/2 < Im(c2) < r, so the lens region between the two arcs stays clear of
    both branch cuts and the two extensions never collide on its closure.
    """

    zeta1: object
    zeta2: object
    samples: np.ndarray
    config: dict = field(default_factory=dict)

    @classmethod
    def circle_arc(cls, c1, c2, r, nu, n_interior=2048, n_boundary=512,
                   boundary_offset=1e-3, seed=7):
        c1, c2 = complex(c1), complex(c2)
        if abs(c1 - np.conj(c2)) > 1e-12 * max(abs(c1), 1.0):
            raise ValueError("circle-arc pair needs conjugate centers")
        if not 0 < c2.imag < r:
            raise ValueError("need 0 < Im(c2) < r for the arcs to close a lens")
        samples = _lens_samples(c1, c2, r, n_interior, n_boundary,
                                boundary_offset, seed)
        z1 = lambda lam: zeta_circle_arc(lam, c1, r, nu, (-np.pi / 2, 3 * np.pi / 2))
        z2 = lambda lam: zeta_circle_arc(lam, c2, r, nu, (-3 * np.pi / 2, np.pi / 2))
        return cls(zeta1=z1, zeta2=z2, samples=samples,
                   config={"c1": c1, "c2": c2, "r": float(r), "nu": float(nu)})

    @classmethod
    def from_callables(cls, zeta1, zeta2, samples, config=None):
        return cls(zeta1=zeta1, zeta2=zeta2,
                   samples=np.asarray(samples, complex), config=config or {})

    @cached_property
    def values(self):
        return (np.asarray(self.zeta1(self.samples), complex) * np.ones_like(self.samples),
                np.asarray(self.zeta2(self.samples), complex) * np.ones_like(self.samples))

    @property
    def min_separation(self):
        z1, z2 = self.values
        return float(np.min(np.abs(z1 - z2)))


def _lens_samples(c1, c2, r, n_interior, n_boundary, boundary_offset, seed):
    """Quasi-random interior points of the lens plus boundary-offset points."""
    lo = complex(min(c1.real, c2.real) - r, c1.imag - r)
    hi = complex(max(c1.real, c2.real) + r, c2.imag + r)
    halton = qmc.Halton(d=2, seed=seed)
    pts = []
    while len(pts) < n_interior:
        raw = halton.random(4 * n_interior)
        cand = (lo.real + raw[:, 0] * (hi.real - lo.real)
                + 1j * (lo.imag + raw[:, 1] * (hi.imag - lo.imag)))
        inside = (np.abs(cand - c1) < r) & (np.abs(cand - c2) < r)
        pts.extend(cand[inside][: n_interior - len(pts)])
    pts = np.asarray(pts, complex)

    # Boundary offsets: walk each arc, pull inward along the chord of centers.
    corners_delta = np.arcsin(c2.imag / r)
    taus = np.linspace(corners_delta, np.pi - corners_delta, n_boundary // 2 + 2)[1:-1]
    off = boundary_offset * r
    upper = c1 + (r - off) * np.exp(1j * taus)
    lower = c2 + (r - off) * np.exp(-1j * taus)
    boundary = np.concatenate([upper, lower])
    keep = (np.abs(boundary - c1) < r) & (np.abs(boundary - c2) < r)
    return np.concatenate([pts, boundary[keep]])


@dataclass(frozen=True)
class SeparationReport:
    min_separation: float
    ratio_positivity_violations: int
    worst_points: tuple

    def as_dict(self):
        return {"min_separation": self.min_separation,
                "ratio_positivity_violations": self.ratio_positivity_violations,
                "worst_points": [[z.real, z.imag] for z in self.worst_points]}


def separation_check(pair, samples=None, angular_tol=1e-6):
    """min |zeta1 - zeta2| over the samples, and where zeta1/zeta2 turns
    positive-real (which would let the two branch values collide)."""
    pts = pair.samples if samples is None else np.asarray(samples, complex)
    z1 = np.asarray(pair.zeta1(pts), complex) * np.ones_like(pts)
    z2 = np.asarray(pair.zeta2(pts), complex) * np.ones_like(pts)
    sep = np.abs(z1 - z2)
    ratio = z1 / np.where(z2 == 0, np.nan, z2)
    ang = np.abs(np.angle(ratio))
    bad = (ang < angular_tol) | ~np.isfinite(ang)
    worst = pts[np.argsort(sep)[:5]]
    return SeparationReport(min_separation=float(sep.min()),
                            ratio_positivity_violations=int(bad.sum()),
                            worst_points=tuple(complex(w) for w in worst))


@dataclass(frozen=True, eq=False)
class ModelSemigroup:
    """The B_t family over the sampled doubly wound region.

    log1 is a branch of the logarithm holomorphic near the samples (cut ray
    chosen to miss them); its shifted twin log_2 = log_1 + 2 pi i never
    needs a second unwrapping.  alpha_t = exp(t log1).
    """

    pair: ZetaPair
    cut_angle: float
    min_separation_tol: float = 1e-12

    @classmethod
    def build(cls, pair, cut_direction=None):
        samples = pair.samples
        if np.any(np.abs(samples) < 1e-12):
            raise ValueError("0 must stay outside the doubly wound region")
        if cut_direction is not None:
            angles = [np.angle(complex(cut_direction))]
        else:
            angles = np.linspace(0, TWO_PI, 360, endpoint=False)
        sample_args = np.angle(samples) % TWO_PI
        for a in angles:
            gap = np.abs((sample_args - a + np.pi) % TWO_PI - np.pi)
            if np.min(gap) > 1e-3:
                return cls(pair=pair, cut_angle=float(a % TWO_PI))
        raise OnBranchCut("no cut ray misses the sampled region")

    def log1(self, lam):
        lo = self.cut_angle - TWO_PI
        return branch_log(lam, (lo, self.cut_angle))

    def alpha(self, lam, t):
        return np.exp(t * self.log1(lam))

    def B(self, lam, t):
        """The 2x2 matrix at the point lam and time t."""
        lam = complex(lam)
        if t <= 0:
            raise ValueError("t must be positive")
        z1 = complex(self.pair.zeta1(lam))
        z2 = complex(self.pair.zeta2(lam))
        denom = z2 - z1
        scale = max(abs(z1), abs(z2), 1.0)
        if abs(denom) < self.min_separation_tol * scale:
            raise SeparationFailure(
                f"zeta extensions collide at {lam}: |z2-z1|={abs(denom):.3e}")
        E = np.exp(2j * np.pi * t)
        a = self.alpha(lam, t)
        return (a / denom) * np.array(
            [[z2 - E * z1, z1 * z2 * (E - 1.0)],
             [1.0 - E, E * z2 - z1]], dtype=complex)

    def family_at(self, lam):
        """SemigroupFamily view at a fixed point: t -> B_t(lam)."""
        from .semigroups import SemigroupFamily
        lam = complex(lam)
        target = self.B(lam, 1.0)
        return SemigroupFamily(kind="model", target=target,
                               evaluator=lambda t: self.B(lam, t),
                               meta={"lambda": lam})


def verify_identities(model, trials=1000, seed=0, t_range=(0.05, 1.5)):
    """Max relative residual of B_{t+s} - B_t B_s over random (lam, s, t).

    The four entry identities are exact algebra, so the residual measures
    rounding only; 1e-10 is the acceptance line.
    """
    rng = np.random.default_rng(seed)
    samples = model.pair.samples
    worst = 0.0
    worst_case = None
    for _ in range(trials):
        lam = complex(samples[rng.integers(0, samples.size)])
        s = rng.uniform(*t_range)
        t = rng.uniform(*t_range)
        lhs = model.B(lam, s + t)
        rhs = model.B(lam, t) @ model.B(lam, s)
        denom = max(np.max(np.abs(lhs)), 1e-300)
        r = float(np.max(np.abs(lhs - rhs)) / denom)
        if r > worst:
            worst, worst_case = r, (lam, s, t)
    return {"max_residual": worst, "trials": trials,
            "worst_case": None if worst_case is None else
            {"lambda": [worst_case[0].real, worst_case[0].imag],
             "s": worst_case[1], "t": worst_case[2]}}
