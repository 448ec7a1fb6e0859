"""Candidate semigroups through a truncated Toeplitz matrix and their checks.

A family here is any map t -> T_t on matrices with T_1 equal to a target.
Construction routes: the bounded-generator route exp(t log T) when 0 sits in
the unbounded component of the complement of the spectrum (the log taken off
a ray through that component), and the sectorial-calculus route T_t = z^t(T).
verify() measures the embedding identity, the semigroup law on a fixed
schedule, and a strong-continuity proxy on coordinate vectors.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._errors import NoAdmissibleRay, NotSectorial
from .spectral import matrix_log_off_ray, matrix_or, sectorial_angle, sectorial_power
from .topology import NearCurve, OnBoundary, in_unbounded_complement

LAW_TOL = 1e-7
EMBED_TOL = 1e-7
_LAW_SCHEDULE = (0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0)
_CONTINUITY_TIMES = (1e-1, 1e-2, 1e-3)


@dataclass(eq=False)
class SemigroupFamily:
    """Evaluable family t -> T_t with a memoized cache.

    kind is one of "generator" (T_t = exp(t G)), "sectorial" (T_t = z^t(T)
    by contour calculus), or "model" (an external evaluator, used by the
    figure-eight model).
    """

    kind: str
    target: np.ndarray
    generator: np.ndarray | None = None
    omega_prime: float | None = None
    radius: float | None = None
    evaluator: object = None
    meta: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, t):
        t = float(t)
        if t <= 0:
            raise ValueError("the family is defined for t > 0")
        if t not in self._cache:
            if self.kind == "generator":
                self._cache[t] = scipy.linalg.expm(t * self.generator)
            elif self.kind == "sectorial":
                self._cache[t] = sectorial_power(
                    self.target, t, omega_prime=self.omega_prime,
                    radius=self.radius)
            elif self.kind == "model":
                self._cache[t] = np.asarray(self.evaluator(t), dtype=complex)
            else:
                raise ValueError(f"unknown family kind {self.kind!r}")
        return self._cache[t]


def _ray_is_clear(decomp, angle, radii):
    """All sampled points of the ray lie in the unbounded spectrum complement."""
    direction = np.exp(1j * angle)
    for r in radii:
        z = r * direction
        try:
            if not in_unbounded_complement(decomp, z, "complement_of_spectrum"):
                return False
        except (OnBoundary, NearCurve):
            return False
    return True


def find_admissible_ray(T, decomp, directions=360):
    """A ray angle from 0 to infinity through the unbounded component of the
    spectrum complement, clear of all truncation eigenvalues.

    Candidate angles bisect the angular gaps between eigenvalue arguments as
    seen from 0, widest gaps first, topped up with a uniform sweep.
    """
    T = np.asarray(matrix_or(T), dtype=complex)
    eigs = np.linalg.eigvals(T)
    scale = max(float(np.max(np.abs(eigs))), 1e-12)
    args = np.sort(np.angle(eigs))
    candidates = []
    if args.size:
        gaps = np.diff(np.concatenate([args, [args[0] + 2 * np.pi]]))
        order = np.argsort(-gaps)
        candidates.extend((args[k] + gaps[k] / 2.0) for k in order)
    candidates.extend(2 * np.pi * k / directions for k in range(directions))

    xmin, xmax, ymin, ymax = decomp.disc.bounding_box
    reach = 2.0 * max(abs(xmin), abs(xmax), abs(ymin), abs(ymax), scale)
    radii = np.geomspace(1e-3 * reach, reach, 40)
    for angle in candidates:
        w = eigs * np.exp(-1j * angle)
        hit = np.any((w.real >= 0) & (np.abs(w.imag) < 1e-9 * scale))
        if hit:
            continue
        if _ray_is_clear(decomp, angle, radii):
            return float(angle % (2 * np.pi))
    raise NoAdmissibleRay(eigenvalues=eigs.tolist())


def build_dunford(trunc, decomp, directions=360):
    """Generator-based family with G = log(T) taken off an admissible ray.

    Requires 0 in the unbounded component of the complement of the spectrum;
    the branch cut then avoids both the symbol spectrum (sampled along the
    ray) and the truncation eigenvalues.
    """
    T = np.asarray(matrix_or(trunc), dtype=complex)
    try:
        ok = in_unbounded_complement(decomp, 0.0, "complement_of_spectrum")
    except (OnBoundary, NearCurve):
        ok = False
    if not ok:
        raise NoAdmissibleRay(
            eigenvalues=np.linalg.eigvals(T).tolist(),
            message="0 is not in the unbounded component of the spectrum complement")
    alpha = find_admissible_ray(T, decomp, directions)
    G = matrix_log_off_ray(T, alpha)
    return SemigroupFamily(kind="generator", target=T, generator=G,
                           meta={"ray_angle": alpha})


def build_sectorial(T, angle_result=None, budget=120):
    """Sectorial-calculus family T_t = z^t(T); NotSectorial when no sector fits."""
    T = np.asarray(matrix_or(T), dtype=complex)
    res = angle_result or sectorial_angle(T, budget=budget)
    if res.not_sectorial:
        raise NotSectorial("; ".join(res.diagnostics) or "no admissible sector")
    omega_prime = (res.omega + np.pi) / 2.0
    radius = 2.0 * max(float(np.linalg.norm(T, 2)), 1e-9)
    return SemigroupFamily(kind="sectorial", target=T,
                           omega_prime=omega_prime, radius=radius,
                           meta={"omega": res.omega})


@dataclass(frozen=True)
class VerificationReport:
    """Residuals for the embedding identity, the law, and strong continuity."""

    embed_residual: float
    law_residual: float
    law_pairs: tuple
    continuity: tuple            # (t, max_j ||T_t e_j - e_j||) pairs
    monotone_decay: bool
    accepted: bool

    def as_dict(self):
        return {
            "embed_residual": self.embed_residual,
            "law_residual": self.law_residual,
            "law_pairs": [[s, t, r] for s, t, r in self.law_pairs],
            "continuity": [[t, v] for t, v in self.continuity],
            "monotone_decay": self.monotone_decay,
            "accepted": self.accepted,
        }


def verify(family, target=None, schedule=_LAW_SCHEDULE, law_tol=LAW_TOL,
           embed_tol=EMBED_TOL):
    """Check T_1 = target, the two-parameter law, and continuity at small t.

    The continuity proxy uses the first 8 coordinate vectors, so reports are
    reproducible; the monotone-decay flag asks the proxy to decrease with t.
    """
    target = family.target if target is None else np.asarray(matrix_or(target), complex)
    t1 = family.at(1.0)
    tnorm = max(float(np.linalg.norm(target, 2)), 1e-300)
    embed_residual = float(np.linalg.norm(t1 - target, 2)) / tnorm

    pairs = []
    worst = 0.0
    for s in schedule:
        for t in schedule:
            lhs = family.at(s) @ family.at(t)
            rhs = family.at(s + t)
            denom = max(float(np.linalg.norm(rhs, 2)), 1e-300)
            r = float(np.linalg.norm(lhs - rhs, 2)) / denom
            pairs.append((s, t, r))
            worst = max(worst, r)

    n = target.shape[0]
    probes = min(8, n)
    cont = []
    for t in _CONTINUITY_TIMES:
        mat = family.at(t)
        diffs = mat[:, :probes] - np.eye(n)[:, :probes]
        cont.append((t, float(np.max(np.linalg.norm(diffs, axis=0)))))
    values = [v for _, v in sorted(cont, reverse=True)]  # increasing t order
    monotone = all(values[i] >= values[i + 1] for i in range(len(values) - 1))

    accepted = (embed_residual <= embed_tol and worst <= law_tol and monotone)
    return VerificationReport(
        embed_residual=embed_residual, law_residual=worst,
        law_pairs=tuple(pairs), continuity=tuple(cont),
        monotone_decay=monotone, accepted=accepted)
