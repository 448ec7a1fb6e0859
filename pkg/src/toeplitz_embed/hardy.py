"""FFT-based Hardy space machinery.

The analytic (Riesz) projection on uniform circle samples, continuous branch
logarithms of nonvanishing circle functions, and the explicit eigenvectors of
truncated Toeplitz matrices built from them: for lam off the curve with
negative winding w, the function z^j * Fplus(0)/Fplus(z) spans ker(T_F - lam)
as j runs over 0..|w|-1, where Fplus = exp(P_plus(log phi_lam)) and
phi_lam(tau) = tau^{-w} (F(tau) - lam).
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._errors import BranchMismatch
from .symbols import TWO_PI, evaluate, toeplitz_truncation

# Endpoint closure tolerance for branch logarithms.
_BRANCH_TOL = 1e-6
_MAX_DEPTH = 12


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """A function on the circle carried as 2^m uniform samples."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim != 1 or arr.size & (arr.size - 1):
            raise ValueError("need a power-of-two 1-D sample array")
        object.__setattr__(self, "samples", arr)

    @property
    def size(self):
        return self.samples.size

    @cached_property
    def thetas(self):
        return np.arange(self.size) * (TWO_PI / self.size)

    @cached_property
    def coefficients(self):
        """Discrete Fourier coefficients, index k stored at k mod size."""
        return np.fft.fft(self.samples) / self.size

    @classmethod
    def from_coefficients(cls, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(np.fft.ifft(coeffs * coeffs.size))

    @classmethod
    def from_callable(cls, fn, size):
        th = np.arange(size) * (TWO_PI / size)
        return cls(np.asarray(fn(th), dtype=complex))

    def coefficient(self, k):
        return complex(self.coefficients[k % self.size])

    def __add__(self, other):
        other = other.samples if isinstance(other, CircleFunction) else other
        return CircleFunction(self.samples + other)

    def __mul__(self, other):
        other = other.samples if isinstance(other, CircleFunction) else other
        return CircleFunction(self.samples * other)

    def exp(self):
        return CircleFunction(np.exp(self.samples))


def riesz_project(f):
    """Analytic projection: zero out every negative-frequency coefficient.

    Frequencies k = 1 .. size/2 - 1 are kept as positive, the Nyquist bin and
    everything above it count as negative and are dropped.
    """
    n = f.size
    coeffs = f.coefficients.copy()
    coeffs[n // 2:] = 0.0
    return CircleFunction.from_coefficients(coeffs)


def default_sample_size(symbol):
    """2^m with m = max(10, ceil(log2(64 K))): resolves the symbol and the
    decay of the outer factors built from it."""
    k = max(1, symbol.max_frequency)
    m = max(10, int(np.ceil(np.log2(64 * k))))
    return 1 << m


def log_phi_lambda(symbol, lam, winding, size=None):
    """Continuous logarithm of phi_lam(tau) = tau^{-w} (F(tau) - lam).

    The winding w must equal the winding number of the curve around lam, so
    that phi_lam has winding 0 around the origin and a continuous branch
    exists.  Raises BranchMismatch when the unwrapped argument fails to close
    up around the circle.
    """
    lam = complex(lam)
    n = size or default_sample_size(symbol)
    for depth in range(_MAX_DEPTH):
        th = np.arange(n) * (TWO_PI / n)
        phi = np.exp(-1j * winding * th) * (evaluate(symbol, th) - lam)
        if np.any(phi == 0):
            raise BranchMismatch("phi_lambda vanishes on the sample grid; "
                                 "lambda lies on the curve")
        args = np.angle(phi)
        jumps = np.diff(np.concatenate([args, args[:1]]))
        jumps = (jumps + np.pi) % TWO_PI - np.pi
        if np.max(np.abs(jumps)) < np.pi / 2:
            closure = float(jumps.sum())
            if abs(closure) > _BRANCH_TOL:
                raise BranchMismatch(
                    f"argument variation {closure:.3e} does not vanish: "
                    "wrong winding or lambda too close to the curve")
            unwrapped = args[0] + np.concatenate([[0.0], np.cumsum(jumps[:-1])])
            return CircleFunction(np.log(np.abs(phi)) + 1j * unwrapped)
        n *= 2
    raise BranchMismatch("unwrapping failed at maximal refinement depth")


def analytic_exponential(symbol, lam, winding, size=None):
    """Fplus = exp(P_plus(log phi_lam)), the outer-type analytic factor."""
    logphi = log_phi_lambda(symbol, lam, winding, size=size)
    return riesz_project(logphi).exp()


@dataclass(frozen=True, eq=False)
class Eigenvector:
    """Coefficients of h_{lam,j} = z^j Fplus(0)/Fplus, cut at degree n-1.

    residual is the formula residual: the norm of (T_n - lam) h over the rows
    a band-limited symbol leaves uncontaminated by truncation.  The rows the
    cutoff does touch are summarized by tail_rows_norm, and tail_mass bounds
    the coefficient mass of h beyond degree n-1.  h_{lam,0}(0) = 1 exactly.
    """

    lam: complex
    index: int
    n: int
    coefficients: np.ndarray
    residual: float
    full_residual: float
    tail_mass: float
    winding: int

    def __call__(self, z):
        return np.polyval(self.coefficients[::-1], z)


def eigenvector(symbol, lam, j, n, winding=None, disc=None):
    """Explicit element of ker(T_F - lam), checked against the n-truncation.

    Requires w_F(lam) < 0 and 0 <= j < |w_F(lam)|; for positive winding apply
    the construction to the reflected symbol.
    """
    lam = complex(lam)
    if winding is None:
        from .symbols import discretize
        from .topology import winding_number
        disc = disc or discretize(symbol, 0.05 * (1 + abs(lam)))
        winding = winding_number(disc, lam)
    if winding >= 0:
        raise ValueError(f"winding {winding} is nonnegative; reflect the symbol first")
    if not 0 <= j < -winding:
        raise ValueError(f"index j={j} outside 0..{-winding - 1}")

    logphi = log_phi_lambda(symbol, lam, winding)
    fplus = riesz_project(logphi).exp()
    m = fplus.size
    # Fplus(0) = exp of the constant coefficient of P_plus(log phi).
    f0 = np.exp(complex(np.mean(logphi.samples)))
    h = CircleFunction(f0 / fplus.samples)
    coeffs = h.coefficients
    base = np.zeros(n, dtype=complex)
    upto = min(n - j, m)
    if upto > 0:
        base[j:j + upto] = coeffs[:upto]
    # Exact normalization h_{lam,0}(0) = 1.
    if coeffs[0] != 0:
        base = base / coeffs[0]

    half = m // 2
    pos_tail = coeffs[min(n - j, half):half]
    neg_junk = coeffs[half:]
    tail_mass = float(np.hypot(np.linalg.norm(pos_tail), np.linalg.norm(neg_junk)))

    trunc = toeplitz_truncation(symbol, n)
    resid_vec = trunc.matrix @ base - lam * base
    norm_h = float(np.linalg.norm(base)) or 1.0
    neg_band = _negative_bandwidth(symbol)
    clean_rows = max(1, n - neg_band)
    residual = float(np.linalg.norm(resid_vec[:clean_rows])) / norm_h
    full_residual = float(np.linalg.norm(resid_vec)) / norm_h
    return Eigenvector(lam=lam, index=j, n=n, coefficients=base,
                       residual=residual, full_residual=full_residual,
                       tail_mass=tail_mass, winding=winding)


def _negative_bandwidth(symbol):
    """Largest k with c_{-k} significantly nonzero."""
    if symbol.kind == "fourier":
        negs = [-k for k in symbol.coeffs if k < 0]
        return max(negs) if negs else 0
    from .symbols import fourier_coefficients
    kmax = symbol.max_frequency
    coeffs = fourier_coefficients(symbol, kmax)
    mags = {k: abs(c) for k, c in coeffs.items()}
    floor = 1e-12 * (max(mags.values()) or 1.0)
    negs = [-k for k in coeffs if k < 0 and mags[k] > floor]
    return max(negs) if negs else 0
