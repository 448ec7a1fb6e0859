"""Exception and warning types shared across the package."""


class ToeplitzEmbedError(Exception):
    """Base class for all numeric-analysis failures raised by this package."""


class RefinementOverflow(ToeplitzEmbedError):
    """Adaptive curve refinement exceeded the hard point budget."""


class NearCurve(ToeplitzEmbedError):
    """A query point is too close to the curve for a reliable winding number."""

    def __init__(self, point, distance, message=None):
        self.point = point
        self.distance = distance
        super().__init__(message or f"point {point} is within {distance:.3g} of the curve")


class OnBoundary(ToeplitzEmbedError):
    """A query point lies on the boundary of the requested mask."""


class DegenerateOverlap(ToeplitzEmbedError):
    """Two arcs of the curve coincide over positive length."""


class ResolutionTooCoarse(ToeplitzEmbedError):
    """The region grid cannot resolve every component, even after refinement."""


class UnwrapFailure(ToeplitzEmbedError):
    """Continuous argument unwrapping could not bound the jumps."""


class BranchMismatch(ToeplitzEmbedError):
    """A logarithm branch failed to close up around the circle."""


class QuadratureNotConverged(ToeplitzEmbedError):
    """Contour quadrature did not stabilize under node doubling."""


class RayHitsSpectrum(ToeplitzEmbedError):
    """The requested branch-cut ray passes through an eigenvalue."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"eigenvalue {witness} lies on the excluded ray")


class SpectrumOutside(ToeplitzEmbedError):
    """An eigenvalue lies outside the closure of the reference region."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"eigenvalue {witness} lies outside the region")


class NoAdmissibleRay(ToeplitzEmbedError):
    """No ray from 0 to infinity avoids the eigenvalue cloud."""

    def __init__(self, eigenvalues, message=None):
        self.eigenvalues = eigenvalues
        super().__init__(message or "every sampled ray direction meets the spectrum")


class NotSectorial(ToeplitzEmbedError):
    """No sector of half-angle below pi admits a finite Kreiss constant."""


class OnBranchCut(ToeplitzEmbedError):
    """Evaluation point lies on the branch cut of a logarithm."""


class SeparationFailure(ToeplitzEmbedError):
    """The two analytic extensions coincide somewhere on the sampled domain."""


class AliasWarning(UserWarning):
    """Fourier analysis of a sampled symbol is under-resolved."""
