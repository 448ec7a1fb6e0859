"""Numerical embeddability analysis for Toeplitz operators on Hardy spaces.

The package decides, with cited provenance, whether the Toeplitz operator of
a given circle symbol embeds into a C0-semigroup: winding-region geometry,
boundary kernel indices, explicit eigenvectors via the analytic projection,
Dunford and sectorial model semigroups, the explicit two-by-two family on the
doubly wound region, and numerical-range/Kreiss certificates on truncations.
"""

from . import fig8, hardy, semigroups, spectral, symbols, topology, verdict
from ._errors import (
    AliasWarning,
    BranchMismatch,
    DegenerateOverlap,
    NearCurve,
    NoAdmissibleRay,
    OnBoundary,
    OnBranchCut,
    QuadratureNotConverged,
    RayHitsSpectrum,
    RefinementOverflow,
    ResolutionTooCoarse,
    SeparationFailure,
    SpectrumOutside,
    ToeplitzEmbedError,
    UnwrapFailure,
)
from .symbols import (
    CurveDiscretization,
    HypothesisReport,
    Symbol,
    TruncatedToeplitz,
    check_hypotheses,
    derivative,
    discretize,
    evaluate,
    fourier_coefficients,
    reflect,
    toeplitz_truncation,
)
from .topology import (
    AhernClarkIndex,
    IntersectionPoint,
    IntersectionSet,
    RegionComponent,
    RegionDecomposition,
    classify_intersections,
    in_unbounded_complement,
    region_decomposition,
    self_intersections,
    w_plus,
    winding_number,
)

__version__ = "0.1.0"
