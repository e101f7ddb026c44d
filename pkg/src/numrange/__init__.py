"""Higher rank numerical ranges of complex square matrices.

Two routes to the same sets: a generic half-plane-intersection engine built
on eigenvalue support functions, and closed-form elliptical components for
2x2-block structured matrices.  The CLI cross-verifies one against the other.
"""

from .errors import (
    ArgumentError,
    CapacityError,
    ConvergenceError,
    DimensionError,
    EmptyRegionError,
    FitError,
    HypothesisError,
    NoClosedFormError,
    NumrangeError,
    StructureError,
    UnboundedRegionError,
)
from .geometry import (
    ConvexRegion,
    EllipseDisc,
    HalfPlane,
    convex_hull_regions,
    ellipse_boundary,
    ellipse_fit,
    ellipse_from_foci,
    ellipse_support,
    halfplane_intersection,
    hausdorff_distance,
    nesting_check,
    region_contains,
    region_from_ellipse,
    region_within,
)
from .linalg import (
    HermitianEigen,
    commutator_norm,
    eigh,
    hermitian_part,
    is_normal,
    singular_values,
)

__version__ = "0.1.0"
