"""Exception hierarchy shared by the pipeline stages."""


class VortexBarcodeError(Exception):
    """Base class for all package errors."""


class FrameLoadError(VortexBarcodeError):
    """A frame file could not be found or decoded."""


class FrameDegenerate(VortexBarcodeError):
    """Too few or collinear centroids to triangulate."""


class PredicateError(VortexBarcodeError):
    """A geometric predicate was called on degenerate input."""


class PolygonNotSimple(VortexBarcodeError):
    pass


class NerveError(VortexBarcodeError):
    pass


class NerveTooSmall(NerveError):
    """The nerve has fewer than three triangles, so no cycle can close."""


class RingOpen(NerveError):
    """The barycenter ring cannot close around the nucleus."""


class InvariantViolation(VortexBarcodeError):
    """Two independent computations that must agree did not."""


class BarcodeError(VortexBarcodeError):
    pass
