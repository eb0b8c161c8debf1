"""Exception hierarchy shared by every module and mapped to CLI exit codes."""

from __future__ import annotations


class HorizonRiskError(Exception):
    """Base class for all errors raised by horizon_risk."""


class ConfigError(HorizonRiskError):
    """Invalid run configuration or environment setting."""


# ── Contours ─────────────────────────────────────────────────────────────


class ContourError(HorizonRiskError):
    """An edge contour does not belong to the declared Horizon class."""


class ContourOutOfRange(ContourError):
    """The contour leaves [margin, 1 - margin]."""


class HoelderViolation(ContourError):
    """A sampled Lipschitz or Hoelder seminorm exceeds its declared bound."""


# ── Grids ────────────────────────────────────────────────────────────────


class GridError(HorizonRiskError):
    """An image grid has the wrong size or is indexed outside its bounds."""


class IndexOutOfBounds(GridError):
    pass


class OddN(GridError):
    pass


class NotPowerOfTwo(GridError):
    pass


# ── Filters ──────────────────────────────────────────────────────────────


class FilterError(HorizonRiskError):
    """Denoiser parameters are incompatible with the image."""


class KernelTooLarge(FilterError):
    pass


class DeltaTooLarge(FilterError):
    pass


class WindowTooSmall(FilterError):
    pass


class MissingCleanImage(FilterError):
    """An oracle variant was requested without the noise-free image."""


# ── Numerics ─────────────────────────────────────────────────────────────


class DomainError(HorizonRiskError):
    """A closed-form expression was evaluated outside its domain."""


class DegenerateFit(HorizonRiskError):
    """Too few points to fit a rate."""
