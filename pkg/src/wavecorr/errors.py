"""Exception and warning types shared across the package."""


class WaveCorrError(Exception):
    """Base class for all errors raised by wavecorr."""


class InvalidArgumentError(WaveCorrError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateKernelError(WaveCorrError):
    """Fresnel kernel requested at Zbar == 0; use the delta/identity path."""


class OverlappingApertureError(InvalidArgumentError):
    """Two-aperture object whose openings overlap or touch."""


class UnequalPathError(WaveCorrError):
    """Arm optical paths differ by more than the coherence tolerance."""


class DegenerateGeometryError(WaveCorrError):
    """Geometry with no finite effective diffraction length (or object at
    the detector plane)."""


class ResolutionError(WaveCorrError):
    """Detector grid too coarse to resolve the object's smallest feature."""


class NegativeIntensityError(WaveCorrError):
    """Port intensity would go negative: the flat-background model does not
    hold for the requested source width."""


class ScenarioValidationError(WaveCorrError):
    """Scenario config rejected; `field` holds the offending field path."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class EqualPathWarning(UserWarning):
    """Arm paths differ, but within the coherence tolerance."""
