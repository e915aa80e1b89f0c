"""Exception and warning types shared across the package."""


class PhotonStatError(Exception):
    """Base class for all package-specific failures."""


class AccuracyError(PhotonStatError):
    """Requested truncation accuracy is unreachable within the cutoff cap."""


class UndefinedStateError(PhotonStatError):
    """The requested modification annihilates the state (zero norm)."""


class CancellationError(PhotonStatError):
    """An alternating moment sum came out negative beyond the cancellation
    tolerance; the result carries no significant digits."""


class CancellationWarning(UserWarning):
    """An alternating moment sum is small compared to its largest term;
    the returned value may have lost precision to cancellation."""
