"""Exception types shared across the library.

I/O failures (missing or unreadable files) surface as the builtin OSError;
everything the library itself diagnoses gets one of the classes below.
"""


class FormatError(ValueError):
    """Unsupported or corrupt image / pipeline file content."""


class SingularWarp(ValueError):
    """Warp matrix is not invertible."""


class BadWindow(ValueError):
    """Averaging window size is even or smaller than 1."""


class TooSmall(ValueError):
    """Image is below the minimum size the pyramid supports."""


class UnknownDetector(ValueError):
    """Detector name is not one of eas, harris, min_eigen."""
