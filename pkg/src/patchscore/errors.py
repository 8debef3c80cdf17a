"""Exception hierarchy.

Every error carries the CLI exit code of its category: validation problems
exit 1, I/O problems exit 2, anything else (internal invariant violations,
unexpected exceptions) exits 3.
"""


class PatchscoreError(Exception):
    exit_code = 3


class ValidationError(PatchscoreError):
    exit_code = 1


class DataIOError(PatchscoreError):
    exit_code = 2


class EmptyMask(ValidationError):
    """Mask has no set bit, so no region of interest exists."""


class OutOfBounds(ValidationError):
    """Requested patch exceeds the image bounds."""


class EmptyImage(ValidationError):
    """An image or pixel multiset with zero pixels was passed to a scorer."""


class UnsupportedImage(ValidationError):
    """Raster file is not an 8-bit grayscale or RGB image."""


class MixedPatchSizes(ValidationError):
    """Patches of different sizes were passed to a same-image scorer."""


class DuplicateImageId(ValidationError):
    """The same image id appears more than once."""


class InsufficientBenign(ValidationError):
    """Fewer benign images with masks than malignant ones; cannot balance."""


class EmptyPredictions(ValidationError):
    """No per-patch predictions were supplied for an image."""


class MissingPrediction(ValidationError):
    """A test-split patch has no prediction."""


class UnknownPatch(ValidationError):
    """A prediction references a patch that is not in the manifest's test split."""


class MissingIndexFile(DataIOError):
    """Dataset root does not contain an index.csv."""


class MalformedRow(ValidationError):
    """An index or manifest row cannot be parsed."""


class MissingFile(DataIOError):
    """A file referenced by the index does not exist."""


class UnknownLabel(ValidationError):
    """A label value is neither 'benign' nor 'malignant'."""


class NotFound(DataIOError):
    """The remote endpoint has no resource for an image id."""


class NetworkError(DataIOError):
    """The remote endpoint could not be reached."""
