# File: src/errors.py


class LeechToolError(Exception):
    """Base class for every error the toolkit raises on purpose."""

    code = "error"


class GolayConstructionError(LeechToolError):
    code = "construction-failure"


class VectorNotInSetError(LeechToolError):
    code = "x-not-in-set"


class InvalidDimensionError(LeechToolError):
    code = "invalid-dimension"


class GraphConstructionError(LeechToolError):
    code = "graph-construction"


class CapacityExceededError(LeechToolError):
    code = "capacity-exceeded"


class BadPairError(LeechToolError):
    code = "bad-pair"


class LengthMismatchError(LeechToolError):
    code = "length-mismatch"


class TooLargeError(LeechToolError):
    code = "too-large"


class BaseNotAntipodalError(LeechToolError):
    code = "base-not-antipodal"


class DatFormatError(LeechToolError):
    code = "dat-format"


class SizeMismatchError(DatFormatError):
    code = "size-mismatch"


class AlphabetViolationError(DatFormatError):
    code = "alphabet-violation"


class NotInLatticeError(DatFormatError):
    code = "not-in-lattice"


class AntipodalViolationError(DatFormatError):
    code = "antipodal-violation"


class FileFormatError(LeechToolError):
    code = "file-format"


class EnumerationError(LeechToolError):
    code = "enumeration"


class SearchInvariantError(LeechToolError):
    code = "search-invariant"


class ShapeMismatchError(DatFormatError):
    code = "shape-mismatch"
