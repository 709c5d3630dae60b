"""Exception hierarchy.

``InputError`` subclasses signal invalid user input (CLI exit code 2),
``NotConverged`` and ``SamplingExhausted`` signal numerical failure (exit 3),
and ``InternalInconsistency`` flags a bug that should never occur (exit 4).
"""


class GgsymError(Exception):
    pass


class InputError(GgsymError):
    """Invalid model, partition, data, or argument."""


# partition construction
class OverlappingBlocks(InputError):
    pass


class UncoveredElement(InputError):
    pass


class EmptyBlock(InputError):
    pass


class GroundMismatch(InputError):
    pass


# class / vertex lookups
class UnknownClass(InputError):
    pass


class UnknownVertex(InputError):
    pass


class TooLarge(InputError):
    pass


# permutations
class NotAutomorphism(InputError):
    pass


# matrices and parameters
class DimensionMismatch(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class MissingParameter(InputError):
    pass


# data / model files
class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class ColumnMismatch(InputError):
    pass


class NonNestedModels(InputError):
    pass


class DegenerateW(InputError):
    pass


# numerical failure
class NotConverged(GgsymError):
    pass


class SamplingExhausted(GgsymError):
    pass


# should-never-happen
class InternalInconsistency(GgsymError):
    pass


class SingularProjection(InternalInconsistency):
    """A projection system was singular although the weight matrix was
    positive definite; indicates corrupted upstream state."""
