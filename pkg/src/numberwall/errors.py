"""Exception types shared by all modules."""


class NumberWallError(Exception):
    pass


# fields
class NotPrime(NumberWallError, ValueError):
    pass


class ReducibleModulus(NumberWallError, ValueError):
    pass


class DegreeMismatch(NumberWallError, ValueError):
    pass


class DivisionByZero(NumberWallError, ZeroDivisionError):
    pass


class FieldMismatch(NumberWallError, TypeError):
    pass


# polynomials and series
class InsufficientPrecision(NumberWallError):
    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


class ReducibleBase(NumberWallError, ValueError):
    pass


class ZeroArgument(NumberWallError, ValueError):
    pass


class NotEnoughCoefficients(NumberWallError, ValueError):
    def __init__(self, msg, required=None):
        super().__init__(msg)
        self.required = required


# walls
class OutOfSupport(NumberWallError, IndexError):
    pass


class InternalInconsistency(NumberWallError, RuntimeError):
    pass


class NonSquareZeroRegion(NumberWallError):
    pass


class NotComplete(NumberWallError, ValueError):
    pass


class NonGeometricEdge(NumberWallError):
    pass


class TooShort(NumberWallError, ValueError):
    pass


# sequences
class EmbeddingIncomplete(NumberWallError, ValueError):
    pass


# diophantine layer
class InsufficientPrefix(NumberWallError, ValueError):
    pass


# census
class SpaceTooLarge(NumberWallError):
    pass


class OverlappingPortions(NumberWallError, ValueError):
    pass


class OutOfRegime(NumberWallError, ValueError):
    pass


class UnsupportedShapePair(NumberWallError, ValueError):
    pass


class NoSeedWithBlade(NumberWallError):
    pass
