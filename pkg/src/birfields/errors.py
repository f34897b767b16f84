"""Exception types shared across the package."""


class BirfieldsError(Exception):
    """Base class for all package errors."""


class DivisionByZero(BirfieldsError):
    pass


class ExtensionAlreadyActive(BirfieldsError):
    pass


class NoSolution(BirfieldsError):
    pass


class SurfaceMismatch(BirfieldsError):
    pass


class NotBirational(BirfieldsError):
    pass


class ConstantIntegral(BirfieldsError):
    pass


class NotVertical(BirfieldsError):
    pass


class NotQuadratic(BirfieldsError):
    pass


class NotIntegrable(BirfieldsError):
    pass


class NotInAutP2(BirfieldsError):
    pass


class NotInBorel(BirfieldsError):
    pass


class CharPolyDoesNotSplit(BirfieldsError):
    def __init__(self, message, charpoly=None):
        super().__init__(message)
        self.charpoly = charpoly


class NothingToReduce(BirfieldsError):
    pass


class NotUnimodular(BirfieldsError):
    pass


class NotClosed(BirfieldsError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotIndependent(BirfieldsError):
    pass


class NotAnAlgebra(BirfieldsError):
    pass


class Unclassified(BirfieldsError):
    pass


class NotAffinePair(BirfieldsError):
    pass


class NotAFirstIntegral(BirfieldsError):
    pass


class CannotAdapt(BirfieldsError):
    pass


class UnknownName(BirfieldsError):
    pass


class DegreeOverflow(BirfieldsError):
    pass


class ExprSyntaxError(BirfieldsError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
