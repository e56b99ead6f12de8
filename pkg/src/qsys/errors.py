"""Exception hierarchy shared by all modules."""


class QSysError(Exception):
    """Base class for every error raised by this package."""


# linalg
class NonHermitian(QSysError):
    pass


class NotPSD(QSysError):
    pass


class Singular(QSysError):
    pass


class NoConvergence(QSysError):
    pass


# category data
class MalformedData(QSysError):
    pass


class ValidationFailed(QSysError):
    """A category failed one of its coherence checks.

    ``worst`` names the offending identity instance, ``residual`` its size.
    """

    def __init__(self, message, worst=None, residual=None):
        super().__init__(message)
        self.worst = worst
        self.residual = residual


class UnknownName(QSysError):
    pass


class NoBraiding(QSysError):
    pass


# morphisms
class ShapeMismatch(QSysError):
    pass


class NotLength3(QSysError):
    pass


class WordTooLong(QSysError):
    pass


class NotEndomorphism(QSysError):
    pass


# algebras
class NotHaploid(QSysError):
    pass


class NotRigid(QSysError):
    """Raised with the degenerate pairing matrix as ``witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedAmbient(QSysError):
    pass


class NotCommutative(QSysError):
    pass


class ConvolutionIdempotenceFailed(QSysError):
    pass


class NumericalFailure(QSysError):
    pass


class PreconditionFailed(QSysError):
    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check
