"""Exception types raised by the simulator."""


class MehlerNLSError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MehlerNLSError, ValueError):
    """A numeric argument lies outside the admissible range."""


class SingularTimeError(MehlerNLSError):
    """The Mehler kernel was requested too close to a zero of some g_j."""


class ZeroTimeError(MehlerNLSError):
    """A quantity undefined at t = 0 was requested at t = 0."""


class NyquistViolation(MehlerNLSError):
    """A chirp phase cannot be resolved on the given grid."""


class NonzeroLinearTermError(MehlerNLSError):
    """The exact kernel path was asked to handle linear terms b_j != 0."""


class DegenerateWeightError(MehlerNLSError):
    """A Gagliardo-Nirenberg weight vanished below its floor."""


class InsufficientDataError(MehlerNLSError):
    """Too few samples for a fit."""


class ConfigError(MehlerNLSError, ValueError):
    """An experiment or solver configuration failed validation."""
