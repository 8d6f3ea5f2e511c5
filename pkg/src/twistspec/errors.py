"""Exception hierarchy shared by every module."""


class TwistspecError(Exception):
    """Base class for all library errors."""


class InputError(TwistspecError):
    """Bad user input (malformed file, invalid graph, bad lattice...)."""


class ParseError(InputError):
    pass


class EmptyGraph(InputError):
    pass


class DisconnectedGraph(InputError):
    pass


class GenusZero(InputError):
    pass


class NotClosed(InputError):
    pass


class SingularLattice(InputError):
    pass


class NotRegular(InputError):
    pass


class BudgetExceeded(TwistspecError):
    pass


class NumericalError(TwistspecError):
    """A floating point computation produced something it should not have."""


class LinearSolveFailure(NumericalError):
    pass


class EigenSolverFailure(NumericalError):
    pass


class RoundingFailure(NumericalError):
    pass


class NonIntegerResult(NumericalError):
    pass


class TailBoundViolated(NumericalError):
    pass
