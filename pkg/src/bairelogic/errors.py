"""Exception hierarchy shared by every module of the package."""


class BaireLogicError(Exception):
    """Base class; the CLI turns any of these into an error report."""


class FormulaSyntaxError(BaireLogicError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.reason = message
        self.line = line
        self.column = column


class VariableBudgetError(BaireLogicError, ValueError):
    pass


class UnknownAxiomError(BaireLogicError, KeyError):
    pass


class FrameError(BaireLogicError, ValueError):
    pass


class NotS4Error(FrameError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class NotS5Error(FrameError):
    pass


class CarrierTooLargeError(BaireLogicError, ValueError):
    pass


class NotInSubalgebraError(BaireLogicError, ValueError):
    pass


class NotBaireSpaceError(BaireLogicError, ValueError):
    pass


class MapError(BaireLogicError, ValueError):
    pass


class PreconditionError(BaireLogicError, ValueError):
    pass


class UnassignedVariableError(BaireLogicError, LookupError):
    pass


class BudgetExceededError(BaireLogicError, RuntimeError):
    pass
