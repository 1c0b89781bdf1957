class TeamLogicError(Exception):
    """Base class for every error raised by the toolkit."""


class DataError(TeamLogicError, ValueError):
    """Malformed input data (formula text, model files, proof files)."""


class FormulaSyntaxError(DataError):
    pass


class LogicError(DataError):
    pass


class NegationError(DataError):
    pass


class InclusionArityError(DataError):
    pass


class NonClassicalSubstitution(TeamLogicError, ValueError):
    pass


class UnknownWorld(DataError):
    pass


class SignatureError(DataError):
    pass


class NotClassical(TeamLogicError, ValueError):
    pass


class TypeExplosion(TeamLogicError):
    pass


class DepthError(TeamLogicError, ValueError):
    pass


class UniverseMismatch(TeamLogicError, ValueError):
    pass


class ProofError(TeamLogicError):
    """A derivation was rejected by the kernel."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class RuleNotInSystem(ProofError):
    pass


class SchemaMismatch(ProofError):
    pass


class SideConditionViolation(ProofError):
    def __init__(self, message, node=None, footnote=None):
        super().__init__(message, node)
        self.footnote = footnote


class DischargeError(ProofError):
    pass


class UnsupportedConnective(TeamLogicError, ValueError):
    pass


class FreeVariableError(TeamLogicError, ValueError):
    pass


class BoundError(TeamLogicError):
    pass
