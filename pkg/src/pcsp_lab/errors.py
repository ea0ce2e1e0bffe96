"""Exception hierarchy shared by all modules."""


class PCSPError(Exception):
    """Base class for every error raised by pcsp_lab."""


class SignatureError(PCSPError):
    """Structures do not share a signature."""


class DomainError(PCSPError):
    """A value lies outside the expected domain."""


class CapacityError(PCSPError):
    """A construction would exceed the configured size bound."""


class ParamError(PCSPError):
    """Numeric parameter out of its admissible range."""


class SpecError(PCSPError):
    """A TemplateSpec violates its invariants."""


class TemplateError(PCSPError):
    """A template pair (A, B) has no homomorphism A -> B."""


class DimError(PCSPError):
    """Matrix / function arity mismatch."""


class PreconditionError(PCSPError):
    """An operation was called outside its precondition."""


class CaseError(PCSPError):
    """No tableau construction applies to the requested parameters."""


class InternalError(PCSPError):
    """An invariant that should be guaranteed by construction failed."""
