"""Exception hierarchy shared across the capforge engine.

Every failure mode has its own class so callers (and the HTTP layer) can
switch on ``error.name`` without parsing messages.
"""


class CapforgeError(Exception):
    """Base class for all engine errors."""

    @property
    def name(self) -> str:
        """Stable machine-readable error code (the class name)."""
        return type(self).__name__


class MalformedDocument(CapforgeError):
    """A serialized document is structurally broken (missing keys, bad types)."""


# --- environment validation ------------------------------------------------

class DuplicateFactorId(CapforgeError):
    pass


class DuplicateInstanceId(CapforgeError):
    pass


class EmptyInstanceSet(CapforgeError):
    pass


class BadDefault(CapforgeError):
    pass


class ControllableKindMismatch(CapforgeError):
    pass


class AnchorKindMismatch(CapforgeError):
    pass


class NoControllableFactor(CapforgeError):
    pass


# --- scene / policy validation ----------------------------------------------

class UnknownFactor(CapforgeError):
    pass


class UnknownInstance(CapforgeError):
    pass


class EmptyTrigger(CapforgeError):
    pass


class ActionNotControllable(CapforgeError):
    pass


class ActionFactorInTrigger(CapforgeError):
    pass


# --- history ------------------------------------------------------------------

class HistoryEmpty(CapforgeError):
    pass


class HistoryTooSmall(CapforgeError):
    pass


# --- association ---------------------------------------------------------------

class EmptySequence(CapforgeError):
    pass


class LengthMismatch(CapforgeError):
    pass


class ActionNeverVaries(CapforgeError):
    pass


# --- cross-object consistency ---------------------------------------------------

class EnvironmentMismatch(CapforgeError):
    pass


class ConflictError(CapforgeError):
    """Base for errors the HTTP layer reports as 409."""


class StaleReport(ConflictError):
    pass


class PolicyMismatch(ConflictError):
    pass
