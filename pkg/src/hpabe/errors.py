"""Exception types shared across the package."""


class GroupError(ValueError):
    """Bad group parameters, mixed parameter sets, or an unsupported backend."""


class FormatError(ValueError):
    """A serialized artifact is malformed, truncated, or has the wrong magic."""


class UniverseMismatch(ValueError):
    """Artifacts that were bound to different attribute universes were combined."""


class NotSatisfied(Exception):
    """Blind decryption found no candidate that verifies.

    The message is deliberately uninformative: it never names an attribute or
    says anything about the shape of the hidden policy.
    """

    def __init__(self, message: str = "not satisfied or wrong key", attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class IntegrityError(Exception):
    """The data-encapsulation MAC did not verify."""
