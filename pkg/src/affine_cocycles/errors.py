"""Exception hierarchy shared by the library and the CLI."""


class CocycleError(Exception):
    """Base class for all errors raised by this package."""


class GroupSpecError(CocycleError, ValueError):
    """A group specification, word, or finite-table file could not be parsed."""


class GroupAxiomError(CocycleError, ValueError):
    """A finite multiplication table violates a group axiom.

    ``axiom`` names the failing law and ``witness`` holds the offending elements.
    """

    def __init__(self, axiom, witness, message=None):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(message or f"group axiom '{axiom}' fails at {self.witness}")


class DomainError(CocycleError, ValueError):
    """An argument lies outside the domain of an operation."""


class BudgetExceeded(CocycleError, RuntimeError):
    """Ball enumeration would exceed the configured element budget."""

    def __init__(self, message, *, radius=None, partial_count=None):
        self.radius = radius
        self.partial_count = partial_count
        super().__init__(message)


class ConfigurationError(CocycleError, ValueError):
    """A verification check has no admissible inputs under the given configuration."""
