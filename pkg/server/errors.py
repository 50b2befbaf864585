"""Exception hierarchy for game analysis.

All library errors derive from GameError so callers (the CLI and the tool
layer) can map them onto exit codes and error dicts in one place:
- GameDefinitionError: game documents that cannot be parsed or validated
- DomainError: arguments outside their mathematical domain
- OutputError: results that cannot be written
"""


class GameError(Exception):
    """Base exception for game analysis errors."""
    pass


class GameDefinitionError(GameError):
    """Exception raised when a game definition document is invalid."""
    pass


class DomainError(GameError):
    """Exception raised when an argument lies outside its domain."""
    pass


class DegenerateDenominatorError(DomainError):
    """Exception raised when a closed form divides by a vanishing quantity."""
    pass


class FamilyMismatchError(DomainError):
    """Exception raised when an operation is applied to the wrong game family."""
    pass


class NormalizationError(DomainError):
    """Exception raised when an initial state is not normalized."""
    pass


class OutputError(GameError):
    """Exception raised when an output file cannot be written."""
    pass
