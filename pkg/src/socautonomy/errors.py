"""Exception hierarchy shared by all modules."""


class SocAutonomyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SocAutonomyError, ValueError):
    """A score or probability lies outside its permitted range."""


class WeightError(SocAutonomyError, ValueError):
    """Weight configuration is inconsistent (e.g. alphas not summing to one)."""


class UnknownTaskClassError(SocAutonomyError, KeyError):
    """A task class id is not registered in the catalog."""


class DuplicateTaskClassError(SocAutonomyError, KeyError):
    """A task class id is already registered."""


class InvalidStateError(SocAutonomyError):
    """An operation was applied to a work item in a state that forbids it."""


class InvalidTransitionError(SocAutonomyError):
    """No edge of the workflow state machine matches the requested step."""


class ConfigError(SocAutonomyError, ValueError):
    """A scenario or catalog file failed validation."""


class IncompleteTraceError(SocAutonomyError, ValueError):
    """A trace contains work items that never reached a terminal state."""


class EmptyHistoryError(SocAutonomyError, ValueError):
    """A trajectory was requested for an empty ledger history."""


class ReportWriteError(SocAutonomyError, OSError):
    """A report destination could not be written."""
