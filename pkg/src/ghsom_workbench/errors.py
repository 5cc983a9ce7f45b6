"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class ContractError(WorkbenchError):
    """A caller violated an operation's precondition."""


class CsvValidationError(WorkbenchError):
    """One or more CSV rows failed validation.

    ``problems`` is a list of (line_number, message) pairs; line numbers are
    1-based and count the header row as line 1.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "; ".join(f"line {n}: {msg}" for n, msg in self.problems)
        super().__init__(f"{len(self.problems)} invalid row(s): {lines}")


class PathSyntaxError(WorkbenchError):
    """A node path label does not match the path grammar."""


class PathNotFoundError(WorkbenchError):
    """A syntactically valid path does not resolve to a node."""


class RuleConfigError(WorkbenchError):
    """A filter rule references an unknown attribute or is self-contradictory."""


class DeliveryError(WorkbenchError):
    """A message sink failed; carries the undelivered message for retry."""

    def __init__(self, message, cause):
        self.message = message
        self.cause = cause
        super().__init__(f"sink failed for record {message.record_id}: {cause}")


class RefineConflictError(WorkbenchError):
    """A train/refine/import was requested while another writer is active."""


class FingerprintMismatchError(WorkbenchError):
    """Snapshot import refused: dataset fingerprints differ."""

    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"snapshot fingerprint {actual} does not match session dataset {expected}"
        )
