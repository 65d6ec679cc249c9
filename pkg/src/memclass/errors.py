"""Exception hierarchy; the CLI maps each class onto an exit code."""


class MemclassError(Exception):
    exit_code = 1


class UsageError(MemclassError):
    exit_code = 2


class DataError(MemclassError):
    """Malformed input table, label or prepared-split artifact."""

    exit_code = 3


class ModelError(MemclassError):
    """Model file, schema or feature mismatch."""

    exit_code = 4
