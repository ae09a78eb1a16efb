"""Error types raised by the bellowlab toolkit.

Management commands turn every ``BellowLabError`` into exit code 2; anything
else is treated as an internal error.
"""


class BellowLabError(Exception):
    """Base class for all expected, user-facing failures."""


class DomainError(BellowLabError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegeneratePathError(DomainError):
    """Start and end of a path coincide, so straightness is undefined."""


class MissingEntryError(BellowLabError, KeyError):
    """A lookup table has no entry for the requested key."""

    def __init__(self, table, key):
        self.table = table
        self.key = key
        super().__init__(f"{table} has no entry for {key}")

    def __str__(self):
        return self.args[0]


class CalibrationError(BellowLabError):
    """No grid point satisfies the requested classification."""

    def __init__(self, message, violations=(), closest=()):
        self.violations = tuple(violations)
        self.closest = tuple(closest)
        if self.violations:
            message = f"{message}: " + "; ".join(self.violations)
        super().__init__(message)


class GeometryError(BellowLabError, ValueError):
    """A fabrication pattern cannot be laid out with the given dimensions."""


class ParseError(BellowLabError):
    """A data file could not be read."""

    def __init__(self, path, message, line=None, column=None):
        self.path = str(path)
        self.line = line
        self.column = column
        where = self.path
        if line is not None:
            where += f", line {line}"
        if column is not None:
            where += f", column '{column}'"
        super().__init__(f"{where}: {message}")


class TrajectoryValidationError(BellowLabError):
    """Time stamps or sample rates are inconsistent."""


class ConfigError(BellowLabError):
    """A configuration value or referenced path is invalid."""


class ExportError(BellowLabError):
    """An output file could not be written."""
