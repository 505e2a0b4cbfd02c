"""Exception types shared across the package."""


class SpecmarError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(SpecmarError, ValueError):
    """Invalid parameter value or combination."""


class CsvFormatError(SpecmarError, ValueError):
    """Malformed input file.

    Carries enough position information to point at the offending cell.
    ``row`` is the 1-based line number in the file (header included),
    ``column`` the column name when known.
    """

    def __init__(self, message: str, path=None, row=None, column=None):
        self.path = path
        self.row = row
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"line {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
