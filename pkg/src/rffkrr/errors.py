"""Exception types shared across the package.

The command-line tool maps these onto exit codes: usage problems exit
with 1, unreadable or malformed data with 2, numerical failures with 3.
"""


class UsageError(Exception):
    """Bad command-line arguments or config-file values."""


class DataError(Exception):
    """Unreadable, malformed, or inconsistent input data."""


class NumericalError(Exception):
    """A linear solve or iterative routine failed to produce a usable result."""
