class UsageError(ValueError):
    """Invalid arguments or violated preconditions."""


class FormatError(ValueError):
    """Malformed input file (CSV, BMP, labels)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
