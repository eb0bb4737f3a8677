"""Exception types shared across the toolkit."""


class ParseError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormatError(ValueError):
    """Corrupt or incompatible serialized artifact (model, refset, matcher)."""


class ConfigError(ValueError):
    """A configuration that cannot produce a usable result."""


class TrainingError(RuntimeError):
    """Supervised training cannot proceed (e.g. single-class data)."""


class NumericalError(RuntimeError):
    """Non-finite values encountered during iteration."""

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)
        self.iteration = iteration
