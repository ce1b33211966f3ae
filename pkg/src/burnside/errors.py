class ValidationError(ValueError):
    """Bad input: malformed spec, non-normal subgroup where one is required, etc."""


class SizeLimitError(ValidationError):
    """A computation would exceed a configured size cap."""


class SpecParseError(ValidationError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class InvariantError(AssertionError):
    """An identity that must hold exactly was violated (indicates a bug)."""
