"""Exception types raised by the hwtheta engine."""


class HWThetaError(ValueError):
    """Base class for every error the engine raises on bad input."""


class PresentationError(HWThetaError):
    """Invalid group presentation, factor index or w1 assignment."""


class MismatchError(HWThetaError):
    """Values built over different presentations, module specs or manifolds."""


class RelationError(HWThetaError):
    """A relation move that does not apply to the chosen term."""


class RealizationError(HWThetaError):
    """A Wh1 class that no composition of barbell pseudo-isotopies produces."""


class ConfigError(HWThetaError):
    """Bad configuration file or environment override."""


class ParseError(HWThetaError):
    """Syntax error in one of the text formats, with 1-based position."""

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")
