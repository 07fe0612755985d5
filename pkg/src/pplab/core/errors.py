class StructuralError(ValueError):
    """Input violates a structural invariant (non-functorial diagram, bad face data, ...)."""


class EngineMismatch(StructuralError):
    pass


class NotCoequalizing(StructuralError):
    """A map handed to a coequalizer does not coequalize the parallel pair."""


class EquivarianceError(StructuralError):
    pass


class ParseError(StructuralError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}" + (f", column {col}" if col is not None else "") if line is not None else ""
        super().__init__(f"{where}: {message}" if where else message)
