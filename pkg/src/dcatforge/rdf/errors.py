class RDFError(Exception):
    pass


class RDFSyntaxError(RDFError, SyntaxError):
    """Malformed input. ``line``/``column`` locate the offending construct."""

    def __init__(self, reason: str, line: int | None = None, column: int | None = None):
        self.reason = reason
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{reason}{where}")

    def __str__(self) -> str:
        return self.args[0]


class UnsupportedFeature(RDFError):
    """Well-formed input that uses a construct outside the supported subset."""


class ComplexityLimit(RDFError):
    pass
