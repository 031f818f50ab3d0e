"""Exception types shared across the package."""


class TreeArdenError(Exception):
    pass


class ParseError(TreeArdenError, ValueError):
    """Malformed text. Carries a 1-based line and column when known."""

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self.location() + message)

    def location(self):
        parts = [p for p in (self.source, self.line, self.column) if p is not None]
        return ":".join(str(p) for p in parts) + (": " if parts else "")

    def relocate(self, source=None, line_offset=0, column_offset=0):
        """Return a copy positioned inside a larger file."""
        line = (self.line or 1) + line_offset
        column = (self.column or 1) + (column_offset if (self.line or 1) == 1 else 0)
        return type(self)(self.message, line, column, source or self.source)


class ArityError(ParseError):
    pass


class UnknownSymbolError(ParseError):
    pass


class UnboundVariableError(TreeArdenError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class ShapeError(TreeArdenError, ValueError):
    """An equation does not have the form required by an operation."""


class FreshSymbolError(TreeArdenError, ValueError):
    pass


class NotClosedError(TreeArdenError, ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ExposedSymbolError(TreeArdenError, ValueError):
    """A bounded symbol may occur in the language of a variable.

    Factorization is only sound when the variables' languages avoid the
    bounded symbols, so such systems are refused rather than solved wrongly.
    """

    def __init__(self, message, variable=None, symbol=None):
        self.variable = variable
        self.symbol = symbol
        super().__init__(message)
