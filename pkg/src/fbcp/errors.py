"""Exception hierarchy.

Every error raised on purpose by the library derives from ``FbcpError``.
``DomainError`` covers mathematically meaningful refusals (exit code 1 in
the CLI); ``ParseError`` covers malformed input (exit code 2).
"""


class FbcpError(Exception):
    pass


class DomainError(FbcpError):
    pass


class ParseError(FbcpError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class UndeclaredSymbol(ParseError):
    pass


class InvalidMultiplicity(ParseError):
    pass


class ConflictingFlags(ParseError):
    pass


class SymbolTableMismatch(DomainError):
    pass


class NotInSubgroup(DomainError):
    pass


class TailUsesSubstitutedLetter(DomainError):
    pass


class SubgroupMismatch(DomainError):
    pass


class SizeMismatch(DomainError):
    pass


class ExpressFailure(DomainError):
    pass


class InfiniteImage(DomainError):
    pass


class IndeterminateInfinity(DomainError):
    pass


class UnsupportedPattern(DomainError):
    pass


class NotPeriodic(DomainError):
    pass


class NotAlmostPeriodic(DomainError):
    pass


class SizeGuard(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class UnknownRepresentation(DomainError):
    pass
