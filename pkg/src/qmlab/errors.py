"""Exception types shared across the package."""


class QmlabError(Exception):
    pass


class NegativeCostError(QmlabError):
    def __init__(self, src, dst, cost):
        super().__init__(f"edge {src}->{dst} has negative cost {cost}")
        self.edge = (src, dst, cost)


class DuplicateEdgeError(QmlabError):
    def __init__(self, src, dst):
        super().__init__(f"duplicate edge {src}->{dst}")
        self.pair = (src, dst)


class InvalidSourceError(QmlabError):
    pass


class BudgetExceededError(QmlabError):
    pass


class NoConvergenceError(QmlabError):
    pass


class StuckError(QmlabError):
    pass


class CapTooSmallError(QmlabError):
    pass


class NonFiniteLossError(QmlabError):
    pass


class DimensionMismatchError(QmlabError):
    pass


class UnknownFixtureError(QmlabError):
    pass


class NonAdjacentDoorError(QmlabError):
    pass


class WindOutOfRangeError(QmlabError):
    pass


class ParseError(QmlabError):
    def __init__(self, message, line=None, column=None):
        loc = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column
