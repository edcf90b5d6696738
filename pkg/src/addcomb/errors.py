"""Exception types shared by the solvers and checkers."""


class PreconditionError(ValueError):
    """An input violates a hypothesis the operation relies on."""


class BudgetExceeded(RuntimeError):
    """A search hit its node/evaluation cap before finishing.

    This is not a mathematical claim; a NoSolution result is.
    """

    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"search budget of {budget} exhausted")


class InconsistencyError(RuntimeError):
    """A search failed in a regime where a theorem guarantees success.

    Raised instead of returning a negative result; it indicates a bug in
    the solver or a bad precondition check, never an expected outcome.
    """


class Budget:
    """Mutable counter shared by a single search."""

    __slots__ = ("limit", "used")

    def __init__(self, limit=None):
        self.limit = limit
        self.used = 0

    def tick(self, amount=1):
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.limit)
