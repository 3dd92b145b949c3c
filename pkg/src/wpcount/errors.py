"""Exceptions shared across modules (exit-code mapping lives in the CLI)."""


class BudgetExceededError(RuntimeError):
    pass


class OracleTooLargeError(BudgetExceededError):
    pass


class OracleMismatchError(AssertionError):
    pass


def check_budget(work: int, budget: int, what: str) -> None:
    if work > budget:
        raise BudgetExceededError(f"{what}: {work} enumerations exceeds budget {budget}")
