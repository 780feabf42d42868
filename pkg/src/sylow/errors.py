from typing import Optional


class SylowError(Exception):
    """
    Базовое исключение пакета. Код выхода CLI берётся из exit_code.
    """
    exit_code = 1


class InvalidParamsError(SylowError, ValueError):
    # Неверные параметры: p, q, n, теги, индексы
    exit_code = 2


class DimensionError(InvalidParamsError):
    pass


class FormulaShapeError(InvalidParamsError):
    pass


class DecomposeError(InvalidParamsError):
    pass


class ChainError(InvalidParamsError):
    pass


class SingularMatrixError(SylowError, ArithmeticError):
    pass


class MembershipError(SylowError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else 'element is not in the group'


class BudgetExceededError(SylowError):
    exit_code = 3

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required  # Сколько элементов потребовалось бы


class CacheError(SylowError, OSError):
    exit_code = 4
