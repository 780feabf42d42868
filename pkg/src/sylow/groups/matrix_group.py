from typing import Optional, Sequence

import numpy as np

from ..algebra.field import FieldSpec
from ..algebra.matrix import batch_matmul, batch_unitriangular_inverse
from ..errors import BudgetExceededError
from .base_group import Group


def lower_weights(field: FieldSpec, n: int) -> np.ndarray:
    '''
    Веса кода нижней унитреугольной матрицы: элементы под диагональью
    построчно, старший разряд первый, основание q^2.
    '''
    count = n * (n - 1) // 2
    if field.order ** count >= 2 ** 63:
        raise BudgetExceededError(f'codes of {n}x{n} matrices over F_{field.order} do not fit into int64')
    return np.array([field.order ** (count - 1 - t) for t in range(count)], dtype=np.int64)


def lower_codes(field: FieldSpec, n: int, mats: np.ndarray) -> np.ndarray:
    rows, cols = np.tril_indices(n, -1)
    return np.asarray(mats, dtype=np.int64)[:, rows, cols] @ lower_weights(field, n)


class MatrixGroup(Group):
    '''
    Группа нижних унитреугольных матриц n x n над F_{q^2}.
    '''

    def __init__(self, field: FieldSpec, n: int, codes: np.ndarray,
                 generator_codes: Sequence[int], prime: Optional[int] = None, name: str = ''):
        self.field = field
        self.n = n
        self._rows, self._cols = np.tril_indices(n, -1)
        self._weights = lower_weights(field, n)
        super().__init__(codes, generator_codes, prime or field.p, name)

    def identity_rep(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.int64)[None]

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).ravel()
        entries = (codes[:, None] // self._weights[None, :]) % self.field.order
        mats = np.zeros((codes.size, self.n, self.n), dtype=np.int64)
        mats[:, self._rows, self._cols] = entries
        diag = np.arange(self.n)
        mats[:, diag, diag] = 1
        return mats

    def encode(self, reps: np.ndarray) -> np.ndarray:
        return np.asarray(reps, dtype=np.int64)[:, self._rows, self._cols] @ self._weights

    def compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return batch_matmul(self.field, a, b)

    def invert(self, a: np.ndarray) -> np.ndarray:
        return batch_unitriangular_inverse(self.field, a)
