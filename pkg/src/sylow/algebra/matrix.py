from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from ..errors import DimensionError, SingularMatrixError
from .field import FieldSpec


FormKind = Literal['persymmetric', 'skew_persymmetric', 'conj_skew_persymmetric', 'alpha_csp']
ArithOp = Literal['mul', 'inverse', 'transpose', 'conj', 'skew_Q']


@dataclass(frozen=True, eq=False)
class Mat:
    '''
    Квадратная матрица над F_{q^2}. Элементы хранятся индексами поля.
    '''
    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f'matrix must be square, got shape {entries.shape}')
        if entries.size and (entries.min() < 0 or entries.max() >= self.field.order):
            raise DimensionError('matrix entry outside the field')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> 'Mat':
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> 'Mat':
        return cls(field, np.zeros((n, n), dtype=np.int64))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field is other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((id(self.field), self.entries.tobytes()))

    def __matmul__(self, other: 'Mat') -> 'Mat':
        return mat_arith(self, other, 'mul')

    def __add__(self, other: 'Mat') -> 'Mat':
        _check_same(self, other)
        return Mat(self.field, self.field.add(self.entries, other.entries))

    def __sub__(self, other: 'Mat') -> 'Mat':
        _check_same(self, other)
        return Mat(self.field, self.field.sub(self.entries, other.entries))

    def __neg__(self) -> 'Mat':
        return Mat(self.field, self.field.neg(self.entries))

    @property
    def T(self) -> 'Mat':
        return mat_arith(self, None, 'transpose')

    @property
    def bar(self) -> 'Mat':
        return mat_arith(self, None, 'conj')

    @property
    def F(self) -> 'Mat':
        return flip_transpose(self)

    def inverse(self) -> 'Mat':
        return mat_arith(self, None, 'inverse')

    def is_identity(self) -> bool:
        return np.array_equal(self.entries, np.eye(self.dim, dtype=np.int64))

    def is_lower_unitriangular(self) -> bool:
        n = self.dim
        return (
            np.all(np.diag(self.entries) == 1)
            and not np.any(self.entries[np.triu_indices(n, 1)])
        )


def _check_same(A: Mat, B: Mat) -> None:
    if A.field is not B.field:
        raise DimensionError('matrices live over different fields')
    if A.dim != B.dim:
        raise DimensionError(f'dimension mismatch: {A.dim} vs {B.dim}')


def skew_identity(field: FieldSpec, m: int) -> Mat:
    # Q: единицы на побочной диагонали
    return Mat(field, np.eye(m, dtype=np.int64)[::-1])


def flip_transpose(B: Mat) -> Mat:
    '''
    Отражение относительно побочной диагонали: (B^F)_{ab} = B_{b'a'}, a' = m+1-a.
    Совпадает с Q B^T Q.
    '''
    return Mat(B.field, B.entries[::-1, ::-1].T)


def form_predicates(B: Mat, kind: FormKind, alpha: Optional[Sequence[int]] = None) -> bool:
    """
    Проверка персимметричных форм матрицы.

    :param B: Квадратная матрица размера m.
    :param kind: persymmetric (B^F = B), skew_persymmetric (B^F = -B),
        conj_skew_persymmetric (conj(B)^F = -B) или alpha_csp
        (B + conj(B)^F = -Q conj(alpha)^T alpha).
    :param alpha: Строка длины m, только для alpha_csp.
    :return: Точное значение равенства.
    """
    field = B.field
    if kind in ('persymmetric', 'skew_persymmetric', 'conj_skew_persymmetric'):
        return bool(batch_form_mask(field, B.entries[None], kind)[0])
    if kind == 'alpha_csp':
        alpha = np.zeros(B.dim, dtype=np.int64) if alpha is None else np.asarray(alpha, dtype=np.int64)
        if alpha.shape != (B.dim,):
            raise DimensionError(f'alpha of length {alpha.size} does not match dim {B.dim}')
        return B + B.bar.F == -alpha_form(field, alpha)
    raise DimensionError(f'unknown form kind {kind!r}')


def alpha_form(field: FieldSpec, alpha: np.ndarray) -> Mat:
    # Q conj(alpha)^T alpha: элемент (a, b) равен conj(alpha_{a'}) alpha_b
    alpha = np.asarray(alpha, dtype=np.int64)
    outer = field.mul(field.conj(alpha)[:, None], alpha[None, :])
    return Mat(field, outer[::-1])


def mat_arith(A: Mat, B: Optional[Mat], op: ArithOp) -> Mat:
    """
    Точные матричные операции над F_{q^2}.

    Параметры:
        A (Mat): Первый операнд.
        B (Mat): Второй операнд, нужен только для mul.
        op (str): mul, inverse, transpose, conj или skew_Q (умножение Q слева).

    Returns:
        Mat: Результат операции.

    Raises:
        DimensionError: Несовместимые размеры.
        SingularMatrixError: Обращение вырожденной матрицы.
    """
    field = A.field
    if op == 'mul':
        _check_same(A, B)
        return Mat(field, batch_matmul(field, A.entries[None], B.entries[None])[0])
    if op == 'transpose':
        return Mat(field, A.entries.T)
    if op == 'conj':
        return Mat(field, field.conj(A.entries))
    if op == 'skew_Q':
        return Mat(field, A.entries[::-1])
    if op == 'inverse':
        if A.is_lower_unitriangular():
            inverse = batch_unitriangular_inverse(field, A.entries[None])[0]
        else:
            inverse = _gauss_inverse(field, A.entries)
        check = batch_matmul(field, A.entries[None], inverse[None])[0]
        if not np.array_equal(check, np.eye(A.dim, dtype=np.int64)):
            raise SingularMatrixError('inverse check A * A^-1 = 1 failed')
        return Mat(field, inverse)
    raise DimensionError(f'unknown operation {op!r}')


def _gauss_inverse(field: FieldSpec, entries: np.ndarray) -> np.ndarray:
    n = entries.shape[0]
    work = np.concatenate([entries, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivots = np.flatnonzero(work[col:, col]) + col
        if not pivots.size:
            raise SingularMatrixError('matrix is singular')
        pivot = pivots[0]
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
        work[col] = field.mul(field.inv(work[col, col]), work[col])
        for row in range(n):
            if row != col and work[row, col]:
                factor = work[row, col]
                work[row] = field.sub(work[row], field.mul(factor, work[col]))
    return work[:, n:]


# -------------------
# Пакетные операции над массивами формы (N, n, n)

def batch_matmul(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[-2]:
        raise DimensionError(f'cannot multiply shapes {A.shape} and {B.shape}')
    acc = None
    for k in range(A.shape[-1]):
        term = field.mul(A[..., :, k][..., :, None], B[..., k, :][..., None, :])
        acc = term if acc is None else field.add(acc, term)
    return acc


def batch_unitriangular_inverse(field: FieldSpec, L: np.ndarray) -> np.ndarray:
    # Прямая подстановка: M_ij = -sum_{k=j}^{i-1} L_ik M_kj
    L = np.asarray(L, dtype=np.int64)
    n = L.shape[-1]
    M = np.zeros_like(L)
    idx = np.arange(n)
    M[..., idx, idx] = 1
    for i in range(1, n):
        for j in range(i):
            acc = np.zeros(L.shape[:-2], dtype=np.int64)
            for k in range(j, i):
                acc = field.add(acc, field.mul(L[..., i, k], M[..., k, j]))
            M[..., i, j] = field.neg(acc)
    return M


def batch_flip(A: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.asarray(A)[..., ::-1, ::-1], -1, -2)


def random_mat(field: FieldSpec, n: int, rng: np.random.Generator) -> Mat:
    return Mat(field, rng.integers(0, field.order, size=(n, n)))


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> Mat:
    while True:
        candidate = random_mat(field, n, rng)
        try:
            candidate.inverse()
        except SingularMatrixError:
            continue
        return candidate


def batch_form_mask(field: FieldSpec, A: np.ndarray, kind: FormKind) -> np.ndarray:
    '''
    Маска матриц пакета (N, m, m), удовлетворяющих форме без alpha.
    '''
    A = np.asarray(A, dtype=np.int64)
    if kind == 'persymmetric':
        image, target = batch_flip(A), A
    elif kind == 'skew_persymmetric':
        image, target = batch_flip(A), field.neg(A)
    elif kind == 'conj_skew_persymmetric':
        image, target = batch_flip(field.conj(A)), field.neg(A)
    else:
        raise DimensionError(f'batch mask does not support form kind {kind!r}')
    return np.all(image == target, axis=(-2, -1))
