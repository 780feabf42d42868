import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from sympy import isprime

from .. import config
from ..algebra.field import FieldSpec, field_create
from ..algebra.matrix import (
    Mat, alpha_form, batch_flip, batch_matmul, batch_unitriangular_inverse,
    form_predicates,
)
from ..errors import DecomposeError, DimensionError, FormulaShapeError, InvalidParamsError
from .base_group import Subgroup, check_budget, soft_deadline
from .core import commutator_subgroup, is_normal
from .matrix_group import MatrixGroup, lower_codes


logger = logging.getLogger(__name__)

Parity = Literal['even', 'odd']


class UnitaryParams(BaseModel):
    '''
    Параметры группы U_n(F_q) в определяющей характеристике: q = p^k, p >= 5.
    '''
    model_config = ConfigDict(frozen=True)

    p: int      # Простое p >= 5
    q: int      # Степень p
    n: int      # Размер матриц, n >= 2

    @model_validator(mode='after')
    def _check(self) -> 'UnitaryParams':
        if not isprime(self.p) or self.p < 5:
            raise ValueError(f'p={self.p} must be a prime >= 5')
        if self.q < self.p or self.p ** _exponent(self.q, self.p) != self.q:
            raise ValueError(f'q={self.q} is not a power of p={self.p}')
        if self.n < 2:
            raise ValueError(f'n={self.n} must be at least 2')
        return self

    @classmethod
    def from_k(cls, p: int, k: int, n: int) -> 'UnitaryParams':
        return cls(p=p, q=p ** k, n=n)

    @property
    def k(self) -> int:
        return _exponent(self.q, self.p)

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def parity(self) -> Parity:
        return 'odd' if self.n % 2 else 'even'

    @property
    def odd(self) -> bool:
        return self.n % 2 == 1

    @property
    def sylow_order(self) -> int:
        return self.q ** (self.n * (self.n - 1) // 2)


def _exponent(q: int, p: int) -> int:
    k = 0
    while q > 1 and q % p == 0:
        q //= p
        k += 1
    return k


@lru_cache(maxsize=None)
def _cached_field(p: int, k: int) -> FieldSpec:
    return field_create(p, k)


def sylow_field(params: UnitaryParams) -> FieldSpec:
    return _cached_field(params.p, params.k)


@dataclass(frozen=True, eq=False)
class SylowElem:
    '''
    Параметры (D, P) или (D, P, alpha) элемента силовской подгруппы.
    При чётном n alpha имеет длину 0.
    '''
    D: Mat
    P: Mat
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=np.int64).ravel()
        alpha.setflags(write=False)
        object.__setattr__(self, 'alpha', alpha)

    @property
    def field(self) -> FieldSpec:
        return self.D.field

    @property
    def m(self) -> int:
        return self.D.dim

    @property
    def odd(self) -> bool:
        return self.alpha.size > 0

    @property
    def n(self) -> int:
        return 2 * self.m + (1 if self.odd else 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SylowElem):
            return NotImplemented
        return self.D == other.D and self.P == other.P and np.array_equal(self.alpha, other.alpha)

    def __hash__(self) -> int:
        return hash((hash(self.D), hash(self.P), self.alpha.tobytes()))

    @classmethod
    def identity(cls, field: FieldSpec, m: int, odd: bool) -> 'SylowElem':
        return cls(Mat.identity(field, m), Mat.zeros(field, m), np.zeros(m if odd else 0, dtype=np.int64))


class SubgroupTag(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: Literal['A', 'A0', 'Dpart', 'Ntilde', 'full']
    i: Optional[int] = None
    j: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> 'SubgroupTag':
        # 'A', 'Ntilde(2,1)'
        text = text.strip()
        if text.startswith('Ntilde'):
            inner = text[len('Ntilde'):].strip('() ')
            i, j = (int(v) for v in inner.split(','))
            return cls(tag='Ntilde', i=i, j=j)
        return cls(tag=text)

    def __str__(self) -> str:
        return f'Ntilde({self.i},{self.j})' if self.tag == 'Ntilde' else self.tag


# -------------------
# Унитарность

def is_unitary_batch(field: FieldSpec, X: np.ndarray, form: Literal['Q', 'identity'] = 'Q') -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    n = X.shape[-1]
    XH = np.swapaxes(field.conj(X), -1, -2)
    if form == 'Q':
        target = np.eye(n, dtype=np.int64)[::-1]
        product = batch_matmul(field, XH, X[..., ::-1, :])
    else:
        target = np.eye(n, dtype=np.int64)
        product = batch_matmul(field, XH, X)
    return np.all((product == target).reshape(X.shape[0], -1), axis=1)


def is_unitary(A: Mat, params: Optional[UnitaryParams] = None, form: Literal['Q', 'identity'] = 'Q') -> bool:
    """
    Проверяет conj(A)^T Q_n A = Q_n (или conj(A)^T A = 1 для form='identity').

    :param A: Матрица n x n над F_{q^2}.
    :param params: Если заданы, размер A сверяется с n.
    :return: Точное значение равенства.
    """
    if params is not None and A.dim != params.n:
        raise DimensionError(f'matrix of size {A.dim} does not match n={params.n}')
    return bool(is_unitary_batch(A.field, A.entries[None], form)[0])


def unitary_order(q: int, n: int) -> int:
    # |U_n(F_q)| = q^{n(n-1)/2} prod_{i=1}^n (q^i - (-1)^i)
    order = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        order *= q ** i - (-1) ** i
    return order


def count_unitary(field: FieldSpec, n: int, budget: Optional[int] = None) -> int:
    '''
    Полный перебор всех n x n матриц над F_{q^2} с подсчётом унитарных.
    '''
    total = field.order ** (n * n)
    check_budget(total, budget, f'{n}x{n} matrices over F_{field.order}')
    weights = field.order ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    count = 0
    for start in range(0, total, config.CHUNK_SIZE):
        idx = np.arange(start, min(start + config.CHUNK_SIZE, total), dtype=np.int64)
        mats = ((idx[:, None] // weights[None, :]) % field.order).reshape(-1, n, n)
        count += int(np.count_nonzero(is_unitary_batch(field, mats)))
    return count


def _hermitian(field: FieldSpec, u: np.ndarray, v: np.ndarray) -> int:
    # h(u, v) = conj(u)^T Q v
    terms = field.mul(field.conj(u), v[::-1])
    return int(reduce(field.add, terms.tolist(), 0))


def form_change_matrix(field: FieldSpec, n: int) -> Mat:
    '''
    Матрица B с conj(B)^T Q_n B = 1: ортонормированный базис для эрмитовой
    формы Q_n, построенный процессом Грама-Шмидта.
    '''
    basis: List[np.ndarray] = []

    def candidates():
        for a in range(n):
            yield np.eye(n, dtype=np.int64)[a]
        for a, b in itertools.permutations(range(n), 2):
            for lam in range(1, field.order):
                v = np.zeros(n, dtype=np.int64)
                v[a] = 1
                v[b] = lam
                yield v

    for w in candidates():
        if len(basis) == n:
            break
        v = w.copy()
        for u in basis:
            v = field.sub(v, field.mul(_hermitian(field, u, v), u))
        c = _hermitian(field, v, v)
        if c == 0:
            continue
        lam = field.solve_norm(int(field.inv(c)))
        basis.append(field.mul(lam, v))
    B = Mat(field, np.stack(basis, axis=1))
    gram = B.bar.T @ Mat(field, B.entries[::-1])
    if not gram.is_identity():
        raise DecomposeError('form change matrix check failed')
    return B


def to_identity_form(A: Mat, B: Mat) -> Mat:
    # A -> B^-1 A B
    return B.inverse() @ A @ B


# -------------------
# Параметризация силовской подгруппы

def _free_positions(m: int) -> List[Tuple[int, int]]:
    # Строго ниже побочной диагонали
    return [(a, b) for a in range(m) for b in range(m) if a + b > m - 1]


def _partner(a: int, b: int, m: int) -> Tuple[int, int]:
    return m - 1 - b, m - 1 - a


def alpha_rhs(field: FieldSpec, alpha: np.ndarray) -> np.ndarray:
    # c = -Q conj(alpha)^T alpha, c_ab = -conj(alpha_{a'}) alpha_b
    alpha = np.asarray(alpha, dtype=np.int64)
    outer = field.mul(field.conj(alpha)[:, :, None], alpha[:, None, :])
    return field.neg(outer[:, ::-1, :])


def particular_solution(field: FieldSpec, alpha: np.ndarray) -> np.ndarray:
    '''
    Для каждой строки alpha одно решение P + conj(P)^F = -Q conj(alpha)^T alpha:
    свободные элементы ниже побочной диагонали нулевые.
    '''
    alpha = np.asarray(alpha, dtype=np.int64)
    m = alpha.shape[1]
    c = alpha_rhs(field, alpha)
    P = np.zeros((alpha.shape[0], m, m), dtype=np.int64)
    for a, b in _free_positions(m):
        pa, pb = _partner(a, b, m)
        P[:, pa, pb] = field.conj(c[:, a, b])
    if m and field.p != 2:
        half = field.inv(field.scalar(2))
        for a in range(m):
            P[:, a, m - 1 - a] = field.mul(c[:, a, m - 1 - a], half)
    return P


def csp_solutions(field: FieldSpec, m: int, alpha: Optional[np.ndarray] = None,
                  budget: Optional[int] = None) -> np.ndarray:
    """
    Все alpha-сопряжённо-кососимметричные относительно побочной диагонали
    матрицы m x m (при alpha=None обычные, conj(P)^F = -P).

    Элементы строго ниже побочной диагонали свободны, парный элемент
    P_{b'a'} = conj(c_ab - P_ab), на побочной диагонали x + conj(x) = c имеет
    ровно q решений. Всего q^{m^2} матриц.
    """
    free = _free_positions(m)
    trace_zero = field.trace_zero()
    q = field.q
    total = field.order ** len(free) * q ** m
    check_budget(total, budget, f'conjugate-skew-persymmetric {m}x{m} matrices')
    rest = np.arange(total, dtype=np.int64)
    P = np.zeros((total, m, m), dtype=np.int64)
    for a, b in free:
        value = rest % field.order
        rest = rest // field.order
        pa, pb = _partner(a, b, m)
        P[:, a, b] = value
        P[:, pa, pb] = field.neg(field.conj(value))
    for a in range(m):
        P[:, a, m - 1 - a] = trace_zero[rest % q]
        rest = rest // q
    if alpha is not None:
        P0 = particular_solution(field, np.asarray(alpha, dtype=np.int64).reshape(1, m))
        P = field.add(P, P0)
    return P


def csp_basis(field: FieldSpec, m: int) -> np.ndarray:
    # Базис над F_p пространства матриц с conj(P)^F = -P, размерность k m^2
    basis = []
    for a, b in _free_positions(m):
        pa, pb = _partner(a, b, m)
        for omega in field.fp_basis():
            P = np.zeros((m, m), dtype=np.int64)
            P[a, b] = omega
            P[pa, pb] = int(field.neg(field.conj(omega)))
            basis.append(P)
    for a in range(m):
        for tau in field.trace_zero_basis():
            P = np.zeros((m, m), dtype=np.int64)
            P[a, m - 1 - a] = tau
            basis.append(P)
    return np.array(basis, dtype=np.int64).reshape(-1, m, m)


def all_unitriangular(field: FieldSpec, m: int) -> np.ndarray:
    rows, cols = np.tril_indices(m, -1)
    total = field.order ** rows.size
    rest = np.arange(total, dtype=np.int64)
    D = np.zeros((total, m, m), dtype=np.int64)
    D[:, np.arange(m), np.arange(m)] = 1
    for r, c in zip(rows, cols):
        D[:, r, c] = rest % field.order
        rest = rest // field.order
    return D


def all_vectors(field: FieldSpec, m: int) -> np.ndarray:
    total = field.order ** m
    rest = np.arange(total, dtype=np.int64)
    out = np.zeros((total, m), dtype=np.int64)
    for b in range(m):
        out[:, b] = rest % field.order
        rest = rest // field.order
    return out


def embed_batch(field: FieldSpec, D: np.ndarray, P: np.ndarray, alpha: Optional[np.ndarray] = None) -> np.ndarray:
    '''
    Пакетная сборка X_{D,P} = [[(conj(D)^F)^-1, 0], [DP, D]] или
    X_{D,P,alpha} = [[(conj(D)^F)^-1, 0, 0], [alpha, 1, 0], [DP, -DQ conj(alpha)^T, D]].
    '''
    D = np.asarray(D, dtype=np.int64)
    P = np.asarray(P, dtype=np.int64)
    odd = alpha is not None and np.asarray(alpha).shape[-1] > 0
    if odd:
        alpha = np.asarray(alpha, dtype=np.int64)
        N = max(D.shape[0], P.shape[0], alpha.shape[0])
        D = np.broadcast_to(D, (N,) + D.shape[1:])
        P = np.broadcast_to(P, (N,) + P.shape[1:])
        alpha = np.broadcast_to(alpha, (N,) + alpha.shape[1:])
    else:
        D, P = np.broadcast_arrays(D, P)
    N, m = D.shape[0], D.shape[-1]
    n = 2 * m + (1 if odd else 0)
    X = np.zeros((N, n, n), dtype=np.int64)
    X[:, :m, :m] = batch_unitriangular_inverse(field, batch_flip(field.conj(D)))
    X[:, n - m:, n - m:] = D
    X[:, n - m:, :m] = batch_matmul(field, D, P)
    if odd:
        X[:, m, :m] = alpha
        X[:, m, m] = 1
        q_alpha_bar = field.conj(alpha)[:, ::-1]
        beta = batch_matmul(field, D, q_alpha_bar[:, :, None])[:, :, 0]
        X[:, n - m:, m] = field.neg(beta)
    return X


def decompose_batch(field: FieldSpec, X: np.ndarray, odd: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.int64)
    n = X.shape[-1]
    m = n // 2
    D = X[:, n - m:, n - m:]
    P = batch_matmul(field, batch_unitriangular_inverse(field, D), X[:, n - m:, :m])
    alpha = X[:, m, :m] if odd else np.zeros((X.shape[0], 0), dtype=np.int64)
    return D, P, alpha


def check_elem(e: SylowElem) -> None:
    if not e.D.is_lower_unitriangular():
        raise FormulaShapeError('D must be lower unitriangular')
    if e.P.dim != e.m or (e.odd and e.alpha.size != e.m):
        raise DimensionError('D, P and alpha sizes disagree')
    alpha = e.alpha if e.odd else np.zeros(e.m, dtype=np.int64)
    if not form_predicates(e.P, 'alpha_csp', alpha):
        raise FormulaShapeError('P violates P + conj(P)^F = -Q conj(alpha)^T alpha')


def embed(e: SylowElem) -> Mat:
    """
    Матрица X_{D,P} или X_{D,P,alpha} по параметрам.

    Raises:
        FormulaShapeError: Параметры не удовлетворяют условиям.
    """
    check_elem(e)
    alpha = e.alpha[None] if e.odd else None
    return Mat(e.field, embed_batch(e.field, e.D.entries[None], e.P.entries[None], alpha)[0])


def decompose(A: Mat, params: Optional[UnitaryParams] = None) -> SylowElem:
    """
    Восстанавливает (D, P, alpha) из нижней унитреугольной унитарной матрицы:
    P = D^-1 C, alpha из средней строки.

    Raises:
        DecomposeError: A не нижняя унитреугольная или не унитарна.
    """
    if params is not None and A.dim != params.n:
        raise DimensionError(f'matrix of size {A.dim} does not match n={params.n}')
    if not A.is_lower_unitriangular() or not is_unitary(A):
        raise DecomposeError('matrix is not a lower unitriangular unitary matrix')
    odd = A.dim % 2 == 1
    D, P, alpha = decompose_batch(A.field, A.entries[None], odd)
    return SylowElem(Mat(A.field, D[0]), Mat(A.field, P[0]), alpha[0])


# -------------------
# Замкнутые формулы

def _same_shape(x: SylowElem, y: SylowElem) -> None:
    if x.field is not y.field or x.m != y.m or x.odd != y.odd:
        raise InvalidParamsError('elements belong to different Sylow subgroups')


def mul_formula(x: SylowElem, y: SylowElem) -> SylowElem:
    '''
    Чётный случай: X_{D,P} X_{D',P'} = X_{DD', D'^-1 P (conj(D')^F)^-1 + P'}.
    Нечётный случай считается через матрицы.
    '''
    _same_shape(x, y)
    if x.odd:
        return decompose(embed(x) @ embed(y))
    D2 = y.D
    B2 = D2.bar.F.inverse()
    P = D2.inverse() @ x.P @ B2 + y.P
    return SylowElem(x.D @ D2, P, x.alpha)


def inverse_formula(x: SylowElem) -> SylowElem:
    '''
    X_{D,P}^-1 = X_{D^-1, -D P conj(D)^F};
    X_{1,P,alpha}^-1 = X_{1, -P - Q conj(alpha)^T alpha, -alpha}.
    '''
    field = x.field
    if not x.odd:
        return SylowElem(x.D.inverse(), -(x.D @ x.P @ x.D.bar.F), x.alpha)
    if x.D.is_identity():
        P = -x.P - alpha_form(field, x.alpha)
        return SylowElem(x.D, P, field.neg(x.alpha))
    return decompose(embed(x).inverse())


def comm_formula(x: SylowElem, y: SylowElem) -> SylowElem:
    """
    Коммутатор [x, y] = x^-1 y^-1 x y по замкнутым формулам.

    Чётный случай, x = X_{1,P}:
        [X_{1,P}, X_{D,P'}] = X_{1, D^-1 P (conj(D)^F)^-1 - P}.
    Нечётный случай, x и y из A:
        [X_{1,P,a}, X_{1,P',a'}] = X_{1, Q conj(a')^T a - Q conj(a)^T a', 0}.
    Нечётный случай, x = X_{1,P,0}:
        [X_{1,P,0}, X_{D,P',a}] = X_{1, -P + D^-1 P (conj(D)^F)^-1, 0}.

    Raises:
        FormulaShapeError: x не имеет нужного вида.
    """
    _same_shape(x, y)
    field = x.field
    if not x.D.is_identity():
        raise FormulaShapeError('commutator formulas need x with D = 1')
    one = Mat.identity(field, x.m)
    if x.odd and y.D.is_identity():
        P = _alpha_cross(field, y.alpha, x.alpha) - _alpha_cross(field, x.alpha, y.alpha)
        return SylowElem(one, P, np.zeros(x.m, dtype=np.int64))
    if x.odd and np.any(x.alpha):
        raise FormulaShapeError('for D != 1 the first argument must be X_{1,P,0}')
    D = y.D
    P = D.inverse() @ x.P @ D.bar.F.inverse() - x.P
    return SylowElem(one, P, x.alpha)


def _alpha_cross(field: FieldSpec, u: np.ndarray, v: np.ndarray) -> Mat:
    # Q conj(u)^T v: элемент (a, b) равен conj(u_{a'}) v_b
    outer = field.mul(field.conj(np.asarray(u))[:, None], np.asarray(v)[None, :])
    return Mat(field, outer[::-1])


def commutator_parameter(U: Mat, P: Mat) -> Mat:
    '''
    UP + P conj(U)^F + U P conj(U)^F. При D^-1 = 1 + U имеем
    [X_{1,P}, X_{D,P'}] = X_{1, commutator_parameter(U, P)}.
    '''
    UF = U.bar.F
    return U @ P + P @ UF + U @ P @ UF


def iterated_parameter(Us: Sequence[Mat], P: Mat) -> Mat:
    # [[X_{1,P}, X_D], X_{D'}], ... как итерация commutator_parameter
    for U in Us:
        P = commutator_parameter(U, P)
    return P


def random_n_ij(field: FieldSpec, m: int, i: int, j: int, rng: np.random.Generator) -> Mat:
    '''
    Случайная D из N_ij: D_ab = 0 при a < i или b > j (индексы с единицы).
    '''
    D = np.eye(m, dtype=np.int64)
    for a in range(i - 1, m):
        for b in range(min(j, a)):
            D[a, b] = rng.integers(0, field.order)
    return Mat(field, D)


def centralizer_condition(U: Mat, P: Mat) -> bool:
    """
    Проверка UP + P conj(U)^F + U P conj(U)^F = 0.

    :param U: Строго нижняя треугольная матрица, D = 1 + U.
    :param P: Сопряжённо-кососимметричная относительно побочной диагонали.
    """
    if np.any(np.triu(U.entries)):
        raise FormulaShapeError('U must be strictly lower triangular')
    if not form_predicates(P, 'conj_skew_persymmetric'):
        raise FormulaShapeError('P must be conjugate-skew-persymmetric')
    return not np.any(commutator_parameter(U, P).entries)


def probe_matrix(field: FieldSpec, m: int, s: int) -> Mat:
    '''
    P_ab = delta_{as} delta_{b1} - delta_{am} delta_{bs'}, s' = m + 1 - s
    (индексы с единицы). Элементы из F_p.
    '''
    if not 1 <= s <= m:
        raise InvalidParamsError(f's={s} must lie in 1..{m}')
    P = np.zeros((m, m), dtype=np.int64)
    P[s - 1, 0] = field.add(P[s - 1, 0], 1)
    P[m - 1, m - s] = field.sub(P[m - 1, m - s], 1)
    return Mat(field, P)


# -------------------
# Группа

def parametric_generators(field: FieldSpec, params: UnitaryParams) -> Dict[str, List[Tuple[Tuple[int, int], np.ndarray]]]:
    '''
    Порождающие над F_p: элементарные X_{1 + w E_ab, 0}, базис A_0 и
    (нечётный случай) X_{1, P_0(alpha), alpha} для базисных alpha.
    Каждый элемент снабжён позицией (a, b) в D или (-1, -1).
    '''
    m, odd = params.m, params.odd
    empty_alpha = np.zeros((1, m if odd else 0), dtype=np.int64)
    one = np.eye(m, dtype=np.int64)[None]
    gens: Dict[str, List[Tuple[Tuple[int, int], np.ndarray]]] = {'D': [], 'A0': [], 'alpha': []}
    rows, cols = np.tril_indices(m, -1)
    for a, b in zip(rows, cols):
        for omega in field.fp_basis():
            D = one.copy()
            D[0, a, b] = omega
            X = embed_batch(field, D, np.zeros((1, m, m), dtype=np.int64), empty_alpha)
            gens['D'].append(((int(a), int(b)), X[0]))
    for P in csp_basis(field, m):
        X = embed_batch(field, one, P[None], empty_alpha)
        gens['A0'].append(((-1, -1), X[0]))
    if odd:
        for b in range(m):
            for omega in field.fp_basis():
                alpha = np.zeros((1, m), dtype=np.int64)
                alpha[0, b] = omega
                X = embed_batch(field, one, particular_solution(field, alpha), alpha)
                gens['alpha'].append(((-1, -1), X[0]))
    return gens


def _enumerate_codes(field: FieldSpec, params: UnitaryParams) -> np.ndarray:
    m, odd, n = params.m, params.odd, params.n
    homogeneous = csp_solutions(field, m, budget=params.sylow_order)
    if odd:
        alphas = all_vectors(field, m)
        P0 = particular_solution(field, alphas)
        P = field.add(P0[:, None], homogeneous[None]).reshape(-1, m, m)
        alpha = np.repeat(alphas, homogeneous.shape[0], axis=0)
    else:
        P = homogeneous
        alpha = np.zeros((P.shape[0], 0), dtype=np.int64)
    one = np.eye(m, dtype=np.int64)[None]
    A_part = embed_batch(field, one, P, alpha)
    zero_alpha = np.zeros((1, m if odd else 0), dtype=np.int64)
    codes = []
    for D in all_unitriangular(field, m):
        XD = embed_batch(field, D[None], np.zeros((1, m, m), dtype=np.int64), zero_alpha)
        for start in range(0, A_part.shape[0], config.CHUNK_SIZE):
            chunk = A_part[start:start + config.CHUNK_SIZE]
            codes.append(lower_codes(field, n, batch_matmul(field, XD, chunk)))
    return np.sort(np.concatenate(codes))


class UnitarySylowGroup(MatrixGroup):
    '''
    Силовская p-подгруппа S группы U_n(F_q): нижние унитреугольные унитарные матрицы.
    '''

    def __init__(self, params: UnitaryParams, codes: Optional[np.ndarray] = None):
        self.params = params
        field = sylow_field(params)
        gens = parametric_generators(field, params)
        if codes is None:
            codes = _enumerate_codes(field, params)
        all_mats = [X for part in ('D', 'A0', 'alpha') for _, X in gens[part]]
        all_codes = lower_codes(field, params.n, np.array(all_mats)) if all_mats else []
        super().__init__(field, params.n, codes, all_codes, prime=params.p,
                         name=f'S(U_{params.n}({params.q}))')
        self.witness: Dict[str, List[Tuple[Tuple[int, int], int]]] = {}
        for part, items in gens.items():
            if not items:
                self.witness[part] = []
                continue
            idx = self.index_of(lower_codes(field, params.n, np.array([X for _, X in items])))
            self.witness[part] = [(pos, int(i)) for (pos, _), i in zip(items, idx)]

    @property
    def m(self) -> int:
        return self.params.m

    def element(self, idx: int) -> Mat:
        return Mat(self.field, self.reps(np.array([idx]))[0])

    def sylow_elem(self, idx: int) -> SylowElem:
        D, P, alpha = decompose_batch(self.field, self.reps(np.array([idx])), self.params.odd)
        return SylowElem(Mat(self.field, D[0]), Mat(self.field, P[0]), alpha[0])

    def index_of_elem(self, e: SylowElem) -> int:
        return int(self.index_of(lower_codes(self.field, self.n, embed(e).entries[None]))[0])


def enumerate_sylow(params: UnitaryParams, budget: Optional[int] = None) -> UnitarySylowGroup:
    """
    Перечисляет силовскую подгруппу по параметризации: D пробегает нижние
    унитреугольные, alpha пробегает F_{q^2}^m, P пробегает решения.

    Raises:
        BudgetExceededError: q^{n(n-1)/2} больше бюджета, в сообщении нужный размер.
    """
    check_budget(params.sylow_order, budget, f'Sylow subgroup of U_{params.n}({params.q})')
    with soft_deadline(f'enumerate S(U_{params.n}({params.q}))'):
        S = UnitarySylowGroup(params)
    logger.info('Перечислена %s', S)
    return S


# -------------------
# Выделенные подгруппы

def _scan_mask(S: UnitarySylowGroup, predicate) -> np.ndarray:
    def work(a: int, b: int) -> np.ndarray:
        return predicate(S.reps(np.arange(a, b, dtype=np.int64)))

    return S.map_chunks(work, S.order).astype(bool)


def distinguished_subgroup(S: Union[UnitarySylowGroup, UnitaryParams], tag: Union[SubgroupTag, str]) -> Subgroup:
    """
    Подгруппы A, A0, D, Ntilde(i, j) и вся S как маски над элементами S
    со свидетелями порождения из параметризации.

    Параметры:
        S (UnitarySylowGroup | UnitaryParams): Группа или её параметры.
        tag (SubgroupTag | str): Тег подгруппы.

    Returns:
        Subgroup: Подгруппа S.

    Raises:
        InvalidParamsError: Для Ntilde нарушено 1 <= j < i <= m.
    """
    if isinstance(S, UnitaryParams):
        S = enumerate_sylow(S)
    if isinstance(tag, str):
        tag = SubgroupTag.parse(tag)
    m, n, odd = S.params.m, S.params.n, S.params.odd
    low = n - m
    rows, cols = np.tril_indices(m, -1)

    def d_trivial(X):
        return ~np.any(X[:, low:, low:][:, rows, cols], axis=1) if rows.size else np.ones(len(X), dtype=bool)

    def alpha_zero(X):
        return ~np.any(X[:, m, :m], axis=1) if odd else np.ones(len(X), dtype=bool)

    def c_zero(X):
        return ~np.any(X[:, low:, :m].reshape(len(X), -1), axis=1)

    w = S.witness
    a0 = [i for _, i in w['A0']]
    a_full = a0 + [i for _, i in w['alpha']]
    d_all = [i for _, i in w['D']]

    if tag.tag == 'full':
        return S.full().relabel('S')
    if tag.tag == 'A':
        mask = _scan_mask(S, d_trivial)
        return Subgroup(S, mask, a_full, label='A')
    if tag.tag == 'A0':
        mask = _scan_mask(S, lambda X: d_trivial(X) & alpha_zero(X))
        return Subgroup(S, mask, a0, label='A0')
    if tag.tag == 'Dpart':
        mask = _scan_mask(S, lambda X: c_zero(X) & alpha_zero(X))
        return Subgroup(S, mask, d_all, label='D')
    i, j = tag.i, tag.j
    if i is None or j is None or not (1 <= j < i <= m):
        raise InvalidParamsError(f'Ntilde({i},{j}) needs 1 <= j < i <= m={m}')
    # D_ab = 0 вне a >= i, b <= j (индексы с единицы)
    outside = [(a, b) for a, b in zip(rows, cols) if a < i - 1 or b > j - 1]
    out_rows = np.array([a for a, _ in outside], dtype=np.int64)
    out_cols = np.array([b for _, b in outside], dtype=np.int64)

    def in_n_ij(X):
        if not out_rows.size:
            return np.ones(len(X), dtype=bool)
        return ~np.any(X[:, low:, low:][:, out_rows, out_cols], axis=1)

    mask = _scan_mask(S, in_n_ij)
    d_gens = [idx for (a, b), idx in w['D'] if a >= i - 1 and b <= j - 1]
    return Subgroup(S, mask, d_gens + a_full, label=f'Ntilde{i}{j}')


def semidirect_report(S: UnitarySylowGroup, samples: int = config.DEFAULT_SAMPLES,
                      rng: Optional[np.random.Generator] = None) -> Dict[str, bool]:
    '''
    Разложение S = D A: X_{D,P,alpha} = X_{D,0,0} X_{1,P,alpha}, D & A = 1,
    |D| |A| = |S|, нормальность A и A0, [A, A] <= A0.
    '''
    rng = np.random.default_rng(config.DEFAULT_SEED) if rng is None else rng
    field, odd, m = S.field, S.params.odd, S.params.m
    if S.order <= config.EXHAUSTIVE_LIMIT:
        idx = np.arange(S.order, dtype=np.int64)
    else:
        idx = rng.integers(0, S.order, size=samples)
    X = S.reps(idx)
    D, P, alpha = decompose_batch(field, X, odd)
    zero_P = np.zeros_like(P)
    one = np.broadcast_to(np.eye(m, dtype=np.int64), D.shape)
    XD = embed_batch(field, D, zero_P, np.zeros_like(alpha) if odd else None)
    XA = embed_batch(field, one, P, alpha if odd else None)
    factorization = bool(np.array_equal(batch_matmul(field, XD, XA), X))

    A = distinguished_subgroup(S, 'A')
    A0 = distinguished_subgroup(S, 'A0')
    Dp = distinguished_subgroup(S, 'Dpart')
    report = {
        'factorization': factorization,
        'trivial_intersection': int(np.count_nonzero(A.members & Dp.members)) == 1,
        'orders_multiply': A.order * Dp.order == S.order,
        'A_normal': is_normal(S, A),
        'A0_normal': is_normal(S, A0),
    }
    if odd:
        report['A0_normal_in_A'] = is_normal(S, A0, within=A)
        report['commutator_in_A0'] = commutator_subgroup(S, A, A, 'generators').issubset(A0)
    return report



def random_sylow_elem(field: FieldSpec, m: int, odd: bool, rng: np.random.Generator,
                      unit_D: bool = False, zero_alpha: bool = False) -> SylowElem:
    '''
    Случайный элемент силовской подгруппы без перечисления: D случайная
    нижняя унитреугольная, P частное решение плюс случайная комбинация
    базиса над F_p.
    '''
    D = np.eye(m, dtype=np.int64)
    if not unit_D:
        rows, cols = np.tril_indices(m, -1)
        D[rows, cols] = rng.integers(0, field.order, size=rows.size)
    alpha = np.zeros(m if odd else 0, dtype=np.int64)
    if odd and not zero_alpha:
        alpha = rng.integers(0, field.order, size=m)
    P = particular_solution(field, alpha[None])[0] if odd else np.zeros((m, m), dtype=np.int64)
    basis = csp_basis(field, m)
    coeffs = rng.integers(0, field.p, size=basis.shape[0])
    for c, B in zip(coeffs, basis):
        if c:
            P = field.add(P, field.mul(int(c), B))
    return SylowElem(Mat(field, D), Mat(field, P), alpha)
