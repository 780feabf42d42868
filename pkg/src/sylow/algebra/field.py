import itertools
import logging
from dataclasses import dataclass
from typing import List, NewType, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import Poly, isprime
from sympy.abc import x as _x

from ..config import DENSE_TABLE_LIMIT, MAX_FIELD_SIZE
from ..errors import InvalidParamsError, SylowError


logger = logging.getLogger(__name__)

# Индекс элемента F_{q^2}: коэффициенты многочлена в системе счисления по основанию p
FieldElem = NewType('FieldElem', int)


@dataclass(frozen=True, eq=False)
class FieldSpec:
    '''
    Поле F_{q^2} = F_p[x]/(f), deg f = 2k, с подполем F_q и сопряжением x -> x^q.

    Элемент кодируется целым индексом: коэффициент при x^t стоит в t-м разряде
    по основанию p. Ноль кодируется 0, единица 1. Все таблицы только для чтения.
    '''
    p: int
    k: int
    modulus: Tuple[int, ...]        # Коэффициенты f от старшего к младшему
    digits: np.ndarray              # (q^2, 2k) коэффициенты каждого элемента
    exp_table: np.ndarray           # Степени примитивного элемента
    log_table: np.ndarray           # Дискретный логарифм, log(0) = -1
    conj_table: np.ndarray          # x -> x^q
    subfield_mask: np.ndarray       # Принадлежность F_q
    neg_table: np.ndarray
    inv_table: np.ndarray           # inv(0) = 0, проверка на ноль у вызывающего
    add_table: Optional[np.ndarray] = None
    mul_table: Optional[np.ndarray] = None

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def order(self) -> int:
        return self.q * self.q

    @property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(2 * self.k, dtype=np.int64)

    def __repr__(self) -> str:
        return f'FieldSpec(p={self.p}, k={self.k}, modulus={self.modulus})'

    # -------------------
    # Арифметика, векторизована по numpy-массивам

    def add(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.add_table is not None:
            return self.add_table[a, b]
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.weights

    def neg(self, a) -> np.ndarray:
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.mul_table is not None:
            return self.mul_table[a, b]
        logs = (self.log_table[a] + self.log_table[b]) % (self.order - 1)
        return np.where((a == 0) | (b == 0), 0, self.exp_table[logs])

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError('zero has no inverse in the field')
        return self.inv_table[a]

    def conj(self, a) -> np.ndarray:
        return self.conj_table[np.asarray(a, dtype=np.int64)]

    def norm(self, a) -> np.ndarray:
        return self.mul(a, self.conj(a))

    def scalar(self, n: int) -> int:
        # Образ целого числа в простом подполе
        return int(n) % self.p

    # -------------------
    # Вспомогательные множества

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def fp_basis(self) -> List[int]:
        # Базис F_{q^2} над F_p: 1, x, ..., x^{2k-1}
        return [self.p ** t for t in range(2 * self.k)]

    def trace_zero(self) -> np.ndarray:
        # Решения x + conj(x) = 0, их ровно q
        elems = self.elements()
        return elems[self.add(elems, self.conj(elems)) == 0]

    def trace_zero_basis(self) -> List[int]:
        return span_basis(self, self.trace_zero())

    def half_trace_solution(self, c: int) -> int:
        '''
        Одно решение уравнения x + conj(x) = c для c из F_q.
        При нечётном p это c/2.
        '''
        if not self.subfield_mask[c]:
            raise InvalidParamsError(f'{c} is not in the subfield F_q')
        if self.p == 2:
            elems = self.elements()
            hits = elems[self.add(elems, self.conj(elems)) == c]
            return int(hits[0])
        return int(self.mul(c, self.inv(2)))

    def solve_norm(self, c: int) -> int:
        # Элемент с x * conj(x) = c, c из F_q \ {0}
        hits = np.flatnonzero(self.norm(self.elements()) == c)
        if not hits.size:
            raise InvalidParamsError(f'{c} is not a norm')
        return int(hits[0])

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElem:
        # Коэффициенты от младшего к старшему
        value = 0
        for t, c in enumerate(coeffs):
            value += (int(c) % self.p) * self.p ** t
        return FieldElem(value)


def span_basis(field: FieldSpec, elems: np.ndarray) -> List[int]:
    '''
    Жадно выбирает базис над F_p для аддитивной подгруппы, порождённой elems.
    '''
    span = np.zeros(field.order, dtype=bool)
    span[0] = True
    basis = []
    for e in np.asarray(elems, dtype=np.int64):
        if span[e]:
            continue
        basis.append(int(e))
        current = np.flatnonzero(span)
        multiples = [field.mul(field.scalar(c), e) for c in range(1, field.p)]
        for mult in multiples:
            span[field.add(current, mult)] = True
    return basis


def _polymulmod(a: np.ndarray, b: np.ndarray, modulus: np.ndarray, p: int) -> np.ndarray:
    # a, b и результат: коэффициенты от младшего к старшему, длина deg f
    deg = len(modulus) - 1
    prod = np.convolve(a, b) % p
    # modulus хранится от младшего к старшему, старший коэффициент равен 1
    for d in range(len(prod) - 1, deg - 1, -1):
        c = prod[d]
        if c:
            prod[d - deg:d + 1] = (prod[d - deg:d + 1] - c * modulus) % p
    out = np.zeros(deg, dtype=np.int64)
    out[:min(deg, len(prod))] = prod[:deg]
    return out


def _polypow(a: np.ndarray, e: int, modulus: np.ndarray, p: int) -> np.ndarray:
    result = np.zeros(len(modulus) - 1, dtype=np.int64)
    result[0] = 1
    while e:
        if e & 1:
            result = _polymulmod(result, a, modulus, p)
        a = _polymulmod(a, a, modulus, p)
        e >>= 1
    return result


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    # Коэффициенты от старшего к младшему
    return bool(Poly(list(coeffs), _x, modulus=p).is_irreducible)


def lowest_irreducible(p: int, degree: int) -> Tuple[int, ...]:
    '''
    Лексикографически наименьший нормированный неприводимый многочлен степени degree.
    Сравнение идёт по коэффициентам от старшего к младшему.
    '''
    for tail in itertools.product(range(p), repeat=degree):
        if tail[-1] == 0:
            continue
        coeffs = (1,) + tail
        if is_irreducible(coeffs, p):
            return coeffs
    raise SylowError(f'no irreducible polynomial of degree {degree} over F_{p}')


def field_create(p: int, k: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Строит поле F_{q^2}, q = p^k, с таблицами логарифмов и сопряжения.

    Параметры:
        p (int): Простое число.
        k (int): Степень F_q над F_p.
        modulus (Sequence[int]): Неприводимый многочлен степени 2k, коэффициенты
            от старшего к младшему. По умолчанию выбирается лексикографически
            наименьший.

    Returns:
        FieldSpec: Поле со всеми таблицами.

    Raises:
        InvalidParamsError: p не простое, k < 1, поле больше 2^16 или modulus
        не является нормированным неприводимым многочленом степени 2k.
    """
    if not isprime(p):
        raise InvalidParamsError(f'p={p} is not prime')
    if k < 1:
        raise InvalidParamsError(f'k={k} must be positive')
    order = p ** (2 * k)
    if order > MAX_FIELD_SIZE:
        raise InvalidParamsError(f'q^2={order} exceeds the field size bound {MAX_FIELD_SIZE}')

    if modulus is None:
        modulus = lowest_irreducible(p, 2 * k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != 2 * k + 1 or modulus[0] != 1:
            raise InvalidParamsError(f'modulus {modulus} must be monic of degree {2 * k}')
        if not is_irreducible(modulus, p):
            raise InvalidParamsError(f'modulus {modulus} is reducible over F_{p}')
    modulus = tuple(modulus)
    low_first = np.array(modulus[::-1], dtype=np.int64)

    deg = 2 * k
    indices = np.arange(order, dtype=np.int64)
    weights = p ** np.arange(deg, dtype=np.int64)
    digits = (indices[:, None] // weights[None, :]) % p

    # Примитивный элемент: наименьший индекс порядка q^2 - 1
    group_order = order - 1
    prime_factors = sympy.primefactors(group_order)
    generator = None
    for candidate in range(1, order):
        poly = digits[candidate]
        if all(
            int(_polypow(poly, group_order // r, low_first, p) @ weights) != 1
            for r in prime_factors
        ):
            generator = candidate
            break
    if generator is None:
        raise SylowError('no primitive element found')

    exp_table = np.zeros(group_order, dtype=np.int64)
    log_table = np.full(order, -1, dtype=np.int64)
    current = np.zeros(deg, dtype=np.int64)
    current[0] = 1
    g_poly = digits[generator]
    for i in range(group_order):
        value = int(current @ weights)
        exp_table[i] = value
        log_table[value] = i
        current = _polymulmod(current, g_poly, low_first, p)

    nonzero = indices[1:]
    q = p ** k
    conj_table = np.zeros(order, dtype=np.int64)
    conj_table[nonzero] = exp_table[(log_table[nonzero] * q) % group_order]
    inv_table = np.zeros(order, dtype=np.int64)
    inv_table[nonzero] = exp_table[(-log_table[nonzero]) % group_order]
    neg_table = ((p - digits) % p) @ weights

    add_table = mul_table = None
    if order <= DENSE_TABLE_LIMIT:
        add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        logs = (log_table[:, None] + log_table[None, :]) % group_order
        mul_table = exp_table[logs]
        mul_table[0, :] = 0
        mul_table[:, 0] = 0

    for table in (digits, exp_table, log_table, conj_table, inv_table, neg_table, add_table, mul_table):
        if table is not None:
            table.setflags(write=False)

    field = FieldSpec(
        p=p, k=k, modulus=modulus, digits=digits,
        exp_table=exp_table, log_table=log_table, conj_table=conj_table,
        subfield_mask=conj_table == indices,
        neg_table=neg_table, inv_table=inv_table,
        add_table=add_table, mul_table=mul_table,
    )
    logger.debug('Построено поле %s, примитивный элемент %d', field, generator)
    return field
