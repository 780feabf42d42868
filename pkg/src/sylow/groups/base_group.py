import hashlib
import logging
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, List, Optional, Sequence

import numpy as np

from .. import config
from ..errors import BudgetExceededError, MembershipError


logger = logging.getLogger(__name__)


def check_budget(size: int, budget: Optional[int], what: str) -> None:
    budget = config.ELEMENT_BUDGET if budget is None else budget
    if size > budget:
        raise BudgetExceededError(
            f'{what} needs {size} elements, budget is {budget}; raise the budget to at least {size}',
            required=size,
        )


@contextmanager
def soft_deadline(label: str):
    # Контрольная точка мягкого лимита времени
    start = time.perf_counter()
    yield
    spent = time.perf_counter() - start
    if spent > config.SOFT_TIME_BUDGET:
        logger.warning('%s: %.1f s, мягкий лимит %d s превышен', label, spent, config.SOFT_TIME_BUDGET)
    else:
        logger.debug('%s: %.2f s', label, spent)


class Group(ABC):
    '''
    Перечисленная конечная группа.

    Элементы хранятся отсортированным массивом канонических кодов int64, индекс
    элемента есть его позиция в этом массиве. Умножение выполняется через
    представление (матрицы, кортежи сплетения), которое определяет наследник.
    '''

    def __init__(self, codes: np.ndarray, generator_codes: Sequence[int], prime: int, name: str = ''):
        codes = np.asarray(codes, dtype=np.int64)
        if codes.size > 1 and not np.all(codes[1:] > codes[:-1]):
            codes = np.unique(codes)
        codes.setflags(write=False)
        self.codes = codes
        self.prime = prime
        self.name = name
        self.identity = int(self.index_of(self.encode(self.identity_rep())[:1])[0])
        gens = self.index_of(np.asarray(list(generator_codes), dtype=np.int64))
        self.generators: List[int] = [int(g) for g in gens if g != self.identity]
        self._inverse_table: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.name!r}, order={self.order})'

    @property
    def order(self) -> int:
        return int(self.codes.size)

    @property
    def p(self) -> int:
        return self.prime

    # -------------------
    # Представление элементов

    @abstractmethod
    def identity_rep(self) -> np.ndarray:
        """
        Представление единицы, массив формы (1, ...).
        """
        pass

    @abstractmethod
    def decode(self, codes: np.ndarray) -> np.ndarray:
        """
        Переводит коды элементов в представление формы (N, ...).
        """
        pass

    @abstractmethod
    def encode(self, reps: np.ndarray) -> np.ndarray:
        """
        Переводит представление формы (N, ...) в коды.
        """
        pass

    @abstractmethod
    def compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        Произведение a * b для пакетов представлений одинаковой длины.
        """
        pass

    @abstractmethod
    def invert(self, a: np.ndarray) -> np.ndarray:
        """
        Обратные элементы для пакета представлений.
        """
        pass

    def reps(self, idx) -> np.ndarray:
        return self.decode(self.codes[np.asarray(idx, dtype=np.int64)])

    # -------------------
    # Индексы

    def locate(self, codes) -> np.ndarray:
        # -1 для кодов вне группы
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.order - 1)
        return np.where(self.codes[pos] == codes, pos, -1)

    def index_of(self, codes) -> np.ndarray:
        idx = self.locate(codes)
        if np.any(idx < 0):
            missing = np.asarray(codes).ravel()[np.flatnonzero(idx.ravel() < 0)[0]]
            raise MembershipError(f'element with code {int(missing)} is not in {self!r}')
        return idx

    def map_chunks(self, work: Callable[[int, int], np.ndarray], length: int) -> np.ndarray:
        bounds = [(s, min(s + config.CHUNK_SIZE, length)) for s in range(0, length, config.CHUNK_SIZE)]
        if not bounds:
            return np.zeros(0, dtype=np.int64)
        if config.WORKERS > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=config.WORKERS) as pool:
                parts = list(pool.map(lambda b: work(*b), bounds))
        else:
            parts = [work(a, b) for a, b in bounds]
        return np.concatenate(parts)

    # -------------------
    # Групповые операции над массивами индексов

    def mul(self, i, j) -> np.ndarray:
        i, j = np.broadcast_arrays(np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64))
        shape = i.shape
        i, j = i.ravel(), j.ravel()

        def work(a: int, b: int) -> np.ndarray:
            return self.index_of(self.encode(self.compose(self.reps(i[a:b]), self.reps(j[a:b]))))

        return self.map_chunks(work, i.size).reshape(shape)

    def inv(self, i) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        if self._inverse_table is None and self.order <= config.INVERSE_TABLE_LIMIT:
            everything = np.arange(self.order, dtype=np.int64)
            self._inverse_table = self._invert_indices(everything)
        if self._inverse_table is not None:
            return self._inverse_table[i]
        return self._invert_indices(i.ravel()).reshape(i.shape)

    def _invert_indices(self, i: np.ndarray) -> np.ndarray:
        def work(a: int, b: int) -> np.ndarray:
            return self.index_of(self.encode(self.invert(self.reps(i[a:b]))))

        return self.map_chunks(work, i.size)

    def power(self, i, e: int) -> np.ndarray:
        base = np.asarray(i, dtype=np.int64)
        result = np.full(base.shape, self.identity, dtype=np.int64)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def comm(self, x, y) -> np.ndarray:
        # [x, y] = x^-1 y^-1 x y
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def conj(self, x, t) -> np.ndarray:
        # x^t = t^-1 x t
        return self.mul(self.mul(self.inv(t), x), t)

    def commutes(self, i, h: int) -> np.ndarray:
        '''
        Маска элементов i, перестановочных с h. Сравнение идёт по представлениям,
        без поиска кодов.
        '''
        i = np.asarray(i, dtype=np.int64).ravel()
        h_rep = self.reps(np.array([h]))

        def work(a: int, b: int) -> np.ndarray:
            reps = self.reps(i[a:b])
            hs = np.broadcast_to(h_rep, reps.shape)
            left = self.compose(reps, hs)
            right = self.compose(hs, reps)
            return np.all((left == right).reshape(len(reps), -1), axis=1)

        if not i.size:
            return np.zeros(0, dtype=bool)
        return self.map_chunks(work, i.size).astype(bool)

    def element_orders(self, i) -> np.ndarray:
        # Для p-групп порядок элемента есть степень p
        i = np.asarray(i, dtype=np.int64)
        orders = np.ones(i.shape, dtype=np.int64)
        current = i.copy()
        pending = current != self.identity
        while np.any(pending):
            current[pending] = self.power(current[pending], self.prime)
            orders[pending] *= self.prime
            pending = current != self.identity
        return orders

    # -------------------
    # Подгруппы

    def full(self) -> 'Subgroup':
        return Subgroup(self, np.ones(self.order, dtype=bool), list(self.generators), label='G')

    def trivial(self) -> 'Subgroup':
        members = np.zeros(self.order, dtype=bool)
        members[self.identity] = True
        return Subgroup(self, members, [], label='1')


@dataclass(eq=False)
class Subgroup:
    '''
    Подгруппа как маска над индексами родительской группы плюс порождающие.
    '''
    parent: Group
    members: np.ndarray                                 # Маска длины |G|
    generators: List[int] = field(default_factory=list)  # Свидетель порождения
    label: str = ''

    @cached_property
    def order(self) -> int:
        return int(np.count_nonzero(self.members))

    def member_indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def issubset(self, other: 'Subgroup') -> bool:
        return not np.any(self.members & ~other.members)

    def same_as(self, other: 'Subgroup') -> bool:
        return np.array_equal(self.members, other.members)

    def is_trivial(self) -> bool:
        return self.order == 1

    def key(self) -> str:
        return hashlib.blake2b(np.packbits(self.members).tobytes(), digest_size=16).hexdigest()

    def relabel(self, label: str) -> 'Subgroup':
        # Копия с другой меткой, маска общая
        return Subgroup(self.parent, self.members, list(self.generators), label=label)

    def __repr__(self) -> str:
        return f'Subgroup({self.label!r}, order={self.order}, gens={len(self.generators)})'
