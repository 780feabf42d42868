import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from sympy import isprime

from .. import config
from ..errors import BudgetExceededError, InvalidParamsError
from ..oliver.oliver import check_conjecture
from ..oliver.qseries import verify_qseries
from .base_group import Group, Subgroup, check_budget, soft_deadline
from .core import (
    intersection, is_abelian, is_elementary_abelian, is_normal, subgroup_from_elements,
)
from .thompson import thompson_J


logger = logging.getLogger(__name__)


def wreath_order_exponent(r: int, height: int, p: int) -> int:
    # |C_{p^r} wr C_p wr ... wr C_p| = p^{r p^h + (p^h - 1)/(p - 1)}
    return r * p ** height + (p ** height - 1) // (p - 1)


class WreathSpec(BaseModel):
    '''
    Башня сплетений C_{p^r} wr C_p wr ... wr C_p высоты height.
    '''
    model_config = ConfigDict(frozen=True)

    p: int                          # Простое p >= 5
    r: int = 1                      # Показатель нижней циклической группы
    height: int = 0                 # Число слоёв wr C_p
    budget: Optional[int] = None    # Лимит элементов, None - из конфига

    @model_validator(mode='after')
    def _check(self) -> 'WreathSpec':
        if not isprime(self.p) or self.p < 5:
            raise ValueError(f'p={self.p} must be a prime >= 5')
        if self.r < 0 or self.height < 0:
            raise ValueError('r and height must be non-negative')
        return self

    @property
    def order_exponent(self) -> int:
        return wreath_order_exponent(self.r, self.height, self.p)

    @property
    def order(self) -> int:
        return self.p ** self.order_exponent

    def lower(self) -> 'WreathSpec':
        # Та же башня на слой ниже
        return WreathSpec(p=self.p, r=self.r, height=self.height - 1, budget=self.budget)

    def upper(self) -> 'WreathSpec':
        return WreathSpec(p=self.p, r=self.r, height=self.height + 1, budget=self.budget)


class WreathGroup(Group):
    '''
    Итерированное сплетение как перечисленная группа.

    Элемент высоты h хранится плоским вектором [t, b_0, ..., b_{p-1}], где
    t из C_p, b_i элементы высоты h - 1. На высоте 0 это один разряд по
    модулю p^r. Умножение (b, t)(b', t') = (b * sigma_t(b'), t + t'),
    sigma_t(b')_i = b'_{i - t}. Код элемента есть смешанная система счисления,
    поэтому коды идут подряд от 0 до |W| - 1.
    '''

    def __init__(self, p: int, r: int, height: int, budget: Optional[int] = None):
        if not isprime(p):
            raise InvalidParamsError(f'p={p} is not prime')
        if r < 0 or height < 0:
            raise InvalidParamsError('r and height must be non-negative')
        exponent = wreath_order_exponent(r, height, p)
        check_budget(p ** exponent, budget, f'C_{p}^{r} wreath tower of height {height}')
        if p ** exponent >= 2 ** 63:
            raise BudgetExceededError(f'order p^{exponent} does not fit into int64', required=p ** exponent)
        self.r = r
        self.height = height
        self.bottom = p ** r
        # Длина вектора на каждой высоте
        self.lengths = [1]
        for _ in range(height):
            self.lengths.append(1 + p * self.lengths[-1])
        self.radices = self._radices(p, height)
        weights = np.ones(self.radices.size, dtype=np.int64)
        for t in range(self.radices.size - 2, -1, -1):
            weights[t] = weights[t + 1] * self.radices[t + 1]
        self.weights = weights
        codes = np.arange(p ** exponent, dtype=np.int64)
        self.prime = p
        gens = self.encode(self._generator_reps(height))
        super().__init__(codes, gens, p, name=self._name(p, r, height))

    @staticmethod
    def _name(p: int, r: int, height: int) -> str:
        return f'C{p ** r}' + f' wr C{p}' * height

    def _radices(self, p: int, h: int) -> np.ndarray:
        if h == 0:
            return np.array([self.bottom], dtype=np.int64)
        lower = self._radices(p, h - 1)
        return np.concatenate([np.array([p], dtype=np.int64), np.tile(lower, p)])

    def _generator_reps(self, h: int) -> np.ndarray:
        # Верхний циклический сдвиг и порождающие нижнего слоя в координате 0
        if h == 0:
            return np.ones((1 if self.bottom > 1 else 0, 1), dtype=np.int64)
        lower = self._generator_reps(h - 1)
        length = self.lengths[h]
        top = np.zeros((1, length), dtype=np.int64)
        top[0, 0] = 1
        embedded = np.zeros((lower.shape[0], length), dtype=np.int64)
        embedded[:, 1:1 + self.lengths[h - 1]] = lower
        return np.concatenate([top, embedded])

    # -------------------
    # Представление

    def identity_rep(self) -> np.ndarray:
        return np.zeros((1, self.lengths[-1]), dtype=np.int64)

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).ravel()
        return (codes[:, None] // self.weights[None, :]) % self.radices[None, :]

    def encode(self, reps: np.ndarray) -> np.ndarray:
        return np.asarray(reps, dtype=np.int64) @ self.weights

    def compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._compose(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), self.height)

    def _compose(self, a: np.ndarray, b: np.ndarray, h: int) -> np.ndarray:
        if h == 0:
            return (a + b) % self.bottom
        p, N, L = self.prime, a.shape[0], self.lengths[h - 1]
        top_a = a[:, 0]
        blocks_a = a[:, 1:].reshape(N, p, L)
        blocks_b = b[:, 1:].reshape(N, p, L)
        source = (np.arange(p)[None, :] - top_a[:, None]) % p
        shifted = blocks_b[np.arange(N)[:, None], source]
        blocks = self._compose(blocks_a.reshape(N * p, L), shifted.reshape(N * p, L), h - 1)
        top = (top_a + b[:, 0]) % p
        return np.concatenate([top[:, None], blocks.reshape(N, p * L)], axis=1)

    def invert(self, a: np.ndarray) -> np.ndarray:
        return self._invert(np.asarray(a, dtype=np.int64), self.height)

    def _invert(self, a: np.ndarray, h: int) -> np.ndarray:
        # (b, t)^-1 = (sigma_{-t}(b^-1), -t)
        if h == 0:
            return (-a) % self.bottom
        p, N, L = self.prime, a.shape[0], self.lengths[h - 1]
        top = a[:, 0]
        inverted = self._invert(a[:, 1:].reshape(N * p, L), h - 1).reshape(N, p, L)
        source = (np.arange(p)[None, :] + top[:, None]) % p
        blocks = inverted[np.arange(N)[:, None], source]
        return np.concatenate([((-top) % p)[:, None], blocks.reshape(N, p * L)], axis=1)

    # -------------------
    # Подгруппы сплетения

    def base_subgroup(self) -> Subgroup:
        '''
        База P^p: элементы с нулевым верхним сдвигом.
        '''
        if self.height == 0:
            return self.trivial().relabel('base')
        members = self.decode(self.codes)[:, 0] == 0
        lower = self._generator_reps(self.height - 1)
        L = self.lengths[self.height - 1]
        reps = []
        for coord in range(self.prime):
            block = np.zeros((lower.shape[0], self.lengths[-1]), dtype=np.int64)
            block[:, 1 + coord * L:1 + (coord + 1) * L] = lower
            reps.append(block)
        gens = self.index_of(self.encode(np.concatenate(reps))) if reps else []
        return Subgroup(self, members, [int(g) for g in gens if g != self.identity], label='base')

    def top_subgroup(self) -> Subgroup:
        if self.height == 0:
            return self.trivial().relabel('top')
        rep = np.zeros((1, self.lengths[-1]), dtype=np.int64)
        rep[0, 0] = 1
        return subgroup_from_elements(self, self.index_of(self.encode(rep))).relabel('top')

    def embed_base(self, lower: 'WreathGroup', H: Subgroup) -> Subgroup:
        """
        Копия H^p в базе: все p координат лежат в H.

        :param lower: Группа на слой ниже, H её подгруппа.
        :param H: Подгруппа lower.
        :return: Подгруппа self порядка |H|^p.
        """
        if self.height == 0 or lower.height != self.height - 1 or lower.r != self.r:
            raise InvalidParamsError('lower group must be the previous layer of this tower')
        reps = self.decode(self.codes)
        L = self.lengths[self.height - 1]
        members = reps[:, 0] == 0
        for coord in range(self.prime):
            block_codes = lower.encode(reps[:, 1 + coord * L:1 + (coord + 1) * L])
            members &= H.members[block_codes]
        gens = []
        for coord in range(self.prime):
            block = np.zeros((len(H.generators), self.lengths[-1]), dtype=np.int64)
            block[:, 1 + coord * L:1 + (coord + 1) * L] = lower.reps(H.generators)
            gens.extend(int(g) for g in self.index_of(self.encode(block)))
        return Subgroup(self, members, gens, label=f'{H.label}^{self.prime}')


def build_wreath(spec: WreathSpec) -> WreathGroup:
    """
    Перечисляет башню сплетений по спецификации.

    Raises:
        BudgetExceededError: Порядок больше бюджета.
    """
    with soft_deadline(f'build {WreathGroup._name(spec.p, spec.r, spec.height)}'):
        W = WreathGroup(spec.p, spec.r, spec.height, spec.budget)
    logger.info('Построена %s', W)
    return W


@dataclass
class WreathStructure:
    order: int
    closed_form_order: int
    base_order: int
    base_normal: bool
    base_index_p: bool
    base_top_trivial: bool


def structure_report(spec: WreathSpec) -> WreathStructure:
    W = build_wreath(spec)
    base = W.base_subgroup()
    top = W.top_subgroup()
    if spec.height == 0:
        # Без слоёв база и вершина тривиальны
        return WreathStructure(W.order, spec.order, base.order, True, True, True)
    return WreathStructure(
        order=W.order,
        closed_form_order=spec.order,
        base_order=base.order,
        base_normal=is_normal(W, base),
        base_index_p=base.order * spec.p == W.order,
        base_top_trivial=intersection(W, base, top).is_trivial(),
    )


WreathStatus = Literal['verified', 'unverified', 'skipped']


@dataclass
class WreathThompsonReport:
    status: WreathStatus
    passed: bool
    lower_J_order: int = 0                     # |J(P)|
    predicted_order: int = 0                   # |J(P)|^p
    J_order: Optional[int] = None              # |J(P wr C_p)|, если группа в бюджете
    elementary_abelian: Optional[bool] = None
    equals_base_copy: Optional[bool] = None
    note: str = ''


def verify_wreath_thompson(spec: WreathSpec, budget: Optional[int] = None) -> WreathThompsonReport:
    """
    Для P = build_wreath(spec) проверяет, что J(P wr C_p) элементарная
    абелева и совпадает с копией J(P)^p в базе.

    Параметры:
        spec (WreathSpec): Спецификация P.
        budget (int): Лимит элементов для P wr C_p.

    Returns:
        WreathThompsonReport: verified, unverified (P wr C_p вне бюджета,
        выдаётся только предсказание) или skipped (P = 1).
    """
    budget = spec.budget if budget is None else budget
    if spec.r == 0 and spec.height == 0:
        return WreathThompsonReport(status='skipped', passed=True, note='P = 1')
    P = WreathGroup(spec.p, spec.r, spec.height, budget)
    J_P, _ = thompson_J(P, budget)
    P_elementary = is_elementary_abelian(P, J_P)
    predicted = J_P.order ** spec.p
    upper = spec.upper()
    if upper.order > (config.ELEMENT_BUDGET if budget is None else budget):
        logger.warning('P wr C_p порядка p^%d вне бюджета, выдаётся предсказание |J| = %d',
                       upper.order_exponent, predicted)
        return WreathThompsonReport(
            status='unverified', passed=True, lower_J_order=J_P.order, predicted_order=predicted,
            note=f'P wr C_p of order {spec.p}^{upper.order_exponent} exceeds the budget',
        )
    W = WreathGroup(spec.p, spec.r, spec.height + 1, budget)
    J_W, _ = thompson_J(W, budget)
    elementary = is_elementary_abelian(W, J_W)
    copy = W.embed_base(P, J_P)
    equal = J_W.same_as(copy)
    return WreathThompsonReport(
        status='verified',
        passed=equal and (elementary or not P_elementary),
        lower_J_order=J_P.order,
        predicted_order=predicted,
        J_order=J_W.order,
        elementary_abelian=elementary,
        equals_base_copy=equal,
    )


@dataclass
class CoprimeVerdict:
    holds: bool                       # J(S) <= X(S)
    J_order: int
    oliver_order: int
    J_elementary_abelian: bool
    J_normal: bool
    one_step_chain_passes: bool       # 1 <= J(S) как Q-ряд
    abelian: bool


def coprime_conjecture_check(spec: WreathSpec, seed: Optional[int] = None,
                             budget: Optional[int] = None) -> CoprimeVerdict:
    '''
    Гипотеза J(S) <= X(S) для башни сплетений и механизм её доказательства:
    J(S) элементарная абелева и нормальная, поэтому цепочка 1 <= J(S)
    проверяется как Q-ряд.
    '''
    S = WreathGroup(spec.p, spec.r, spec.height, spec.budget if budget is None else budget)
    verdict = check_conjecture(S, seed=seed)
    J = verdict.J
    chain = verify_qseries(S, [S.trivial(), J]) if not J.is_trivial() else verify_qseries(S, [S.trivial()])
    return CoprimeVerdict(
        holds=verdict.holds,
        J_order=J.order,
        oliver_order=verdict.oliver.subgroup.order,
        J_elementary_abelian=is_elementary_abelian(S, J),
        J_normal=is_normal(S, J),
        one_step_chain_passes=chain.passed,
        abelian=is_abelian(S, S.full()),
    )
