import logging
from dataclasses import dataclass, field
from typing import List, Sequence

from ..errors import ChainError
from ..groups.base_group import Group, Subgroup
from ..groups.core import centralizer, is_normal, iterated_commutator, omega1, product_subgroup


logger = logging.getLogger(__name__)


@dataclass
class QSeriesStep:
    index: int                  # Номер шага i >= 1
    order: int                  # |Q_i|
    normal: bool                # Q_i нормальна в S
    omega_order: int            # |Omega_1(C_S(Q_{i-1}))|
    commutator_order: int       # |[Omega_1(C_S(Q_{i-1})), Q_i; p-1]|
    passed: bool


@dataclass
class QSeries:
    '''
    Цепочка 1 = Q_0 <= Q_1 <= ... <= Q_n с отчётом по каждому шагу.
    '''
    chain: List[Subgroup]
    steps: List[QSeriesStep] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(step.passed for step in self.steps)

    @property
    def top(self) -> Subgroup:
        return self.chain[-1]

    def orders(self) -> List[int]:
        return [Q.order for Q in self.chain]


def step_passes(S: Group, previous: Subgroup, current: Subgroup) -> QSeriesStep:
    # Условие [Omega_1(C_S(Q_{i-1})), Q_i; p-1] = 1 при Q_i нормальной в S
    normal = is_normal(S, current)
    omega = omega1(S, centralizer(S, previous))
    commutator = iterated_commutator(S, omega, current, S.p - 1)
    return QSeriesStep(
        index=0,
        order=current.order,
        normal=normal,
        omega_order=omega.order,
        commutator_order=commutator.order,
        passed=normal and commutator.is_trivial(),
    )


def verify_qseries(S: Group, chain: Sequence[Subgroup]) -> QSeries:
    """
    Проверка цепочки подгрупп как Q-ряда.

    Параметры:
        S (Group): Группа.
        chain (list): Подгруппы S, первая тривиальна.

    Returns:
        QSeries: Отчёт по шагам, passed при успехе всех шагов.

    Raises:
        ChainError: Цепочка пуста, не начинается с 1, не возрастает или
            содержит подгруппу другой группы.
    """
    chain = list(chain)
    if not chain or not chain[0].is_trivial():
        raise ChainError('chain must start at the trivial subgroup')
    for Q in chain:
        if Q.parent is not S:
            raise ChainError(f'{Q!r} is not a subgroup of {S!r}')
    for previous, current in zip(chain, chain[1:]):
        if not previous.issubset(current):
            raise ChainError(f'chain is not ascending at {current!r}')
    series = QSeries(chain=chain)
    for i, (previous, current) in enumerate(zip(chain, chain[1:]), start=1):
        step = step_passes(S, previous, current)
        step.index = i
        series.steps.append(step)
        logger.debug('Q-ряд, шаг %d: |Q|=%d, коммутатор %d', i, step.order, step.commutator_order)
    return series


def concat_qseries(S: Group, first: QSeries, second: QSeries) -> QSeries:
    '''
    Склейка Q-рядов: 1 <= Q_1 <= ... <= K <= K R_1 <= ... <= K L, где K
    вершина первого ряда, R_j шаги второго. Повторы подряд отбрасываются,
    результат проверяется заново.
    '''
    if not first.passed or not second.passed:
        raise ChainError('both series must pass before concatenation')
    K = first.top
    chain = list(first.chain)
    for R in second.chain[1:]:
        joined = product_subgroup(S, K, R)
        if not joined.same_as(chain[-1]):
            chain.append(joined)
    return verify_qseries(S, chain)
