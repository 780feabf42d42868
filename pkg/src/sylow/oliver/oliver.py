import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from .. import config
from ..errors import SylowError
from ..groups.base_group import Group, Subgroup, check_budget, soft_deadline
from ..groups.core import (
    center, centralizer, conjugacy_class, iterated_commutator, normal_closure, omega1,
    subgroup_from_elements,
)
from ..groups.thompson import ElementaryAbelianReport, thompson_J
from .qseries import QSeries, step_passes, verify_qseries


logger = logging.getLogger(__name__)


@dataclass
class OliverResult:
    '''
    Подгруппа Оливера X(S) с сертификатом.
    '''
    subgroup: Subgroup
    certificate: QSeries
    maximality_evidence: List[int] = field(default_factory=list)  # Отвергнутые кандидаты последнего раунда
    oracle_agreement: Optional[bool] = None                       # Сверка с полным перебором


def _mark_class(S: Group, g: int, base: Subgroup, covered: np.ndarray) -> None:
    # Сопряжённые g, степени g^k при 0 < k < p и их смежные классы по base
    # дают то же замыкание <base, g^S>
    cls = conjugacy_class(S, g)
    powers = np.unique(np.concatenate([S.power(cls, k) for k in range(1, S.p)]))
    covered[S.mul(powers[:, None], base.member_indices()[None, :])] = True


def _closures_over(S: Group, base: Subgroup, order: np.ndarray) -> Iterator[Tuple[int, Subgroup]]:
    '''
    Нормальные замыкания <base, g^S> для g вне base, по одному на класс.
    '''
    covered = base.members.copy()
    for g in order:
        g = int(g)
        if covered[g]:
            continue
        _mark_class(S, g, base, covered)
        start = subgroup_from_elements(S, [g], start=base)
        yield g, normal_closure(S, start)


def _candidate_order(S: Group, rng: Optional[np.random.Generator]) -> np.ndarray:
    order = np.arange(S.order, dtype=np.int64)
    if rng is not None:
        rng.shuffle(order)
    return order


def compute_oliver(S: Group, seed: Optional[int] = None, oracle: bool = False) -> OliverResult:
    """
    Жадная неподвижная точка: X <- 1, C <- Omega_1(C_S(X)); кандидат g
    расширяет X до N = <X, g^S>, если [C, N; p-1] = 1. После каждого
    расширения C пересчитывается, раунды повторяются, пока хоть один
    кандидат расширяет X.

    Параметры:
        S (Group): p-группа.
        seed (int): Если задан, кандидаты перебираются в перемешанном порядке.
        oracle (bool): Сверить результат с oliver_bruteforce (только для малых групп).

    Returns:
        OliverResult: X(S), проверенный Q-ряд и отвергнутые кандидаты.

    Raises:
        BudgetExceededError: Группа больше бюджета.
    """
    check_budget(S.order, None, 'Oliver subgroup')
    rng = None if seed is None else np.random.default_rng(seed)
    p = S.p
    X = S.trivial()
    chain = [X]
    C = omega1(S, centralizer(S, X))
    rounds = 0
    rejected: List[int] = []
    with soft_deadline(f'Oliver subgroup of {S.name}'):
        while True:
            rounds += 1
            extended = False
            rejected = []
            for g, N in _closures_over(S, X, _candidate_order(S, rng)):
                if iterated_commutator(S, C, N, p - 1).is_trivial():
                    X = N.relabel(f'Q{len(chain)}')
                    chain.append(X)
                    C = omega1(S, centralizer(S, X))
                    extended = True
                    logger.debug('X расширена до порядка %d', X.order)
                    break
                rejected.append(g)
            if not extended:
                break
    certificate = verify_qseries(S, chain)
    if not certificate.passed:
        raise SylowError('greedy Q-series failed re-verification')
    logger.info('%s: |X(S)| = %d за %d раундов', S.name, X.order, rounds)
    result = OliverResult(X.relabel('X'), certificate, sorted(rejected))
    if oracle:
        result.oracle_agreement = oliver_bruteforce(S).same_as(result.subgroup)
    return result


def normal_subgroups(S: Group) -> List[Subgroup]:
    '''
    Все нормальные подгруппы S снизу вверх через нормальные замыкания
    одного элемента, без повторов по маске. Отсортированы по порядку.
    '''
    found: Dict[str, Subgroup] = {}
    trivial = S.trivial()
    found[trivial.key()] = trivial
    frontier = [trivial]
    everything = np.arange(S.order, dtype=np.int64)
    while frontier:
        following = []
        for N in frontier:
            for _, M in _closures_over(S, N, everything):
                key = M.key()
                if key not in found:
                    found[key] = M
                    following.append(M)
        frontier = following
    return sorted(found.values(), key=lambda N: (N.order, tuple(N.member_indices())))


def oliver_bruteforce(S: Group) -> Subgroup:
    """
    Переборный оракул: все нормальные подгруппы, динамика по включению,
    допускает ли подгруппа Q-ряд, и наибольшая допускающая.

    Допустимые шаги хранятся в networkx.DiGraph, сертификат восстанавливается
    кратчайшим путём от 1.

    Raises:
        BudgetExceededError: |S| больше BRUTEFORCE_LIMIT.
        SylowError: Наибольшая допускающая подгруппа не единственна.
    """
    check_budget(S.order, config.BRUTEFORCE_LIMIT, 'Oliver brute-force oracle')
    normals = normal_subgroups(S)
    keys = [N.key() for N in normals]
    graph = nx.DiGraph()
    graph.add_node(keys[0])
    admitting = [0]
    for i in range(1, len(normals)):
        N = normals[i]
        # Предшественники по убыванию порядка
        for j in sorted(admitting, key=lambda t: -normals[t].order):
            K = normals[j]
            if K.order >= N.order or not K.issubset(N):
                continue
            if step_passes(S, K, N).passed:
                graph.add_edge(keys[j], keys[i])
                admitting.append(i)
                break
    best_order = max(normals[i].order for i in admitting)
    best = [i for i in admitting if normals[i].order == best_order]
    if len(best) != 1:
        raise SylowError(f'{len(best)} maximal subgroups admit a Q-series, expected one')
    winner = normals[best[0]]
    path = nx.shortest_path(graph, keys[0], keys[best[0]])
    by_key = dict(zip(keys, normals))
    certificate = verify_qseries(S, [by_key[key] for key in path])
    if not certificate.passed:
        raise SylowError('brute-force certificate failed re-verification')
    logger.info('Оракул: нормальных подгрупп %d, допускают Q-ряд %d, |X| = %d',
                len(normals), len(admitting), winner.order)
    return winner.relabel('X')


@dataclass
class LemmaReport:
    centralizer_is_center: bool     # C_S(X) = Z(X)
    scanned: int                    # Просмотрено нормальных замыканий
    violations: int                 # Замыкания Q с [Omega_1(Z(X)), Q; p-1] = 1, но Q вне X

    @property
    def passed(self) -> bool:
        return self.centralizer_is_center and self.violations == 0


def lemma_checks(S: Group, X: Subgroup) -> LemmaReport:
    '''
    Проверки для вычисленной X(S): C_S(X) = Z(X), и каждое нормальное
    замыкание Q = <g^S> с [Omega_1(Z(X)), Q; p-1] = 1 лежит в X.
    '''
    Z = center(S, X)
    centralizer_is_center = centralizer(S, X).same_as(Z)
    omega = omega1(S, Z)
    scanned = violations = 0
    with soft_deadline(f'lemma scan over {S.name}'):
        for _, Q in _closures_over(S, S.trivial(), np.arange(S.order, dtype=np.int64)):
            scanned += 1
            if iterated_commutator(S, omega, Q, S.p - 1).is_trivial() and not Q.issubset(X):
                violations += 1
    return LemmaReport(centralizer_is_center, scanned, violations)


@dataclass
class ConjectureVerdict:
    holds: bool                         # J(S) <= X(S)
    J: Subgroup
    elementary_abelian: ElementaryAbelianReport
    oliver: OliverResult


def check_conjecture(S: Group, seed: Optional[int] = None, oracle: bool = False) -> ConjectureVerdict:
    """
    Вердикт J(S) <= X(S).

    :param S: p-группа в пределах бюджета.
    :param seed: Порядок кандидатов для compute_oliver.
    :param oracle: Сверка X(S) с переборным оракулом.
    :return: Вердикт с обеими подгруппами и сертификатами.
    """
    J, report = thompson_J(S)
    result = compute_oliver(S, seed=seed, oracle=oracle)
    holds = J.issubset(result.subgroup)
    logger.info('%s: |J| = %d, |X| = %d, J <= X: %s', S.name, J.order, result.subgroup.order, holds)
    return ConjectureVerdict(holds=holds, J=J, elementary_abelian=report, oliver=result)
