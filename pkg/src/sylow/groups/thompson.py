import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from .base_group import Group, Subgroup, check_budget, soft_deadline
from ..errors import SylowError
from .core import extend, is_normal, subgroup_from_elements


logger = logging.getLogger(__name__)

# До этого числа представителей кандидаты сортируются по числу перестановочных
ORDERING_LIMIT = 512


@dataclass
class ElementaryAbelianReport:
    rank: int                                                       # p-ранг группы
    maximal_subgroups: List[Subgroup] = field(default_factory=list)  # Все элементарные абелевы ранга rank
    nodes: int = 0                                                  # Узлов перебора
    J_normal: Optional[bool] = None                                 # J(G) нормальна в G


def _log_p(n: int, p: int) -> int:
    # Целая часть log_p(n) без плавающей точки
    rank = 0
    while n >= p:
        n //= p
        rank += 1
    return rank


def order_p_mask(G: Group) -> np.ndarray:
    everything = np.arange(G.order, dtype=np.int64)
    mask = G.power(everything, G.p) == G.identity
    mask[G.identity] = False
    return mask


def cyclic_representatives(G: Group, idx: np.ndarray) -> np.ndarray:
    # Представитель <g> для элементов порядка p: наименьший индекс среди g, ..., g^{p-1}
    idx = np.asarray(idx, dtype=np.int64)
    rep = idx.copy()
    current = idx.copy()
    for _ in range(G.p - 2):
        current = G.mul(current, idx)
        rep = np.minimum(rep, current)
    return rep


class _ElementaryAbelianSearch:
    '''
    Перебор с отсечениями по элементарным абелевым подгруппам.

    Узел: элементарная абелева E и множество исключённых элементов. Каждый
    максимальный элементарный абелев M, содержащий E, содержит все элементы
    порядка p из Z(Omega_1(C_G(E))), поэтому E сразу расширяется до них.
    После обхода ветви <E, g> её элементы вне E исключаются из соседних ветвей.
    '''

    def __init__(self, G: Group):
        self.G = G
        self.order_p = order_p_mask(G)
        self.rep = np.full(G.order, -1, dtype=np.int64)
        order_p_idx = np.flatnonzero(self.order_p)
        self.rep[order_p_idx] = cyclic_representatives(G, order_p_idx)
        self.order_p_idx = order_p_idx
        self.best_rank = 0
        self.best: Dict[str, Subgroup] = {}
        self.visited: Set[str] = set()
        self.nodes = 0

    def run(self) -> ElementaryAbelianReport:
        self._visit(self.G.trivial(), np.zeros(self.G.order, dtype=bool))
        maximal = [self.best[key] for key in sorted(self.best)]
        if not maximal:
            maximal = [self.G.trivial()]
        maximal.sort(key=lambda E: tuple(E.member_indices()[:8]))
        return ElementaryAbelianReport(rank=self.best_rank, maximal_subgroups=maximal, nodes=self.nodes)

    def _centralized(self, E: Subgroup) -> np.ndarray:
        # Элементы порядка p, перестановочные с E
        candidates = self.order_p_idx
        for g in E.generators:
            candidates = candidates[self.G.commutes(candidates, g)]
        return candidates

    def _jump(self, E: Subgroup, centralized: np.ndarray) -> Subgroup:
        G = self.G
        if not centralized.size:
            return E
        omega = subgroup_from_elements(G, centralized)
        core = centralized
        for w in omega.generators:
            core = core[G.commutes(core, w)]
        outside = core[~E.members[core]]
        if not outside.size:
            return E
        return subgroup_from_elements(G, outside, start=E)

    def _record(self, E: Subgroup, rank: int) -> None:
        if rank > self.best_rank:
            logger.debug('Найден элементарный абелев ранга %d', rank)
            self.best_rank = rank
            self.best = {}
        if rank == self.best_rank:
            self.best[E.key()] = E.relabel(f'E{len(self.best)}')

    def _order_candidates(self, reps: np.ndarray) -> np.ndarray:
        if reps.size > ORDERING_LIMIT:
            return reps
        scores = np.zeros(reps.size, dtype=np.int64)
        for g in reps:
            scores += self.G.commutes(reps, int(g))
        return reps[np.argsort(-scores, kind='stable')]

    def _visit(self, E: Subgroup, excluded: np.ndarray) -> None:
        G = self.G
        p = G.p
        self.nodes += 1
        centralized = self._centralized(E)
        E = self._jump(E, centralized)
        if np.any(excluded & E.members):
            return
        key = E.key()
        if key in self.visited:
            return
        self.visited.add(key)

        rank = _log_p(E.order, p)
        remaining = centralized[~E.members[centralized]]
        if not remaining.size:
            self._record(E, rank)
            return
        local = excluded.copy()
        candidates = remaining[~local[remaining]]
        if _log_p(E.order + candidates.size, p) < self.best_rank:
            return
        for g in self._order_candidates(np.unique(self.rep[candidates])):
            if local[g]:
                continue
            child = extend(G, E, int(g))
            self._visit(child, local)
            local |= child.members & ~E.members
            candidates = candidates[~local[candidates]]
            if _log_p(E.order + candidates.size, p) < self.best_rank:
                break


def elementary_abelian_report(G: Group, budget: Optional[int] = None) -> ElementaryAbelianReport:
    check_budget(G.order, budget, 'elementary abelian search')
    with soft_deadline(f'p-rank of {G.name}'):
        report = _ElementaryAbelianSearch(G).run()
    logger.info('%s: p-ранг %d, максимальных подгрупп %d, узлов %d',
                G.name, report.rank, len(report.maximal_subgroups), report.nodes)
    return report


def thompson_J(G: Group, budget: Optional[int] = None) -> Tuple[Subgroup, ElementaryAbelianReport]:
    """
    Подгруппа Томпсона J(G), порождённая всеми элементарными абелевыми
    подгруппами максимального ранга.

    Параметры:
        G (Group): Конечная p-группа.
        budget (int): Лимит элементов.

    Returns:
        Tuple[Subgroup, ElementaryAbelianReport]: J(G) и отчёт о максимальных подгруппах.

    Raises:
        BudgetExceededError: Группа больше бюджета.
        SylowError: J(G) получилась не нормальной.
    """
    report = elementary_abelian_report(G, budget)
    gens = [g for E in report.maximal_subgroups for g in E.generators]
    J = subgroup_from_elements(G, gens).relabel('J')
    report.J_normal = is_normal(G, J)
    if not report.J_normal:
        raise SylowError(f'J({G.name}) of order {J.order} is not normal')
    return J, report


def p_rank_by_cliques(G: Group) -> Tuple[int, int]:
    '''
    p-ранг через максимальные клики графа коммутирования циклических подгрупп
    порядка p. Клика из (p^r - 1)/(p - 1) вершин отвечает элементарной абелевой
    подгруппе ранга r. Возвращает (ранг, число подгрупп этого ранга).
    '''
    order_p_idx = np.flatnonzero(order_p_mask(G))
    if not order_p_idx.size:
        return 0, 1
    reps = np.unique(cyclic_representatives(G, order_p_idx))
    graph = nx.Graph()
    graph.add_nodes_from(int(r) for r in reps)
    for r in reps:
        commuting = reps[G.commutes(reps, int(r))]
        graph.add_edges_from((int(r), int(s)) for s in commuting if s > r)
    sizes = [len(clique) for clique in nx.find_cliques(graph)]
    largest = max(sizes)
    rank = _log_p(largest * (G.p - 1) + 1, G.p)
    return rank, sizes.count(largest)
