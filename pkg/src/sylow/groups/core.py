import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from .. import config
from ..errors import InvalidParamsError, MembershipError
from .base_group import Group, Subgroup, soft_deadline


logger = logging.getLogger(__name__)

CommutatorMethod = Literal['auto', 'members', 'generators']


# -------------------
# Порождение подгрупп

def extend(G: Group, K: Subgroup, g: int) -> Subgroup:
    '''
    Подгруппа <K, g>. Замыкание ведётся правыми умножениями на порождающие,
    элементы K уже замкнуты относительно своих порождающих.
    '''
    g = int(g)
    if K.members[g]:
        return K
    gens = list(K.generators) + [g]
    members = K.members.copy()
    frontier = np.unique(G.mul(K.member_indices(), g))
    frontier = frontier[~members[frontier]]
    members[frontier] = True
    while frontier.size:
        products = np.unique(np.concatenate([G.mul(frontier, s) for s in gens]))
        frontier = products[~members[products]]
        members[frontier] = True
    return Subgroup(G, members, gens)


def subgroup_from_elements(G: Group, elems: Sequence[int], start: Optional[Subgroup] = None) -> Subgroup:
    '''
    Подгруппа, порождённая elems. Порождающие выбираются жадно в каноническом
    порядке, поэтому результат не зависит от порядка входа.
    '''
    K = G.trivial() if start is None else start
    elems = np.unique(np.asarray(elems, dtype=np.int64))
    while True:
        outside = elems[~K.members[elems]]
        if not outside.size:
            return K
        K = extend(G, K, int(outside[0]))


def subgroup_from_mask(G: Group, mask: np.ndarray, label: str = '',
                       hint: Optional[Subgroup] = None) -> Subgroup:
    # Маска заведомо является подгруппой, нужен только свидетель
    mask = np.asarray(mask, dtype=bool)
    if mask.all():
        return Subgroup(G, mask, list(G.generators), label=label)
    if hint is not None and np.array_equal(mask, hint.members):
        return Subgroup(G, mask, list(hint.generators), label=label)
    witness = subgroup_from_elements(G, np.flatnonzero(mask))
    return Subgroup(G, mask, witness.generators, label=label)


def generated_subgroup(G: Group, gens: Sequence[int]) -> Subgroup:
    """
    Наименьшая подгруппа, содержащая gens.

    :param G: Группа.
    :param gens: Индексы элементов G.
    :return: Подгруппа с порождающими.
    """
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size and (gens.min() < 0 or gens.max() >= G.order):
        raise MembershipError(f'generator index outside {G!r}')
    return subgroup_from_elements(G, gens)


def conjugacy_class(G: Group, g: int, within: Optional[Subgroup] = None) -> np.ndarray:
    conjugators = G.generators if within is None else within.generators
    seen = np.zeros(G.order, dtype=bool)
    seen[g] = True
    frontier = np.array([g], dtype=np.int64)
    while frontier.size and conjugators:
        images = np.unique(np.concatenate([G.conj(frontier, t) for t in conjugators]))
        frontier = images[~seen[images]]
        seen[frontier] = True
    return np.flatnonzero(seen)


# -------------------
# Централизаторы, центр, Omega_1

def centralizer(G: Group, H: Subgroup, within: Optional[Subgroup] = None) -> Subgroup:
    """
    Централизатор C_G(H): проход по элементам G против порождающих H с ранним
    выходом, как только кандидатов не осталось.

    Параметры:
        G (Group): Группа.
        H (Subgroup): Централизуемая подгруппа.
        within (Subgroup): Искать только внутри этой подгруппы.

    Returns:
        Subgroup: Централизатор со свидетелем порождения.
    """
    ambient = G.full() if within is None else within
    if not H.generators:
        return ambient
    with soft_deadline(f'centralizer of {H.label or "H"} in {G.name}'):
        candidates = ambient.member_indices()
        for h in H.generators:
            candidates = candidates[G.commutes(candidates, h)]
            logger.debug('Централизатор: после порождающего %d осталось %d', h, candidates.size)
        mask = np.zeros(G.order, dtype=bool)
        mask[candidates] = True
    return subgroup_from_mask(G, mask, label=f'C({H.label})', hint=ambient)


def center(G: Group, H: Optional[Subgroup] = None) -> Subgroup:
    H = G.full() if H is None else H
    Z = centralizer(G, H, within=H)
    return Z.relabel(f'Z({H.label})')


def omega1(G: Group, H: Subgroup) -> Subgroup:
    '''
    Подгруппа H, порождённая элементами порядка, делящего p.
    '''
    members = H.member_indices()
    powers = G.power(members, G.p)
    good = members[powers == G.identity]
    if good.size == members.size:
        return Subgroup(G, H.members, list(H.generators), label=f'Omega1({H.label})')
    return subgroup_from_elements(G, good).relabel(f'Omega1({H.label})')


# -------------------
# Нормальность

def normal_closure(G: Group, elems, conjugators: Optional[Sequence[int]] = None) -> Subgroup:
    '''
    Нормальное замыкание elems в подгруппе, порождённой conjugators
    (по умолчанию во всей G).
    '''
    if isinstance(elems, Subgroup):
        K = elems
    else:
        K = subgroup_from_elements(G, elems)
    conjugators = np.asarray(G.generators if conjugators is None else list(conjugators), dtype=np.int64)
    if not conjugators.size:
        return K
    while K.generators:
        gens = np.asarray(K.generators, dtype=np.int64)
        images = G.conj(gens[:, None], conjugators[None, :]).ravel()
        outside = images[~K.members[images]]
        if not outside.size:
            break
        K = extend(G, K, int(outside[0]))
    return K


def is_normal(G: Group, H: Subgroup, within: Optional[Subgroup] = None) -> bool:
    conjugators = G.generators if within is None else within.generators
    if not H.generators or not conjugators:
        return True
    gens = np.asarray(H.generators, dtype=np.int64)
    images = G.conj(gens[:, None], np.asarray(conjugators, dtype=np.int64)[None, :])
    return bool(H.members[images].all())


def is_abelian(G: Group, H: Subgroup) -> bool:
    gens = np.asarray(H.generators, dtype=np.int64)
    for h in H.generators:
        if not G.commutes(gens, h).all():
            return False
    return True


def is_elementary_abelian(G: Group, H: Subgroup) -> bool:
    if not is_abelian(G, H):
        return False
    gens = np.asarray(H.generators, dtype=np.int64)
    return bool(np.all(G.power(gens, G.p) == G.identity))


def intersection(G: Group, H: Subgroup, K: Subgroup) -> Subgroup:
    return subgroup_from_mask(G, H.members & K.members, label=f'{H.label}&{K.label}')


def product_subgroup(G: Group, H: Subgroup, K: Subgroup) -> Subgroup:
    '''
    <H, K>. Если обе нормальны, это совпадает с множеством HK.
    '''
    joined = subgroup_from_elements(G, K.generators, start=H)
    return joined.relabel(f'{H.label}{K.label}')


def product_set_matches(G: Group, H: Subgroup, K: Subgroup) -> bool:
    # |HK| = |H| |K| / |H & K|; для нормальных H, K это <H, K>
    joined = product_subgroup(G, H, K)
    meet = int(np.count_nonzero(H.members & K.members))
    return joined.order * meet == H.order * K.order


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def lagrange_holds(G: Group, H: Subgroup) -> bool:
    return G.order % H.order == 0 and is_p_power(H.order, G.p)


# -------------------
# Коммутаторы

def commutator_subgroup(G: Group, A: Subgroup, B: Subgroup, method: CommutatorMethod = 'auto') -> Subgroup:
    """
    Взаимный коммутант [A, B].

    :param method: members перебирает все пары элементов A x B;
        generators берёт коммутаторы порождающих и нормальное замыкание
        в <A, B>, что даёт ту же подгруппу. auto выбирает members, пока
        |A| * |B| не больше PAIR_BUDGET.
    """
    if method == 'auto':
        method = 'members' if A.order * B.order <= config.PAIR_BUDGET else 'generators'
    if method == 'members':
        a = A.member_indices()
        b = B.member_indices()
        seen = np.zeros(G.order, dtype=bool)
        block = max(1, config.CHUNK_SIZE // max(1, b.size))
        for start in range(0, a.size, block):
            rows = a[start:start + block]
            values = G.comm(np.repeat(rows, b.size), np.tile(b, rows.size))
            seen[values] = True
        return subgroup_from_elements(G, np.flatnonzero(seen))
    if method == 'generators':
        if not A.generators or not B.generators:
            return G.trivial()
        a = np.asarray(A.generators, dtype=np.int64)
        b = np.asarray(B.generators, dtype=np.int64)
        seeds = G.comm(a[:, None], b[None, :]).ravel()
        return normal_closure(G, seeds, conjugators=list(A.generators) + list(B.generators))
    raise InvalidParamsError(f'unknown commutator method {method!r}')


def iterated_commutator(G: Group, A: Subgroup, B: Subgroup, t: int,
                        method: CommutatorMethod = 'auto',
                        trace: Optional[List[Subgroup]] = None) -> Subgroup:
    """
    [A, B; t]: [A, B; 1] = [A, B], [A, B; s+1] = [[A, B; s], B].

    Параметры:
        G (Group): Группа.
        A (Subgroup): Первый аргумент.
        B (Subgroup): Второй аргумент.
        t (int): Число шагов, t >= 1.
        method (str): Способ вычисления коммутанта на каждом шаге.
        trace (list): Если передан, сюда складываются все промежуточные K_s.

    Returns:
        Subgroup: K_t.
    """
    if t < 1:
        raise InvalidParamsError(f't={t} must be positive')
    K = A
    with soft_deadline(f'[{A.label}, {B.label}; {t}]'):
        for step in range(t):
            K = commutator_subgroup(G, K, B, method).relabel(f'[{A.label},{B.label};{step + 1}]')
            if trace is not None:
                trace.append(K)
            if K.is_trivial():
                if trace is not None:
                    trace.extend(K for _ in range(t - step - 1))
                break
    return K


def elementwise_vanishing(G: Group, X: Subgroup, B: Subgroup, t: int,
                          samples: int, rng: np.random.Generator) -> Tuple[int, int]:
    '''
    Выборочная проверка [[x, y1], y2, ..., yt] = 1 для x из X, y_s из B.
    Возвращает (число проб, число нарушений).
    '''
    x = rng.choice(X.member_indices(), size=samples)
    value = x
    members = B.member_indices()
    for _ in range(t):
        value = G.comm(value, rng.choice(members, size=samples))
    return samples, int(np.count_nonzero(value != G.identity))


# -------------------
# Структурные свойства

def is_generated_by_abelian_normal(G: Group) -> bool:
    '''
    Порождается ли G своими абелевыми нормальными подгруппами.
    Элемент g лежит в абелевой нормальной подгруппе тогда и только тогда,
    когда абелево его нормальное замыкание.
    '''
    K = G.trivial()
    rejected = np.zeros(G.order, dtype=bool)
    while True:
        open_ = np.flatnonzero(~K.members & ~rejected)
        if not open_.size:
            return K.order == G.order
        g = int(open_[0])
        closure = normal_closure(G, [g])
        if is_abelian(G, closure):
            K = subgroup_from_elements(G, closure.generators, start=K)
        else:
            rejected[conjugacy_class(G, g)] = True


@dataclass
class StructureReport:
    order: int
    lagrange: bool
    normal: bool
    abelian: bool
    elementary_abelian: bool
    center_order: int
    normal_closure_order: int
    generated_by_abelian_normal: Optional[bool] = None


def structure_predicates(G: Group, H: Subgroup) -> StructureReport:
    """
    Сводка структурных свойств подгруппы H в G.
    """
    whole = H.order == G.order
    return StructureReport(
        order=H.order,
        lagrange=lagrange_holds(G, H),
        normal=is_normal(G, H),
        abelian=is_abelian(G, H),
        elementary_abelian=is_elementary_abelian(G, H),
        center_order=center(G, H).order,
        normal_closure_order=normal_closure(G, H).order,
        generated_by_abelian_normal=is_generated_by_abelian_normal(G) if whole else None,
    )
