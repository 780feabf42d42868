import numpy as np

from ..errors import InvalidParamsError
from .base_group import Group, Subgroup, check_budget


class DirectProductGroup(Group):
    '''
    Прямое произведение G x H. Код элемента (g, h) равен g * |H| + h,
    представление есть пара индексов.
    '''

    def __init__(self, left: Group, right: Group, budget: int = None):
        if left.p != right.p:
            raise InvalidParamsError(f'factors have different primes {left.p} and {right.p}')
        check_budget(left.order * right.order, budget, 'direct product')
        self.left = left
        self.right = right
        codes = np.arange(left.order * right.order, dtype=np.int64)
        gens = [g * right.order + right.identity for g in left.generators]
        gens += [left.identity * right.order + h for h in right.generators]
        super().__init__(codes, gens, left.p, name=f'{left.name} x {right.name}')

    def identity_rep(self) -> np.ndarray:
        return np.array([[self.left.identity, self.right.identity]], dtype=np.int64)

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).ravel()
        return np.stack(np.divmod(codes, self.right.order), axis=1)

    def encode(self, reps: np.ndarray) -> np.ndarray:
        reps = np.asarray(reps, dtype=np.int64)
        return reps[:, 0] * self.right.order + reps[:, 1]

    def compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.stack([self.left.mul(a[:, 0], b[:, 0]), self.right.mul(a[:, 1], b[:, 1])], axis=1)

    def invert(self, a: np.ndarray) -> np.ndarray:
        return np.stack([self.left.inv(a[:, 0]), self.right.inv(a[:, 1])], axis=1)

    def product_of(self, A: Subgroup, B: Subgroup) -> Subgroup:
        # A x B как подгруппа произведения
        members = np.outer(A.members, B.members).ravel()
        gens = [a * self.right.order + self.right.identity for a in A.generators]
        gens += [self.left.identity * self.right.order + b for b in B.generators]
        return Subgroup(self, members, gens, label=f'{A.label} x {B.label}')

    def embed_left(self, A: Subgroup) -> Subgroup:
        return self.product_of(A, self.right.trivial())

    def embed_right(self, B: Subgroup) -> Subgroup:
        return self.product_of(self.left.trivial(), B)
