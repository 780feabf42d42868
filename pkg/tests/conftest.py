import numpy as np
import pytest

from src.sylow.algebra.field import field_create
from src.sylow.groups.products import DirectProductGroup
from src.sylow.groups.unitary import UnitaryParams, enumerate_sylow
from src.sylow.groups.wreath import WreathGroup


@pytest.fixture(scope='session')
def f25():
    # F_25 над F_5, q = 5
    return field_create(5, 1)


@pytest.fixture(scope='session')
def f625():
    return field_create(5, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture(scope='session')
def s2():
    return enumerate_sylow(UnitaryParams(p=5, q=5, n=2))


@pytest.fixture(scope='session')
def s3():
    # Экстраспециальная группа порядка 125
    return enumerate_sylow(UnitaryParams(p=5, q=5, n=3))


@pytest.fixture(scope='session')
def s4():
    return enumerate_sylow(UnitaryParams(p=5, q=5, n=4))


@pytest.fixture(scope='session')
def s5():
    # 5^10 элементов, только для тестов slow
    return enumerate_sylow(UnitaryParams(p=5, q=5, n=5))


@pytest.fixture(scope='session')
def c5():
    return WreathGroup(5, 1, 0)


@pytest.fixture(scope='session')
def c25():
    return WreathGroup(5, 2, 0)


@pytest.fixture(scope='session')
def c125():
    return WreathGroup(5, 3, 0)


@pytest.fixture(scope='session')
def c5_c25(c5, c25):
    return DirectProductGroup(c5, c25)


@pytest.fixture(scope='session')
def c5_wr_c5():
    return WreathGroup(5, 1, 1)
