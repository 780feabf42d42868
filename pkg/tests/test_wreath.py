import numpy as np
import pytest
from pydantic import ValidationError

from src.sylow.errors import BudgetExceededError, InvalidParamsError
from src.sylow.groups.core import is_abelian, is_normal
from src.sylow.groups.wreath import (
    WreathGroup, WreathSpec, build_wreath, coprime_conjecture_check, structure_report,
    verify_wreath_thompson, wreath_order_exponent,
)


def test_order_exponent():
    assert wreath_order_exponent(1, 1, 5) == 6
    assert wreath_order_exponent(2, 1, 5) == 11
    assert wreath_order_exponent(1, 2, 5) == 31
    assert WreathSpec(p=5, r=3).order == 125


def test_spec_validation():
    with pytest.raises(ValidationError):
        WreathSpec(p=3)
    with pytest.raises(ValidationError):
        WreathSpec(p=5, height=-1)
    with pytest.raises(InvalidParamsError):
        WreathGroup(6, 1, 0)


def test_budget():
    with pytest.raises(BudgetExceededError) as info:
        build_wreath(WreathSpec(p=5, r=2, height=1))
    assert info.value.required == 5 ** 11


def test_multiplication(c5_wr_c5):
    W = c5_wr_c5
    assert W.order == 5 ** 6
    idx = np.arange(W.order)
    assert np.all(W.mul(idx, W.inv(idx)) == W.identity)
    rng = np.random.default_rng(1)
    a, b, c = (rng.integers(0, W.order, 500) for _ in range(3))
    assert np.array_equal(W.mul(W.mul(a, b), c), W.mul(a, W.mul(b, c)))
    assert not is_abelian(W, W.full())


def test_shift_action(c5_wr_c5):
    W = c5_wr_c5
    # (b, 1) (b', 0) = (b * sigma_1(b'), 1): координата 1 получает b'_0
    shift = np.zeros((1, 6), dtype=np.int64)
    shift[0, 0] = 1
    base = np.zeros((1, 6), dtype=np.int64)
    base[0, 1] = 3
    product = W.compose(shift, base)
    assert product[0].tolist() == [1, 0, 3, 0, 0, 0]
    assert W.invert(shift)[0].tolist() == [4, 0, 0, 0, 0, 0]


def test_structure(c5_wr_c5):
    report = structure_report(WreathSpec(p=5, r=1, height=1))
    assert report.order == report.closed_form_order == 15625
    assert report.base_order == 3125
    assert report.base_normal and report.base_index_p and report.base_top_trivial
    base = c5_wr_c5.base_subgroup()
    assert is_abelian(c5_wr_c5, base) and is_normal(c5_wr_c5, base)
    assert c5_wr_c5.top_subgroup().order == 5


def test_embed_base(c5, c5_wr_c5):
    copy = c5_wr_c5.embed_base(c5, c5.full())
    assert copy.same_as(c5_wr_c5.base_subgroup())
    assert c5_wr_c5.embed_base(c5, c5.trivial()).is_trivial()
    with pytest.raises(InvalidParamsError):
        c5_wr_c5.embed_base(WreathGroup(5, 2, 0), c5.full())


def test_thompson_skipped_and_unverified():
    assert verify_wreath_thompson(WreathSpec(p=5, r=0)).status == 'skipped'
    report = verify_wreath_thompson(WreathSpec(p=5, r=2))
    assert report.status == 'unverified' and report.passed
    assert (report.lower_J_order, report.predicted_order) == (5, 3125)


@pytest.mark.slow
def test_thompson_of_c5_wr_c5():
    report = verify_wreath_thompson(WreathSpec(p=5, r=1))
    assert report.status == 'verified' and report.passed
    assert report.J_order == 3125
    assert report.elementary_abelian and report.equals_base_copy


def test_coprime_conjecture_cyclic():
    verdict = coprime_conjecture_check(WreathSpec(p=5, r=2), seed=3)
    assert verdict.holds and verdict.abelian
    assert verdict.J_order == 5 and verdict.oliver_order == 25
    assert verdict.J_elementary_abelian and verdict.J_normal and verdict.one_step_chain_passes


@pytest.mark.slow
def test_coprime_conjecture_c5_wr_c5():
    verdict = coprime_conjecture_check(WreathSpec(p=5, r=1, height=1))
    assert verdict.holds
    assert verdict.J_order == 3125 and verdict.J_elementary_abelian
