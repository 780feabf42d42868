import pytest

from src.sylow.errors import BudgetExceededError
from src.sylow.groups.core import center
from src.sylow.oliver.oliver import (
    check_conjecture, compute_oliver, lemma_checks, normal_subgroups, oliver_bruteforce,
)


CORPUS = ['c5', 'c25', 'c125', 'c5_c25', 's2', 's3']


@pytest.mark.parametrize('name', CORPUS)
def test_greedy_matches_oracle(name, request):
    S = request.getfixturevalue(name)
    result = compute_oliver(S, oracle=True)
    assert result.oracle_agreement
    assert result.certificate.passed
    assert result.certificate.top.same_as(result.subgroup)


@pytest.mark.parametrize('name', CORPUS)
def test_shuffle_invariance(name, request):
    S = request.getfixturevalue(name)
    X = compute_oliver(S).subgroup
    for seed in (1, 2):
        assert compute_oliver(S, seed=seed).subgroup.same_as(X)


@pytest.mark.parametrize('name', CORPUS)
def test_lemmas(name, request):
    S = request.getfixturevalue(name)
    X = compute_oliver(S).subgroup
    report = lemma_checks(S, X)
    assert report.passed
    assert report.scanned > 0


def test_full_group(c125, s3):
    assert compute_oliver(c125).subgroup.order == 125
    assert oliver_bruteforce(c125).order == 125
    assert compute_oliver(s3).subgroup.order == 125


def test_normal_subgroups(c25, s3):
    assert [N.order for N in normal_subgroups(c25)] == [1, 5, 25]
    orders = [N.order for N in normal_subgroups(s3)]
    assert orders == [1, 5] + [25] * 6 + [125]
    assert normal_subgroups(s3)[1].same_as(center(s3))


def test_bruteforce_budget(s4):
    with pytest.raises(BudgetExceededError):
        oliver_bruteforce(s4)


def test_conjecture(s3):
    verdict = check_conjecture(s3, seed=5)
    assert verdict.holds
    assert verdict.J.order == 125
    assert verdict.elementary_abelian.rank == 2


@pytest.mark.slow
def test_conjecture_n4(s4):
    verdict = check_conjecture(s4)
    assert verdict.holds
    assert verdict.oliver.subgroup.order == 15625
