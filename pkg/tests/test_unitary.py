import numpy as np
import pytest
from pydantic import ValidationError

from src.sylow.algebra.field import field_create
from src.sylow.algebra.matrix import Mat, batch_form_mask, form_predicates, skew_identity
from src.sylow.errors import (
    BudgetExceededError, DecomposeError, FormulaShapeError, InvalidParamsError,
)
from src.sylow.groups.core import centralizer, is_abelian, is_normal
from src.sylow.groups.unitary import (
    SubgroupTag, SylowElem, UnitaryParams, centralizer_condition, comm_formula,
    commutator_parameter, count_unitary, csp_solutions, decompose, distinguished_subgroup, embed,
    enumerate_sylow, form_change_matrix, inverse_formula, is_unitary, is_unitary_batch,
    iterated_parameter, mul_formula, particular_solution, probe_matrix, random_n_ij,
    random_sylow_elem, semidirect_report,
    sylow_field, to_identity_form, unitary_order,
)


def _comm(x: Mat, y: Mat) -> Mat:
    return x.inverse() @ y.inverse() @ x @ y


@pytest.mark.parametrize('p, q, n', [(3, 3, 3), (5, 10, 3), (5, 5, 1), (4, 4, 2), (7, 5, 2)])
def test_invalid_params(p, q, n):
    with pytest.raises(ValidationError):
        UnitaryParams(p=p, q=q, n=n)


def test_params():
    params = UnitaryParams.from_k(5, 2, 5)
    assert (params.q, params.k, params.m, params.parity) == (25, 2, 2, 'odd')
    assert UnitaryParams(p=5, q=5, n=4).sylow_order == 5 ** 6


def test_unitary_group_order():
    assert unitary_order(2, 2) == 18
    assert unitary_order(3, 2) == 96
    assert count_unitary(field_create(2, 1), 2) == 18
    assert count_unitary(field_create(3, 1), 2) == 96


@pytest.mark.parametrize('q, n, order', [(5, 2, 5), (5, 3, 125), (25, 2, 25)])
def test_sylow_order(q, n, order):
    S = enumerate_sylow(UnitaryParams(p=5, q=q, n=n))
    assert S.order == order
    X = S.reps(np.arange(S.order))
    assert is_unitary_batch(S.field, X).all()


@pytest.mark.slow
@pytest.mark.parametrize('q, n', [(5, 4), (25, 3)])
def test_sylow_order_15625(q, n):
    assert enumerate_sylow(UnitaryParams(p=5, q=q, n=n)).order == 15625


def test_budget():
    with pytest.raises(BudgetExceededError) as info:
        enumerate_sylow(UnitaryParams(p=5, q=5, n=4), budget=1000)
    assert info.value.required == 15625


def test_csp_count(f25, f625):
    assert csp_solutions(f25, 2).shape[0] == 5 ** 4
    assert csp_solutions(f625, 1).shape[0] == 25
    P = csp_solutions(f25, 2)
    assert batch_form_mask(f25, P, 'conj_skew_persymmetric').all()
    assert all(form_predicates(Mat(f25, M), 'conj_skew_persymmetric') for M in P[::37])


@pytest.mark.slow
def test_csp_count_exhaustive(f25):
    # Все 25^4 матриц 2x2 над F_25 порциями по первому элементу
    rest = np.stack(np.meshgrid(*[np.arange(25, dtype=np.int64)] * 3, indexing='ij'), axis=-1).reshape(-1, 3)
    found = set()
    for first in range(25):
        batch = np.concatenate([np.full((rest.shape[0], 1), first, dtype=np.int64), rest], axis=1).reshape(-1, 2, 2)
        found.update(M.tobytes() for M in batch[batch_form_mask(f25, batch, 'conj_skew_persymmetric')])
    assert len(found) == 5 ** 4
    assert found == {M.tobytes() for M in np.asarray(csp_solutions(f25, 2), dtype=np.int64)}


def test_particular_solution(f25):
    alpha = np.array([[3, 11], [0, 1]], dtype=np.int64)
    for a, P in zip(alpha, particular_solution(f25, alpha)):
        assert form_predicates(Mat(f25, P), 'alpha_csp', a)


def test_round_trip(s3):
    for idx in range(s3.order):
        A = s3.element(idx)
        e = decompose(A)
        assert embed(e) == A
        assert s3.index_of_elem(e) == idx
        assert embed(s3.sylow_elem(idx)) == A


def test_decompose_rejects(f25):
    with pytest.raises(DecomposeError):
        decompose(Mat(f25, np.array([[1, 0], [1, 1]])))
    with pytest.raises(DecomposeError):
        decompose(Mat(f25, np.array([[1, 1], [0, 1]])))


def test_embed_rejects_bad_parameters(f25):
    bad = SylowElem(Mat.identity(f25, 1), Mat(f25, np.array([[1]])), np.zeros(0, dtype=np.int64))
    with pytest.raises(FormulaShapeError):
        embed(bad)


@pytest.mark.parametrize('q, n', [(5, 4), (5, 6), (25, 4), (5, 5), (5, 7), (25, 5)])
def test_formulas_against_matrices(q, n, rng):
    params = UnitaryParams(p=5, q=q, n=n)
    field = sylow_field(params)
    m, odd = params.m, params.odd
    for _ in range(40):
        x = random_sylow_elem(field, m, odd, rng)
        y = random_sylow_elem(field, m, odd, rng)
        assert is_unitary(embed(x))
        assert embed(mul_formula(x, y)) == embed(x) @ embed(y)
        x1 = random_sylow_elem(field, m, odd, rng, unit_D=True)
        assert embed(inverse_formula(x1)) == embed(x1).inverse()
        if odd:
            y1 = random_sylow_elem(field, m, odd, rng, unit_D=True)
            assert embed(comm_formula(x1, y1)) == _comm(embed(x1), embed(y1))
            x0 = random_sylow_elem(field, m, odd, rng, unit_D=True, zero_alpha=True)
            assert embed(comm_formula(x0, y)) == _comm(embed(x0), embed(y))
        else:
            assert embed(inverse_formula(x)) == embed(x).inverse()
            assert embed(comm_formula(x1, y)) == _comm(embed(x1), embed(y))


def test_odd_commutator_needs_zero_alpha(rng):
    params = UnitaryParams(p=5, q=5, n=5)
    field = sylow_field(params)
    x = random_sylow_elem(field, 2, True, rng, unit_D=True)
    while not np.any(x.alpha):
        x = random_sylow_elem(field, 2, True, rng, unit_D=True)
    y = random_sylow_elem(field, 2, True, rng)
    while y.D.is_identity():
        y = random_sylow_elem(field, 2, True, rng)
    with pytest.raises(FormulaShapeError):
        comm_formula(x, y)
    with pytest.raises(FormulaShapeError):
        comm_formula(y, x)


def test_commutator_example_minus_two_sqrt2():
    params = UnitaryParams(p=5, q=5, n=3)
    field = sylow_field(params)
    elems = field.elements()
    root = int(elems[field.mul(elems, elems) == 2][0])
    alphas = np.array([[1], [root]], dtype=np.int64)
    P = particular_solution(field, alphas)
    x = SylowElem(Mat.identity(field, 1), Mat(field, P[0]), alphas[0])
    y = SylowElem(Mat.identity(field, 1), Mat(field, P[1]), alphas[1])
    value = comm_formula(x, y).P.entries[0, 0]
    assert value == field.neg(field.mul(2, root))
    assert _comm(embed(x), embed(y)).entries[2, 0] == value


def test_commutator_parameter_and_probe(f25, rng):
    m = 3
    for _ in range(30):
        D = random_sylow_elem(f25, m, False, rng).D
        P = random_sylow_elem(f25, m, False, rng, unit_D=True).P
        U = D.inverse() - Mat.identity(f25, m)
        value = D.inverse() @ P @ D.bar.F.inverse() - P
        assert commutator_parameter(U, P) == value
        assert centralizer_condition(U, P) == (not np.any(value.entries))
        for s in range(1, m):
            probe = probe_matrix(f25, m, s)
            assert form_predicates(probe, 'conj_skew_persymmetric')
            entries = commutator_parameter(U, probe).entries
            assert np.array_equal(entries[:m - 1, 0], U.entries[:m - 1, s - 1])
    with pytest.raises(FormulaShapeError):
        centralizer_condition(Mat(f25, np.triu(np.ones((2, 2), dtype=np.int64), 1)), Mat.zeros(f25, 2))
    with pytest.raises(InvalidParamsError):
        probe_matrix(f25, 3, 4)


@pytest.mark.parametrize('m', [2, 3])
def test_iterated_parameter_vanishes(f25, rng, m):
    one = Mat.identity(f25, m)
    for _ in range(20):
        D = random_n_ij(f25, m, 2, 1, rng)
        assert D.is_lower_unitriangular()
        assert np.array_equal(D.entries[:, 1:], np.eye(m, dtype=np.int64)[:, 1:])
        P = random_sylow_elem(f25, m, False, rng, unit_D=True).P
        Us = [random_n_ij(f25, m, 2, 1, rng).inverse() - one for _ in range(3)]
        assert not np.any(iterated_parameter(Us, P).entries)
        assert iterated_parameter(Us[:1], P) == commutator_parameter(Us[0], P)


def test_form_change(f25, f625, s2, s3):
    for field, n in ((f25, 2), (f25, 3), (f25, 4), (f625, 3)):
        B = form_change_matrix(field, n)
        assert (B.bar.T @ skew_identity(field, n) @ B).is_identity()
    for S in (s2, s3):
        B = form_change_matrix(S.field, S.n)
        for idx in range(S.order):
            A = S.element(idx)
            assert is_unitary(to_identity_form(A, B), form='identity')
    assert not is_unitary(to_identity_form(Mat(f25, np.array([[1, 0], [1, 1]])), form_change_matrix(f25, 2)), form='identity')


def test_subgroup_tags():
    assert SubgroupTag.parse('Ntilde(3,1)') == SubgroupTag(tag='Ntilde', i=3, j=1)
    assert str(SubgroupTag.parse(' A0 ')) == 'A0'
    with pytest.raises(ValidationError):
        SubgroupTag.parse('B')


def test_distinguished_odd(s3):
    A = distinguished_subgroup(s3, 'A')
    A0 = distinguished_subgroup(s3, 'A0')
    D = distinguished_subgroup(s3, 'Dpart')
    assert (A.order, A0.order, D.order) == (125, 5, 1)
    assert not is_abelian(s3, A)
    assert is_abelian(s3, A0) and is_normal(s3, A0)
    assert centralizer(s3, A).same_as(A0)
    with pytest.raises(InvalidParamsError):
        distinguished_subgroup(s3, 'Ntilde(2,1)')


@pytest.mark.slow
def test_distinguished_odd_n5(s5):
    A = distinguished_subgroup(s5, 'A')
    A0 = distinguished_subgroup(s5, 'A0')
    assert s5.order == 5 ** 10
    assert (A.order, A0.order) == (5 ** 8, 5 ** 4)
    assert is_normal(s5, A) and is_normal(s5, A0)
    assert centralizer(s5, A).same_as(A0)

def test_distinguished_even(s4):
    A = distinguished_subgroup(s4, 'A')
    N = distinguished_subgroup(s4, 'Ntilde(2,1)')
    D = distinguished_subgroup(s4, 'Dpart')
    assert (A.order, D.order, N.order) == (625, 25, 15625)
    assert is_abelian(s4, A) and is_normal(s4, A)
    assert centralizer(s4, A).same_as(A)


def test_semidirect(s3, s4, rng):
    for S in (s3, s4):
        report = semidirect_report(S, 200, rng)
        assert all(report.values()), report
