import numpy as np
import pytest

from src.sylow.algebra.field import field_create, is_irreducible, lowest_irreducible
from src.sylow.errors import InvalidParamsError


def test_sizes(f25, f625):
    assert (f25.q, f25.order) == (5, 25)
    assert (f625.q, f625.order) == (25, 625)
    assert np.count_nonzero(f25.subfield_mask) == 5
    assert np.count_nonzero(f625.subfield_mask) == 25


def test_conjugation_with_modulus_x2_minus_2():
    field = field_create(5, 1, modulus=[1, 0, -2])
    for a in range(5):
        for b in range(5):
            x = field.from_coeffs([a, b])
            assert field.conj(x) == field.from_coeffs([a, -b])


@pytest.mark.parametrize('name', ['f25', 'f625'])
def test_field_axioms(name, request):
    field = request.getfixturevalue(name)
    elems = field.elements()
    nonzero = elems[1:]
    assert np.all(field.mul(nonzero, field.inv(nonzero)) == 1)
    assert np.all(field.add(elems, field.neg(elems)) == 0)
    # Сопряжение: инволюция, автоморфизм, неподвижно ровно на F_q
    assert np.array_equal(field.conj(field.conj(elems)), elems)
    a, b = np.meshgrid(elems[:40], elems[:40])
    assert np.array_equal(field.conj(field.mul(a, b)), field.mul(field.conj(a), field.conj(b)))
    assert np.array_equal(field.conj(field.add(a, b)), field.add(field.conj(a), field.conj(b)))
    assert np.all(field.subfield_mask[field.norm(elems)])


def test_trace_zero_and_norms(f25, f625):
    for field in (f25, f625):
        assert field.trace_zero().size == field.q
        assert len(field.trace_zero_basis()) == field.k
        for c in range(1, field.q):
            c = int(np.flatnonzero(field.subfield_mask)[c])
            assert field.norm(field.solve_norm(c)) == c
            x = field.half_trace_solution(c)
            assert field.add(x, field.conj(x)) == c


def test_inverse_of_zero(f25):
    with pytest.raises(ZeroDivisionError):
        f25.inv(0)


def test_irreducibility():
    assert is_irreducible([1, 0, 3], 5)
    assert not is_irreducible([1, 0, 1], 5)
    assert is_irreducible(lowest_irreducible(5, 2), 5)
    assert is_irreducible(lowest_irreducible(5, 4), 5)


@pytest.mark.parametrize('p, k, modulus', [
    (4, 1, None),
    (5, 0, None),
    (5, 1, [1, 0, 1]),
    (5, 1, [2, 0, 3]),
    (5, 4, None),
])
def test_invalid_fields(p, k, modulus):
    with pytest.raises(InvalidParamsError):
        field_create(p, k, modulus)


def test_characteristic_two():
    field = field_create(2, 1)
    assert field.order == 4
    elems = field.elements()
    assert np.array_equal(field.conj(elems), field.mul(elems, elems))
