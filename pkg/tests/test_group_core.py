import numpy as np
import pytest

from src.sylow.errors import InvalidParamsError, MembershipError
from src.sylow.groups.core import (
    center, centralizer, commutator_subgroup, conjugacy_class, elementwise_vanishing,
    generated_subgroup, intersection, is_abelian, is_elementary_abelian,
    is_generated_by_abelian_normal, is_normal, iterated_commutator, lagrange_holds,
    normal_closure, omega1, product_set_matches, product_subgroup, structure_predicates,
)
from src.sylow.groups.unitary import distinguished_subgroup


def test_group_axioms(s3, c5_c25):
    for G in (s3, c5_c25):
        idx = np.arange(G.order)
        assert np.all(G.mul(idx, G.inv(idx)) == G.identity)
        assert np.all(G.mul(idx, G.identity) == idx)
        a, b, c = (np.random.default_rng(s).integers(0, G.order, 200) for s in range(3))
        assert np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)))


def test_membership(s3):
    with pytest.raises(MembershipError):
        s3.index_of([-5])
    with pytest.raises(MembershipError):
        generated_subgroup(s3, [s3.order])


def test_extraspecial(s3):
    Z = center(s3)
    assert Z.order == 5
    G = s3.full()
    members = commutator_subgroup(s3, G, G, 'members')
    generators = commutator_subgroup(s3, G, G, 'generators')
    assert members.same_as(generators) and members.same_as(Z)
    assert iterated_commutator(s3, G, G, 2).is_trivial()
    assert not is_abelian(s3, G)
    assert is_generated_by_abelian_normal(s3)
    assert np.all(s3.element_orders(np.arange(s3.order)) <= 5)
    assert omega1(s3, G).same_as(G)


def test_cyclic(c125):
    G = c125.full()
    assert is_abelian(c125, G) and not is_elementary_abelian(c125, G)
    assert omega1(c125, G).order == 5
    assert center(c125).order == 125
    assert conjugacy_class(c125, 7).tolist() == [7]
    assert c125.element_orders(np.array([0, 1, 5, 25])).tolist() == [1, 125, 25, 5]


def test_centralizer_by_witness(s4):
    A = distinguished_subgroup(s4, 'A')
    by_witness = centralizer(s4, A)
    full = A.relabel('A')
    full.generators = [int(i) for i in A.member_indices() if i != s4.identity]
    assert by_witness.same_as(centralizer(s4, full))
    assert lagrange_holds(s4, by_witness)


def test_normality_and_products(s3, c5_c25):
    A0 = distinguished_subgroup(s3, 'A0')
    g = int(np.flatnonzero(~A0.members)[0])
    cyclic = generated_subgroup(s3, [g])
    assert not is_normal(s3, cyclic)
    closure = normal_closure(s3, [g])
    assert is_normal(s3, closure) and closure.order == 25
    assert intersection(s3, closure, A0).same_as(A0)
    left = c5_c25.embed_left(c5_c25.left.full())
    right = c5_c25.embed_right(c5_c25.right.full())
    joined = product_subgroup(c5_c25, left, right)
    assert joined.order == 125 and product_set_matches(c5_c25, left, right)
    assert c5_c25.product_of(c5_c25.left.full(), c5_c25.right.trivial()).same_as(left)


def test_elementwise_vanishing(s3, rng):
    G = s3.full()
    probes, failures = elementwise_vanishing(s3, G, G, 2, 300, rng)
    assert (probes, failures) == (300, 0)
    probes, failures = elementwise_vanishing(s3, G, G, 1, 300, rng)
    assert failures > 0


def test_iterated_commutator_trace(s4):
    A = distinguished_subgroup(s4, 'A')
    G = s4.full()
    trace = []
    K = iterated_commutator(s4, A, G, 3, trace=trace)
    assert K.is_trivial() and len(trace) == 3
    assert trace[0].order > 1
    for bigger, smaller in zip([A] + trace, trace):
        assert smaller.issubset(bigger)
    with pytest.raises(InvalidParamsError):
        iterated_commutator(s4, A, G, 0)
    with pytest.raises(InvalidParamsError):
        commutator_subgroup(s4, A, G, 'cosets')


def test_iterated_commutator_descends(s3):
    G = s3.full()
    trace = []
    K = iterated_commutator(s3, G, G, 3, trace=trace)
    assert [H.order for H in trace] == [5, 1, 1]
    for bigger, smaller in zip([G] + trace, trace):
        assert smaller.issubset(bigger)
    assert K.same_as(trace[-1])


@pytest.mark.slow
def test_triple_commutator_n5(s5):
    C = centralizer(s5, distinguished_subgroup(s5, 'A'))
    N = distinguished_subgroup(s5, 'Ntilde(2,1)')
    X = omega1(s5, C)
    assert X.order > 1
    assert iterated_commutator(s5, X, N, 3).is_trivial()


def test_structure_predicates(s3):
    report = structure_predicates(s3, center(s3))
    assert report.order == 5 and report.normal and report.elementary_abelian
    assert report.generated_by_abelian_normal is None
    whole = structure_predicates(s3, s3.full())
    assert whole.center_order == 5 and whole.generated_by_abelian_normal
