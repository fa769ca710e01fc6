import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quantales.suplattice import (ClosureOperator, FiniteSupLattice,
                                  MissingJoin, NoBottom, NoLeftAdjoint,
                                  NotAPartialOrder, NotMeetClosed,
                                  NotSupPreserving, SupMap,
                                  closure_from_closed_family,
                                  enumerate_sup_maps, is_sup_map,
                                  left_adjoint, preserves_all_meets,
                                  right_adjoint, validate_lattice)

from _helpers import brute_force_join, brute_force_left_adjoints, \
    corpus_lattices

CORPUS = corpus_lattices()


def test_two_chain_join_is_max():
    lat = validate_lattice([(0, 1)], size=2)
    assert lat.bottom == 0 and lat.top == 1
    for i, j in itertools.product(range(2), repeat=2):
        assert lat.join2(i, j) == max(i, j)
        assert lat.meet2(i, j) == min(i, j)


def test_transitivity_failure_reported_with_witness():
    with pytest.raises(NotAPartialOrder) as err:
        validate_lattice([(0, 1), (1, 2)], size=3)
    assert err.value.axiom == "transitivity"
    i, j, k = err.value.witness
    assert (i, k) == (0, 2)


def test_antisymmetry_failure():
    with pytest.raises(NotAPartialOrder) as err:
        validate_lattice([(0, 1), (1, 0)], size=2)
    assert err.value.axiom == "antisymmetry"


def test_no_bottom():
    with pytest.raises(NoBottom):
        validate_lattice([], size=2)


def test_missing_join():
    # bottom plus two incomparable atoms, no common upper bound
    with pytest.raises(MissingJoin) as err:
        validate_lattice([(0, 1), (0, 2)], size=3)
    assert err.value.witness == (1, 2)


def test_powerset_joins_are_unions():
    lat = FiniteSupLattice.powerset(2)
    assert lat.join2(0b01, 0b10) == 0b11
    assert lat.join([]) == 0
    assert lat.join([0b01]) == 0b01
    assert lat.names[3] == "{0,1}"


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_join_is_least_upper_bound(name):
    lat = CORPUS[name]
    for bits in range(1 << lat.size):
        subset = [e for e in lat.elements if bits >> e & 1]
        assert lat.join(subset) == brute_force_join(lat, subset)


def test_is_sup_map_identity_and_constant_bottom():
    lat = CORPUS["diamond"]
    assert is_sup_map(SupMap.identity(lat)) is None
    const = SupMap(lat, lat, tuple(lat.bottom for _ in lat.elements))
    assert is_sup_map(const) is None


def test_is_sup_map_counterexample():
    three = FiniteSupLattice.chain(3)
    two = FiniteSupLattice.chain(2)
    f = SupMap(three, two, (0, 1, 0))
    assert is_sup_map(f) == (1, 2)


def test_is_sup_map_bottom_violation_is_empty_witness():
    two = FiniteSupLattice.chain(2)
    f = SupMap(two, two, (1, 1))
    assert is_sup_map(f) == ()


def test_right_adjoint_identity_and_constants():
    lat = CORPUS["powerset2"]
    ident = SupMap.identity(lat)
    assert right_adjoint(ident).values == ident.values
    other = CORPUS["chain3"]
    const_bot = SupMap(lat, other, tuple(other.bottom for _ in lat.elements))
    ra = right_adjoint(const_bot)
    assert ra.values == tuple(lat.top for _ in other.elements)


def test_right_adjoint_of_chain_inclusion():
    two, three = FiniteSupLattice.chain(2), FiniteSupLattice.chain(3)
    f = SupMap(two, three, (0, 2))
    assert right_adjoint(f).values == (0, 0, 1)


def test_right_adjoint_rejects_non_sup_map():
    three, two = FiniteSupLattice.chain(3), FiniteSupLattice.chain(2)
    with pytest.raises(NotSupPreserving):
        right_adjoint(SupMap(three, two, (0, 1, 0)))


def test_left_adjoint_identity_and_chain_inclusion():
    two, three = FiniteSupLattice.chain(2), FiniteSupLattice.chain(3)
    assert left_adjoint(SupMap.identity(three)).values == (0, 1, 2)
    g = left_adjoint(SupMap(two, three, (0, 2)))
    assert g.values == (0, 1, 1)


def test_left_adjoint_missing_with_witness():
    # 1 goes to the identity relation inside the powerset of four pairs;
    # the map misses the empty meet, so no left adjoint can exist
    two = FiniteSupLattice.chain(2)
    rel2 = FiniteSupLattice.powerset(4)
    diag = 0b1001
    f = SupMap(two, rel2, (0, diag))
    with pytest.raises(NoLeftAdjoint) as err:
        left_adjoint(f)
    assert err.value.witness == (2, 1)


@pytest.mark.parametrize("dom,cod", [("chain3", "powerset2"),
                                     ("powerset2", "chain3"),
                                     ("diamond", "chain2"),
                                     ("pentagon", "pentagon")])
def test_adjunctions_against_brute_force(dom, cod):
    dl, cl = CORPUS[dom], CORPUS[cod]
    for f in enumerate_sup_maps(dl, cl):
        ra = right_adjoint(f)
        for m in cl.elements:
            for l in dl.elements:
                assert cl.leq(f.values[l], m) == dl.leq(l, ra.values[m])
        adjoints = brute_force_left_adjoints(f)
        try:
            g = left_adjoint(f)
        except NoLeftAdjoint:
            assert adjoints == []
        else:
            assert adjoints == [g.values]


@pytest.mark.parametrize("dom,cod", [("chain4", "powerset2"),
                                     ("powerset2", "diamond"),
                                     ("grid3x2", "chain3"),
                                     ("pentagon", "grid3x2")])
def test_left_adjoint_exists_iff_all_meets_preserved(dom, cod):
    dl, cl = CORPUS[dom], CORPUS[cod]
    for f in enumerate_sup_maps(dl, cl):
        preserves = preserves_all_meets(f) is None
        try:
            left_adjoint(f)
            exists = True
        except NoLeftAdjoint:
            exists = False
        assert exists == preserves


def test_closure_from_closed_family():
    lat = CORPUS["powerset2"]
    ident = closure_from_closed_family(lat, range(lat.size))
    assert ident.values == tuple(lat.elements)
    const = closure_from_closed_family(lat, [lat.top])
    assert const.values == tuple(lat.top for _ in lat.elements)
    # closed family {empty, whole} on the powerset of a two-element group
    op = closure_from_closed_family(lat, [0, 3])
    assert op.values == (0, 3, 3, 3)
    assert op.closed_elements() == (0, 3)


def test_closure_laws_validate():
    lat = CORPUS["diamond"]
    op = closure_from_closed_family(lat, [0, 1, 4])
    op.validate()
    for a in lat.elements:
        assert lat.leq(a, op(a))
        assert op(op(a)) == op(a)


def test_not_meet_closed():
    lat = CORPUS["powerset2"]
    with pytest.raises(NotMeetClosed) as err:
        closure_from_closed_family(lat, [1, 2, 3])
    assert err.value.witness == (1, 2)
    with pytest.raises(NotMeetClosed):
        closure_from_closed_family(lat, [0, 1])  # top missing


def test_bad_closure_fails_validation():
    lat = FiniteSupLattice.chain(3)
    deflating = ClosureOperator(lat, (0, 0, 2))
    with pytest.raises(Exception):
        deflating.validate()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.data())
def test_join_upper_bound_property(name, data):
    lat = CORPUS[name]
    subset = data.draw(st.lists(st.integers(0, lat.size - 1), max_size=6))
    j = lat.join(subset)
    assert all(lat.leq(s, j) for s in subset)
    ubs = [u for u in lat.elements if all(lat.leq(s, u) for s in subset)]
    assert all(lat.leq(j, u) for u in ubs)


def test_compose_and_identity():
    two, three = FiniteSupLattice.chain(2), FiniteSupLattice.chain(3)
    f = SupMap(two, three, (0, 2))
    assert f.then(SupMap.identity(three)).values == f.values
    assert SupMap.identity(two).then(f).values == f.values
