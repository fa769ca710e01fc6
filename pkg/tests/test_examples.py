import random
from fractions import Fraction

import pytest

from quantales.examples import (FiniteTopology, HypothesisFailure,
                                NotContinuous, NotOpen, cyclic_group,
                                delta_embedding_map, discrete_topology,
                                finite_locale_map, group_algebra_quantale,
                                group_algebra_support_map,
                                group_powerset_quantale, locale_quantale,
                                matrix_max_quantale, matrix_support_map,
                                omega_quantale, omega_support_map,
                                pair_groupoid, rel_quantale,
                                sierpinski_topology, standard_map_corpus,
                                symmetric_group_3)
from quantales.quantale import is_surjective, validate_hom, validate_quantale
from quantales.subspaces import RationalSubspace


def test_rref_is_representation_independent():
    rng = random.Random(11)
    for _ in range(50):
        dim = rng.randint(1, 5)
        k = rng.randint(1, dim)
        vectors = [[Fraction(rng.randint(-4, 4)) for _ in range(dim)]
                   for _ in range(k)]
        space = RationalSubspace.from_vectors(dim, vectors)
        # randomly remix the generating set: shuffle, scale, add rows
        mixed = [list(v) for v in vectors]
        rng.shuffle(mixed)
        for i in range(len(mixed)):
            scale = Fraction(rng.choice([1, 2, 3, -1, -5]))
            j = rng.randrange(len(mixed))
            mixed[i] = [scale * a + b for a, b in zip(mixed[i], mixed[j])] \
                if i != j else [scale * a for a in mixed[i]]
        remixed = RationalSubspace.from_vectors(dim, mixed)
        assert remixed.leq(space)
        if remixed.rank == space.rank:
            assert remixed == space


def test_subspace_order_join_and_membership():
    v = RationalSubspace.from_vectors(3, [(1, 0, 0)])
    w = RationalSubspace.from_vectors(3, [(0, 1, 0)])
    both = v.add(w)
    assert v.leq(both) and w.leq(both)
    assert both.contains_vector((2, -3, 0))
    assert not both.contains_vector((0, 0, 1))
    assert v.add(RationalSubspace.zero(3)) == v


def test_matrix_unit_products():
    mm = matrix_max_quantale(2)
    e11 = RationalSubspace.from_vectors(4, [(1, 0, 0, 0)])
    e12 = RationalSubspace.from_vectors(4, [(0, 1, 0, 0)])
    e21 = RationalSubspace.from_vectors(4, [(0, 0, 1, 0)])
    assert mm.mult(e11, e12) == e12
    assert mm.inv(e12) == e21
    assert mm.join([e11, mm.bottom]) == e11
    assert mm.mult(mm.unit, e12) == e12


def test_matrix_support_map_adjunction_and_fr2_instance():
    p = matrix_support_map(2)
    r2 = p.target
    # support adjunction V <= p*(U) iff supp(V) <= U, sampled subspaces
    rng = random.Random(5)
    for _ in range(40):
        v = p.source.sample(rng)
        for u in r2.elements:
            assert v.leq(p.star(u)) == r2.leq(p.shriek(v), u)
    # p_!(span{e11} p*({(1,2)}) span{e21}) = {(1,1)} = {(1,1)}o{(1,2)}o{(2,1)}
    e11 = RationalSubspace.from_vectors(4, [(1, 0, 0, 0)])
    e21 = RationalSubspace.from_vectors(4, [(0, 0, 1, 0)])
    mid = p.star(1 << 1)
    lhs = p.shriek(p.source.mult(p.source.mult(e11, mid), e21))
    assert lhs == 1 << 0
    assert r2.mult(r2.mult(1 << 0, 1 << 1), 1 << 2) == 1 << 0
    assert p.star(0) == RationalSubspace.zero(4)


def test_group_algebra_support_and_the_zero_divisor_guard():
    p = group_algebra_support_map(cyclic_group(2))
    ga = p.source
    plus = RationalSubspace.from_vectors(2, [(1, 1)])
    minus = RationalSubspace.from_vectors(2, [(1, -1)])
    # supp(V.W) is strictly below supp(V)supp(W) here: (1+g)(1-g) = 0
    assert ga.mult(plus, minus) == ga.bottom
    assert p.shriek(ga.mult(plus, minus)) == 0
    assert p.target.mult(p.shriek(plus), p.shriek(minus)) == 3
    # while (1+g)(1+g) = 2+2g keeps full support
    assert p.shriek(ga.mult(plus, plus)) == 3
    assert p.star(0) == RationalSubspace.zero(2)


def test_group_algebra_involution_moves_coefficients():
    g3 = symmetric_group_3()
    ga = group_algebra_quantale(g3)
    for g in range(6):
        line = RationalSubspace.from_vectors(
            6, [[Fraction(int(i == g)) for i in range(6)]])
        assert ga.inv(line) == RationalSubspace.from_vectors(
            6, [[Fraction(int(i == g3.inv[g])) for i in range(6)]])


def test_constructed_examples_validate():
    assert validate_quantale(group_powerset_quantale(cyclic_group(2))) is None
    assert validate_quantale(group_powerset_quantale(cyclic_group(3))) is None
    assert validate_quantale(group_powerset_quantale(symmetric_group_3())) \
        is None
    assert validate_quantale(rel_quantale(2)) is None
    assert validate_quantale(locale_quantale(sierpinski_topology())) is None
    mm = matrix_max_quantale(2)
    assert validate_quantale(mm, rng=random.Random(0), samples=10) is None


def test_rel_quantale_composition_and_converse():
    r2 = rel_quantale(2)
    a = 1 << 1  # (1,2)
    b = 1 << 2  # (2,1)
    assert r2.mult(a, b) == 1 << 0  # (1,1)
    assert r2.inv(a) == b
    assert r2.unit == (1 << 0) | (1 << 3)


def test_pair_groupoid_units_are_the_diagonal():
    g = pair_groupoid(3)
    assert [g.names[u] for u in g.units] == ["(1,1)", "(2,2)", "(3,3)"]


def test_omega_support_map_requires_the_hypothesis():
    assert omega_support_map(group_powerset_quantale(cyclic_group(2))) \
        .shriek(3) == 1
    with pytest.raises(HypothesisFailure):
        omega_support_map(rel_quantale(2))  # {(1,2)} o {(1,2)} = empty
    trivial = omega_support_map(omega_quantale())
    assert is_surjective(trivial)


def test_delta_embedding_is_a_hom():
    f = delta_embedding_map(2)
    assert validate_hom(f.inverse_image, f.target, f.source) is None
    assert f.star(1) == rel_quantale(2).unit


def test_finite_topology_validation():
    with pytest.raises(ValueError):
        FiniteTopology.build(2, [frozenset(), frozenset({0})])
    top = sierpinski_topology()
    assert len(top.opens) == 3


def test_locale_maps_continuity_and_openness():
    indiscrete = FiniteTopology.build(2, [frozenset(), frozenset({0, 1})])
    with pytest.raises(NotContinuous):
        # the preimage of the open point {1} is a singleton, which is not
        # open in the indiscrete domain
        finite_locale_map([1, 0], indiscrete, sierpinski_topology())
    with pytest.raises(NotOpen):
        # the image of the point is the closed point of the Sierpinski space
        finite_locale_map([0], discrete_topology(1), sierpinski_topology(),
                          with_direct_image=True)


def test_standard_corpus_builds():
    names = [name for name, _ in standard_map_corpus()]
    assert "omega-support-PZ2" in names
    assert "group-algebra-S3" in names
    finite_only = [name for name, _ in standard_map_corpus(False)]
    assert "matrix-support-2" not in finite_only
