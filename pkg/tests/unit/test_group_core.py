# tests/unit/test_group_core.py

import pytest

from app.core.errors import (
    ElementNotInGroup,
    NotAnAutomorphism,
    NotAPermutation,
    NotNormal,
    NotPrime,
    OrderCapExceeded,
    RelationViolation,
)
from app.models.group import Group, Perm
from app.operations import constructors as c
from app.operations.group_core import (
    abelian_invariants,
    automorphism,
    cyclic_subgroups,
    derived_series,
    direct_product,
    grow_complement,
    homomorphism_from_images,
    is_abelian,
    is_cyclic,
    is_generalized_quaternion,
    is_isomorphic,
    is_nilpotent,
    is_solvable,
    normal_subgroups,
    quotient,
    semidirect_product,
    small_generating_set,
    structural_predicates,
    sylow,
)


# ---------------------------------------------
# Permutations
# ---------------------------------------------

def test_product_is_composition() -> None:
    """(p*q)(i) = p(q(i)): q is applied first."""
    p = Perm.from_cycles(3, [[0, 1]])
    q = Perm.from_cycles(3, [[1, 2]])
    assert (p * q)(1) == p(q(1)) == 2
    assert (p * q).images == (1, 2, 0)


def test_perm_rejects_non_bijection() -> None:
    with pytest.raises(NotAPermutation):
        Perm.of([0, 0, 1])


@pytest.mark.parametrize(
    "cycles, expected",
    [
        ([], 1),
        ([[0, 1]], 2),
        ([[0, 1, 2], [3, 4]], 6),
    ],
    ids=["identity", "transposition", "three_by_two"],
)
def test_perm_order(cycles, expected) -> None:
    assert Perm.from_cycles(5, cycles).order() == expected


def test_power_and_inverse() -> None:
    x = Perm.from_cycles(5, [[0, 1, 2, 3, 4]])
    assert (x**5).is_identity
    assert x**-1 == x.inverse()
    assert (x * x.inverse()).is_identity


# ---------------------------------------------
# Groups
# ---------------------------------------------

def test_elements_start_with_identity() -> None:
    g = c.symmetric(4).group
    assert g.elements[0].is_identity
    assert g.order == 24
    assert len(set(g.elements)) == 24


def test_order_cap_is_enforced() -> None:
    gens = c.symmetric(5).group.generators
    with pytest.raises(OrderCapExceeded):
        Group.from_generators(5, gens, cap=50)


def test_generator_degree_mismatch() -> None:
    with pytest.raises(NotAPermutation):
        Group(4, [Perm.from_cycles(3, [[0, 1]])])


def test_index_of_foreign_element() -> None:
    g = c.cyclic(3).group
    with pytest.raises(ElementNotInGroup):
        g.index(Perm.from_cycles(3, [[0, 1]]))


@pytest.mark.parametrize(
    "builder, order, exponent",
    [
        (lambda: c.cyclic(6), 6, 6),
        (lambda: c.symmetric(4), 24, 12),
        (lambda: c.abelian([2, 4]), 8, 4),
        (lambda: c.quaternion_generalized(8), 8, 4),
        (lambda: c.alternating(5), 60, 30),
    ],
    ids=["C6", "S4", "C2xC4", "Q8", "A5"],
)
def test_order_and_exponent(builder, order, exponent) -> None:
    g = builder().group
    assert g.order == order, f"Expected order {order}, got {g.order}"
    assert g.exponent == exponent, f"Expected exponent {exponent}, got {g.exponent}"


def test_cayley_table_matches_products(group_of) -> None:
    g = group_of("S3")
    table = g.cayley_table()
    for i, x in enumerate(g.elements):
        for j, y in enumerate(g.elements):
            assert g.elements[table[i, j]] == x * y


# ---------------------------------------------
# Structure
# ---------------------------------------------

@pytest.mark.parametrize(
    "name, abelian, cyclic, nilpotent, solvable",
    [
        ("C6", True, True, True, True),
        ("C2xC2", True, False, True, True),
        ("S3", False, False, False, True),
        ("Q8", False, False, True, True),
        ("S4", False, False, False, True),
    ],
)
def test_structural_predicates(group_of, name, abelian, cyclic, nilpotent, solvable) -> None:
    preds = structural_predicates(group_of(name))
    assert preds.is_abelian is abelian
    assert preds.is_cyclic is cyclic
    assert preds.is_nilpotent is nilpotent
    assert preds.is_solvable is solvable
    assert preds.is_perfect is False


def test_a5_is_perfect_and_not_solvable() -> None:
    g = c.alternating(5).group
    preds = structural_predicates(g)
    assert preds.is_perfect
    assert not preds.is_solvable
    assert preds.center.order == 1


def test_center_and_derived_subgroup(group_of) -> None:
    q8 = group_of("Q8")
    assert q8.center.order == 2
    assert q8.derived_subgroup.order == 2
    a4 = group_of("A4")
    assert a4.center.order == 1
    assert a4.derived_subgroup.order == 4


def test_derived_series_of_s4(group_of) -> None:
    orders = [s.order for s in derived_series(group_of("S4"))]
    assert orders == [24, 12, 4, 1]


@pytest.mark.parametrize(
    "name, p, order",
    [("S4", 2, 8), ("S4", 3, 3), ("A4", 2, 4), ("C6", 5, 1), ("SL2(F3)", 2, 8)],
)
def test_sylow_orders(group_of, name, p, order) -> None:
    assert sylow(group_of(name), p).order == order


def test_sylow_rejects_non_prime(group_of) -> None:
    with pytest.raises(NotPrime):
        sylow(group_of("S4"), 4)


@pytest.mark.parametrize(
    "build, expected",
    [
        (lambda: c.quaternion_generalized(8), True),
        (lambda: c.quaternion_generalized(16), True),
        (lambda: c.quaternion_generalized(32), True),
        (lambda: c.dihedral(4), False),
        (lambda: c.dihedral(8), False),
        (lambda: c.cyclic(4), False),
        (lambda: c.cyclic(8), False),
        (lambda: c.cyclic(16), False),
        (lambda: c.abelian([2, 8]), False),
    ],
)
def test_generalized_quaternion(build, expected) -> None:
    """Cyclic 2-groups have one involution too but are not generalized quaternion."""
    assert is_generalized_quaternion(build().group) is expected


@pytest.mark.parametrize(
    "name, orders",
    [
        ("S3", [1, 3, 6]),
        ("S4", [1, 4, 12, 24]),
        ("Q8", [1, 2, 4, 4, 4, 8]),
        ("C6", [1, 2, 3, 6]),
    ],
)
def test_normal_subgroups(group_of, name, orders) -> None:
    found = normal_subgroups(group_of(name))
    assert [n.order for n in found] == orders
    assert all(n.is_normal() for n in found)


def test_simple_group_has_two_normal_subgroups() -> None:
    assert [n.order for n in normal_subgroups(c.alternating(5).group)] == [1, 60]


def test_quotient_of_s4_by_klein(group_of) -> None:
    s4 = group_of("S4")
    v4 = normal_subgroups(s4)[1]
    q = quotient(s4, v4)
    assert q.group.order == 6
    assert is_isomorphic(q.group, group_of("S3"))
    for x in s4.elements[:6]:
        for y in s4.elements[:6]:
            assert q.project(x * y) == q.project(x) * q.project(y)


def test_quotient_rejects_non_normal(group_of) -> None:
    s3 = group_of("S3")
    involution = next(x for x in s3.elements if x.order() == 2)
    with pytest.raises(NotNormal):
        quotient(s3, s3.subgroup([involution]))


def test_abelian_and_cyclic_helpers(group_of) -> None:
    assert is_abelian(group_of("C2xC4"))
    assert not is_cyclic(group_of("C2xC4"))
    assert is_cyclic(group_of("C8"))
    assert is_solvable(group_of("SL2(F3)"))
    assert not is_nilpotent(group_of("A4"))


# ---------------------------------------------
# Homomorphisms and isomorphism
# ---------------------------------------------

def test_homomorphism_from_images() -> None:
    c4, c2 = c.cyclic(4).group, c.cyclic(2).group
    phi = homomorphism_from_images(c4, c4.generators, c2, c2.generators)
    assert len(phi) == 4
    for x in c4.elements:
        for y in c4.elements:
            assert phi[x * y] == phi[x] * phi[y]


def test_homomorphism_relation_violation() -> None:
    c3, c2 = c.cyclic(3).group, c.cyclic(2).group
    with pytest.raises(RelationViolation):
        homomorphism_from_images(c3, c3.generators, c2, c2.generators)


def test_homomorphism_image_outside_target() -> None:
    c4, c2 = c.cyclic(4).group, c.cyclic(2).group
    with pytest.raises(ElementNotInGroup):
        homomorphism_from_images(c4, c4.generators, c2, [c4.generators[0]])


@pytest.mark.parametrize(
    "left, right, expected",
    [
        (lambda: c.cyclic(6), lambda: c.abelian([2, 3]), True),
        (lambda: c.cyclic(4), lambda: c.abelian([2, 2]), False),
        (lambda: c.metacyclic(3, 2, 2), lambda: c.symmetric(3), True),
        (lambda: c.metacyclic(3, 2, 2), lambda: c.cyclic(6), False),
        (lambda: c.dihedral(4), lambda: c.quaternion_generalized(8), False),
        (lambda: c.g1_group(1), lambda: c.sl2(3), True),
    ],
    ids=["C6_C2xC3", "C4_V4", "S3_S3", "S3_C6", "D4_Q8", "G1_SL2F3"],
)
def test_is_isomorphic(left, right, expected) -> None:
    g, h = left().group, right().group
    iso = is_isomorphic(g, h)
    assert bool(iso) is expected
    if expected:
        phi = iso.mapping
        assert len(set(phi.values())) == h.order
        for x in g.generators:
            for y in g.elements:
                assert phi[x * y] == phi[x] * phi[y]


def test_small_generating_set(group_of) -> None:
    assert len(small_generating_set(group_of("C8"))) == 1
    assert len(small_generating_set(group_of("S4"))) == 2
    assert small_generating_set(c.cyclic(1).group) == []


# ---------------------------------------------
# Products
# ---------------------------------------------

def test_direct_product_of_coprime_cyclics() -> None:
    prod = direct_product(c.cyclic(2).group, c.cyclic(3).group)
    assert prod.group.order == 6
    assert is_cyclic(prod.group)
    assert prod.left.is_normal() and prod.right.is_normal()


def test_semidirect_product_inversion() -> None:
    c3, c2 = c.cyclic(3).group, c.cyclic(2).group
    x, t = c3.generators[0], c2.generators[0]
    prod = semidirect_product(c3, c2, {t: {x: x.inverse()}})
    assert prod.group.order == 6
    assert not is_abelian(prod.group)
    assert prod.left.is_normal()
    assert not prod.right.is_normal()
    tt, xx = prod.embed_right(t), prod.embed_left(x)
    assert tt * xx * tt.inverse() == prod.embed_left(x.inverse())


def test_automorphism_rejects_non_bijection() -> None:
    c3 = c.cyclic(3).group
    with pytest.raises(NotAnAutomorphism):
        automorphism(c3, {c3.generators[0]: c3.identity})


def test_automorphism_action_must_respect_relations() -> None:
    """Inversion has order 2, so C3 cannot act by it."""
    c5, c3 = c.cyclic(5).group, c.cyclic(3).group
    x, t = c5.generators[0], c3.generators[0]
    with pytest.raises(RelationViolation):
        semidirect_product(c5, c3, {t: {x: x.inverse()}})


# ---------------------------------------------
# Complements, cyclic subgroups, abelianization
# ---------------------------------------------

def test_grow_complement_of_klein_in_s4(group_of) -> None:
    s4 = group_of("S4")
    v4 = normal_subgroups(s4)[1]
    h = grow_complement(s4, v4)
    assert h is not None
    assert h.order == 6
    assert h.elements & v4.elements == {s4.identity}


def test_grow_complement_absent_for_q8_center(group_of) -> None:
    q8 = group_of("Q8")
    assert grow_complement(q8, q8.center) is None


def test_cyclic_subgroups_of_klein(group_of) -> None:
    g = group_of("C2xC2")
    found = cyclic_subgroups(g.elements)
    assert sorted(len(s) for _, s in found) == [1, 2, 2, 2]


@pytest.mark.parametrize(
    "name, factors",
    [
        ("C6", [6]),
        ("C2xC4", [2, 4]),
        ("S3", [2]),
        ("Q8", [2, 2]),
        ("A4", [3]),
        ("SL2(F3)", [3]),
        ("D4", [2, 2]),
    ],
)
def test_abelian_invariants(group_of, name, factors) -> None:
    inv = abelian_invariants(group_of(name))
    assert inv.factors == factors, f"G/[G,G] of {name}: expected {factors}, got {inv.factors}"
    assert inv.rank == 0


def test_abelianization_of_perfect_group() -> None:
    assert abelian_invariants(c.alternating(5).group).is_trivial
