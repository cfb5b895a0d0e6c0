# tests/unit/test_constructors.py

import pytest
from pydantic import ValidationError

from app.core.errors import (
    BadCharacteristic,
    BadModulus,
    BadOrder,
    NoFifthRoot,
    NotACentralExtension,
    NotAComplement,
    NotPrime,
    OrderCapExceeded,
    ParameterCongruenceViolated,
)
from app.operations import constructors as c
from app.operations.group_core import is_cyclic, is_generalized_quaternion, is_isomorphic, quotient
from app.schemas.presentation import GroupFamily, PresentationParams


# ---------------------------------------------
# Presentation parameters
# ---------------------------------------------

@pytest.mark.parametrize(
    "values",
    [
        {"family": "metacyclic", "m": 7, "n": 3, "r": 2},
        {"family": "III", "m": 1, "n": 3, "r": 1},
        {"family": "IV", "m": 1, "n": 3, "r": 1, "k": 2, "t": 1},
        {"family": "II", "m": 3, "n": 4, "r": 2, "l": 1, "k": 3},
        {"family": "NS-I", "m": 1, "n": 7, "r": 1, "p": 5},
    ],
    ids=["metacyclic", "III", "IV", "II", "NS-I"],
)
def test_valid_parameters(values) -> None:
    params = PresentationParams(**values)
    assert params.family == GroupFamily(values["family"])


@pytest.mark.parametrize(
    "values, message",
    [
        ({"family": "metacyclic", "m": 7, "n": 3, "r": 3}, "r^n"),
        ({"family": "metacyclic", "m": 6, "n": 2, "r": 5}, "gcd"),
        ({"family": "III", "m": 1, "n": 6, "r": 1}, "odd"),
        ({"family": "II", "m": 1, "n": 2, "r": 1, "l": 1, "k": 1}, "4 | n"),
        ({"family": "NS-I", "m": 1, "n": 3, "r": 1, "p": 5}, "gcd"),
        ({"family": "V", "m": 1, "n": 1, "r": 1}, "Family must be one of"),
    ],
    ids=["bad_r", "not_coprime", "III_even_n", "II_small_n", "NS_I_not_coprime", "unknown_family"],
)
def test_invalid_parameters(values, message) -> None:
    with pytest.raises(ValidationError) as exc_info:
        PresentationParams(**values)
    assert message in str(exc_info.value)


@pytest.mark.parametrize(
    "values, order",
    [
        ({"family": "metacyclic", "m": 7, "n": 3, "r": 2}, 21),
        ({"family": "II", "m": 3, "n": 4, "r": 2, "l": 1, "k": 3}, 24),
        ({"family": "III", "m": 1, "n": 3, "r": 1}, 24),
        ({"family": "IV", "m": 1, "n": 3, "r": 1, "k": 2, "t": 1}, 48),
        ({"family": "NS-I", "m": 1, "n": 7, "r": 1, "p": 5}, 840),
    ],
)
def test_presented_order(values, order) -> None:
    assert PresentationParams(**values).order == order


# ---------------------------------------------
# Permutation families
# ---------------------------------------------

@pytest.mark.parametrize(
    "m, n, r, order",
    [(7, 3, 2, 21), (3, 2, 2, 6), (5, 4, 2, 20), (1, 5, 1, 5), (17, 8, 2, 136)],
    ids=["C7:C3", "S3", "C5:C4", "cyclic_from_m_1", "C17:C8"],
)
def test_metacyclic_order_and_relations(m, n, r, order) -> None:
    cg = c.metacyclic(m, n, r)
    assert cg.order == order
    assert cg.failing_relations() == []


def test_metacyclic_with_m_one_is_cyclic() -> None:
    assert is_cyclic(c.metacyclic(1, 6, 1).group)


def test_metacyclic_rejects_bad_parameters() -> None:
    with pytest.raises(ParameterCongruenceViolated):
        c.metacyclic(7, 3, 3)


def test_relations_are_checked() -> None:
    cg = c.cyclic(5)
    cg.relations.append("x = 1")
    assert cg.failing_relations() == ["x = 1"]


def test_evaluate_parenthesized_words() -> None:
    cg = c.quaternion_generalized(8)
    assert cg.evaluate("(x y)^2") == cg.evaluate("x^2")
    assert cg.evaluate("y x y^-1") == cg.evaluate("x^-1")


@pytest.mark.parametrize(
    "builder, error",
    [
        (lambda: c.cyclic(0), BadOrder),
        (lambda: c.dihedral(2), BadOrder),
        (lambda: c.alternating(2), BadOrder),
        (lambda: c.quaternion_generalized(12), BadOrder),
        (lambda: c.sl2(4), NotPrime),
        (lambda: c.sl2(41, cap=1000), OrderCapExceeded),
        (lambda: c.g1_group(0), BadOrder),
    ],
    ids=["cyclic_zero", "dihedral_two", "alternating_two", "quaternion_12", "sl2_4", "sl2_cap", "g1_zero"],
)
def test_constructor_errors(builder, error) -> None:
    with pytest.raises(error):
        builder()


def test_generalized_quaternion_orders() -> None:
    for order in (8, 16, 32):
        g = c.quaternion_generalized(order).group
        assert g.order == order
        assert is_generalized_quaternion(g)


# ---------------------------------------------
# GZ families
# ---------------------------------------------

def test_type_ii_group() -> None:
    cg = c.gz_type(PresentationParams(family="II", m=3, n=4, r=2, l=1, k=3))
    assert cg.order == 24
    assert cg.failing_relations() == []


def test_type_iii_with_cyclic_part() -> None:
    cg = c.gz_type(PresentationParams(family="III", m=7, n=3, r=2))
    assert cg.order == 168


def test_g1_is_sl2_f3() -> None:
    g1 = c.g1_group(1)
    assert g1.order == 24
    assert g1.group.exponent == 12
    assert is_isomorphic(g1.group, c.sl2(3).group)


def test_g2_is_binary_octahedral() -> None:
    g2 = c.g2_group(1)
    assert g2.order == 48
    assert g2.group.exponent == 24


def test_nonsolvable_ns_i() -> None:
    cg = c.nonsolvable_gz(PresentationParams(family="NS-I", m=1, n=7, r=1, p=5))
    assert cg.order == 840
    assert cg.failing_relations() == []


# ---------------------------------------------
# Matrix groups
# ---------------------------------------------

@pytest.mark.parametrize("p, order", [(2, 6), (3, 24), (5, 120), (7, 336)])
def test_sl2_orders(p, order) -> None:
    assert c.sl2(p).order == order


def test_binary_icosahedral_default_field() -> None:
    h = c.binary_icosahedral()
    assert h.order == 120
    assert h.params["q"] == 11
    assert h.failing_relations() == []
    assert is_isomorphic(h.group, c.sl2(5).group)


def test_binary_icosahedral_explicit_root() -> None:
    h = c.binary_icosahedral(11, 3)
    assert h.params["zeta"] == 3
    assert h.order == 120


@pytest.mark.parametrize(
    "q, zeta, error",
    [(7, None, NoFifthRoot), (25, None, BadCharacteristic), (11, 1, NoFifthRoot), (11, 2, NoFifthRoot)],
    ids=["no_root_in_F7", "char_5", "trivial_root", "not_a_root"],
)
def test_binary_icosahedral_errors(q, zeta, error) -> None:
    with pytest.raises(error):
        c.binary_icosahedral(q, zeta)


def test_binary_icosahedral_verification() -> None:
    report = c.verify_binary_icosahedral()
    assert report.all_passed, [ch for ch in report.checks if not ch.passed]
    for name in ("phi_isomorphism", "pi_surjective_onto_A5", "pi_kernel_is_center", "theta_A", "theta_B", "theta_C"):
        assert report.result(name) is True, name


def test_g_plus() -> None:
    gp = c.g_plus()
    assert gp.order == 240
    assert gp.generators["lambda"].order() == 4
    assert gp.extras["L"].order == 120


def test_g_plus_rejects_small_characteristic() -> None:
    with pytest.raises(BadCharacteristic):
        c.g_plus(9)


def test_g_plus_verification() -> None:
    report = c.verify_g_plus()
    assert report.all_passed, [ch for ch in report.checks if not ch.passed]
    assert report.result("double_cover_hat") is True


def test_double_cover_type_of_s4_lift() -> None:
    """The binary octahedral group lifts transpositions to elements of order 4."""
    g2 = c.g2_group(1)
    g = g2.group
    eps = g2.evaluate("lambda^2")
    q = quotient(g, g.subgroup([eps]))
    iso = is_isomorphic(q.group, c.symmetric(4).group)
    assert iso
    assert c.double_cover_type(g, eps, lambda x: iso.mapping[q.project(x)]) == "hat"


def test_double_cover_type_rejects_non_central() -> None:
    s3 = c.symmetric(3).group
    t = next(x for x in s3.elements if x.order() == 2)
    with pytest.raises(NotACentralExtension):
        c.double_cover_type(s3, t, lambda x: x)


@pytest.mark.parametrize("l, order, exponent", [(1, 24, 12), (2, 72, 36)])
def test_rep_phi(l, order, exponent) -> None:
    cg, report = c.rep_phi(l)
    assert cg.order == order
    assert cg.group.exponent == exponent
    assert report.all_passed


@pytest.mark.parametrize("l, order, exponent", [(1, 48, 24), (2, 144, 72)])
def test_rep_psi(l, order, exponent) -> None:
    cg, report = c.rep_psi(l)
    assert cg.order == order
    assert cg.group.exponent == exponent
    assert report.all_passed


def test_rep_field_needs_congruence() -> None:
    with pytest.raises(BadModulus):
        c.rep_phi(1, 17)


def test_representation_suite() -> None:
    report = c.verify_representations(1)
    assert report.all_passed, [ch for ch in report.checks if not ch.passed]


# ---------------------------------------------
# Frobenius groups
# ---------------------------------------------

def test_linear_semidirect_c3c3_c4() -> None:
    cg = c.linear_semidirect(3, [[[0, -1], [1, 0]]])
    assert cg.order == 36
    assert cg.extras["kernel"].order == 9
    assert cg.extras["complement"].order == 4


def test_frobenius_group_checks_action() -> None:
    c7, c3 = c.cyclic(7).group, c.cyclic(3).group
    x, t = c7.generators[0], c3.generators[0]
    cg = c.frobenius_group(c7, c3, {t: {x: x**2}})
    assert cg.order == 21
    c4, c2 = c.cyclic(4).group, c.cyclic(2).group
    y, s = c4.generators[0], c2.generators[0]
    with pytest.raises(NotAComplement):
        c.frobenius_group(c4, c2, {s: {y: y**-1}})


@pytest.mark.slow
def test_frobenius_sl25() -> None:
    cg = c.frobenius_sl25()
    assert cg.order == 121 * 120
    assert cg.extras["kernel"].order == 121
