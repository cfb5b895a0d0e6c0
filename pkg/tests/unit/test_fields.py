# tests/unit/test_fields.py

import pytest

from app.core.errors import BadSpec
from app.models.fields import Answer, builtin_field


@pytest.mark.parametrize(
    "spec, name, characteristic, infinite",
    [
        ("Q", "Q", 0, True),
        ("C", "C", 0, True),
        ("Qzeta:8", "Q(zeta_8)", 0, True),
        ("Qzeta:1", "Q", 0, True),
        ("Qzeta:2", "Q", 0, True),
        ("Fq:9", "F_9", 3, False),
        ("charp:5", "F_5(t)", 5, True),
        (" Q ", "Q", 0, True),
    ],
)
def test_builtin_fields(spec, name, characteristic, infinite) -> None:
    k = builtin_field(spec)
    assert k.name == name
    assert k.characteristic == characteristic
    assert k.is_infinite is infinite


@pytest.mark.parametrize("spec", ["R", "Qzeta:x", "Qzeta:0", "Fq:6", "charp:1", "Fq:"])
def test_bad_field_names(spec) -> None:
    with pytest.raises(BadSpec):
        builtin_field(spec)


@pytest.mark.parametrize(
    "spec, m, expected",
    [
        ("Q", 1, Answer.YES),
        ("Q", 2, Answer.YES),
        ("Q", 4, Answer.NO),
        ("C", 120, Answer.YES),
        ("Qzeta:8", 4, Answer.YES),
        ("Qzeta:8", 8, Answer.YES),
        ("Qzeta:8", 3, Answer.NO),
        ("Qzeta:3", 6, Answer.YES),
        ("Qzeta:24", 3, Answer.YES),
        ("Fq:9", 4, Answer.YES),
        ("Fq:9", 8, Answer.YES),
        ("Fq:9", 3, Answer.NO),
        ("charp:11", 5, Answer.YES),
        ("charp:11", 25, Answer.NO),
    ],
)
def test_roots_of_unity(spec, m, expected) -> None:
    assert builtin_field(spec).contains_zeta(m) == expected


def test_root_order_must_be_positive() -> None:
    with pytest.raises(BadSpec):
        builtin_field("Q").contains_zeta(0)


@pytest.mark.parametrize(
    "spec, r, expected",
    [
        ("Q", 0, Answer.YES),
        ("Q", 2, Answer.YES),
        ("Q", 3, Answer.NO),
        ("Q", 5, Answer.NO),
        ("Qzeta:8", 3, Answer.YES),
        ("Qzeta:4", 3, Answer.YES),
        ("Qzeta:4", 4, Answer.YES),
        ("Qzeta:3", 3, Answer.NO),
        ("C", 6, Answer.YES),
        ("charp:3", 6, Answer.YES),
    ],
)
def test_cyclic_cyclotomic_extension(spec, r, expected) -> None:
    assert builtin_field(spec).cyclic_cyclotomic_ext(r) == expected


@pytest.mark.parametrize(
    "small, big, expected",
    [
        ("Q", "Qzeta:8", True),
        ("Qzeta:4", "Qzeta:8", True),
        ("Qzeta:8", "Qzeta:4", False),
        ("Qzeta:3", "Qzeta:6", True),
        ("Qzeta:8", "C", True),
        ("C", "Qzeta:8", False),
        ("Fq:5", "Fq:25", True),
        ("Fq:25", "Fq:125", False),
        ("Fq:5", "charp:25", True),
        ("charp:5", "Fq:25", False),
        ("Q", "Fq:5", False),
    ],
)
def test_subfields(small, big, expected) -> None:
    assert builtin_field(small).is_subfield_of(builtin_field(big)) is expected


def test_answer_of() -> None:
    assert Answer.of(True) == Answer.YES
    assert Answer.of(False) == Answer.NO
    assert str(builtin_field("Qzeta:5")) == "Q(zeta_5)"
