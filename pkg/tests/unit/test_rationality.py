# tests/unit/test_rationality.py

import pytest
from pydantic import ValidationError

from app.core.errors import FieldNotInfinite
from app.models.fields import builtin_field
from app.operations import constructors as c
from app.operations.group_core import direct_product
from app.operations.rationality import (
    COROLLARY_BY_RULE,
    RULES,
    GroupFacts,
    RationalityEngine,
    certify,
    explain,
    replay,
)
from app.schemas.reports import Outcome, Verdict


def _rules(verdict: Verdict) -> list[str]:
    return [step.rule for step in verdict.trace]


# ---------------------------------------------
# Worked examples
# ---------------------------------------------

@pytest.mark.parametrize(
    "name, field, outcome, rules",
    [
        ("C17:C8", "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-AB", "N-DESC"]),
        ("C7:C3", "C", Outcome.RETRACT_RATIONAL, ["R-ZK"]),
        ("C8", "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-AB"]),
        ("C8", "Qzeta:8", Outcome.RETRACT_RATIONAL, ["R-AB"]),
        ("Q16", "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-SERRE"]),
        ("C4", "Q", Outcome.RETRACT_RATIONAL, ["R-AB"]),
        ("S3", "Q", Outcome.RETRACT_RATIONAL, ["R-ZK"]),
    ],
)
def test_worked_examples(group_of, name, field, outcome, rules) -> None:
    verdict = certify(group_of(name), builtin_field(field))
    assert verdict.outcome == outcome
    assert _rules(verdict) == rules


def test_descent_step_names_complement(group_of) -> None:
    verdict = certify(group_of("C17:C8"), builtin_field("Q"))
    first, last = verdict.trace
    assert first.subject == last.bindings["complement"]
    assert last.subject == "G"
    assert last.bindings["kernel_order"] == 17
    assert first.bindings["r"] == 3


def test_gz_rule_needs_roots_of_unity(group_of) -> None:
    g = group_of("SL2(F3)")
    verdict = certify(g, builtin_field("Qzeta:24"))
    assert _rules(verdict) == ["R-GZ"]
    assert verdict.trace[0].bindings == {"exponent": 12, "u_prime": 3, "l": 1, "char": 0}
    unknown = certify(g, builtin_field("Q"))
    assert unknown.outcome == Outcome.UNKNOWN
    assert unknown.trace == []
    assert any(a.rule == "R-GZ" and "zeta_8" in a.failed_premise for a in unknown.attempts)


def test_ns_i_over_q(sl2_f5) -> None:
    verdict = certify(sl2_f5, builtin_field("Q"))
    assert _rules(verdict) == ["R-NSI"]
    assert verdict.trace[0].note == "k(SL2(F5)) is k-rational"


def test_g_plus() -> None:
    g = c.g_plus().group
    assert _rules(certify(g, builtin_field("Q"))) == ["N-SERRE"]
    assert _rules(certify(g, builtin_field("Qzeta:8"))) == ["R-NSII"]


def test_direct_product_rule() -> None:
    g = direct_product(c.cyclic(3).group, c.symmetric(3).group, name="C3xS3").group
    verdict = certify(g, builtin_field("C"))
    assert verdict.outcome == Outcome.RETRACT_RATIONAL
    assert verdict.trace[-1].rule == "R-PROD"
    assert sorted(_rules(verdict)[:-1]) == ["R-AB", "R-ZK"]


def test_depth_limits_descent(group_of) -> None:
    verdict = certify(group_of("C17:C8"), builtin_field("Q"), depth=0)
    assert verdict.outcome == Outcome.UNKNOWN
    assert {a.rule for a in verdict.attempts} >= {"N-AB", "R-ZK"}


@pytest.mark.slow
def test_sl25_frobenius_group() -> None:
    verdict = certify(c.frobenius_sl25().group, builtin_field("Q"))
    assert _rules(verdict) == ["R-SL25"]
    assert len(verdict.corollaries) == 2
    assert verdict.trace[0].citation.startswith("Theorem 1.14:")
    assert verdict.corollaries[0].startswith("Theorem 1.12:")
    assert verdict.corollaries[1].startswith("Theorem 1.15:")


# ---------------------------------------------
# Fields and corollaries
# ---------------------------------------------

def test_finite_field_rejected(group_of) -> None:
    with pytest.raises(FieldNotInfinite):
        certify(group_of("C3"), builtin_field("Fq:7"))


def test_number_field_corollary(group_of) -> None:
    verdict = certify(group_of("C8"), builtin_field("Qzeta:8"))
    assert len(verdict.corollaries) == 1
    assert verdict.corollaries[0].startswith("Theorem 1.12:")
    assert "Hilbert irreducibility" in verdict.corollaries[0]
    assert certify(group_of("C7:C3"), builtin_field("C")).corollaries == []


def test_positive_characteristic(group_of) -> None:
    verdict = certify(group_of("C8"), builtin_field("charp:3"))
    assert _rules(verdict) == ["R-AB"]
    assert verdict.trace[0].bindings["char"] == 3


# ---------------------------------------------
# Facts
# ---------------------------------------------

def test_group_facts(group_of) -> None:
    f = GroupFacts(group_of("SL2(F3)"), "G")
    assert (f.exponent, f.u, f.l) == (12, 2, 1)
    assert f.solvable and f.gz and not f.z_group
    assert f.frobenius is None
    assert f.nonsolvable_type is None
    c8 = GroupFacts(group_of("C8"), "G")
    assert (c8.u, c8.l) == (3, 0)


@pytest.mark.parametrize(
    "build, expected",
    [
        (lambda: c.quaternion_generalized(16), True),
        (lambda: c.cyclic(16), False),
        (lambda: c.dihedral(8), False),
        (lambda: c.quaternion_generalized(8), False),
    ],
)
def test_q16_recognition(build, expected) -> None:
    assert GroupFacts(build().group, "G").is_q16 is expected


def test_cyclic_16_is_not_serre() -> None:
    verdict = certify(c.cyclic(16).group, builtin_field("Q"))
    assert verdict.outcome == Outcome.NOT_RETRACT_RATIONAL
    assert _rules(verdict) == ["N-AB"]


def test_double_cover_of_s5_recognition(sl2_f5) -> None:
    assert GroupFacts(c.g_plus().group, "G").is_double_cover_s5
    c2_s5 = direct_product(c.cyclic(2).group, c.symmetric(5).group, name="C2xS5").group
    assert not GroupFacts(c2_s5, "G").is_double_cover_s5
    c2_sl25 = direct_product(c.cyclic(2).group, sl2_f5, name="C2xSL2(F5)").group
    assert not GroupFacts(c2_sl25, "G").is_double_cover_s5


def test_rules_table() -> None:
    assert set(RULES) == {
        "N-AB", "N-SERRE", "N-DESC", "R-AB", "R-ZK", "R-SL25", "R-NSOLV",
        "R-SOLV", "R-GZ", "R-NSI", "R-NSII", "R-PROD", "R-SEMI",
    }
    assert all(rule.premise is None for rule in RULES.values() if rule.id in ("N-DESC", "R-PROD", "R-SEMI"))


def test_engine_memoizes_subjects(group_of) -> None:
    engine = RationalityEngine(builtin_field("Q"))
    verdict = engine.certify(group_of("C17:C8"))
    assert "G" in engine.subjects
    assert engine.parts["G"] == (verdict.trace[0].subject,)
    assert engine.certify(group_of("C17:C8")).trace == verdict.trace


# ---------------------------------------------
# Citations
# ---------------------------------------------

def test_descent_trace_cites_theorems(group_of) -> None:
    verdict = certify(group_of("C17:C8"), builtin_field("Q"))
    first, last = verdict.trace
    assert first.citation.startswith("Theorem 3.1:")
    assert last.citation.startswith("Theorem 1.11(1):")
    text = explain(verdict)
    assert "Theorem 3.1" in text and "Theorem 1.11(1)" in text


@pytest.mark.parametrize(
    "name, field, theorem",
    [
        ("C7:C3", "C", "Theorem c4.2"),
        ("C8", "Qzeta:8", "Theorem 3.1"),
        ("Q16", "Q", "Example 4.13"),
    ],
)
def test_step_citation_leads_with_theorem(group_of, name, field, theorem) -> None:
    verdict = certify(group_of(name), builtin_field(field))
    assert verdict.trace[0].citation.startswith(f"{theorem}: ")


def test_every_rule_names_its_theorem() -> None:
    assert all(rule.theorem for rule in RULES.values())
    assert RULES["R-NSOLV"].theorem == "Theorem 1.8"
    assert COROLLARY_BY_RULE["R-NSOLV"].startswith("Theorem 1.13:")
    assert COROLLARY_BY_RULE["R-SL25"].startswith("Theorem 1.15:")


# ---------------------------------------------
# Reports
# ---------------------------------------------

def test_explain(group_of) -> None:
    text = explain(certify(group_of("C7:C3"), builtin_field("C")))
    lines = text.splitlines()
    assert lines[0] == "k(C7:C3) over C: RetractRational"
    assert lines[1].startswith("  1. [R-ZK] on G:")
    assert "kernel_order=7" in text


def test_explain_unknown(group_of) -> None:
    text = explain(certify(group_of("SL2(F3)"), builtin_field("Q")))
    assert "Unknown" in text.splitlines()[0]
    assert "No rule applies. Attempts:" in text


def test_replay(group_of) -> None:
    k = builtin_field("Q")
    g = group_of("C17:C8")
    report = replay(g, k, certify(g, k))
    assert report.all_passed, [ch for ch in report.checks if not ch.passed]
    assert [ch.name for ch in report.checks] == ["outcome", "trace", "step_0_N-AB", "step_1_N-DESC"]


def test_replay_detects_tampering(group_of) -> None:
    k = builtin_field("C")
    g = group_of("C7:C3")
    verdict = certify(g, k)
    forged = verdict.model_copy(update={"outcome": Outcome.NOT_RETRACT_RATIONAL})
    report = replay(g, k, forged)
    assert report.result("outcome") is False
    assert not report.all_passed


def test_verdict_needs_trace() -> None:
    with pytest.raises(ValidationError):
        Verdict(group="G", field="Q", outcome=Outcome.RETRACT_RATIONAL)
