# app/operations/verification.py
"""
Module: verification.py

The verification suite behind ``verify``: explicit matrix checks for
the binary icosahedral group, G+ and the two faithful representations, plus
consistency suites over a corpus of small groups for Frobenius detection,
GZ recognition, the complement criterion and the rationality rules.

Every suite returns a ``VerificationReport``; one failed check never stops
the rest.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, Optional

from app.core.errors import ToolkitError
from app.models.fields import builtin_field
from app.models.group import Group
from app.operations import constructors as c
from app.operations.frobenius import find_frobenius_structures, kernel_by_partition
from app.operations.group_core import direct_product
from app.operations.gz_classify import (
    abelian_subgroups_cyclic,
    frobenius_complement_criterion,
    is_gz_group,
    satisfies_p2_conditions,
)
from app.operations.rationality import certify
from app.schemas.reports import Outcome, VerificationReport

logger = logging.getLogger(__name__)


def _product(a: c.ConstructedGroup, b: c.ConstructedGroup, name: str) -> Group:
    return direct_product(a.group, b.group, name=name).group


def _c3c3_c4() -> Group:
    cg = c.linear_semidirect(3, [[[0, -1], [1, 0]]], name="(C3xC3):C4")
    return cg.group


CORPUS: dict[str, Callable[[], Group]] = {
    "C2": lambda: c.cyclic(2).group,
    "C3": lambda: c.cyclic(3).group,
    "C4": lambda: c.cyclic(4).group,
    "C6": lambda: c.cyclic(6).group,
    "C8": lambda: c.cyclic(8).group,
    "C2xC2": lambda: c.abelian([2, 2]).group,
    "C3xC3": lambda: c.abelian([3, 3]).group,
    "C2xC4": lambda: c.abelian([2, 4]).group,
    "S3": lambda: c.metacyclic(3, 2, 2).group,
    "D4": lambda: c.dihedral(4).group,
    "D5": lambda: c.metacyclic(5, 2, 4).group,
    "D6": lambda: c.dihedral(6).group,
    "Q8": lambda: c.quaternion_generalized(8).group,
    "Q16": lambda: c.quaternion_generalized(16).group,
    "A4": lambda: c.alternating(4).group,
    "S4": lambda: c.symmetric(4).group,
    "SL2(F3)": lambda: c.sl2(3).group,
    "C7:C3": lambda: c.metacyclic(7, 3, 2).group,
    "C11:C5": lambda: c.metacyclic(11, 5, 3).group,
    "C17:C8": lambda: c.metacyclic(17, 8, 2).group,
    "(C3xC3):C4": _c3c3_c4,
}

# names of the corpus groups that are Frobenius groups
FROBENIUS = {"S3", "D5", "A4", "C7:C3", "C11:C5", "C17:C8", "(C3xC3):C4"}


def corpus(names: Optional[Iterable[str]] = None) -> dict[str, Group]:
    """Build the named corpus groups, all of them by default."""
    selected = list(CORPUS) if names is None else list(names)
    groups = {}
    for name in selected:
        g = CORPUS[name]()
        g.name = name
        groups[name] = g
    return groups


# ----------------------------------------------------------------------
# Corpus suites
# ----------------------------------------------------------------------
def frobenius_suite(groups: dict[str, Group]) -> VerificationReport:
    """Detected structures pass the structure checks and agree with the partition kernel."""
    report = VerificationReport(subject="Frobenius structures over the corpus")
    for name, g in groups.items():
        try:
            structures = find_frobenius_structures(g)
        except ToolkitError as exc:
            report.add(f"{name}_detect", False, f"{type(exc).__name__}: {exc}")
            continue
        if name in FROBENIUS or not structures:
            report.add(f"{name}_detect", bool(structures) == (name in FROBENIUS), f"{len(structures)} structures")
        for s in structures:
            report.add(f"{name}_structure_checks", s.checks is not None and s.checks.all_true)
            report.run(f"{name}_partition_kernel", lambda: kernel_by_partition(g, s.complement) == s.kernel)
    return report


def gz_suite(groups: dict[str, Group]) -> VerificationReport:
    """Sylow shapes, cyclic abelian subgroups and the p²-conditions agree."""
    report = VerificationReport(subject="GZ recognition over the corpus")
    for name, g in groups.items():

        def agree() -> bool:
            verdicts = {is_gz_group(g), abelian_subgroups_cyclic(g), satisfies_p2_conditions(g)}
            return len(verdicts) == 1

        report.run(f"{name}_gz_equivalence", agree)
    return report


def criterion_groups() -> dict[str, tuple[Group, bool]]:
    """Groups with the expected outcome of the complement criterion."""
    groups = {name: (g, True) for name, g in corpus(["C2", "C3", "C4", "Q8", "SL2(F3)"]).items()}
    groups.update({name: (g, False) for name, g in corpus(["S3", "A4", "C2xC2"]).items()})
    groups["SL2(F5)"] = (c.sl2(5).group, True)
    groups["C7xSL2(F5)"] = (_product(c.cyclic(7), c.sl2(5), "C7xSL2(F5)"), True)
    return groups


def criterion_suite(groups: Optional[dict[str, tuple[Group, bool]]] = None) -> VerificationReport:
    report = VerificationReport(subject="Frobenius complement criterion")
    for name, (g, expected) in (groups or criterion_groups()).items():
        report.run(f"{name}_criterion", lambda: frobenius_complement_criterion(g).is_frobenius_complement == expected)
    return report


def rationality_cases(include_slow: bool = True) -> list[tuple[str, Callable[[], Group], str, Outcome, list[str]]]:
    """Worked examples: (label, group builder, field, expected outcome, expected rule sequence)."""
    cases = [
        ("C17:C8 over Q", CORPUS["C17:C8"], "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-AB", "N-DESC"]),
        ("C7:C3 over C", CORPUS["C7:C3"], "C", Outcome.RETRACT_RATIONAL, ["R-ZK"]),
        ("C8 over Q", CORPUS["C8"], "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-AB"]),
        ("C8 over Q(zeta_8)", CORPUS["C8"], "Qzeta:8", Outcome.RETRACT_RATIONAL, ["R-AB"]),
        ("Q16 over Q", CORPUS["Q16"], "Q", Outcome.NOT_RETRACT_RATIONAL, ["N-SERRE"]),
    ]
    if include_slow:
        cases.append(
            ("F11^2:SL2(F5) over Q", lambda: c.frobenius_sl25().group, "Q", Outcome.RETRACT_RATIONAL, ["R-SL25"])
        )
    return cases


def rationality_suite(include_slow: bool = True) -> VerificationReport:
    report = VerificationReport(subject="rationality rules on worked examples")
    for label, build, field, expected, rules in rationality_cases(include_slow):

        def check() -> bool:
            verdict = certify(build(), builtin_field(field))
            return verdict.outcome == expected and [step.rule for step in verdict.trace] == rules

        report.run(label, check)
    return report


# ----------------------------------------------------------------------
# Driver
# ----------------------------------------------------------------------
def verify_all(include_slow: bool = True, q: Optional[int] = None, zeta: Optional[int] = None) -> list[VerificationReport]:
    """Run every suite; ``include_slow`` adds the order-14520 Frobenius example."""
    groups = corpus()
    reports = [
        c.verify_binary_icosahedral(q, zeta),
        c.verify_g_plus(),
        c.verify_representations(1),
        c.verify_representations(2),
        frobenius_suite(groups),
        gz_suite(groups),
        criterion_suite(),
        rationality_suite(include_slow),
    ]
    failed = [r.subject for r in reports if not r.all_passed]
    logger.info("verify: %d suites, %d failing", len(reports), len(failed))
    return reports


__all__ = [
    "CORPUS",
    "FROBENIUS",
    "corpus",
    "criterion_suite",
    "frobenius_suite",
    "gz_suite",
    "rationality_suite",
    "verify_all",
]
