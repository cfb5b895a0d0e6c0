# app/operations/rationality.py
"""
Module: rationality.py

Retract rationality of ``k(G)`` by forward chaining over known theorems.

Every rule pairs a premise check, run against computed facts about a group,
with the conclusion the corresponding theorem licenses. Negative rules run
first, then positive rules from the most specific to the most general. When no
rule fires the verdict is Unknown: the theorems are sufficient conditions and
the engine never guesses past them.

Functions:
- certify(g, k): a Verdict with its proof trace and corollary notes.
- explain(v): the verdict as a text report.
- replay(g, k, v): re-check every trace step against a fresh analysis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Optional, Union

from app.core.config import settings
from app.core.errors import FieldNotInfinite, NotACentralExtension, NotNonsolvableGZ
from app.models.fields import Answer, FieldModel
from app.models.group import Group, Subgroup
from app.operations.constructors import double_cover_type, symmetric
from app.operations.frobenius import FrobeniusStructure, find_frobenius_structures
from app.operations.group_core import (
    derived_series,
    grow_complement,
    is_abelian,
    is_generalized_quaternion,
    is_isomorphic,
    is_solvable,
    normal_subgroups,
    p_part,
    quotient,
)
from app.operations.gz_classify import classify_nonsolvable_gz, is_gz_group, is_z_group
from app.schemas.reports import Outcome, RuleAttempt, TraceStep, Verdict, VerificationReport

logger = logging.getLogger(__name__)

SL2_F5_ORDER = 120

Premise = Union[str, dict]


# ----------------------------------------------------------------------
# Facts about one group
# ----------------------------------------------------------------------
class GroupFacts:
    """Lazily computed properties of ``group``, addressed in traces by ``label``."""

    def __init__(self, group: Group, label: str):
        self.group = group
        self.label = label

    @cached_property
    def abelian(self) -> bool:
        return is_abelian(self.group)

    @cached_property
    def solvable(self) -> bool:
        return is_solvable(self.group)

    @cached_property
    def exponent(self) -> int:
        return self.group.exponent

    @cached_property
    def u(self) -> int:
        """``2^u`` is the 2-part of the exponent."""
        return p_part(self.exponent, 2).bit_length() - 1

    @cached_property
    def l(self) -> int:
        """``3^l`` is the 3-part of the exponent."""
        part, l = p_part(self.exponent, 3), 0
        while part > 1:
            part //= 3
            l += 1
        return l

    @cached_property
    def frobenius(self) -> Optional[FrobeniusStructure]:
        if self.group.order < 6:
            return None
        structures = find_frobenius_structures(self.group)
        return structures[0] if structures else None

    @cached_property
    def gz(self) -> bool:
        return is_gz_group(self.group)

    @cached_property
    def z_group(self) -> bool:
        return is_z_group(self.group)

    @cached_property
    def nonsolvable_type(self) -> Optional[tuple[str, int]]:
        """``(tag, |L|)`` for a non-solvable GZ-group with perfect core ``L``."""
        if self.solvable or not self.gz:
            return None
        try:
            tag, _ = classify_nonsolvable_gz(self.group)
        except NotNonsolvableGZ:
            return None
        return tag, derived_series(self.group)[-1].order

    @cached_property
    def is_double_cover_s5(self) -> bool:
        """``G ≅ Ŝ5``: center of order 2, ``G/Z ≅ S5`` and transpositions lifting to order 4."""
        g = self.group
        if g.order != 240 or self.solvable:
            return False
        center = g.center
        if center.order != 2:
            return False
        quo = quotient(g, center)
        iso = is_isomorphic(quo.group, symmetric(5).group)
        if not iso:
            return False
        z = next(x for x in center.elements if not x.is_identity)
        try:
            return double_cover_type(g, z, lambda x: iso.mapping[quo.project(x)]) == "hat"
        except NotACentralExtension:
            return False

    @cached_property
    def is_q16(self) -> bool:
        return self.group.order == 16 and is_generalized_quaternion(self.group)

    @cached_property
    def normal(self) -> list[Subgroup]:
        return [n for n in normal_subgroups(self.group) if not n.is_trivial() and not n.is_whole()]

    @cached_property
    def decompositions(self) -> list[tuple[Subgroup, Subgroup]]:
        """``(N, G0)`` with ``N`` normal and ``G0`` a complement found by greedy search."""
        found = []
        for n in self.normal:
            g0 = grow_complement(self.group, n)
            if g0 is not None:
                found.append((n, g0))
        return found

    @cached_property
    def direct_factors(self) -> list[tuple[Subgroup, Subgroup]]:
        found = []
        for i, a in enumerate(self.normal):
            for b in self.normal[i + 1 :]:
                if a.order * b.order == self.group.order and a.intersection(b).is_trivial():
                    found.append((a, b))
        return found


# ----------------------------------------------------------------------
# Local premises
# ----------------------------------------------------------------------
def _ccext(k: FieldModel, r: int) -> bool:
    return k.characteristic == 2 or k.cyclic_cyclotomic_ext(r) == Answer.YES


def _zeta_premise(f: GroupFacts, k: FieldModel) -> Premise:
    if k.characteristic in (2, 3):
        return f"char k = {k.characteristic}"
    u_prime = max(f.u, 3)
    if k.contains_zeta(2**u_prime) != Answer.YES:
        return f"zeta_{2 ** u_prime} not known to lie in k"
    if k.contains_zeta(3**f.l) != Answer.YES:
        return f"zeta_{3 ** f.l} not known to lie in k"
    return {"exponent": f.exponent, "u_prime": u_prime, "l": f.l, "char": k.characteristic}


def _n_ab(f: GroupFacts, k: FieldModel) -> Premise:
    if not f.abelian:
        return "not abelian"
    if k.characteristic == 2:
        return "char k = 2"
    if k.cyclic_cyclotomic_ext(f.u) != Answer.NO:
        return f"k(zeta_{2 ** f.u})/k not known to be non-cyclic"
    return {"exponent": f.exponent, "r": f.u, "char": k.characteristic}


def _n_serre(f: GroupFacts, k: FieldModel) -> Premise:
    if k.kind != "Q":
        return "k is not Q"
    if f.is_double_cover_s5:
        return {"group": "double cover of S5 with transpositions lifting to order 4", "order": 240}
    if f.is_q16:
        return {"group": "generalized quaternion of order 16", "order": 16}
    return "neither the order-4-transposition double cover of S5 nor Q16"


def _frobenius_premise(f: GroupFacts) -> Union[str, FrobeniusStructure]:
    return f.frobenius if f.frobenius is not None else "not a Frobenius group"


def _r_zk(f: GroupFacts, k: FieldModel) -> Premise:
    s = _frobenius_premise(f)
    if isinstance(s, str):
        return s
    if not s.kernel_abelian:
        return "Frobenius kernel not abelian"
    if not is_z_group(s.complement.group):
        return "complement is not a Z-group"
    if not _ccext(k, f.u):
        return f"k(zeta_{2 ** f.u})/k not known to be cyclic"
    return {"kernel_order": s.kernel.order, "complement_order": s.complement.order, "r": f.u, "char": k.characteristic}


def _r_sl25(f: GroupFacts, k: FieldModel) -> Premise:
    s = _frobenius_premise(f)
    if isinstance(s, str):
        return s
    if k.characteristic != 0:
        return "char k is not 0"
    complement = GroupFacts(s.complement.group, f"{f.label}.G0")
    if complement.nonsolvable_type != ("NS-I", SL2_F5_ORDER):
        return "complement is not a Z-group times SL2(F5)"
    return {"kernel_order": s.kernel.order, "complement_order": s.complement.order}


def _r_nsolv(f: GroupFacts, k: FieldModel) -> Premise:
    s = _frobenius_premise(f)
    if isinstance(s, str):
        return s
    if f.solvable:
        return "solvable"
    if k.characteristic not in (0, 2):
        return f"char k = {k.characteristic}"
    if not _ccext(k, 3):
        return "k(zeta_8)/k not known to be cyclic"
    return {"kernel_order": s.kernel.order, "complement_order": s.complement.order, "char": k.characteristic}


def _r_solv(f: GroupFacts, k: FieldModel) -> Premise:
    s = _frobenius_premise(f)
    if isinstance(s, str):
        return s
    if not f.solvable:
        return "not solvable"
    if not s.kernel_abelian:
        return "Frobenius kernel not abelian"
    bindings = _zeta_premise(f, k)
    if isinstance(bindings, dict):
        bindings["kernel_order"] = s.kernel.order
    return bindings


def _r_gz(f: GroupFacts, k: FieldModel) -> Premise:
    if not f.solvable:
        return "not solvable"
    if not f.gz:
        return "not a GZ-group"
    return _zeta_premise(f, k)


def _r_nsi(f: GroupFacts, k: FieldModel) -> Premise:
    if f.nonsolvable_type != ("NS-I", SL2_F5_ORDER):
        return "not a Z-group times SL2(F5)"
    p = k.characteristic
    if p not in (0, 2) and p % 5 not in (1, 4):
        return f"char k = {p} is not 0, 2 or ±1 mod 5"
    return {"order": f.group.order, "char": p}


def _r_nsii(f: GroupFacts, k: FieldModel) -> Premise:
    if f.nonsolvable_type != ("NS-II", SL2_F5_ORDER):
        return "not a non-solvable GZ-group of the second kind over F5"
    if k.characteristic == 2:
        return {"order": f.group.order, "char": 2}
    if k.characteristic != 0:
        return f"char k = {k.characteristic}"
    if k.cyclic_cyclotomic_ext(3) != Answer.YES:
        return "k(zeta_8)/k not known to be cyclic"
    return {"order": f.group.order, "char": 0}


def _r_ab(f: GroupFacts, k: FieldModel) -> Premise:
    if not f.abelian:
        return "not abelian"
    if not _ccext(k, f.u):
        return f"k(zeta_{2 ** f.u})/k not known to be cyclic"
    return {"exponent": f.exponent, "r": f.u, "char": k.characteristic}


@dataclass(frozen=True)
class Rule:
    id: str
    theorem: str
    citation: str
    outcome: Outcome
    premise: Optional[Callable[[GroupFacts, FieldModel], Premise]] = None
    note: Optional[str] = None


RULES: dict[str, Rule] = {
    rule.id: rule
    for rule in [
        Rule(
            "N-AB",
            "Theorem 3.1",
            "for abelian G with 2-part 2^r of exp(G), k(G) is retract rational only if char k = 2 or k(zeta_2^r)/k is cyclic",
            Outcome.NOT_RETRACT_RATIONAL,
            _n_ab,
        ),
        Rule(
            "N-SERRE",
            "Example 4.13",
            "Q(G) is not retract Q-rational for the double cover of S5 with order-4 transposition lifts, nor for Q16",
            Outcome.NOT_RETRACT_RATIONAL,
            _n_serre,
        ),
        Rule(
            "N-DESC",
            "Theorem 1.11(1)",
            "if k(N ⋊ G0) is retract k-rational then so is k(G0)",
            Outcome.NOT_RETRACT_RATIONAL,
        ),
        Rule(
            "R-ZK",
            "Theorem c4.2",
            "a Frobenius group with Z-group complement and abelian kernel is retract rational when char k = 2 or k(zeta_2^r)/k is cyclic",
            Outcome.RETRACT_RATIONAL,
            _r_zk,
        ),
        Rule(
            "R-SL25",
            "Theorem 1.14",
            "a Frobenius group whose complement is a Z-group times SL2(F5) is retract rational over fields of characteristic 0",
            Outcome.RETRACT_RATIONAL,
            _r_sl25,
        ),
        Rule(
            "R-NSOLV",
            "Theorem 1.8",
            "a non-solvable Frobenius group is retract rational when char k is 0 or 2 and k(zeta_8)/k is cyclic",
            Outcome.RETRACT_RATIONAL,
            _r_nsolv,
        ),
        Rule(
            "R-SOLV",
            "Theorem 1.9",
            "a solvable Frobenius group with abelian kernel is retract rational when char k is not 2 or 3 and zeta_2^u', zeta_3^l lie in k",
            Outcome.RETRACT_RATIONAL,
            _r_solv,
        ),
        Rule(
            "R-GZ",
            "Theorem 4.8",
            "a solvable GZ-group of exponent 2^u 3^l t is retract rational when char k is not 2 or 3 and zeta_2^u', zeta_3^l lie in k",
            Outcome.RETRACT_RATIONAL,
            _r_gz,
        ),
        Rule(
            "R-NSI",
            "Theorem 4.11",
            "H × SL2(F5) with H a Z-group is retract rational when char k is 0, 2 or ±1 mod 5",
            Outcome.RETRACT_RATIONAL,
            _r_nsi,
            note="k(SL2(F5)) is k-rational",
        ),
        Rule(
            "R-NSII",
            "Theorem 4.12",
            "a non-solvable GZ-group of the second kind over F5 is retract rational when char k = 2, or char k = 0 with k(zeta_8)/k cyclic",
            Outcome.RETRACT_RATIONAL,
            _r_nsii,
            note="k(G+) is k-rational",
        ),
        Rule(
            "R-AB",
            "Theorem 3.1",
            "for abelian G with 2-part 2^r of exp(G), k(G) is retract rational if char k = 2 or k(zeta_2^r)/k is cyclic",
            Outcome.RETRACT_RATIONAL,
            _r_ab,
        ),
        Rule("R-PROD", "Theorem 3.2(1)", "k(G1 × G2) is retract rational when k(G1) and k(G2) are", Outcome.RETRACT_RATIONAL),
        Rule(
            "R-SEMI",
            "Theorem 1.11(2)",
            "k(N ⋊ G0) with N abelian and gcd(|N|, |G0|) = 1 is retract rational when k(N) and k(G0) are",
            Outcome.RETRACT_RATIONAL,
        ),
    ]
}

NEGATIVE_RULES = ["N-AB", "N-SERRE"]
POSITIVE_RULES = ["R-AB", "R-ZK", "R-SL25", "R-NSOLV", "R-SOLV", "R-GZ", "R-NSI", "R-NSII"]

COROLLARY_NUMBER_FIELD = (
    "Theorem 1.12: k is a number field, so Hilbert irreducibility holds: there is a Galois extension of k with group G"
)
COROLLARY_BY_RULE = {
    "R-NSOLV": "Theorem 1.13: every non-solvable Frobenius group occurs as a Galois group over k",
    "R-SL25": "Theorem 1.15: there is a Galois extension K/k with Gal(K/k) isomorphic to G",
}


# ----------------------------------------------------------------------
# Engine
# ----------------------------------------------------------------------
Proof = list[TraceStep]


class RationalityEngine:
    """Forward chaining over ``RULES`` for one field, with per-subject memoization."""

    def __init__(self, field: FieldModel, depth: Optional[int] = None):
        if not field.is_infinite:
            raise FieldNotInfinite(f"{field.name} is finite; retract rationality needs an infinite field")
        self.field = field
        self.depth = settings.CHAIN_DEPTH if depth is None else depth
        self.subjects: dict[str, GroupFacts] = {}
        self.parts: dict[str, tuple[str, ...]] = {}
        self.attempts: list[RuleAttempt] = []
        self._negative: dict[tuple[str, int], Optional[Proof]] = {}
        self._positive: dict[tuple[str, int], Optional[Proof]] = {}

    def facts(self, g: Group, label: str) -> GroupFacts:
        if label not in self.subjects:
            self.subjects[label] = GroupFacts(g, label)
        return self.subjects[label]

    def _step(self, rule_id: str, f: GroupFacts, bindings: dict) -> TraceStep:
        rule = RULES[rule_id]
        outcome = rule.outcome.value
        return TraceStep(
            rule=rule_id,
            citation=f"{rule.theorem}: {rule.citation}",
            subject=f.label,
            outcome=outcome,
            bindings=bindings,
            note=rule.note,
        )

    def _try(self, rule_id: str, f: GroupFacts) -> Optional[Proof]:
        result = RULES[rule_id].premise(f, self.field)
        if isinstance(result, str):
            self.attempts.append(RuleAttempt(rule=rule_id, subject=f.label, failed_premise=result))
            return None
        return [self._step(rule_id, f, result)]

    def _complement_label(self, f: GroupFacts, i: int) -> str:
        return f"{f.label}.G0_{i}"

    def negative(self, f: GroupFacts, depth: int) -> Optional[Proof]:
        """A proof that ``k(G)`` is not retract rational, or None."""
        key = (f.label, depth)
        if key not in self._negative:
            self._negative[key] = self._negative_uncached(f, depth)
        return self._negative[key]

    def _negative_uncached(self, f: GroupFacts, depth: int) -> Optional[Proof]:
        for rule_id in NEGATIVE_RULES:
            proof = self._try(rule_id, f)
            if proof:
                return proof
        if depth <= 0:
            return None
        for i, (n, g0) in enumerate(f.decompositions):
            sub = self.facts(g0.group, self._complement_label(f, i))
            proof = self.negative(sub, depth - 1)
            if proof:
                self.parts[f.label] = (sub.label,)
                bindings = {"kernel_order": n.order, "complement": sub.label, "complement_order": g0.order}
                return proof + [self._step("N-DESC", f, bindings)]
        self.attempts.append(RuleAttempt(rule="N-DESC", subject=f.label, failed_premise="no complement is certified"))
        return None

    def positive(self, f: GroupFacts, depth: int) -> Optional[Proof]:
        """A proof that ``k(G)`` is retract rational, or None."""
        key = (f.label, depth)
        if key not in self._positive:
            self._positive[key] = self._positive_uncached(f, depth)
        return self._positive[key]

    def _positive_uncached(self, f: GroupFacts, depth: int) -> Optional[Proof]:
        for rule_id in POSITIVE_RULES:
            proof = self._try(rule_id, f)
            if proof:
                return proof
        if depth <= 0:
            return None
        for i, (a, b) in enumerate(f.direct_factors):
            left = self.facts(a.group, f"{f.label}.F{i}a")
            right = self.facts(b.group, f"{f.label}.F{i}b")
            proof_a = self.positive(left, depth - 1)
            proof_b = proof_a and self.positive(right, depth - 1)
            if proof_a and proof_b:
                self.parts[f.label] = (left.label, right.label)
                bindings = {"factors": [left.label, right.label], "orders": [a.order, b.order]}
                return proof_a + proof_b + [self._step("R-PROD", f, bindings)]
        self.attempts.append(RuleAttempt(rule="R-PROD", subject=f.label, failed_premise="no certified direct decomposition"))
        for i, (n, g0) in enumerate(f.decompositions):
            if gcd(n.order, g0.order) != 1 or not is_abelian(n.group):
                continue
            kernel = self.facts(n.group, f"{f.label}.N_{i}")
            sub = self.facts(g0.group, self._complement_label(f, i))
            proof_n = self.positive(kernel, depth - 1)
            proof_g0 = proof_n and self.positive(sub, depth - 1)
            if proof_n and proof_g0:
                self.parts[f.label] = (kernel.label, sub.label)
                bindings = {"kernel": kernel.label, "complement": sub.label, "orders": [n.order, g0.order]}
                return proof_n + proof_g0 + [self._step("R-SEMI", f, bindings)]
        self.attempts.append(
            RuleAttempt(rule="R-SEMI", subject=f.label, failed_premise="no certified coprime abelian-kernel decomposition")
        )
        return None

    def certify(self, g: Group) -> Verdict:
        f = self.facts(g, "G")
        outcome, trace = Outcome.UNKNOWN, []
        proof = self.negative(f, self.depth)
        if proof:
            outcome, trace = Outcome.NOT_RETRACT_RATIONAL, proof
        else:
            proof = self.positive(f, self.depth)
            if proof:
                outcome, trace = Outcome.RETRACT_RATIONAL, proof
        corollaries = []
        if outcome == Outcome.RETRACT_RATIONAL and self.field.is_number_field:
            corollaries.append(COROLLARY_NUMBER_FIELD)
            if trace[-1].rule in COROLLARY_BY_RULE:
                corollaries.append(COROLLARY_BY_RULE[trace[-1].rule])
        attempts = [a for a in self.attempts if a.subject == "G"] if outcome == Outcome.UNKNOWN else []
        logger.info("%s over %s: %s", g.name, self.field.name, outcome.value)
        return Verdict(
            group=g.name,
            field=self.field.name,
            outcome=outcome,
            trace=trace,
            corollaries=corollaries,
            attempts=attempts,
        )


def certify(g: Group, k: FieldModel, depth: Optional[int] = None) -> Verdict:
    """
    Decide retract rationality of ``k(G)`` where a known theorem applies.

    Raises:
    - FieldNotInfinite: ``k`` is a finite field.
    """
    return RationalityEngine(k, depth).certify(g)


# ----------------------------------------------------------------------
# Reports and replay
# ----------------------------------------------------------------------
def _format_bindings(bindings: dict) -> str:
    return ", ".join(f"{key}={value}" for key, value in bindings.items())


def explain(v: Verdict) -> str:
    lines = [f"k({v.group}) over {v.field}: {v.outcome.value}"]
    for i, step in enumerate(v.trace, 1):
        lines.append(f"  {i}. [{step.rule}] on {step.subject}: {step.citation}")
        if step.bindings:
            lines.append(f"       with {_format_bindings(step.bindings)}")
        if step.note:
            lines.append(f"       note: {step.note}")
    if v.corollaries:
        lines.append("Corollaries:")
        lines.extend(f"  - {c}" for c in v.corollaries)
    if v.outcome == Outcome.UNKNOWN:
        lines.append("No rule applies. Attempts:")
        lines.extend(f"  - {a.rule} on {a.subject}: {a.failed_premise}" for a in v.attempts)
    return "\n".join(lines)


def replay(g: Group, k: FieldModel, v: Verdict) -> VerificationReport:
    """
    Re-derive ``v`` from scratch and re-check each step's premises.

    Composite steps (N-DESC, R-PROD, R-SEMI) are checked by finding every part
    they rely on proved earlier in the trace with the required outcome.
    """
    engine = RationalityEngine(k)
    fresh = engine.certify(g)
    report = VerificationReport(subject=f"replay of {v.group} over {v.field}")
    report.add("outcome", fresh.outcome == v.outcome, f"{fresh.outcome.value} vs {v.outcome.value}")
    report.add("trace", fresh.trace == v.trace)
    proved: dict[str, str] = {}
    for i, step in enumerate(v.trace):
        name = f"step_{i}_{step.rule}"
        f = engine.subjects.get(step.subject)
        if f is None:
            report.add(name, False, f"unknown subject {step.subject}")
            continue
        rule = RULES.get(step.rule)
        if rule is None:
            report.add(name, False, f"unknown rule {step.rule}")
            continue
        if rule.premise is not None:
            result = rule.premise(f, k)
            report.add(name, result == step.bindings, result if isinstance(result, str) else "")
        else:
            parts = engine.parts.get(step.subject, ())
            ok = bool(parts) and all(proved.get(p) == step.outcome for p in parts)
            report.add(name, ok, ", ".join(parts))
        proved[step.subject] = step.outcome
    return report


__all__ = [
    "GroupFacts",
    "RULES",
    "RationalityEngine",
    "Rule",
    "certify",
    "explain",
    "replay",
]
