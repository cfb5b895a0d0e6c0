# app/operations/frobenius.py
"""
Module: frobenius.py

Frobenius structure detection.

A Frobenius structure on ``G`` is a pair ``(N, G0)`` with ``N`` a proper
nontrivial normal subgroup, ``G0`` a complement of ``N``, and no nonidentity
element of ``G0`` commuting with a nonidentity element of ``N``.

Functions:
- is_fixed_point_free(n, g0): the defining condition, checked exhaustively.
- find_frobenius_structures(g): every (N, G0), one complement per kernel.
- kernel_by_partition(g, g0): recover N from G0 alone.
- verify_structure_theorems(s): coprimality, kernel shape and complement Sylow shape.
- frobenius_report(g): the above as a serializable report.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from sympy import factorint

from app.core.errors import NotAComplement, NotAFrobeniusComplementInG, TheoremViolation
from app.models.group import Group, Perm, Subgroup, generate
from app.operations.group_core import (
    grow_complement,
    is_abelian,
    is_cyclic,
    is_generalized_quaternion,
    is_nilpotent,
    normal_subgroups,
    sylow,
)
from app.schemas.reports import FrobeniusReport, FrobeniusSummary, StructureChecks

logger = logging.getLogger(__name__)


@dataclass
class FrobeniusStructure:
    """A kernel and complement of ``group`` with the fixed-point-free property."""

    group: Group
    kernel: Subgroup
    complement: Subgroup
    checks: Optional[StructureChecks] = field(default=None)

    @property
    def kernel_abelian(self) -> bool:
        return is_abelian(self.kernel.group)

    def summary(self) -> FrobeniusSummary:
        return FrobeniusSummary(
            kernel_order=self.kernel.order,
            complement_order=self.complement.order,
            kernel_abelian=self.kernel_abelian,
            kernel_generators=[list(x.images) for x in self.kernel.generators],
            complement_generators=[list(x.images) for x in self.complement.generators],
            checks=self.checks,
        )


def _check_complement(n: Subgroup, g0: Subgroup) -> None:
    if n.parent is not g0.parent:
        raise NotAComplement("Kernel and complement live in different groups")
    if n.order * g0.order != n.parent.order or n.intersection(g0).order != 1:
        raise NotAComplement(
            f"Subgroups of orders {n.order} and {g0.order} are not complements in a group of order {n.parent.order}"
        )


def is_fixed_point_free(n: Subgroup, g0: Subgroup) -> bool:
    """
    True when ``g x g⁻¹ ≠ x`` for every ``x ∈ N∖{1}`` and ``g ∈ G0∖{1}``.

    Raises:
    - NotAComplement: ``g0`` is not a complement of ``n``.
    """
    _check_complement(n, g0)
    kernel = [x for x in n.elements if not x.is_identity]
    for g in g0.elements:
        if g.is_identity:
            continue
        for x in kernel:
            if g * x == x * g:
                return False
    return True


def _fixed_point_free_elements(g: Group, n: Subgroup) -> set[Perm]:
    """``{1}`` together with every element outside ``N`` centralizing no nonidentity element of ``N``."""
    kernel = [x for x in n.elements if not x.is_identity]
    allowed = {g.identity}
    # C_N(h g h⁻¹) = h C_N(g) h⁻¹, so one test per conjugacy class
    for cls in g.conjugacy_classes:
        rep = cls[0]
        if rep in n.elements:
            continue
        if all(rep * x != x * rep for x in kernel):
            allowed.update(cls)
    return allowed


def find_frobenius_structures(g: Group) -> list[FrobeniusStructure]:
    """
    Every Frobenius structure of ``g``; empty when ``g`` is not a Frobenius group.

    All complements of a Frobenius kernel are conjugate, so one complement is
    reported per kernel.
    """
    structures = []
    for n in normal_subgroups(g):
        if n.is_trivial() or n.is_whole():
            continue
        allowed = _fixed_point_free_elements(g, n)
        if len(allowed) < g.order // n.order:
            continue
        g0 = grow_complement(g, n, allowed)
        if g0 is None or not is_fixed_point_free(n, g0):
            continue
        structure = FrobeniusStructure(group=g, kernel=n, complement=g0)
        structure.checks = verify_structure_theorems(structure)
        structures.append(structure)
        logger.info("%s: Frobenius kernel of order %d, complement of order %d", g.name, n.order, g0.order)
    return structures


def kernel_by_partition(g: Group, g0: Subgroup) -> Subgroup:
    """
    ``{1} ∪ (G ∖ ⋃ x(G0∖{1})x⁻¹)``, checked to be a subgroup of order ``|G|/|G0|``.

    Raises:
    - NotAFrobeniusComplementInG: the remaining set is not a subgroup of that order.
    """
    if g0.order <= 1 or g0.order == g.order or g.order % g0.order:
        raise NotAFrobeniusComplementInG(f"A subgroup of order {g0.order} cannot be a Frobenius complement")
    covered = set()
    for cls in g.conjugacy_classes:
        if any(x in g0.elements for x in cls if not x.is_identity):
            covered.update(cls)
    covered.discard(g.identity)
    rest = [x for x in g.elements if x not in covered]
    target = g.order // g0.order
    if len(rest) != target:
        raise NotAFrobeniusComplementInG(f"Partition leaves {len(rest)} elements, expected {target}")
    members = set(rest)
    gens: list[Perm] = []
    current = [g.identity]
    reached = set(current)
    for x in rest:
        if x in reached:
            continue
        gens.append(x)
        current = generate(gens, g.degree, limit=target, seed=current)
        if current is None or not members.issuperset(current):
            raise NotAFrobeniusComplementInG("The partition kernel is not closed under multiplication")
        reached = set(current)
    return Subgroup(g, gens, _elements=frozenset(current))


def _sylow_shapes_ok(h: Group) -> bool:
    for p in factorint(h.order):
        s = sylow(h, p).group
        if not (is_cyclic(s) or (p == 2 and is_generalized_quaternion(s))):
            return False
    return True


def verify_structure_theorems(s: FrobeniusStructure) -> StructureChecks:
    """
    Necessary conditions every Frobenius structure satisfies.

    Raises:
    - TheoremViolation: one of the conditions fails, which means ``s`` was not
      a genuine Frobenius structure.
    """
    kernel, complement = s.kernel.group, s.complement.group
    checks = StructureChecks(
        coprime_orders=gcd(kernel.order, complement.order) == 1,
        even_complement_implies_abelian_kernel=complement.order % 2 == 1 or is_abelian(kernel),
        kernel_nilpotent=is_nilpotent(kernel),
        complement_sylow_shapes=_sylow_shapes_ok(complement),
    )
    if not checks.all_true:
        failed = [name for name, ok in checks.model_dump().items() if not ok]
        raise TheoremViolation(f"Frobenius structure on {s.group.name} fails: {', '.join(failed)}")
    return checks


def frobenius_report(g: Group) -> FrobeniusReport:
    structures = find_frobenius_structures(g)
    return FrobeniusReport(group=g.name, order=g.order, structures=[s.summary() for s in structures])
