# app/operations/bogomolov.py
"""
Module: bogomolov.py

The Bogomolov multiplier B0(G): the classes of H²(G, Q/Z) that restrict to
zero on every bicyclic subgroup (cyclic, or a product of two cyclics).

Functions:
- bicyclic_subgroups(g): every bicyclic subgroup, maximal ones flagged.
- b0(g): the full computation, intersecting restriction kernels.
- b0_sylow_reduction(g, s): B0(G) = 0 from B0 = 0 on the Sylow subgroups of a
  Frobenius kernel.
- b0_zero_criteria(h): the first known sufficient condition for B0(H) = 0 of
  a p-group.
- compute_b0(g, method): dispatch on auto, full, sylow or criteria.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional

from sympy import factorint

from app.core.config import settings
from app.core.errors import NotAComplement, NotAPGroup, OrderCapExceeded
from app.models.group import Group, Subgroup, generate
from app.operations.cohomology import CohomologyModule, h2_qz, restrict
from app.operations.frobenius import FrobeniusStructure, find_frobenius_structures
from app.operations.group_core import cyclic_subgroups, is_abelian, is_cyclic, normal_subgroups, sylow
from app.operations.zlinalg import kernel_mod_n, quotient_module
from app.schemas.invariants import AbelianInvariants
from app.schemas.reports import B0Result

logger = logging.getLogger(__name__)

B0Request = Literal["auto", "full", "sylow", "criteria"]


# ----------------------------------------------------------------------
# Bicyclic subgroups
# ----------------------------------------------------------------------
@dataclass
class Bicyclic:
    subgroup: Subgroup
    is_maximal: bool = False

    @property
    def order(self) -> int:
        return self.subgroup.order


def bicyclic_subgroups(g: Group, cap: Optional[int] = None) -> list[Bicyclic]:
    """
    Every subgroup ``<x, y>`` with ``xy = yx``, deduplicated by element set.

    An abelian group of rank at most two is generated by two commuting
    elements, so this is every bicyclic subgroup. Listed by increasing order.

    Raises:
    - OrderCapExceeded: ``|G|`` above ``cap`` (default ORDER_CAP).
    """
    limit = settings.ORDER_CAP if cap is None else cap
    if g.order > limit:
        raise OrderCapExceeded(f"|{g.name}| = {g.order} exceeds cap {limit}")
    cyclics = cyclic_subgroups(g.elements)
    found: dict[frozenset, Subgroup] = {}
    for x, xs in cyclics:
        found.setdefault(xs, Subgroup(g, [x], _elements=xs))
    for a, (x, xs) in enumerate(cyclics):
        for y, ys in cyclics[a + 1 :]:
            if x * y != y * x or ys <= xs or xs <= ys:
                continue
            elems = frozenset(generate([x, y], g.degree, seed=list(xs)))
            found.setdefault(elems, Subgroup(g, [x, y], _elements=elems))
    subgroups = sorted(found.values(), key=lambda s: (s.order, sorted(g.index(e) for e in s.elements)))
    result = []
    for i, s in enumerate(subgroups):
        maximal = not any(s.order < t.order and s <= t for t in subgroups[i + 1 :])
        result.append(Bicyclic(subgroup=s, is_maximal=maximal))
    logger.debug(
        "%s: %d bicyclic subgroups, %d maximal", g.name, len(result), sum(b.is_maximal for b in result)
    )
    return result


# ----------------------------------------------------------------------
# Full computation
# ----------------------------------------------------------------------
def _restriction_rows(m: CohomologyModule, target: CohomologyModule, a: Subgroup) -> list[list[int]]:
    """
    Rows of the restriction map on the basis of ``m``, scaled to one modulus.

    Row ``j`` asks for coordinate ``j`` in ``target`` (of order ``e_j``) to
    vanish; multiplying it by ``N/e_j`` turns that into a condition mod ``N``.
    """
    n = m.modulus
    columns = [target.coordinates(restrict(rep, a)) for rep in m.basis]
    rows = []
    for j, e in enumerate(target.invariants.factors):
        row = [(n // e) * col[j] % n for col in columns]
        if any(row):
            rows.append(row)
    return rows


def b0(g: Group, cap: Optional[int] = None, maximal_only: bool = True) -> B0Result:
    """
    ``B0(G) = ⋂_A ker(res: H²(G, Q/Z) -> H²(A, Q/Z))`` over the bicyclic ``A``.

    Restriction to a bicyclic subgroup factors through any bicyclic subgroup
    containing it, so only the maximal ones are used unless ``maximal_only``
    is False.

    Raises:
    - CohomologyCapExceeded: ``|G|`` above ``cap`` (default COHOMOLOGY_CAP).
    """
    multiplier = h2_qz(g, cap=cap)
    subgroups = [b.subgroup for b in bicyclic_subgroups(g) if b.is_maximal or not maximal_only]
    kind = "maximal" if maximal_only else "all"
    details = f"{len(subgroups)} {kind} bicyclic subgroups; M(G) = {multiplier.invariants}"
    if multiplier.is_trivial:
        return B0Result(invariants=AbelianInvariants.trivial(), method="full_cocycle", details=details)

    n = multiplier.modulus
    k = len(multiplier.basis)
    rows: list[list[int]] = []
    for a in subgroups:
        if is_cyclic(a.group):
            continue
        target = h2_qz(a.group, modulus=n, cap=cap)
        if not target.is_trivial:
            rows.extend(_restriction_rows(multiplier, target, a))

    orders = multiplier.invariants.factors
    relations = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(orders)]
    if rows:
        kernel = kernel_mod_n(rows, n, cols=k)
    else:
        kernel = [[int(i == j) for j in range(k)] for i in range(k)]
    module = quotient_module(kernel + relations, relations, n, dim=k)
    witnesses = [multiplier.combination(x).table() for x in module.representatives]
    logger.info("B0(%s) = %s", g.name, module.invariants)
    return B0Result(invariants=module.invariants, method="full_cocycle", details=details, witnesses=witnesses)


# ----------------------------------------------------------------------
# Vanishing criteria for p-groups
# ----------------------------------------------------------------------
def _prime_of(h: Group) -> Optional[int]:
    primes = list(factorint(h.order))
    if len(primes) > 1:
        raise NotAPGroup(f"|{h.name}| = {h.order} is not a prime power")
    return primes[0] if primes else None


def _quotient_is_cyclic(h: Group, n: frozenset) -> bool:
    """True when ``H/N`` is cyclic: some ``y`` has ``y^k ∉ N`` for every proper divisor power."""
    index = h.order // len(n)
    if index == 1:
        return True
    for y in h.elements:
        k, z = 1, y
        while z not in n:
            z = z * y
            k += 1
        if k == index:
            return True
    return False


def _is_normal_set(h: Group, elems: frozenset) -> bool:
    return all(s * x * s.inverse() in elems for s in h.generators for x in elems)


def _is_metacyclic(h: Group) -> bool:
    for _, powers in cyclic_subgroups(h.elements):
        if _is_normal_set(h, powers) and _quotient_is_cyclic(h, powers):
            return True
    return False


def _has_bicyclic_complement(h: Group, h0: Subgroup, bicyclics: list[Bicyclic]) -> bool:
    target = h.order // h0.order
    return any(b.order == target and not (b.subgroup.elements & h0.elements) - {h.identity} for b in bicyclics)


def b0_zero_criteria(h: Group) -> Optional[str]:
    """
    The first sufficient condition for ``B0(H) = 0`` that ``H`` meets, or None.

    Checked in order: abelian; metacyclic; a cyclic subgroup of index at most
    p²; an abelian normal subgroup with cyclic quotient; an abelian normal
    subgroup with a bicyclic complement; order at most 32 when p = 2; order at
    most p⁴ when p is odd.

    Raises:
    - NotAPGroup: ``|H|`` has two distinct prime factors.
    """
    p = _prime_of(h)
    if p is None or is_abelian(h):
        return "abelian"
    if _is_metacyclic(h):
        return "metacyclic"
    if max(h.element_orders) * p * p >= h.order:
        return "cyclic_subgroup_index_p2"
    abelian_normal = [n for n in normal_subgroups(h) if not n.is_whole() and is_abelian(n.group)]
    if any(_quotient_is_cyclic(h, n.elements) for n in abelian_normal):
        return "abelian_normal_cyclic_quotient"
    bicyclics = bicyclic_subgroups(h)
    if any(_has_bicyclic_complement(h, n, bicyclics) for n in abelian_normal):
        return "abelian_normal_bicyclic_complement"
    if p == 2 and h.order <= 32:
        return "order_le_32"
    if p > 2 and h.order <= p**4:
        return "order_le_p4"
    return None


# ----------------------------------------------------------------------
# Reduction to Sylow subgroups of a Frobenius kernel
# ----------------------------------------------------------------------
def _sylow_b0_trivial(np_group: Group, cap: Optional[int]) -> Optional[str]:
    """How ``B0(N_p) = 0`` was established, or None."""
    criterion = b0_zero_criteria(np_group)
    if criterion is not None:
        return criterion
    limit = settings.COHOMOLOGY_CAP if cap is None else cap
    if np_group.order <= limit and b0(np_group, cap=cap).is_trivial:
        return "full_cocycle"
    return None


def b0_sylow_reduction(g: Group, s: FrobeniusStructure, cap: Optional[int] = None) -> B0Result:
    """
    ``B0(G) = 0`` when every Sylow subgroup of the Frobenius kernel has ``B0 = 0``.

    Restriction ``B0(G) -> B0(N)`` is injective and ``B0(N)`` embeds in the
    sum of the ``B0(N_p)``. The converse fails, so when a Sylow subgroup is
    not settled the full computation runs if ``|G|`` is within the cohomology
    cap, and the result is unknown otherwise.

    Raises:
    - NotAComplement: ``s`` is a structure of another group.
    """
    if s.group is not g:
        raise NotAComplement("Frobenius structure belongs to a different group")
    kernel = s.kernel.group
    reasons = []
    for p in sorted(factorint(kernel.order)):
        np_group = sylow(kernel, p).group
        reason = _sylow_b0_trivial(np_group, cap)
        if reason is None:
            limit = settings.COHOMOLOGY_CAP if cap is None else cap
            logger.info("%s: B0 of the Sylow %d-subgroup of the kernel is not settled", g.name, p)
            if g.order <= limit:
                return b0(g, cap=cap)
            return B0Result(method="unknown", details=f"B0 of the Sylow {p}-subgroup of the kernel is not settled")
        reasons.append(f"p={p}: {reason}")
    details = f"kernel of order {kernel.order}; " + ", ".join(reasons)
    return B0Result(invariants=AbelianInvariants.trivial(), method="sylow_reduction", details=details)


# ----------------------------------------------------------------------
# Dispatch
# ----------------------------------------------------------------------
def compute_b0(g: Group, method: B0Request = "auto", cap: Optional[int] = None) -> B0Result:
    """
    ``B0(G)`` by the requested method.

    ``auto`` tries the p-group criteria, then the full computation within the
    cohomology cap, then the Frobenius Sylow reduction.
    """
    limit = settings.COHOMOLOGY_CAP if cap is None else cap
    if method == "full":
        return b0(g, cap=cap)
    if method in ("criteria", "auto") and len(factorint(g.order)) <= 1:
        criterion = b0_zero_criteria(g)
        if criterion is not None:
            return B0Result(invariants=AbelianInvariants.trivial(), method="criterion", details=criterion)
        if method == "criteria":
            return B0Result(method="unknown", details="no criterion applies")
    elif method == "criteria":
        return B0Result(method="unknown", details="criteria apply to p-groups only")
    if method == "auto" and g.order <= limit:
        return b0(g, cap=cap)
    structures = find_frobenius_structures(g)
    if not structures:
        return B0Result(method="unknown", details="not a Frobenius group")
    return b0_sylow_reduction(g, structures[0], cap=cap)


__all__ = [
    "Bicyclic",
    "b0",
    "b0_sylow_reduction",
    "b0_zero_criteria",
    "bicyclic_subgroups",
    "compute_b0",
]
