# app/operations/cohomology.py
"""
Module: cohomology.py

Trivial-coefficient cohomology of finite permutation groups.

Functions:
- hom_to_cyclic(g, n): every homomorphism G -> Z/n, as value tuples over g.elements.
- h2_mod_n(g, n): H²(G, Z/n) with normalized cocycle representatives.
- h2_qz(g): H²(G, Q/Z), the Schur multiplier, modelled inside H²(G, Z/|G|).
- restrict(cls, a): restriction of a cocycle to a subgroup.
- cohomology_summary(m): the serializable part of a module.

Cocycles are solved in generator coordinates. A normalized cocycle f is
determined by the values f(x, s) for x in G and s in a generating set S,
because f(g, h·s) = f(g, h) + f(g·h, s) - f(h, s); that recursion, run along a
Schreier tree, writes every f(g, w) as a linear form in the f(x, s). A family
of values is a cocycle exactly when the recursion agrees on the non-tree
edges. Coboundaries are spanned by δc(g, h) = c(g) + c(h) - c(gh).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Optional

import numpy as np

from app.core.config import settings
from app.core.errors import BadModulus, CohomologyCapExceeded, ElementNotInGroup
from app.models.group import Group, Subgroup
from app.operations.group_core import edge_relations, schreier_tree, small_generating_set, tree_words
from app.operations.zlinalg import SubquotientModule, kernel_mod_n, quotient_module
from app.schemas.invariants import AbelianInvariants
from app.schemas.reports import CohomologySummary

logger = logging.getLogger(__name__)

ModuleKind = Literal["H2_mod_n", "H2_QZ_model"]


# ----------------------------------------------------------------------
# Cocycles
# ----------------------------------------------------------------------
@dataclass
class CocycleVector:
    """
    A normalized 2-cochain ``f: G × G -> Z/n``.

    ``values[i, j]`` is ``f(elements[i], elements[j])``; row and column 0
    (the identity) are zero.
    """

    group: Group
    modulus: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.int64) % self.modulus

    def __call__(self, x, y) -> int:
        return int(self.values[self.group.index(x), self.group.index(y)])

    def __add__(self, other: "CocycleVector") -> "CocycleVector":
        if other.group is not self.group or other.modulus != self.modulus:
            raise ValueError("Cochains over different groups or moduli cannot be added")
        return CocycleVector(self.group, self.modulus, self.values + other.values)

    def __mul__(self, k: int) -> "CocycleVector":
        return CocycleVector(self.group, self.modulus, self.values * int(k))

    __rmul__ = __mul__

    @property
    def is_normalized(self) -> bool:
        return not self.values[0].any() and not self.values[:, 0].any()

    @property
    def is_zero_cochain(self) -> bool:
        return not self.values.any()

    def satisfies_cocycle_identity(self) -> bool:
        """``f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0`` for every triple, checked exhaustively."""
        f = self.values
        t = self.group.cayley_table()
        defect = f[None, :, :] - f[t, :] + f[:, t] - f[:, :, None]
        return not (defect % self.modulus).any()

    def table(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.values]


def coboundary(g: Group, c, modulus: int) -> CocycleVector:
    """``δc(x, y) = c(x) + c(y) - c(xy)`` for a 1-cochain given as values over ``g.elements``."""
    c = np.asarray(c, dtype=np.int64)
    t = g.cayley_table()
    return CocycleVector(g, modulus, c[:, None] + c[None, :] - c[t])


# ----------------------------------------------------------------------
# The linear system
# ----------------------------------------------------------------------
class CocycleSystem:
    """
    Normalized 2-cocycles of ``group`` with values in Z/``modulus``, in generator coordinates.

    Variable ``(x - 1)·|S| + i`` holds ``f(elements[x], S[i])`` for ``x ≠ 1``.
    """

    def __init__(self, group: Group, modulus: int):
        self.group = group
        self.modulus = modulus
        self.gens = small_generating_set(group)
        self.tree = schreier_tree(group, self.gens)
        self.table = group.cayley_table()
        self.size = group.order
        self.nvars = (self.size - 1) * len(self.gens)

    def var(self, x: int, i: int) -> Optional[int]:
        return None if x == 0 else (x - 1) * len(self.gens) + i

    @cached_property
    def forms(self) -> np.ndarray:
        """``forms[g, w]`` is the linear form computing ``f(g, w)`` from the variables."""
        n, t = self.size, self.table
        forms = np.zeros((n, n, self.nvars), dtype=np.int64)
        rows = np.arange(n)
        for w in self.tree.order[1:]:
            h, i = self.tree.parent[w]
            forms[:, w] = forms[:, h]
            gh = t[:, h]
            mask = gh != 0
            forms[rows[mask], w, (gh[mask] - 1) * len(self.gens) + i] += 1
            if h:
                forms[:, w, self.var(h, i)] -= 1
        return forms

    def constraints(self) -> np.ndarray:
        """One row per non-tree edge ``(h, s, w)`` and ``g ≠ 1``: the recursion must agree with ``f(g, w)``."""
        t, forms = self.table, self.forms
        blocks = []
        for h, i, w in self.tree.edges:
            if self.tree.is_tree_edge(h, i, w):
                continue
            block = forms[1:, w] - forms[1:, h]
            gh = t[1:, h]
            mask = gh != 0
            block[np.nonzero(mask)[0], (gh[mask] - 1) * len(self.gens) + i] -= 1
            if h:
                block[:, self.var(h, i)] += 1
            blocks.append(block % self.modulus)
        if not blocks:
            return np.zeros((0, self.nvars), dtype=np.int64)
        rows = np.unique(np.vstack(blocks), axis=0)
        return rows[rows.any(axis=1)]

    def coboundaries(self) -> np.ndarray:
        """``δ(e_x)`` for every ``x ≠ 1``, in variable coordinates."""
        t = self.table
        out = np.zeros((self.size - 1, self.nvars), dtype=np.int64)
        gens = [self.group.index(s) for s in self.gens]
        for x in range(1, self.size):
            for y in range(1, self.size):
                for i, s in enumerate(gens):
                    out[x - 1, self.var(y, i)] = int(y == x) + int(s == x) - int(t[y, s] == x)
        return out % self.modulus

    def variables_of(self, values: np.ndarray) -> list[int]:
        """Read the variables off a full cochain table."""
        gens = [self.group.index(s) for s in self.gens]
        return [int(values[x, s]) % self.modulus for x in range(1, self.size) for s in gens]

    def cochain(self, v) -> CocycleVector:
        """Expand variable values to the full normalized table."""
        values = self.forms @ np.asarray(v, dtype=np.int64)
        return CocycleVector(self.group, self.modulus, values)


# ----------------------------------------------------------------------
# Modules
# ----------------------------------------------------------------------
@dataclass
class CohomologyModule:
    """A computed ``H²`` with one cocycle representative per invariant factor."""

    group: Group
    modulus: int
    kind: ModuleKind
    invariants: AbelianInvariants
    basis: list[CocycleVector]
    system: Optional[CocycleSystem] = field(default=None, repr=False)
    module: Optional[SubquotientModule] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return self.invariants.order

    @property
    def is_trivial(self) -> bool:
        return self.invariants.is_trivial

    def coordinates(self, cocycle: CocycleVector) -> list[int]:
        """
        Coordinates of the class of ``cocycle`` in the invariant-factor basis.

        Raises:
        - RelationOutsideSpan: ``cocycle`` is not a cocycle.
        """
        if self.module is None:
            return []
        return self.module.coordinates(self.system.variables_of(cocycle.values))

    def is_zero(self, cocycle: CocycleVector) -> bool:
        return not any(self.coordinates(cocycle))

    def combination(self, coords) -> CocycleVector:
        """The cocycle ``Σ coords[i]·basis[i]``."""
        total = CocycleVector(self.group, self.modulus, np.zeros((self.group.order,) * 2, dtype=np.int64))
        for c, rep in zip(coords, self.basis):
            total = total + rep * c
        return total


def cohomology_summary(m: CohomologyModule) -> CohomologySummary:
    return CohomologySummary(
        group=m.group.name, order=m.group.order, kind=m.kind, modulus=m.modulus, invariants=m.invariants
    )


def _check_cap(g: Group, cap: Optional[int]) -> None:
    limit = settings.COHOMOLOGY_CAP if cap is None else cap
    if g.order > limit:
        raise CohomologyCapExceeded(f"|{g.name}| = {g.order} exceeds the cohomology cap {limit}")
    if g.order > settings.COHOMOLOGY_CAP:
        logger.warning(
            "H² of %s (order %d) above the default cap: the cocycle system has about %d^2 variables",
            g.name,
            g.order,
            g.order,
        )


def _trivial_module(g: Group, n: int, kind: ModuleKind) -> CohomologyModule:
    return CohomologyModule(group=g, modulus=n, kind=kind, invariants=AbelianInvariants.trivial(), basis=[])


def _solve(g: Group, n: int, kind: ModuleKind, extra_relations: list[list[int]]) -> CohomologyModule:
    system = CocycleSystem(g, n)
    cocycles = kernel_mod_n(system.constraints(), n, cols=system.nvars)
    relations = [list(map(int, row)) for row in system.coboundaries()] + extra_relations
    logger.debug(
        "%s: %d variables, %d cocycle generators, %d relations mod %d",
        g.name,
        system.nvars,
        len(cocycles),
        len(relations),
        n,
    )
    module = quotient_module(cocycles + relations, relations, n, dim=system.nvars)
    basis = [system.cochain(rep) for rep in module.representatives]
    return CohomologyModule(
        group=g, modulus=n, kind=kind, invariants=module.invariants, basis=basis, system=system, module=module
    )


def h2_mod_n(g: Group, n: int, cap: Optional[int] = None) -> CohomologyModule:
    """
    ``H²(G, Z/n)`` with trivial action.

    Raises:
    - BadModulus: ``n < 2``.
    - CohomologyCapExceeded: ``|G|`` above ``cap`` (default COHOMOLOGY_CAP).

    Example:
    >>> h2_mod_n(cyclic(2), 2).invariants.factors
    [2]
    """
    if n < 2:
        raise BadModulus(f"Coefficient modulus must be at least 2, got {n}")
    _check_cap(g, cap)
    if g.order == 1:
        return _trivial_module(g, n, "H2_mod_n")
    result = _solve(g, n, "H2_mod_n", [])
    logger.info("H²(%s, Z/%d) = %s", g.name, n, result.invariants)
    return result


# ----------------------------------------------------------------------
# Homomorphisms to Z/n and the Schur multiplier
# ----------------------------------------------------------------------
def _hom_generators(g: Group, n: int) -> list[tuple[int, ...]]:
    gens = g.generators
    if not gens or g.order == 1:
        return []
    tree = schreier_tree(g, gens)
    word = tree_words(tree)
    relations = edge_relations(tree, word)
    images = kernel_mod_n(relations, n, cols=len(gens))
    homs = []
    for a in images:
        values = tuple(sum(c * e for c, e in zip(word[x], a)) % n for x in range(g.order))
        if any(values):
            homs.append(values)
    return homs


def hom_to_cyclic(g: Group, n: int) -> list[tuple[int, ...]]:
    """
    Every homomorphism ``G -> Z/n``, each as its values over ``g.elements``.

    The zero map comes first.

    Example:
    >>> len(hom_to_cyclic(symmetric(3), 6))
    2
    """
    if n < 1:
        raise BadModulus(f"Target modulus must be positive, got {n}")
    zero = (0,) * g.order
    found = {zero}
    ordered = [zero]
    gens = _hom_generators(g, n) if n > 1 else []
    for phi in ordered:
        for a in gens:
            psi = tuple((x + y) % n for x, y in zip(phi, a))
            if psi not in found:
                found.add(psi)
                ordered.append(psi)
    return ordered


def _carry(g: Group, phi: tuple[int, ...], n: int) -> CocycleVector:
    # δ of the lift x -> phi(x)/n² of phi/n, read in (1/n)Z/Z ≅ Z/n
    a = np.asarray(phi, dtype=np.int64)
    t = g.cayley_table()
    return CocycleVector(g, n, (a[:, None] + a[None, :] - a[t]) // n)


def h2_qz(g: Group, modulus: Optional[int] = None, cap: Optional[int] = None) -> CohomologyModule:
    """
    ``H²(G, Q/Z)``, the Schur multiplier, as ``H²(G, Z/n) / δ Hom(G, Z/n)``.

    ``n`` defaults to ``|G|``; any multiple of ``|G|`` also works, since it
    kills ``H²(G, Q/Z)``. Restriction into subgroups uses the parent's modulus
    so that classes can be compared.

    Raises:
    - BadModulus: ``modulus`` is not a multiple of ``|G|``.
    - CohomologyCapExceeded: ``|G|`` above ``cap``.
    """
    n = g.order if modulus is None else modulus
    if n % g.order:
        raise BadModulus(f"Modulus {n} is not a multiple of |G| = {g.order}")
    _check_cap(g, cap)
    if g.order == 1:
        return _trivial_module(g, n, "H2_QZ_model")
    system = CocycleSystem(g, n)
    images = [system.variables_of(_carry(g, phi, n).values) for phi in _hom_generators(g, n)]
    result = _solve(g, n, "H2_QZ_model", images)
    logger.info("M(%s) = %s", g.name, result.invariants)
    return result


# ----------------------------------------------------------------------
# Restriction
# ----------------------------------------------------------------------
def restrict(cls: CocycleVector, a: Subgroup) -> CocycleVector:
    """
    Pointwise restriction of ``cls`` to ``A × A``, over ``a.group``'s enumeration.

    Reduce with ``h2_qz(a.group, modulus=cls.modulus).coordinates``.

    Raises:
    - ElementNotInGroup: ``a`` is not a subgroup of ``cls.group``.
    """
    if a.parent is not cls.group:
        raise ElementNotInGroup("Restriction target is not a subgroup of the cocycle's group")
    sub = a.group
    idx = [cls.group.index(x) for x in sub.elements]
    return CocycleVector(sub, cls.modulus, cls.values[np.ix_(idx, idx)])


def all_cochains_are_cocycles(m: CohomologyModule) -> bool:
    return all(rep.is_normalized and rep.satisfies_cocycle_identity() for rep in m.basis)


__all__ = [
    "CocycleSystem",
    "CocycleVector",
    "CohomologyModule",
    "all_cochains_are_cocycles",
    "coboundary",
    "cohomology_summary",
    "h2_mod_n",
    "h2_qz",
    "hom_to_cyclic",
    "restrict",
]
