# app/models/group.py
"""
Permutation groups with full element materialization.

This module defines the three objects every algorithm in the toolkit works on:

- ``Perm``: an immutable permutation of ``{0, ..., degree-1}``.
- ``Group``: a finite group given by permutation generators; its elements are
  enumerated lazily (breadth-first from the identity) and cached.
- ``Subgroup``: a subset of a parent ``Group`` closed under multiplication,
  compared by element set.

Products are function composition: ``(p * q)(i) == p(q(i))``. Matrices acting
on column vectors compose the same way, so matrix groups and their permutation
images multiply in the same order.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import ElementNotInGroup, NotAPermutation, OrderCapExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Perm:
    """A permutation stored as the tuple of images of ``0 .. degree-1``."""

    images: tuple[int, ...]

    @classmethod
    def of(cls, images: Iterable[int]) -> "Perm":
        """Build a permutation, rejecting anything that is not a bijection."""
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise NotAPermutation(f"Not a permutation of 0..{len(imgs) - 1}: {list(imgs)}")
        return cls(imgs)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        """Build a permutation from disjoint cycles on 0-based points."""
        images = list(range(degree))
        for cycle in cycles:
            for pos, point in enumerate(cycle):
                images[point] = cycle[(pos + 1) % len(cycle)]
        return cls.of(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        mine = self.images
        return Perm(tuple(mine[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def __pow__(self, exponent: int) -> "Perm":
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Perm.identity(self.degree)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point."""
        seen = [False] * len(self.images)
        result = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cycle = []
            point = start
            while not seen[point]:
                seen[point] = True
                cycle.append(point)
                point = self.images[point]
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def _validate(degree: int, gens: Iterable[Perm]) -> list[Perm]:
    checked = []
    for g in gens:
        perm = g if isinstance(g, Perm) else Perm.of(g)
        if perm.degree != degree:
            raise NotAPermutation(f"Generator {perm} has degree {perm.degree}, expected {degree}")
        checked.append(perm)
    return checked


def generate(
    gens: Sequence[Perm],
    degree: int,
    cap: Optional[int] = None,
    limit: Optional[int] = None,
    seed: Optional[Sequence[Perm]] = None,
) -> Optional[list[Perm]]:
    """
    Enumerate the group generated by ``gens``.

    Elements come out identity first in breadth-first order. ``seed`` may hold
    the elements of a subgroup already known to lie inside the result. Returns
    ``None`` when the closure grows past ``limit``; raises OrderCapExceeded
    past ``cap``.
    """
    identity = Perm.identity(degree)
    gens = [g for g in dict.fromkeys(gens) if not g.is_identity]
    elements = list(seed) if seed else [identity]
    seen = set(elements)
    queue = deque(elements)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = x * s
            if y in seen:
                continue
            seen.add(y)
            elements.append(y)
            queue.append(y)
            if limit is not None and len(elements) > limit:
                return None
            if cap is not None and len(elements) > cap:
                raise OrderCapExceeded(f"Group order exceeds cap {cap}")
    return elements


class Group:
    """
    A finite permutation group.

    Parameters:
    - degree (int): number of points acted on.
    - generators (list of Perm): generating permutations.
    - cap (int, optional): refuse to materialize more than this many elements.
    - name (str, optional): label used in reports.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Perm],
        *,
        cap: Optional[int] = None,
        name: Optional[str] = None,
        _elements: Optional[list[Perm]] = None,
    ):
        self.degree = degree
        self.generators = _validate(degree, generators)
        self.cap = cap if cap is not None else settings.ORDER_CAP
        self.name = name or "G"
        self._elements = _elements

    @classmethod
    def from_generators(
        cls, degree: int, gens: Sequence[Perm], cap: Optional[int] = None, name: Optional[str] = None
    ) -> "Group":
        """Build a group and materialize its element set immediately."""
        group = cls(degree, gens, cap=cap, name=name)
        _ = group.elements
        return group

    def __repr__(self) -> str:
        return f"Group(name={self.name!r}, degree={self.degree}, order={self.order})"

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------
    @property
    def elements(self) -> list[Perm]:
        if self._elements is None:
            self._elements = generate(self.generators, self.degree, cap=self.cap)
            logger.debug("Materialized %s: %d elements on %d points", self.name, len(self._elements), self.degree)
        return self._elements

    @cached_property
    def _index(self) -> dict[Perm, int]:
        return {p: i for i, p in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def index(self, element: Perm) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise ElementNotInGroup(f"{element} is not an element of {self.name}") from None

    def __contains__(self, element: Perm) -> bool:
        return element in self._index

    def mul(self, i: int, j: int) -> int:
        """Index of the product of the elements with indices ``i`` and ``j``."""
        return self._index[self.elements[i] * self.elements[j]]

    @cached_property
    def _cayley(self) -> np.ndarray:
        elems = self.elements
        idx = self._index
        table = np.empty((len(elems), len(elems)), dtype=np.int64)
        for i, x in enumerate(elems):
            table[i] = [idx[x * y] for y in elems]
        return table

    def cayley_table(self) -> np.ndarray:
        """Multiplication table of element indices as a numpy array."""
        return self._cayley

    def element_order(self, element: Perm) -> int:
        return element.order()

    @cached_property
    def element_orders(self) -> list[int]:
        return [p.order() for p in self.elements]

    @cached_property
    def exponent(self) -> int:
        return lcm(1, *self.element_orders)

    # ------------------------------------------------------------------
    # Subgroups
    # ------------------------------------------------------------------
    def subgroup(self, elems: Iterable[Perm]) -> "Subgroup":
        """The smallest subgroup containing ``elems``."""
        gens = []
        for e in elems:
            if e not in self:
                raise ElementNotInGroup(f"{e} is not an element of {self.name}")
            gens.append(e)
        return Subgroup(self, gens)

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.generators, _elements=frozenset(self.elements))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [], _elements=frozenset([self.identity]))

    def conjugate(self, x: Perm, g: Perm) -> Perm:
        """``g x g^-1``."""
        return g * x * g.inverse()

    @cached_property
    def conjugacy_classes(self) -> list[list[Perm]]:
        """Conjugacy classes in order of first appearance; the identity class first."""
        gens = [(s, s.inverse()) for s in self.generators]
        classes = []
        assigned: set[Perm] = set()
        for x in self.elements:
            if x in assigned:
                continue
            orbit = [x]
            assigned.add(x)
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for s, s_inv in gens:
                    z = s * y * s_inv
                    if z not in assigned:
                        assigned.add(z)
                        orbit.append(z)
                        queue.append(z)
            classes.append(orbit)
        return classes

    def centralizer(self, elems: Iterable[Perm]) -> "Subgroup":
        elems = list(elems)
        members = [g for g in self.elements if all(g * x == x * g for x in elems)]
        return Subgroup(self, members, _elements=frozenset(members))

    @cached_property
    def center(self) -> "Subgroup":
        return self.centralizer(self.generators)

    def normal_closure(self, elems: Iterable[Perm]) -> "Subgroup":
        """The smallest normal subgroup containing ``elems``."""
        gens = [e for e in dict.fromkeys(elems) if not e.is_identity]
        elements = generate(gens, self.degree, cap=self.cap)
        members = set(elements)
        changed = True
        while changed:
            changed = False
            for s in self.generators:
                s_inv = s.inverse()
                for n in list(gens):
                    c = s * n * s_inv
                    if c not in members:
                        gens.append(c)
                        elements = generate(gens, self.degree, cap=self.cap, seed=elements)
                        members = set(elements)
                        changed = True
        return Subgroup(self, gens, _elements=frozenset(elements))

    @cached_property
    def derived_subgroup(self) -> "Subgroup":
        commutators = [
            s * t * s.inverse() * t.inverse() for s in self.generators for t in self.generators
        ]
        return self.normal_closure(commutators)


class Subgroup:
    """
    A subgroup of a parent ``Group``.

    Two subgroups of the same parent are equal exactly when their element sets
    are equal, whatever generators were used to build them.
    """

    def __init__(self, parent: Group, generators: Sequence[Perm], _elements: Optional[frozenset] = None):
        self.parent = parent
        self.generators = [g for g in dict.fromkeys(generators) if not g.is_identity]
        if _elements is None:
            _elements = frozenset(generate(self.generators, parent.degree, cap=parent.cap))
        self.elements: frozenset[Perm] = _elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, element: Perm) -> bool:
        return element in self.elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, parent={self.parent.name!r})"

    def sorted_elements(self) -> list[Perm]:
        """Elements in the parent's enumeration order."""
        index = self.parent._index
        return sorted(self.elements, key=index.__getitem__)

    def is_normal(self) -> bool:
        for s in self.parent.generators:
            s_inv = s.inverse()
            for n in self.generators:
                if s * n * s_inv not in self.elements:
                    return False
        return True

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def intersection(self, other: "Subgroup") -> "Subgroup":
        common = self.elements & other.elements
        return Subgroup(self.parent, list(common), _elements=frozenset(common))

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.generators + other.generators)

    @cached_property
    def group(self) -> Group:
        """The subgroup as a standalone ``Group`` on the same points."""
        gens = self.generators
        if not gens:
            return Group(self.parent.degree, [], cap=self.parent.cap, name=f"{self.parent.name}.sub")
        return Group(
            self.parent.degree,
            gens,
            cap=self.parent.cap,
            name=f"{self.parent.name}.sub",
            _elements=generate(gens, self.parent.degree, cap=self.parent.cap),
        )
