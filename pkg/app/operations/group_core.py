# app/operations/group_core.py
"""
Module: group_core.py

Subgroup machinery and structure on top of ``app.models.group``.

Functions:
- schreier_tree(g, gens): spanning tree of the Cayley graph, used to extend maps
  defined on generators.
- homomorphism_from_images(g, gens, h, images): extend a generator assignment to
  a homomorphism, checking every Cayley-graph edge.
- sylow(g, p), derived_series(g), structural_predicates(g), normal_subgroups(g).
- quotient(g, n): action on the cosets of a normal subgroup.
- is_isomorphic(g, h): generator-image backtracking.
- semidirect_product(n, h, action), direct_product(g, h).
- abelian_invariants(g): invariant factors of G/[G,G].
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from sympy import factorint, isprime

from app.core.errors import ElementNotInGroup, NotAnAutomorphism, NotNormal, NotPrime, RelationViolation
from app.models.group import Group, Perm, Subgroup, generate
from app.operations.zlinalg import cokernel_invariants
from app.schemas.invariants import AbelianInvariants

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Spanning trees and homomorphisms
# ----------------------------------------------------------------------
@dataclass
class SchreierTree:
    """
    Breadth-first spanning tree of the right Cayley graph of ``group`` over ``gens``.

    ``parent[x] = (y, i)`` means element ``x`` was first reached as ``y * gens[i]``;
    ``edges`` lists every ``(x, i, x * gens[i])`` in BFS order of ``x``.
    """

    group: Group
    gens: list[Perm]
    order: list[int]
    parent: dict[int, tuple[int, int]]
    edges: list[tuple[int, int, int]]

    def is_tree_edge(self, x: int, i: int, y: int) -> bool:
        return self.parent.get(y) == (x, i)


def schreier_tree(g: Group, gens: Optional[Sequence[Perm]] = None) -> SchreierTree:
    gens = list(g.generators if gens is None else gens)
    elems = g.elements
    root = 0
    order = [root]
    parent: dict[int, tuple[int, int]] = {}
    seen = {root}
    edges = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for i, s in enumerate(gens):
            y = g.index(elems[x] * s)
            edges.append((x, i, y))
            if y not in seen:
                seen.add(y)
                parent[y] = (x, i)
                order.append(y)
                queue.append(y)
    if len(order) != g.order:
        raise ElementNotInGroup(f"The given elements generate only {len(order)} of {g.order} elements")
    return SchreierTree(group=g, gens=gens, order=order, parent=parent, edges=edges)


def _extend(tree: SchreierTree, images: Sequence[Perm]) -> Optional[list[Perm]]:
    """Images of all elements (by index) under the map fixed on generators, or None."""
    degree = images[0].degree if images else 0
    phi: list[Optional[Perm]] = [None] * tree.group.order
    phi[0] = Perm.identity(degree)
    for x, i, y in tree.edges:
        value = phi[x] * images[i]
        if phi[y] is None:
            phi[y] = value
        elif phi[y] != value:
            return None
    return phi


def homomorphism_from_images(
    g: Group, gens: Sequence[Perm], h: Optional[Group], images: Sequence[Perm]
) -> dict[Perm, Perm]:
    """
    Extend ``gens[i] -> images[i]`` to a homomorphism on all of ``g``.

    Raises:
    - RelationViolation: the assignment does not respect the relations of ``g``.
    - ElementNotInGroup: ``gens`` do not generate ``g`` or an image lies outside ``h``.
    """
    if h is not None:
        for img in images:
            if img not in h:
                raise ElementNotInGroup(f"Image {img} is not an element of {h.name}")
    tree = schreier_tree(g, gens)
    if not gens:
        identity = h.identity if h is not None else Perm.identity(0)
        return {x: identity for x in g.elements}
    phi = _extend(tree, images)
    if phi is None:
        raise RelationViolation(f"Generator images do not define a homomorphism on {g.name}")
    return {g.elements[i]: phi[i] for i in range(g.order)}


# ----------------------------------------------------------------------
# Sylow subgroups and structure
# ----------------------------------------------------------------------
def p_part(n: int, p: int) -> int:
    return p ** factorint(n).get(p, 0)


def _is_power_of(n: int, p: int) -> bool:
    return n == p_part(n, p)


def sylow(g: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown greedily from a p-element of largest order."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    target = p_part(g.order, p)
    if target == 1:
        return g.trivial()
    orders = g.element_orders
    candidates = [
        x for x, o in sorted(zip(g.elements, orders), key=lambda t: -t[1]) if o > 1 and _is_power_of(o, p)
    ]
    gens: list[Perm] = []
    current = [g.identity]
    members = set(current)
    for y in candidates:
        if len(current) == target:
            break
        if y in members:
            continue
        grown = generate(gens + [y], g.degree, limit=target, seed=current)
        if grown is None or not _is_power_of(len(grown), p):
            continue
        gens.append(y)
        current = grown
        members = set(grown)
    return Subgroup(g, gens, _elements=frozenset(current))


def greedy_closure(
    g: Group, elems: Iterable[Perm], limit: Optional[int] = None
) -> Optional[tuple[list[Perm], list[Perm]]]:
    """
    Close ``elems`` under multiplication, adding a generator only when it is new.

    Returns ``(generators, elements)`` or None once the closure passes ``limit``.
    """
    gens: list[Perm] = []
    current = [g.identity]
    reached = set(current)
    for x in elems:
        if x in reached:
            continue
        gens.append(x)
        current = generate(gens, g.degree, cap=g.cap, limit=limit, seed=current)
        if current is None:
            return None
        reached = set(current)
    return gens, current


def grow_complement(g: Group, n: Subgroup, allowed: Optional[set[Perm]] = None) -> Optional[Subgroup]:
    """
    Grow a subgroup of order ``|G|/|N|`` meeting ``N`` trivially, or return None.

    Starts from an element of largest order and adds elements while the
    closure stays inside ``allowed`` (every element outside ``N`` by default),
    meets ``N`` only in the identity, and has order dividing the target.
    The search is greedy: None does not prove that no complement exists.
    """
    target = g.order // n.order
    if target == 1:
        return g.trivial()
    orders = dict(zip(g.elements, g.element_orders))
    pool = allowed if allowed is not None else set(g.elements) - (n.elements - {g.identity})
    candidates = sorted(
        (x for x in pool if not x.is_identity and not target % orders[x]), key=lambda x: (-orders[x], g.index(x))
    )
    gens: list[Perm] = []
    current = [g.identity]
    members = set(current)
    for y in candidates:
        if len(current) == target:
            break
        if y in members:
            continue
        grown = generate(gens + [y], g.degree, limit=target, seed=current)
        if grown is None or target % len(grown) or not pool.issuperset(grown):
            continue
        gens.append(y)
        current = grown
        members = set(grown)
    if len(current) != target:
        return None
    return Subgroup(g, gens, _elements=frozenset(current))


def cyclic_subgroups(elems: Iterable[Perm]) -> list[tuple[Perm, frozenset[Perm]]]:
    """One generator per cyclic subgroup met by ``elems``, with that subgroup's elements."""
    seen: set[Perm] = set()
    reps = []
    for x in elems:
        if x in seen:
            continue
        powers = frozenset(x**i for i in range(x.order()))
        seen.update(powers)
        reps.append((x, powers))
    return reps


def to_parent(g: Group, sub_of_sub: Subgroup) -> Subgroup:
    """Re-home a subgroup of ``S.group`` (same points) as a subgroup of ``g``."""
    return Subgroup(g, sub_of_sub.generators, _elements=sub_of_sub.elements)


def derived_series(g: Group) -> list[Subgroup]:
    series = [g.whole()]
    while True:
        last = series[-1]
        nxt = to_parent(g, last.group.derived_subgroup)
        if nxt == last:
            return series
        series.append(nxt)


def is_abelian(g: Group) -> bool:
    gens = g.generators
    return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])


def is_cyclic(g: Group) -> bool:
    return g.order == 1 or g.order in g.element_orders


def is_solvable(g: Group) -> bool:
    return derived_series(g)[-1].is_trivial()


def is_nilpotent(g: Group) -> bool:
    return all(sylow(g, p).is_normal() for p in factorint(g.order))


def is_generalized_quaternion(g: Group) -> bool:
    """A non-cyclic 2-group of order at least 8 with one involution and a cyclic subgroup of index 2."""
    n = g.order
    if n < 8 or not _is_power_of(n, 2):
        return False
    orders = g.element_orders
    return orders.count(2) == 1 and (n // 2) in orders and n not in orders


@dataclass
class StructuralPredicates:
    is_abelian: bool
    is_cyclic: bool
    is_nilpotent: bool
    is_solvable: bool
    is_perfect: bool
    center: Subgroup
    derived_subgroup: Subgroup


def structural_predicates(g: Group) -> StructuralPredicates:
    derived = g.derived_subgroup
    return StructuralPredicates(
        is_abelian=is_abelian(g),
        is_cyclic=is_cyclic(g),
        is_nilpotent=is_nilpotent(g),
        is_solvable=is_solvable(g),
        is_perfect=derived.is_whole(),
        center=g.center,
        derived_subgroup=derived,
    )


def normal_subgroups(g: Group) -> list[Subgroup]:
    """
    All normal subgroups, as joins of normal closures of conjugacy classes.

    Sorted by order, then by the parent's enumeration of their elements.
    """
    found: dict[frozenset, Subgroup] = {}
    trivial = g.trivial()
    found[trivial.elements] = trivial
    for cls in g.conjugacy_classes[1:]:
        n = g.normal_closure(cls[:1])
        found.setdefault(n.elements, n)
    pending = list(found.values())
    while pending:
        new = []
        current = list(found.values())
        for a in pending:
            for b in current:
                if a.elements <= b.elements or b.elements <= a.elements:
                    continue
                elems = generate(a.generators + b.generators, g.degree, cap=g.cap, seed=list(a.elements))
                key = frozenset(elems)
                if key not in found:
                    found[key] = Subgroup(g, a.generators + b.generators, _elements=key)
                    new.append(found[key])
        pending = new
    index = g._index
    return sorted(found.values(), key=lambda s: (s.order, sorted(index[x] for x in s.elements)))


# ----------------------------------------------------------------------
# Quotients
# ----------------------------------------------------------------------
@dataclass
class Quotient:
    """``G/N`` acting on the left cosets of ``N``."""

    parent: Group
    kernel: Subgroup
    group: Group
    coset_of: dict[Perm, int]
    representatives: list[Perm]
    _cache: dict[Perm, Perm] = field(default_factory=dict, repr=False)

    def project(self, x: Perm) -> Perm:
        """Image of ``x`` in the quotient group."""
        if x not in self._cache:
            self._cache[x] = Perm(tuple(self.coset_of[x * r] for r in self.representatives))
        return self._cache[x]


def quotient(g: Group, n: Subgroup) -> Quotient:
    if not n.is_normal():
        raise NotNormal(f"Subgroup of order {n.order} is not normal in {g.name}")
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    kernel_elems = list(n.elements)
    for x in g.elements:
        if x in coset_of:
            continue
        cid = len(reps)
        reps.append(x)
        for k in kernel_elems:
            coset_of[x * k] = cid
    gens = [Perm(tuple(coset_of[s * r] for r in reps)) for s in g.generators]
    qgroup = Group(len(reps), gens, cap=g.cap, name=f"{g.name}/N")
    logger.debug("Quotient of %s by a subgroup of order %d has order %d", g.name, n.order, qgroup.order)
    return Quotient(parent=g, kernel=n, group=qgroup, coset_of=coset_of, representatives=reps)


# ----------------------------------------------------------------------
# Isomorphism
# ----------------------------------------------------------------------
def small_generating_set(g: Group) -> list[Perm]:
    """A short generating list: one element when cyclic, two when a pair is found, else greedy."""
    if g.order == 1:
        return []
    ranked = sorted(zip(g.elements, g.element_orders), key=lambda t: -t[1])
    first = ranked[0][0]
    if ranked[0][1] == g.order:
        return [first]
    if g.order <= 2000:
        for y, _ in ranked[1:]:
            if generate([first, y], g.degree, limit=g.order - 1) is None:
                return [first, y]
    gens = [first]
    current = generate(gens, g.degree)
    members = set(current)
    for y, _ in ranked:
        if len(current) == g.order:
            break
        if y not in members:
            gens.append(y)
            current = generate(gens, g.degree, seed=current)
            members = set(current)
    return gens


@dataclass
class Isomorphism:
    """Outcome of an isomorphism search; truthy when a witness was found."""

    found: bool
    mapping: Optional[dict[Perm, Perm]] = None

    def __bool__(self) -> bool:
        return self.found


def is_isomorphic(g: Group, h: Group) -> Isomorphism:
    """
    Decide ``g ≅ h`` by backtracking over generator images of matching order.

    The first generator only ranges over conjugacy-class representatives of
    ``h``; every candidate assignment is extended along a spanning tree and
    must be consistent and bijective.
    """
    if g.order != h.order:
        return Isomorphism(False)
    if Counter(g.element_orders) != Counter(h.element_orders):
        return Isomorphism(False)
    if is_abelian(g) != is_abelian(h):
        return Isomorphism(False)
    gens = small_generating_set(g)
    if not gens:
        return Isomorphism(True, {g.identity: h.identity})
    tree = schreier_tree(g, gens)
    h_orders = dict(zip(h.elements, h.element_orders))
    first_order = gens[0].order()
    reps = [cls[0] for cls in h.conjugacy_classes if h_orders[cls[0]] == first_order]
    pools = [reps] + [[y for y in h.elements if h_orders[y] == s.order()] for s in gens[1:]]
    for images in product(*pools):
        phi = _extend(tree, images)
        if phi is None or len(set(phi)) != h.order:
            continue
        return Isomorphism(True, {g.elements[i]: phi[i] for i in range(g.order)})
    return Isomorphism(False)


# ----------------------------------------------------------------------
# Products
# ----------------------------------------------------------------------
@dataclass
class ProductGroup:
    """A constructed product with the two factors embedded."""

    group: Group
    left: Subgroup
    right: Subgroup
    embed_left: Callable[[Perm], Perm]
    embed_right: Callable[[Perm], Perm]


def automorphism(n: Group, assignment: Mapping[Perm, Perm]) -> dict[Perm, Perm]:
    """Full automorphism of ``n`` from images of its generators (or of all elements)."""
    if len(assignment) == n.order and all(x in assignment for x in n.elements):
        full = dict(assignment)
    else:
        missing = [s for s in n.generators if s not in assignment]
        if missing:
            raise NotAnAutomorphism(f"No image given for generator {missing[0]}")
        try:
            full = homomorphism_from_images(n, n.generators, n, [assignment[s] for s in n.generators])
        except (RelationViolation, ElementNotInGroup) as exc:
            raise NotAnAutomorphism(str(exc)) from exc
    if len(set(full.values())) != n.order or any(v not in n for v in full.values()):
        raise NotAnAutomorphism("Assignment is not a bijection of the normal factor")
    for a in n.generators:
        for b in n.generators:
            if full[a * b] != full[a] * full[b]:
                raise NotAnAutomorphism("Assignment is not multiplicative")
    return full


def semidirect_product(
    n: Group,
    h: Group,
    action: Optional[Mapping[Perm, Mapping[Perm, Perm]]] = None,
    name: Optional[str] = None,
) -> ProductGroup:
    """
    ``N ⋊ H`` with ``h`` acting on ``n`` by ``action[h_generator]``.

    Parameters:
    - n (Group): the normal factor.
    - h (Group): the complement.
    - action (dict, optional): for each generator of ``h`` an automorphism of ``n``,
      given as images of ``n``'s generators. Missing generators act trivially.

    Returns:
    - ProductGroup on ``|N| + |H|`` points: N's elements followed by H's elements.
      ``(x, y)`` sends the point ``m`` of N to ``x·α_y(m)`` and the point ``z`` of H to ``y·z``.

    Raises:
    - NotAnAutomorphism: an action image is not an automorphism of ``n``.
    - RelationViolation: the action does not respect the relations of ``h``.
    """
    action = action or {}
    n_elems, h_elems = n.elements, h.elements
    offset = len(n_elems)
    degree = offset + len(h_elems)
    identity_aut = {x: x for x in n_elems}
    gen_auts = [automorphism(n, action[y]) if y in action else identity_aut for y in h.generators]
    aut_perms = [Perm(tuple(n.index(a[x]) for x in n_elems)) for a in gen_auts]
    aut_group = Group(offset, aut_perms, cap=max(n.cap, h.cap))
    rho = homomorphism_from_images(h, h.generators, aut_group, aut_perms)

    h_points = tuple(range(offset, degree))

    def embed_n(x: Perm) -> Perm:
        return Perm(tuple(n.index(x * m) for m in n_elems) + h_points)

    def embed_h(y: Perm) -> Perm:
        return Perm(rho[y].images + tuple(offset + h.index(y * z) for z in h_elems))

    gens = [embed_n(x) for x in n.generators] + [embed_h(y) for y in h.generators]
    group = Group(degree, gens, cap=max(n.cap, h.cap), name=name or f"{n.name}:{h.name}")
    if group.order != n.order * h.order:
        raise RelationViolation(f"Semidirect product has order {group.order}, expected {n.order * h.order}")
    left = Subgroup(group, [embed_n(x) for x in n.generators], _elements=frozenset(embed_n(x) for x in n_elems))
    right = Subgroup(group, [embed_h(y) for y in h.generators], _elements=frozenset(embed_h(y) for y in h_elems))
    return ProductGroup(group=group, left=left, right=right, embed_left=embed_n, embed_right=embed_h)


def direct_product(g: Group, h: Group, name: Optional[str] = None) -> ProductGroup:
    """``G × H`` acting on the disjoint union of the two point sets."""
    d1, d2 = g.degree, h.degree
    tail = tuple(range(d1, d1 + d2))
    head = tuple(range(d1))

    def embed_g(x: Perm) -> Perm:
        return Perm(x.images + tail)

    def embed_h(y: Perm) -> Perm:
        return Perm(head + tuple(d1 + i for i in y.images))

    gens = [embed_g(x) for x in g.generators] + [embed_h(y) for y in h.generators]
    group = Group(d1 + d2, gens, cap=max(g.cap, h.cap), name=name or f"{g.name}x{h.name}")
    _ = group.elements
    left = Subgroup(group, [embed_g(x) for x in g.generators], _elements=frozenset(embed_g(x) for x in g.elements))
    right = Subgroup(group, [embed_h(y) for y in h.generators], _elements=frozenset(embed_h(y) for y in h.elements))
    return ProductGroup(group=group, left=left, right=right, embed_left=embed_g, embed_right=embed_h)


# ----------------------------------------------------------------------
# Abelianization
# ----------------------------------------------------------------------
def tree_words(tree: SchreierTree) -> dict[int, tuple[int, ...]]:
    """Exponent vector over ``tree.gens`` of the tree path to each element."""
    k = len(tree.gens)
    word: dict[int, tuple[int, ...]] = {tree.order[0]: (0,) * k}
    for y in tree.order[1:]:
        x, i = tree.parent[y]
        w = list(word[x])
        w[i] += 1
        word[y] = tuple(w)
    return word


def edge_relations(tree: SchreierTree, word: Mapping[int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Nonzero rows ``w(x) + e_i - w(x·s_i)`` over the non-tree edges, sorted and deduplicated."""
    relations = set()
    for x, i, y in tree.edges:
        if tree.is_tree_edge(x, i, y):
            continue
        row = [a - b for a, b in zip(word[x], word[y])]
        row[i] += 1
        if any(row):
            relations.add(tuple(row))
    return sorted(relations)


def abelian_invariants(g: Group) -> AbelianInvariants:
    """
    Invariant factors of ``G/[G,G]``.

    Every Cayley-graph edge ``x -> x·s`` gives the relation
    ``w(x) + e_s - w(x·s) = 0`` between tree words; the Smith form of the
    relation matrix presents the abelianization.
    """
    gens = g.generators
    if not gens or g.order == 1:
        return AbelianInvariants.trivial()
    tree = schreier_tree(g, gens)
    relations = edge_relations(tree, tree_words(tree))
    if not relations:
        return AbelianInvariants(factors=[], rank=len(gens))
    columns = [list(col) for col in zip(*relations)]
    return cokernel_invariants(columns)
