# app/operations/gz_classify.py
"""
Module: gz_classify.py

Z-groups, GZ-groups and the presentation families they fall into.

Functions:
- satisfies_pq_condition(g, p, q): every subgroup of order pq is cyclic.
- satisfies_p2_conditions(g): the above with p = q for every prime divisor.
- is_z_group(g), is_gz_group(g): Sylow shape tests; the GZ test is
  cross-checked against the commuting-pair characterization.
- abelian_subgroups_cyclic(g): every abelian subgroup is cyclic.
- classify_solvable_gz(g): types I-IV with best-effort parameters.
- classify_nonsolvable_gz(g): NS-I or NS-II.
- frobenius_complement_criterion(g): decomposition of the subgroup generated
  by prime-order elements as ``C_n × H`` with ``H`` in {1, SL2(F_3), SL2(F_5)}.
- gz_report(g): everything above as a ``GZReport``.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from math import gcd
from typing import Iterator, Optional

from pydantic import ValidationError
from sympy import divisors, factorint, isprime, integer_nthroot

from app.core.errors import (
    InternalInconsistency,
    NotNonsolvableGZ,
    NotPrime,
    NotSolvableGZ,
    ToolkitError,
)
from app.models.group import Group, Perm, Subgroup, generate
from app.operations.group_core import (
    cyclic_subgroups,
    derived_series,
    greedy_closure,
    is_cyclic,
    is_generalized_quaternion,
    is_isomorphic,
    is_solvable,
    sylow,
)
from app.schemas.presentation import GroupFamily, PresentationParams
from app.schemas.reports import ComplementCriterion, GZReport, HTag

logger = logging.getLogger(__name__)

SWEEP_ORDER_LIMIT = 1000
SWEEP_ATTEMPTS = 400


# ----------------------------------------------------------------------
# pq-conditions and Sylow shapes
# ----------------------------------------------------------------------
def _elements_of_order(g: Group, k: int) -> list[Perm]:
    return [x for x, o in zip(g.elements, g.element_orders) if o == k]


def satisfies_pq_condition(g: Group, p: int, q: int) -> bool:
    """
    True when every subgroup of order ``pq`` is cyclic.

    Groups of order ``pq`` that are not cyclic are generated by one element
    of order ``p`` and one of order ``q``, so only such pairs are closed.
    """
    for x in (p, q):
        if not isprime(x):
            raise NotPrime(f"{x} is not prime")
    target = p * q
    if g.order % target:
        return True
    ys = _elements_of_order(g, q)
    for x, powers in cyclic_subgroups(_elements_of_order(g, p)):
        for y in ys:
            if y in powers:
                continue
            closure = generate([x, y], g.degree, limit=target)
            if closure is not None and len(closure) == target and target not in (z.order() for z in closure):
                logger.debug("%s: non-cyclic subgroup of order %d", g.name, target)
                return False
    return True


def _sylow_groups(g: Group) -> Iterator[tuple[int, Group]]:
    for p in factorint(g.order):
        yield p, sylow(g, p).group


def is_z_group(g: Group) -> bool:
    """Every Sylow subgroup is cyclic."""
    return all(is_cyclic(s) for _, s in _sylow_groups(g))


def _gz_sylow_shapes(g: Group) -> bool:
    return all(is_cyclic(s) or (p == 2 and is_generalized_quaternion(s)) for p, s in _sylow_groups(g))


def abelian_subgroups_cyclic(g: Group) -> bool:
    """
    Every abelian subgroup is cyclic.

    A non-cyclic abelian subgroup contains ``C_p × C_p``, which is generated
    by two commuting elements of order ``p`` neither a power of the other.
    """
    for p in factorint(g.order):
        elems = _elements_of_order(g, p)
        for x, powers in cyclic_subgroups(elems):
            for y in elems:
                if y not in powers and x * y == y * x:
                    return False
    return True


def satisfies_p2_conditions(g: Group) -> bool:
    """Every subgroup of order ``p²`` is cyclic, for every prime ``p``."""
    return all(satisfies_pq_condition(g, p, p) for p in factorint(g.order))


def is_gz_group(g: Group) -> bool:
    """
    Sylow subgroups cyclic for odd primes, cyclic or generalized quaternion for 2.

    Raises:
    - InternalInconsistency: the Sylow test and the abelian-subgroup test disagree.
    """
    by_sylow = _gz_sylow_shapes(g)
    by_pairs = abelian_subgroups_cyclic(g)
    if by_sylow != by_pairs:
        raise InternalInconsistency(
            f"{g.name}: Sylow shapes say {by_sylow}, commuting pairs say {by_pairs}"
        )
    return by_sylow


# ----------------------------------------------------------------------
# Solvable GZ-groups
# ----------------------------------------------------------------------
def _try_params(**values) -> Optional[PresentationParams]:
    try:
        return PresentationParams(**values)
    except ValidationError:
        return None


def _metacyclic_params(g: Group) -> Optional[PresentationParams]:
    """``(m, n, r)`` read off ``σ`` generating ``G'`` and a complement generator ``τ``; least ``r`` wins."""
    derived = g.derived_subgroup
    m = derived.order
    n = g.order // m
    if m == 1:
        return _try_params(family=GroupFamily.I, m=1, n=n, r=1)
    sigma = next(x for x in derived.elements if x.order() == m)
    exponent_of = {sigma**i: i for i in range(m)}
    best: Optional[int] = None
    for tau in _elements_of_order(g, n):
        conj = tau * sigma * tau.inverse()
        r = exponent_of.get(conj)
        if r is None or (best is not None and r >= best):
            continue
        if generate([sigma, tau], g.degree, limit=g.order - 1) is None:
            best = r
    if best is None:
        return None
    return _try_params(family=GroupFamily.I, m=m, n=n, r=best)


def _sweep_candidates(family: GroupFamily, order: int) -> Iterator[PresentationParams]:
    factor = {GroupFamily.I: 1, GroupFamily.II: 2, GroupFamily.III: 8, GroupFamily.IV: 16}[family]
    if order % factor:
        return
    mn = order // factor
    for n in divisors(mn):
        m = mn // n
        for r in range(1, m + 1):
            if family in (GroupFamily.I, GroupFamily.III):
                params = _try_params(family=family, m=m, n=n, r=r)
                if params:
                    yield params
            elif family == GroupFamily.II:
                for l in range(1, m + 1):
                    for k in range(1, n + 1):
                        params = _try_params(family=family, m=m, n=n, r=r, l=l, k=k)
                        if params:
                            yield params
            else:
                for t in range(1, m + 1):
                    for k in range(1, n + 1):
                        params = _try_params(family=family, m=m, n=n, r=r, k=k, t=t)
                        if params:
                            yield params


def _sweep(family: GroupFamily, g: Group) -> Optional[PresentationParams]:
    """First family member isomorphic to ``g`` among small parameter choices."""
    from app.operations.constructors import gz_type

    if g.order > SWEEP_ORDER_LIMIT:
        return None
    for attempt, params in enumerate(_sweep_candidates(family, g.order)):
        if attempt >= SWEEP_ATTEMPTS:
            break
        try:
            candidate = gz_type(params).group
        except ToolkitError:
            continue
        if is_isomorphic(candidate, g):
            return params
    return None


def _has_normal_two_complement(g: Group, two_part: int) -> bool:
    odd = [x for x, o in zip(g.elements, g.element_orders) if o % 2]
    target = g.order // two_part
    if len(odd) != target:
        return False
    return greedy_closure(g, odd, limit=target) is not None


def classify_solvable_gz(g: Group) -> tuple[str, Optional[PresentationParams]]:
    """
    Type tag and, when recoverable, parameters of a solvable GZ-group.

    - I: every Sylow subgroup cyclic.
    - II: generalized quaternion Sylow 2-subgroup with a normal 2-complement.
    - III / IV: no normal 2-complement, Sylow 2-subgroup of order 8 / 16.

    Raises:
    - NotSolvableGZ: ``g`` is not solvable or not a GZ-group.
    """
    if not is_solvable(g) or not is_gz_group(g):
        raise NotSolvableGZ(f"{g.name} is not a solvable GZ-group")
    if is_z_group(g):
        return "I", _metacyclic_params(g) or _sweep(GroupFamily.I, g)
    two = sylow(g, 2)
    if _has_normal_two_complement(g, two.order):
        family = GroupFamily.II
    elif two.order == 8:
        family = GroupFamily.III
    elif two.order == 16:
        family = GroupFamily.IV
    else:
        raise InternalInconsistency(f"{g.name}: Sylow 2-subgroup of order {two.order} fits no solvable type")
    logger.info("%s classified as solvable type %s", g.name, family.value)
    return family.value, _sweep(family, g)


# ----------------------------------------------------------------------
# Non-solvable GZ-groups
# ----------------------------------------------------------------------
@lru_cache(maxsize=None)
def _sl2_reference(p: int) -> Group:
    from app.operations.constructors import sl2

    return sl2(p).group


def _sl2_characteristic(order: int) -> Optional[int]:
    """The prime ``p`` with ``p(p²-1) = order``, if any."""
    root, _ = integer_nthroot(order, 3)
    for p in (root, root + 1):
        if isprime(p) and p * (p * p - 1) == order:
            return p
    return None


def classify_nonsolvable_gz(g: Group) -> tuple[str, Optional[PresentationParams]]:
    """
    NS-I when ``G = C_G(L)·L`` for the perfect core ``L ≅ SL2(F_p)``, NS-II when that product has index 2.

    Raises:
    - NotNonsolvableGZ: ``g`` is solvable, not GZ, or its perfect core is not ``SL2(F_p)``.
    """
    if is_solvable(g) or not is_gz_group(g):
        raise NotNonsolvableGZ(f"{g.name} is not a non-solvable GZ-group")
    core = derived_series(g)[-1]
    p = _sl2_characteristic(core.order)
    if p is None or p < 5 or not is_isomorphic(core.group, _sl2_reference(p)):
        raise NotNonsolvableGZ(f"{g.name}: perfect core of order {core.order} is not SL2(F_p)")
    centralizer = g.centralizer(core.generators)
    product_order = centralizer.order * core.order // centralizer.intersection(core).order
    if product_order == g.order:
        odd = [x for x in centralizer.elements if x.order() % 2]
        h = Subgroup(g, odd)
        params = None
        if h.order * 2 == centralizer.order:
            base = _metacyclic_params(h.group) if is_z_group(h.group) else None
            if base is not None:
                params = _try_params(family=GroupFamily.NS_I, m=base.m, n=base.n, r=base.r, p=p)
        return GroupFamily.NS_I.value, params
    if 2 * product_order == g.order:
        params = _try_params(family=GroupFamily.NS_II, p=p) if g.order == 2 * core.order else None
        return GroupFamily.NS_II.value, params
    raise NotNonsolvableGZ(f"{g.name}: C_G(L)·L has order {product_order} in a group of order {g.order}")


# ----------------------------------------------------------------------
# Frobenius-complement criterion
# ----------------------------------------------------------------------
H_CANDIDATES: list[tuple[HTag, int]] = [("trivial", 1), ("SL2F3", 24), ("SL2F5", 120)]


def prime_order_subgroup(g: Group) -> Subgroup:
    """The subgroup generated by all elements of prime order."""
    gens, elements = greedy_closure(g, (x for x, o in zip(g.elements, g.element_orders) if o > 1 and isprime(o)))
    return Subgroup(g, gens, _elements=frozenset(elements))


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def frobenius_complement_criterion(g: Group) -> ComplementCriterion:
    """
    Decide whether the prime-order subgroup ``E`` splits as ``C_n × H``.

    With ``gcd(n, |H|) = 1`` the factors are forced: ``H`` is the set of
    elements killed by ``|H|`` and ``C_n`` the central elements killed by ``n``.
    """
    e_sub = prime_order_subgroup(g)
    e = e_sub.group
    size = e.order
    for tag, s in H_CANDIDATES:
        if size % s:
            continue
        n = size // s
        if gcd(n, s) != 1 or not _squarefree(n):
            continue
        h_elems = [x for x in e.elements if (x**s).is_identity]
        c_elems = [z for z in e.center.elements if (z**n).is_identity]
        if len(h_elems) != s or len(c_elems) != n:
            continue
        if greedy_closure(e, h_elems, limit=s) is None:
            continue
        if not is_cyclic(Subgroup(e, c_elems).group):
            continue
        if s > 1:
            h_group = Subgroup(e, h_elems).group
            if not is_isomorphic(h_group, _sl2_reference({24: 3, 120: 5}[s])):
                continue
        logger.info("%s: prime-order subgroup is C%d x %s", g.name, n, tag)
        return ComplementCriterion(
            prime_order_subgroup=e_sub,
            prime_order_subgroup_order=size,
            n=n,
            h_tag=tag,
            is_frobenius_complement=True,
        )
    return ComplementCriterion(
        prime_order_subgroup=e_sub,
        prime_order_subgroup_order=size,
        is_frobenius_complement=False,
    )


def gz_report(g: Group) -> GZReport:
    z = is_z_group(g)
    gz = is_gz_group(g)
    report = GZReport(is_z_group=z, is_gz_group=gz, complement_criterion=frobenius_complement_criterion(g))
    if not gz:
        return report
    if is_solvable(g):
        tag, params = classify_solvable_gz(g)
        report.solvable_type = tag
    else:
        tag, params = classify_nonsolvable_gz(g)
        report.nonsolvable_type = tag
    report.params = params
    return report
