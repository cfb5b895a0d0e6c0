# app/operations/constructors.py
"""
Module: constructors.py

Builders for the named group families, each returning a ``ConstructedGroup``
that carries the permutation group, its named generators and the defining
relations of its presentation. Every builder checks its relations before
returning.

Permutation families:
- cyclic, abelian, dihedral, symmetric, alternating
- metacyclic(m, n, r): split metacyclic groups (type I)
- quaternion_generalized(order)
- gz_type(params): solvable GZ types II, III, IV; g1_group(l), g2_group(l)
- nonsolvable_gz(params): NS-I and NS-II
- linear_semidirect(p, matrices): F_p^d ⋊ ⟨matrices⟩; frobenius_sl25(q)

Matrix families over finite fields:
- sl2(p), binary_icosahedral(q), g_plus(q), rep_phi(l, q), rep_psi(l, q)

Verification:
- verify_binary_icosahedral(q), verify_g_plus(q), verify_representations(l, q)
- double_cover_type(g, z, projection)
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
import math
from math import factorial, lcm
from typing import Any, Callable, Literal, Mapping, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError
from sympy import isprime, n_order

from app.core.config import settings
from app.core.errors import (
    BadCharacteristic,
    BadModulus,
    BadOrder,
    NoFifthRoot,
    NoSuchScalar,
    NotACentralExtension,
    NotAComplement,
    NotPrime,
    OrderCapExceeded,
    ParameterCongruenceViolated,
    RelationViolation,
    ToolkitError,
)
from app.models.finite_field import FiniteField, MatrixGroup, key, mat_pow, vector_action
from app.models.group import Group, Perm, Subgroup
from app.operations.group_core import (
    ProductGroup,
    automorphism,
    direct_product,
    homomorphism_from_images,
    is_generalized_quaternion,
    is_isomorphic,
    normal_subgroups,
    semidirect_product,
    sylow,
)
from app.schemas.presentation import GroupFamily, PresentationParams, metacyclic_conditions_hold
from app.schemas.reports import VerificationReport

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Presentations
# ----------------------------------------------------------------------
_TOKEN = re.compile(r"\(([^()]*)\)(?:\^(-?\d+))?|([A-Za-z_]\w*)(?:\^(-?\d+))?|(1)")


@dataclass
class ConstructedGroup:
    """
    A group together with the presentation it was built from.

    Relations are strings ``"lhs = rhs"`` over generator names, e.g.
    ``"tau sigma tau^-1 = sigma^2"``; a parenthesized word may carry one
    exponent, as in ``"(lambda rho)^2"``.
    """

    group: Group
    generators: dict[str, Perm]
    relations: list[str]
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    matrices: dict[str, Any] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order

    def evaluate(self, word: str) -> Perm:
        result = self.group.identity
        for inner, inner_exp, name, exp, _ in _TOKEN.findall(word):
            if inner:
                x = self.evaluate(inner) ** int(inner_exp or 1)
            elif name:
                x = self.generators[name] ** int(exp or 1)
            else:
                continue
            result = result * x
        return result

    def failing_relations(self) -> list[str]:
        failing = []
        for relation in self.relations:
            lhs, rhs = relation.split("=")
            if self.evaluate(lhs) != self.evaluate(rhs):
                failing.append(relation)
        return failing

    def verify(self, expected_order: Optional[int] = None) -> "ConstructedGroup":
        """Raise RelationViolation unless every relation holds and the order matches."""
        failing = self.failing_relations()
        if failing:
            raise RelationViolation(f"{self.group.name}: relations fail: {'; '.join(failing)}")
        if expected_order is not None and self.group.order != expected_order:
            raise RelationViolation(
                f"{self.group.name} has order {self.group.order}, expected {expected_order}"
            )
        logger.info("Constructed %s of order %d", self.group.name, self.group.order)
        return self


def _params(family: Union[str, GroupFamily], **values) -> PresentationParams:
    try:
        return PresentationParams(family=family, **values)
    except ValidationError as exc:
        message = "; ".join(err["msg"] for err in exc.errors())
        raise ParameterCongruenceViolated(message) from None


def _cycle(degree: int, points: Sequence[int]) -> Perm:
    return Perm.from_cycles(degree, [points]) if len(points) > 1 else Perm.identity(degree)


# ----------------------------------------------------------------------
# Classical permutation families
# ----------------------------------------------------------------------
def cyclic(n: int) -> ConstructedGroup:
    if n < 1:
        raise BadOrder(f"Cyclic order must be positive, got {n}")
    x = _cycle(n, range(n))
    group = Group(n, [x] if n > 1 else [], name=f"C{n}")
    return ConstructedGroup(group, {"x": x}, [f"x^{n} = 1"], "cyclic", {"n": n}).verify(n)


def abelian(orders: Sequence[int]) -> ConstructedGroup:
    """Direct product of cyclic groups of the given orders, on disjoint cycles."""
    if any(d < 1 for d in orders):
        raise BadOrder(f"Cyclic orders must be positive, got {list(orders)}")
    degree = sum(orders)
    gens, start = {}, 0
    for i, d in enumerate(orders, 1):
        gens[f"x{i}"] = _cycle(degree, range(start, start + d))
        start += d
    names = list(gens)
    relations = [f"{name}^{d} = 1" for name, d in zip(names, orders)]
    relations += [f"{a} {b} = {b} {a}" for i, a in enumerate(names) for b in names[i + 1 :]]
    group = Group(degree, [g for g in gens.values() if not g.is_identity], name="x".join(f"C{d}" for d in orders))
    total = math.prod(orders)
    return ConstructedGroup(group, gens, relations, "abelian", {"orders": list(orders)}).verify(total)


def dihedral(n: int) -> ConstructedGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 3:
        raise BadOrder(f"Dihedral groups need n ≥ 3, got {n}")
    r = _cycle(n, range(n))
    s = Perm.of([(-i) % n for i in range(n)])
    group = Group(n, [r, s], name=f"D{n}")
    relations = [f"r^{n} = 1", "s^2 = 1", "s r s^-1 = r^-1"]
    return ConstructedGroup(group, {"r": r, "s": s}, relations, "dihedral", {"n": n}).verify(2 * n)


def symmetric(n: int) -> ConstructedGroup:
    if n < 1:
        raise BadOrder(f"Symmetric groups need n ≥ 1, got {n}")
    c = _cycle(n, range(n))
    t = _cycle(n, [0, 1]) if n > 1 else Perm.identity(n)
    group = Group(n, [g for g in (c, t) if not g.is_identity], name=f"S{n}")
    return ConstructedGroup(group, {"c": c, "t": t}, ["t^2 = 1", f"c^{n} = 1"], "symmetric", {"n": n}).verify(
        factorial(n)
    )


def alternating(n: int) -> ConstructedGroup:
    if n < 3:
        raise BadOrder(f"Alternating groups need n ≥ 3, got {n}")
    gens = {f"g{i}": _cycle(n, [0, 1, i]) for i in range(2, n)}
    group = Group(n, list(gens.values()), name=f"A{n}")
    relations = [f"{name}^3 = 1" for name in gens]
    return ConstructedGroup(group, gens, relations, "alternating", {"n": n}).verify(factorial(n) // 2)


# ----------------------------------------------------------------------
# Solvable GZ families
# ----------------------------------------------------------------------
def metacyclic(m: int, n: int, r: int) -> ConstructedGroup:
    """
    ``⟨σ, τ : σ^m = τ^n = 1, τστ⁻¹ = σ^r⟩`` on the points ``Z/m × Z/n``.

    σ moves ``(i, j) -> (i + 1, j)`` and τ moves ``(i, j) -> (r·i, j + 1)``.

    Example:
    >>> metacyclic(7, 3, 2).order
    21
    """
    _params(GroupFamily.METACYCLIC, m=m, n=n, r=r)

    def point(i: int, j: int) -> int:
        return (i % m) * n + (j % n)

    degree = m * n
    sigma = Perm.of([point(i + 1, j) for i in range(m) for j in range(n)])
    tau = Perm.of([point(i * r, j + 1) for i in range(m) for j in range(n)])
    group = Group(degree, [g for g in (sigma, tau) if not g.is_identity], name=f"M({m},{n},{r})")
    relations = [f"sigma^{m} = 1", f"tau^{n} = 1", f"tau sigma tau^-1 = sigma^{r}"]
    params = {"m": m, "n": n, "r": r}
    return ConstructedGroup(group, {"sigma": sigma, "tau": tau}, relations, "metacyclic", params).verify(m * n)


def cyclic_extension(k: Group, beta: Mapping[Perm, Perm], z: Perm, name: str) -> tuple[Group, Callable[[Perm], Perm], Perm]:
    """
    The group ``K ∪ Kν`` with ``νxν⁻¹ = β(x)`` and ``ν² = z``, z central and fixed by β.

    Elements are pairs ``(x, e)`` with product
    ``(x, e)(y, f) = (x·β^e(y)·z^[e = f = 1], e + f mod 2)``, realized by left
    multiplication on the ``2|K|`` pairs.

    Returns the group, the embedding of ``K`` and the element ν.
    """
    beta = automorphism(k, beta)
    if beta[z] != z or any(z * x != x * z for x in k.generators):
        raise RelationViolation("Extension element must be central and fixed by the automorphism")
    if any(beta[beta[x]] != x for x in k.generators):
        raise RelationViolation("Automorphism must square to the identity")
    elems = k.elements
    size = len(elems)

    def left(x: Perm, e: int) -> Perm:
        images = []
        for f in (0, 1):
            for y in elems:
                prod = x * (beta[y] if e else y)
                if e and f:
                    prod = prod * z
                images.append(k.index(prod) + size * ((e + f) % 2))
        return Perm(tuple(images))

    nu = left(k.identity, 1)
    group = Group(2 * size, [left(s, 0) for s in k.generators] + [nu], cap=k.cap, name=name)
    if group.order != 2 * size:
        raise RelationViolation(f"Cyclic extension has order {group.order}, expected {2 * size}")
    return group, lambda x: left(x, 0), nu


def quaternion_generalized(order: int) -> ConstructedGroup:
    """Generalized quaternion group ``⟨x, y : x^(order/2) = 1, y² = x^(order/4), yxy⁻¹ = x⁻¹⟩``."""
    if order < 8 or order & (order - 1):
        raise BadOrder(f"Generalized quaternion order must be a power of 2 at least 8, got {order}")
    half = order // 2
    base = cyclic(half).group
    x0 = base.generators[0]
    group, embed, y = cyclic_extension(base, {x0: x0.inverse()}, x0 ** (half // 2), name=f"Q{order}")
    x = embed(x0)
    relations = [f"x^{half} = 1", f"y^2 = x^{half // 2}", "y x y^-1 = x^-1"]
    cg = ConstructedGroup(group, {"x": x, "y": y}, relations, "quaternion", {"order": order})
    cg.verify(order)
    if not is_generalized_quaternion(group):
        raise RelationViolation(f"Q{order} does not have a unique involution")
    return cg


def _over_cyclic(
    m: int, k: Group, exponents: Mapping[Perm, int], name: str
) -> tuple[Group, Perm, Callable[[Perm], Perm]]:
    """``C_m ⋊ K`` where each listed generator of ``K`` acts by ``σ -> σ^e``; others act trivially."""
    if m == 1:
        k.name = name
        return k, k.identity, lambda x: x
    cm = cyclic(m).group
    s0 = cm.generators[0]
    action = {y: {s0: s0**e} for y, e in exponents.items()}
    prod = semidirect_product(cm, k, action, name=name)
    return prod.group, prod.embed_left(s0), prod.embed_right


def _quaternion_by_cyclic(n: int) -> tuple[ProductGroup, Perm, Perm, Perm]:
    """``Q8 ⋊ C_n`` with the generator of ``C_n`` acting by ``i -> j, j -> ij``; needs ``3 | n``."""
    q8 = quaternion_generalized(8)
    i, j = q8.generators["x"], q8.generators["y"]
    cn = cyclic(n).group
    t0 = cn.generators[0] if cn.generators else cn.identity
    action = {t0: {i: j, j: i * j}} if cn.generators else {}
    prod = semidirect_product(q8.group, cn, action, name=f"Q8:C{n}")
    return prod, prod.embed_left(i), prod.embed_left(j), prod.embed_right(t0)


def gz_type(params: PresentationParams) -> ConstructedGroup:
    """
    Solvable GZ-group of type II, III or IV.

    - II: ``C_m ⋊ K`` with ``K = ⟨τ, λ⟩``, ``λ² = τ^(n/2)``, ``λτλ⁻¹ = τ^k``.
    - III: ``C_m ⋊ (Q8 ⋊ C_n)`` with τ acting on Q8 by ``λ -> ρ -> λρ``.
    - IV: the type-III group extended by ν with ``ν² = λ²``.
    """
    family = GroupFamily(params.family)
    m, n, r = params.m, params.n, params.r
    name = f"{family.value}({m},{n},{r})"
    if family in (GroupFamily.I, GroupFamily.METACYCLIC):
        return metacyclic(m, n, r)
    if family == GroupFamily.II:
        k, l = params.k, params.l
        cn = cyclic(n).group
        t0 = cn.generators[0]
        kgroup, embed, lam = cyclic_extension(cn, {t0: t0**k}, t0 ** (n // 2), name=f"K{n}")
        tau0 = embed(t0)
        group, sigma, into = _over_cyclic(m, kgroup, {tau0: r, lam: l}, name)
        gens = {"sigma": sigma, "tau": into(tau0), "lambda": into(lam)}
        relations = [
            f"sigma^{m} = 1",
            f"tau^{n} = 1",
            f"lambda^2 = tau^{n // 2}",
            f"tau sigma tau^-1 = sigma^{r}",
            f"lambda sigma lambda^-1 = sigma^{l}",
            f"lambda tau lambda^-1 = tau^{k}",
        ]
        cg = ConstructedGroup(group, gens, relations, "II", params.model_dump(exclude_none=True))
        return cg.verify(params.order)

    prod, lam0, rho0, tau0 = _quaternion_by_cyclic(n)
    relations = [
        f"sigma^{m} = 1",
        f"tau^{n} = 1",
        "lambda^4 = 1",
        "lambda^2 = rho^2",
        "rho^2 = (lambda rho)^2",
        f"tau sigma tau^-1 = sigma^{r}",
        "lambda sigma lambda^-1 = sigma",
        "rho sigma rho^-1 = sigma",
        "tau lambda tau^-1 = rho",
        "tau rho tau^-1 = lambda rho",
    ]
    if family == GroupFamily.III:
        group, sigma, into = _over_cyclic(m, prod.group, {tau0: r}, name)
        gens = {"sigma": sigma, "tau": into(tau0), "lambda": into(lam0), "rho": into(rho0)}
        cg = ConstructedGroup(group, gens, relations, "III", params.model_dump(exclude_none=True))
        return cg.verify(params.order)

    k, t = params.k, params.t
    k1 = prod.group
    beta = {lam0: rho0 * lam0, rho0: rho0.inverse(), tau0: tau0**k}
    k2, embed, nu = cyclic_extension(k1, beta, lam0 * lam0, name=f"K1.{n}")
    group, sigma, into = _over_cyclic(m, k2, {embed(tau0): r, nu: t}, name)
    gens = {
        "sigma": sigma,
        "tau": into(embed(tau0)),
        "lambda": into(embed(lam0)),
        "rho": into(embed(rho0)),
        "nu": into(nu),
    }
    relations += [
        "lambda^2 = nu^2",
        "nu lambda nu^-1 = rho lambda",
        "nu rho nu^-1 = rho^-1",
        f"nu sigma nu^-1 = sigma^{t}",
        f"nu tau nu^-1 = tau^{k}",
    ]
    cg = ConstructedGroup(group, gens, relations, "IV", params.model_dump(exclude_none=True))
    return cg.verify(params.order)


def g1_group(l: int) -> ConstructedGroup:
    """Type III with ``m = 1, n = 3^l``; ``SL2(F_3)`` when ``l = 1``."""
    if l < 1:
        raise BadOrder(f"l must be at least 1, got {l}")
    return gz_type(_params(GroupFamily.III, m=1, n=3**l, r=1))


def g2_group(l: int) -> ConstructedGroup:
    """Type IV with ``m = 1, n = 3^l, k = -1``; the binary octahedral group when ``l = 1``."""
    if l < 1:
        raise BadOrder(f"l must be at least 1, got {l}")
    n = 3**l
    return gz_type(_params(GroupFamily.IV, m=1, n=n, r=1, k=n - 1, t=1))


# ----------------------------------------------------------------------
# Matrix groups
# ----------------------------------------------------------------------
def sl2(p: int, cap: Optional[int] = None) -> ConstructedGroup:
    """
    ``SL2(F_p)`` acting on the ``p² - 1`` nonzero vectors of ``F_p²``.

    Generated by the elementary matrices ``T = [[1, 1], [0, 1]]`` and ``U = [[1, 0], [1, 1]]``.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    cap = cap if cap is not None else settings.ORDER_CAP
    order = p * (p * p - 1)
    if order > cap:
        raise OrderCapExceeded(f"SL2(F_{p}) has order {order}, above cap {cap}")
    F = FiniteField(p)
    T, U, minus = F.matrix([[1, 1], [0, 1]]), F.matrix([[1, 0], [1, 1]]), F.matrix([[-1, 0], [0, -1]])
    (pT, pU, pE), _ = vector_action(F, [T, U, minus])
    group = Group(p * p - 1, [pT, pU], cap=cap, name=f"SL2(F{p})")
    relations = [f"T^{p} = 1", f"U^{p} = 1", "eps^2 = 1", "T eps = eps T", "U eps = eps U"]
    cg = ConstructedGroup(group, {"T": pT, "U": pU, "eps": pE}, relations, "sl2", {"p": p}, {"T": T, "U": U})
    return cg.verify(order)


def _fifth_root(F: FiniteField, zeta: Optional[int]):
    if F.p in (2, 5):
        raise BadCharacteristic(f"Characteristic {F.p} is excluded")
    if (F.q - 1) % 5:
        raise NoFifthRoot(f"F_{F.q} contains no primitive 5th root of unity")
    if zeta is None:
        return F.roots_of_unity(5)[0]
    z = F.GF(int(zeta) % F.q)
    if z == F.GF(1) or z**5 != F.GF(1):
        raise NoFifthRoot(f"{zeta} is not a primitive 5th root of unity in F_{F.q}")
    return z


BINARY_ICOSAHEDRAL_RELATIONS = [
    "eps^2 = 1",
    "a^5 = eps",
    "b^2 = eps",
    "c^2 = eps",
    "b a b^-1 = a^-1",
    "b c b^-1 = eps c",
    "c a c = a c b a",
    "c a^2 c = a^-2 c a^-2",
]


def binary_icosahedral(q: Optional[int] = None, zeta: Optional[int] = None) -> ConstructedGroup:
    """
    The binary icosahedral group ``H = ⟨a, b, c⟩`` in ``GL2(F_q)``.

    ``a = -diag(ζ³, ζ²)``, ``b = [[0, 1], [-1, 0]]`` and
    ``c = (ζ² - ζ⁻²)⁻¹ [[ζ + ζ⁻¹, 1], [1, -(ζ + ζ⁻¹)]]`` for a primitive 5th root ζ.
    """
    q = q if q is not None else settings.ZETA5_MODULUS
    F = FiniteField(q)
    z = _fifth_root(F, zeta)
    s = z + z**4
    a = -F.diag([z**3, z**2])
    b = F.matrix([[0, 1], [-1, 0]])
    c = (F.GF(1) / (z**2 - z**3)) * F.matrix([[s, 1], [1, -s]])
    mg = MatrixGroup(F, [a, b, c])
    group = mg.to_group(name=f"H(F{q})")
    gens = {"a": mg.perm(a), "b": mg.perm(b), "c": mg.perm(c), "eps": mg.perm(mat_pow(a, 5))}
    cg = ConstructedGroup(
        group,
        gens,
        list(BINARY_ICOSAHEDRAL_RELATIONS),
        "binary-icosahedral",
        {"q": q, "zeta": int(z)},
        {"a": a, "b": b, "c": c},
        {"matrix_group": mg},
    )
    return cg.verify(120)


def _sl2_f5_abc():
    F5 = FiniteField(5)
    A = F5.matrix([[-1, 1], [0, -1]])
    B = F5.matrix([[2, 1], [0, -2]])
    C = F5.matrix([[2, 0], [2, -2]])
    return F5, A, B, C


def _theta_matrix(F: FiniteField, omega: int):
    return F.matrix([[0, -1], [omega, 0]])


A5_IMAGES = {
    "a": Perm.from_cycles(5, [[0, 1, 2, 3, 4]]),
    "b": Perm.from_cycles(5, [[0, 3], [1, 2]]),
    "c": Perm.from_cycles(5, [[0, 2], [1, 3]]),
}


def verify_binary_icosahedral(q: Optional[int] = None, zeta: Optional[int] = None) -> VerificationReport:
    """
    Check the identification ``SL2(F_5) ≅ H`` and its consequences.

    Sub-checks:
    - ``sl2_generated_by_ABC``: ``A, B, C`` generate a group of order 120.
    - ``binary_icosahedral_relations``: all relations of ``H`` hold on ``a, b, c``.
    - ``phi_isomorphism``: ``A -> a, B -> b, C -> c`` extends to an isomorphism.
    - ``pi_surjective_onto_A5`` and ``pi_kernel_is_center``: ``π`` maps onto a
      group of order 60 with kernel ``{1, ε}``.
    - ``A5_simple``: the image has exactly two normal subgroups.
    - ``theta_A``, ``theta_B``, ``theta_C``: conjugation by ``[[0, -1], [ω, 0]]``
      sends ``A, B, C`` to ``-A³CA, -C, -B``.
    """
    q = q if q is not None else settings.ZETA5_MODULUS
    report = VerificationReport(subject=f"SL2(F_5) and the binary icosahedral group over F_{q}")
    F5, A, B, C = _sl2_f5_abc()
    sl = MatrixGroup(F5, [A, B, C])
    report.run("sl2_generated_by_ABC", lambda: sl.order == 120, f"|<A, B, C>| = {sl.order}")
    try:
        h = binary_icosahedral(q, zeta)
        report.add("binary_icosahedral_relations", True, f"|H| = {h.order}")
    except ToolkitError as exc:
        report.add("binary_icosahedral_relations", False, f"{type(exc).__name__}: {exc}")
        return report

    hg = h.group
    sl_group = sl.to_group("SL2(F5)")
    abc = [sl.perm(M) for M in (A, B, C)]

    def phi_is_isomorphism() -> bool:
        phi = homomorphism_from_images(sl_group, abc, hg, [h.generators[x] for x in "abc"])
        return len(set(phi.values())) == hg.order == sl_group.order

    report.run("phi_isomorphism", phi_is_isomorphism)

    s5 = symmetric(5).group
    pi: dict[Perm, Perm] = {}

    def pi_surjective() -> bool:
        pi.update(homomorphism_from_images(hg, [h.generators[x] for x in "abc"], s5, list(A5_IMAGES.values())))
        return len(set(pi.values())) == 60

    report.run("pi_surjective_onto_A5", pi_surjective)
    if pi:
        kernel = {x for x, y in pi.items() if y.is_identity}
        eps = h.generators["eps"]
        report.add("pi_kernel_is_center", kernel == {hg.identity, eps} == set(hg.center.elements))
        report.add("pi_epsilon_trivial", pi[eps].is_identity)
        image = Group(5, list(A5_IMAGES.values()), name="A5")
        report.run("A5_simple", lambda: len(normal_subgroups(image)) == 2, "normal subgroups of the image")

    M = _theta_matrix(F5, settings.OMEGA)
    M_inv = np.linalg.inv(M)
    minus = -F5.identity(2)

    def theta(X):
        return M @ X @ M_inv

    report.add("theta_A", key(theta(A)) == key(minus @ mat_pow(A, 3) @ C @ A), "θ(A) = -A³CA")
    report.add("theta_B", key(theta(B)) == key(minus @ C), "θ(B) = -C")
    report.add("theta_C", key(theta(C)) == key(minus @ B), "θ(C) = -B")
    return report


def g_plus(q: Optional[int] = None, omega: Optional[int] = None) -> ConstructedGroup:
    """
    ``G+ = ⟨λ, L⟩`` inside ``GL2(F_q)`` with ``L = SL2(F_p)``, ``p = char F_q``.

    ``λ = c·M`` with ``M = [[0, -1], [ω, 0]]`` and ``c² = ω⁻¹``, so that
    ``λ² = -I = ε`` and ``λρλ⁻¹ = MρM⁻¹ = θ(ρ)``. For ``p = 5`` the group ``L``
    is generated by the matrices ``A, B, C``; otherwise by the elementary matrices.
    """
    q = q if q is not None else settings.GPLUS_MODULUS
    F = FiniteField(q)
    p = F.p
    if p < 5:
        raise BadCharacteristic(f"G+ needs characteristic at least 5, got {p}")
    if omega is None:
        omega = settings.OMEGA if p == 5 else int(FiniteField(p).primitive_element)
    if n_order(omega % p, p) != p - 1:
        raise NoSuchScalar(f"ω = {omega} does not generate F_{p}^×")
    c = F.sqrt(pow(omega, -1, p))
    if c is None:
        raise NoSuchScalar(f"No c in F_{q} with c² = 1/{omega}")
    M = _theta_matrix(F, omega)
    lam = c * M
    if p == 5:
        names = ["A", "B", "C"]
        l_mats = [F.matrix(X.tolist()) for X in _sl2_f5_abc()[1:]]
    else:
        names = ["T", "U"]
        l_mats = [F.matrix([[1, 1], [0, 1]]), F.matrix([[1, 0], [1, 1]])]
    mg = MatrixGroup(F, [lam] + l_mats)
    group = mg.to_group(name=f"G+(F{q})")
    gens = {"lambda": mg.perm(lam), "eps": mg.perm(-F.identity(2))}
    gens.update({name: mg.perm(X) for name, X in zip(names, l_mats)})
    relations = ["lambda^4 = 1", "lambda^2 = eps", "eps^2 = 1"]
    if p == 5:
        relations += [r.replace("a", "A").replace("b", "B").replace("c", "C") for r in BINARY_ICOSAHEDRAL_RELATIONS[1:]]
        relations += ["lambda A lambda^-1 = eps A^3 C A", "lambda B lambda^-1 = eps C", "lambda C lambda^-1 = eps B"]
    M_inv = np.linalg.inv(M)
    theta_ok = all(mg.perm(M @ X @ M_inv) == gens["lambda"] * gens[n] * gens["lambda"].inverse() for n, X in zip(names, l_mats))
    if not theta_ok:
        raise RelationViolation("λ does not act on L by θ")
    order = 2 * p * (p * p - 1)
    L = Subgroup(group, [gens[n] for n in names])
    cg = ConstructedGroup(
        group,
        gens,
        relations,
        "g-plus",
        {"q": q, "omega": omega},
        {"lambda": lam, **dict(zip(names, l_mats))},
        {"L": L, "matrix_group": mg, "L_names": names},
    )
    cg.verify(order)
    if L.order != p * (p * p - 1):
        raise RelationViolation(f"L has order {L.order}")
    return cg


def double_cover_type(
    g: Group, z: Perm, projection: Union[Mapping[Perm, Perm], Callable[[Perm], Perm]]
) -> Literal["hat", "tilde"]:
    """
    Tell the two double covers of ``S_n`` apart.

    Preimages of a transposition have order 4 in ``Ŝ_n`` (hat) and order 2 in
    ``S̃_n`` (tilde); preimages of a product of two disjoint transpositions
    have order 4 in both, otherwise the extension is rejected.
    """
    project = projection if callable(projection) else projection.__getitem__
    if z.order() != 2 or any(z * s != s * z for s in g.generators):
        raise NotACentralExtension("The kernel element must be central of order 2")
    kernel = [x for x in g.elements if project(x).is_identity]
    if set(kernel) != {g.identity, z}:
        raise NotACentralExtension(f"Projection kernel has order {len(kernel)}, expected 2")
    transposition_orders, double_orders = set(), set()
    for x in g.elements:
        shape = sorted(len(c) for c in project(x).cycles())
        if shape == [2]:
            transposition_orders.add(x.order())
        elif shape == [2, 2]:
            double_orders.add(x.order())
    if not transposition_orders:
        raise NotACentralExtension("The image contains no transpositions")
    if double_orders and double_orders != {4}:
        raise NotACentralExtension("A product of disjoint transpositions lifts to an involution")
    if transposition_orders == {4}:
        return "hat"
    if transposition_orders == {2}:
        return "tilde"
    raise NotACentralExtension("Transposition lifts have mixed orders")


def verify_g_plus(q: Optional[int] = None) -> VerificationReport:
    """``|G+| = 240``, ``λ`` of order 4, ``G+/⟨ε⟩ ≅ S_5`` via ψ and ``G+ ≅ Ŝ_5``."""
    q = q if q is not None else settings.GPLUS_MODULUS
    report = VerificationReport(subject=f"G+ over F_{q}")
    try:
        gp = g_plus(q)
    except ToolkitError as exc:
        report.add("construction", False, f"{type(exc).__name__}: {exc}")
        return report
    group, gens = gp.group, gp.generators
    report.add("order_240", group.order == 240, f"|G+| = {group.order}")
    report.add("lambda_order_4", gens["lambda"].order() == 4)
    report.add("lambda_squared_is_epsilon", gens["lambda"] ** 2 == gens["eps"])
    report.add("generated_by_lambda_and_L", Subgroup(group, [gens["lambda"]] + gp.extras["L"].generators).is_whole())
    if group.order != 240:
        return report
    s5 = symmetric(5).group
    images = [Perm.from_cycles(5, [[2, 3]])] + list(A5_IMAGES.values())
    psi: dict[Perm, Perm] = {}

    def psi_onto() -> bool:
        psi.update(homomorphism_from_images(group, [gens[n] for n in ("lambda", "A", "B", "C")], s5, images))
        return len(set(psi.values())) == 120

    report.run("psi_onto_S5", psi_onto, "λ̄ -> (3 4)")
    if psi:
        kernel = {x for x, y in psi.items() if y.is_identity}
        report.add("psi_kernel_is_epsilon", kernel == {group.identity, gens["eps"]})
        report.run("double_cover_hat", lambda: double_cover_type(group, gens["eps"], psi) == "hat")
    return report


def _rep_field(l: int, q: Optional[int]) -> tuple[FiniteField, Any, Any]:
    if l < 1:
        raise BadOrder(f"l must be at least 1, got {l}")
    q = q if q is not None else settings.REP_MODULUS
    need = lcm(8, 3**l)
    if (q - 1) % need:
        raise BadModulus(f"Need q ≡ 1 (mod {need}), got q = {q}")
    F = FiniteField(q)
    if F.p in (2, 3):
        raise BadModulus(f"Characteristic {F.p} is excluded")
    return F, F.root_of_unity(3**l), F.root_of_unity(8)


G1_RELATIONS = [
    "lambda^4 = 1",
    "lambda^2 = rho^2",
    "rho^2 = (lambda rho)^2",
    "tau lambda tau^-1 = rho",
    "tau rho tau^-1 = lambda rho",
]


def _faithfulness(report: VerificationReport, cg: ConstructedGroup, expected: int, exponent: int) -> None:
    report.add("relations", not cg.failing_relations(), "; ".join(cg.failing_relations()))
    report.add("faithful", cg.order == expected, f"generated order {cg.order}, abstract order {expected}")
    report.add("exponent", cg.group.exponent == exponent, f"exponent {cg.group.exponent}")
    report.notes.append("Irreducibility is not checked over the finite-field model")


def rep_phi(l: int, q: Optional[int] = None) -> tuple[ConstructedGroup, VerificationReport]:
    """
    The two-dimensional representation of ``G1``:

    ``λ -> diag(i, -i)``, ``ρ -> [[0, -1], [1, 0]]``,
    ``τ -> (ζ/√2)·[[-η, η], [η³, η³]]`` with ``η`` a primitive 8th root,
    ``i = η²`` and ``√2 = η + η⁻¹``.
    """
    F, zeta, eta = _rep_field(l, q)
    i = eta**2
    sqrt2 = eta + eta**7
    lam = F.diag([i, -i])
    rho = F.matrix([[0, -1], [1, 0]])
    tau = (zeta / sqrt2) * F.matrix([[-eta, eta], [eta**3, eta**3]])
    mg = MatrixGroup(F, [tau, lam, rho])
    group = mg.to_group(name=f"Phi({l})")
    gens = {"tau": mg.perm(tau), "lambda": mg.perm(lam), "rho": mg.perm(rho)}
    n = 3**l
    cg = ConstructedGroup(
        group, gens, [f"tau^{n} = 1"] + G1_RELATIONS, "rep-phi", {"l": l, "q": F.q},
        {"tau": tau, "lambda": lam, "rho": rho}, {"matrix_group": mg},
    )
    report = VerificationReport(subject=f"Phi for l = {l} over F_{F.q}")
    _faithfulness(report, cg, 8 * n, 4 * n)
    report.add("tau_power_identity", key(mat_pow(tau, n)) == key(F.identity(2)), f"Φ(τ)^{n} = 1")
    report.add("lambda_rho_squares", key(lam @ lam) == key(rho @ rho), "Φ(λ)² = Φ(ρ)²")
    return cg, report


def rep_psi(l: int, q: Optional[int] = None) -> tuple[ConstructedGroup, VerificationReport]:
    """
    The four-dimensional representation of ``G2`` in 2+2 blocks.

    The upper block of ``τ`` is ``[[(-1-i)/2, (1+i)/2], [(-1+i)/2, (-1+i)/2]]`` and the
    lower ``diag(ζ, ζ⁻¹)``; ``ν`` is ``(1/√-2)[[1, 1], [1, -1]]`` over the swap,
    with ``√-2 = η³ + η``.
    """
    F, zeta, eta = _rep_field(l, q)
    i = eta**2
    one = F.GF(1)
    half = one / F(2)
    sqrt_m2 = eta**3 + eta
    if sqrt_m2 * sqrt_m2 != -F(2):
        raise BadModulus("η³ + η is not a square root of -2")
    I2 = F.identity(2)
    lam = F.block_diag(F.diag([i, -i]), I2)
    rho = F.block_diag(F.matrix([[0, -1], [1, 0]]), I2)
    tau_upper = half * F.matrix([[-one - i, one + i], [-one + i, -one + i]])
    tau = F.block_diag(tau_upper, F.diag([zeta, zeta ** (3**l - 1)]))
    nu = F.block_diag((one / sqrt_m2) * F.matrix([[1, 1], [1, -1]]), F.matrix([[0, 1], [1, 0]]))
    mg = MatrixGroup(F, [tau, lam, rho, nu])
    group = mg.to_group(name=f"Psi({l})")
    gens = {"tau": mg.perm(tau), "lambda": mg.perm(lam), "rho": mg.perm(rho), "nu": mg.perm(nu)}
    n = 3**l
    relations = [f"tau^{n} = 1"] + G1_RELATIONS + [
        "lambda^2 = nu^2",
        "nu lambda nu^-1 = rho lambda",
        "nu rho nu^-1 = rho^-1",
        "nu tau nu^-1 = tau^-1",
    ]
    cg = ConstructedGroup(
        group, gens, relations, "rep-psi", {"l": l, "q": F.q},
        {"tau": tau, "lambda": lam, "rho": rho, "nu": nu}, {"matrix_group": mg},
    )
    report = VerificationReport(subject=f"Psi for l = {l} over F_{F.q}")
    _faithfulness(report, cg, 16 * n, 8 * n)
    blocks_ok = all(
        not np.any(X[:2, 2:].view(np.ndarray)) and not np.any(X[2:, :2].view(np.ndarray)) for X in (tau, lam, rho, nu)
    )
    report.add("block_structure", blocks_ok, "every generator preserves the 2+2 splitting")
    report.add("nu_swaps_lower_block", key(nu[2:, 2:] @ tau[2:, 2:] @ nu[2:, 2:]) == key(np.linalg.inv(tau[2:, 2:])))
    report.add("nu_squared_is_lambda_squared", key(nu @ nu) == key(lam @ lam), "Ψ(ν)² = Ψ(λ)²")
    return cg, report


def verify_representations(l: int = 1, q: Optional[int] = None) -> VerificationReport:
    """Both representations, the abstract groups ``G1``, ``G2`` and their structure."""
    report = VerificationReport(subject=f"G1 and G2 for l = {l}")
    n = 3**l
    try:
        phi, phi_report = rep_phi(l, q)
        psi, psi_report = rep_psi(l, q)
    except ToolkitError as exc:
        report.add("representations", False, f"{type(exc).__name__}: {exc}")
        return report
    for prefix, sub in (("phi", phi_report), ("psi", psi_report)):
        for c in sub.checks:
            report.add(f"{prefix}_{c.name}", c.passed, c.detail)
    g1, g2 = g1_group(l), g2_group(l)
    report.add("g1_order", g1.order == 8 * n, f"|G1| = {g1.order}")
    report.add("g2_order", g2.order == 16 * n, f"|G2| = {g2.order}")
    report.add("g1_exponent", g1.group.exponent == 4 * n, f"exp(G1) = {g1.group.exponent}")
    report.add("g2_exponent", g2.group.exponent == 8 * n, f"exp(G2) = {g2.group.exponent}")
    report.run("g1_sylow2_quaternion", lambda: sylow(g1.group, 2).group.order == 8 and is_generalized_quaternion(sylow(g1.group, 2).group))
    report.run("g2_sylow2_generalized_quaternion", lambda: is_generalized_quaternion(sylow(g2.group, 2).group) and sylow(g2.group, 2).order == 16)
    report.run("phi_image_isomorphic_to_g1", lambda: bool(is_isomorphic(phi.group, g1.group)))
    report.run("psi_image_isomorphic_to_g2", lambda: bool(is_isomorphic(psi.group, g2.group)))
    report.notes.append("Irreducibility of Phi is not checked over the finite-field model")
    return report


# ----------------------------------------------------------------------
# Non-solvable GZ families and Frobenius groups
# ----------------------------------------------------------------------
def nonsolvable_gz(params: PresentationParams) -> ConstructedGroup:
    """
    NS-I: ``H × SL2(F_p)`` with ``H = metacyclic(m, n, r)``.
    NS-II: ``C_m ⋊ (C_n × G+)`` where τ acts by ``σ -> σ^r``, λ by inversion and L trivially.
    """
    family = GroupFamily(params.family)
    m, n, r, p = params.m, params.n, params.r, params.p
    if family == GroupFamily.NS_I:
        h = metacyclic(m, n, r)
        s = sl2(p)
        prod = direct_product(h.group, s.group, name=f"NS-I({m},{n},{r};{p})")
        gens = {name: prod.embed_left(x) for name, x in h.generators.items()}
        gens.update({name: prod.embed_right(x) for name, x in s.generators.items()})
        relations = h.relations + s.relations + [f"{a} {b} = {b} {a}" for a in h.generators for b in ("T", "U")]
        cg = ConstructedGroup(prod.group, gens, relations, "NS-I", params.model_dump(exclude_none=True))
        return cg.verify(params.order)
    if family != GroupFamily.NS_II:
        raise ParameterCongruenceViolated(f"{family.value} is not a non-solvable family")
    gp = g_plus(p * p)
    cn = cyclic(n)
    prod = direct_product(cn.group, gp.group, name=f"C{n}xG+")
    tau0 = prod.embed_left(cn.generators["x"])
    lam0 = prod.embed_right(gp.generators["lambda"])
    group, sigma, into = _over_cyclic(m, prod.group, {tau0: r, lam0: -1}, f"NS-II({m},{n},{r};{p})")
    gens = {"sigma": sigma, "tau": into(tau0)}
    gens.update({name: into(prod.embed_right(x)) for name, x in gp.generators.items()})
    l_names = gp.extras["L_names"]
    relations = [
        f"sigma^{m} = 1",
        f"tau^{n} = 1",
        f"tau sigma tau^-1 = sigma^{r}",
        "lambda sigma lambda^-1 = sigma^-1",
        "tau lambda = lambda tau",
    ] + gp.relations
    relations += [f"{a} {x} = {x} {a}" for a in ("sigma", "tau") for x in l_names]
    cg = ConstructedGroup(group, gens, relations, "NS-II", params.model_dump(exclude_none=True))
    cg.extras["L"] = Subgroup(group, [gens[x] for x in l_names])
    return cg.verify(params.order)


def linear_semidirect(p: int, matrices: Sequence[Any], name: Optional[str] = None) -> ConstructedGroup:
    """
    ``F_p^d ⋊ ⟨matrices⟩`` with matrices acting on column vectors.

    The complement is realized by its regular representation.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    F = FiniteField(p)
    mats = [F.matrix(M.tolist()) if hasattr(M, "tolist") else F.matrix(M) for M in matrices]
    dim = mats[0].shape[0]
    base = abelian([p] * dim)
    basis = [base.generators[f"x{i + 1}"] for i in range(dim)]
    mg = MatrixGroup(F, mats)
    h = mg.to_group(name="H")

    def image(M, j: int) -> Perm:
        col = M[:, j].view(np.ndarray)
        result = base.group.identity
        for e, coeff in zip(basis, col):
            result = result * e ** int(coeff)
        return result

    action = {mg.perm(M): {basis[j]: image(M, j) for j in range(dim)} for M in mats}
    prod = semidirect_product(base.group, h, action, name=name or f"F{p}^{dim}:H")
    gens = {f"e{j + 1}": prod.embed_left(e) for j, e in enumerate(basis)}
    gens.update({f"h{i + 1}": prod.embed_right(mg.perm(M)) for i, M in enumerate(mats)})
    cg = ConstructedGroup(prod.group, gens, [], "linear-semidirect", {"p": p, "dimension": dim})
    cg.extras.update({"kernel": prod.left, "complement": prod.right, "matrix_group": mg})
    return cg.verify(p**dim * mg.order)


def frobenius_sl25(q: Optional[int] = None) -> ConstructedGroup:
    """``F_q² ⋊ SL2(F_5)``, the binary icosahedral matrices acting on the plane over ``F_q``."""
    q = q if q is not None else settings.ZETA5_MODULUS
    h = binary_icosahedral(q)
    cg = linear_semidirect(q, [h.matrices[x] for x in "abc"], name=f"F{q}^2:SL2(F5)")
    cg.family = "frobenius-sl25"
    cg.params = {"q": q}
    return cg


def frobenius_group(
    n: Group, h: Group, action: Mapping[Perm, Mapping[Perm, Perm]], name: Optional[str] = None
) -> ConstructedGroup:
    """``N ⋊ H`` checked to be a Frobenius group with kernel ``N`` and complement ``H``."""
    from app.operations.frobenius import is_fixed_point_free

    prod = semidirect_product(n, h, action, name=name)
    if not is_fixed_point_free(prod.left, prod.right):
        raise NotAComplement("The action is not fixed-point-free")
    cg = ConstructedGroup(prod.group, {}, [], "frobenius", {"kernel_order": n.order, "complement_order": h.order})
    cg.extras.update({"kernel": prod.left, "complement": prod.right})
    return cg


__all__ = [
    "ConstructedGroup",
    "abelian",
    "alternating",
    "binary_icosahedral",
    "cyclic",
    "cyclic_extension",
    "dihedral",
    "double_cover_type",
    "frobenius_group",
    "frobenius_sl25",
    "g1_group",
    "g2_group",
    "g_plus",
    "gz_type",
    "linear_semidirect",
    "metacyclic",
    "metacyclic_conditions_hold",
    "nonsolvable_gz",
    "quaternion_generalized",
    "rep_phi",
    "rep_psi",
    "sl2",
    "symmetric",
    "verify_g_plus",
    "verify_binary_icosahedral",
    "verify_representations",
]
