# app/models/fields.py
"""
Ground fields as far as the rationality rules need them: characteristic,
roots of unity, and whether ``k(ζ_{2^r})/k`` is cyclic.

Built-in fields are named by short strings:

- ``Q``         the rationals
- ``Qzeta:m``   the cyclotomic field Q(ζ_m)
- ``C``         the complex numbers
- ``Fq:q``      the finite field with q elements (not infinite)
- ``charp:q``   an infinite field of characteristic p containing F_q, F_q(t)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from math import gcd, lcm
from typing import Literal

from sympy import factorint, n_order

from app.core.errors import BadSpec

logger = logging.getLogger(__name__)

FieldKind = Literal["Q", "Qzeta", "C", "Fq", "charp"]


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "Answer":
        return cls.YES if value else cls.NO


def _normalize(m: int) -> int:
    # Q(ζ_m) = Q(ζ_2m) for odd m
    return 2 * m if m % 2 else m


def _unit_kernel_is_cyclic(big: int, small: int) -> bool:
    """Whether ``ker((Z/big)^× -> (Z/small)^×)`` is cyclic, by enumeration."""
    kernel = [u for u in range(1, big + 1) if gcd(u, big) == 1 and (u - 1) % small == 0]
    if len(kernel) == 1:
        return True
    return max(n_order(u % big, big) if big > 1 else 1 for u in kernel) == len(kernel)


@dataclass(frozen=True)
class FieldModel:
    """
    A ground field ``k``.

    ``level`` is the cyclotomic level of ``Qzeta`` fields and ``q`` the size
    of the constant field of ``Fq`` and ``charp`` fields.
    """

    name: str
    kind: FieldKind
    characteristic: int
    is_infinite: bool
    is_number_field: bool
    level: int = 1
    q: int = 0

    def contains_zeta(self, m: int) -> Answer:
        """Whether ``k`` contains a primitive ``m``-th root of unity."""
        if m < 1:
            raise BadSpec(f"Root of unity order must be positive, got {m}")
        p = self.characteristic
        if p and m % p == 0:
            return Answer.NO
        if self.kind == "C":
            return Answer.YES
        if self.kind == "Q":
            return Answer.of(2 % m == 0)
        if self.kind == "Qzeta":
            return Answer.of(_normalize(self.level) % _normalize(m) == 0)
        return Answer.of((self.q - 1) % m == 0)

    def cyclic_cyclotomic_ext(self, r: int) -> Answer:
        """Whether ``k(ζ_{2^r})/k`` is a cyclic extension."""
        if r <= 1 or self.contains_zeta(2**r) == Answer.YES:
            return Answer.YES
        if self.characteristic:
            # extensions of finite constant fields are cyclic
            return Answer.YES
        if self.kind == "Q":
            return Answer.of(r <= 2)
        if self.kind == "Qzeta":
            base = _normalize(self.level)
            return Answer.of(_unit_kernel_is_cyclic(lcm(base, 2**r), base))
        return Answer.UNKNOWN

    def is_subfield_of(self, other: "FieldModel") -> bool:
        """Inclusion inside the built-in lattice of fields."""
        if self.characteristic != other.characteristic:
            return False
        if self.characteristic:
            if self.kind == "charp" and other.kind == "Fq":
                return False
            p = self.characteristic
            a, b = factorint(self.q)[p], factorint(other.q)[p]
            return b % a == 0
        if other.kind == "C" or self.kind == "Q":
            return True
        if self.kind == "C":
            return False
        return other.kind == "Qzeta" and _normalize(other.level) % _normalize(self.level) == 0

    def __str__(self) -> str:
        return self.name


def _prime_power(q: int, spec: str) -> int:
    factors = factorint(q)
    if q < 2 or len(factors) != 1:
        raise BadSpec(f"{spec}: {q} is not a prime power")
    return next(iter(factors))


def builtin_field(spec: str) -> FieldModel:
    """
    Parse a field name.

    Raises:
    - BadSpec: unknown name or invalid parameter.

    Example:
    >>> builtin_field("Qzeta:8").contains_zeta(4)
    <Answer.YES: 'yes'>
    """
    spec = spec.strip()
    if spec == "Q":
        return FieldModel("Q", "Q", 0, True, True)
    if spec == "C":
        return FieldModel("C", "C", 0, True, False)
    kind, _, arg = spec.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise BadSpec(f"Unknown field {spec!r}; expected Q, C, Qzeta:m, Fq:q or charp:q") from None
    if kind == "Qzeta":
        if value < 1:
            raise BadSpec(f"{spec}: cyclotomic level must be positive")
        if _normalize(value) == 2:
            return FieldModel("Q", "Q", 0, True, True)
        return FieldModel(f"Q(zeta_{value})", "Qzeta", 0, True, True, level=value)
    if kind == "Fq":
        p = _prime_power(value, spec)
        return FieldModel(f"F_{value}", "Fq", p, False, False, q=value)
    if kind == "charp":
        p = _prime_power(value, spec)
        return FieldModel(f"F_{value}(t)", "charp", p, True, False, q=value)
    raise BadSpec(f"Unknown field {spec!r}; expected Q, C, Qzeta:m, Fq:q or charp:q")
