"""
Presentation Parameter Schemas

Parameters for the presentation families of solvable GZ-groups (types I-IV)
and non-solvable GZ-groups (types NS-I, NS-II). The side conditions of each
family are validated here so that a constructor never sees an inconsistent
parameter set; failures surface as ``pydantic.ValidationError``.
"""

from enum import Enum
from math import gcd
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint, isprime


class GroupFamily(str, Enum):
    """
    Presentation families.

    ``I`` and ``metacyclic`` describe the same split metacyclic groups;
    ``metacyclic`` is the tag used by the ``construct`` command.
    """

    METACYCLIC = "metacyclic"
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    NS_I = "NS-I"
    NS_II = "NS-II"


def metacyclic_conditions_hold(m: int, n: int, r: int) -> bool:
    """``r^n ≡ 1 (mod m)`` and ``gcd{m, n(r-1)} = 1``."""
    return pow(r, n, m) == 1 % m and gcd(m, n * (r - 1)) == 1


class PresentationParams(BaseModel):
    """
    Integer parameters of a presentation family.

    ``l`` is the exponent of ``λσλ⁻¹ = σ^l`` in type II; ``k`` the exponent of
    ``λτλ⁻¹`` (II) or ``ντν⁻¹`` (IV); ``t`` the exponent of ``νσν⁻¹`` (IV);
    ``p`` the characteristic of the ``SL2(F_p)`` factor (NS-I, NS-II).
    """

    family: GroupFamily = Field(..., description="Presentation family tag", examples=["III"])
    m: int = Field(1, ge=1, description="Order of σ")
    n: int = Field(1, ge=1, description="Order of τ")
    r: int = Field(1, description="τστ⁻¹ = σ^r")
    l: Optional[int] = Field(None, description="λσλ⁻¹ = σ^l (type II)")
    k: Optional[int] = Field(None, description="Exponent of the action on τ (types II, IV)")
    t: Optional[int] = Field(None, description="νσν⁻¹ = σ^t (type IV)")
    p: Optional[int] = Field(None, description="Characteristic of SL2(F_p) (NS-I, NS-II)")

    @field_validator("family", mode="before")
    @classmethod
    def validate_family(cls, v):
        allowed = {e.value for e in GroupFamily}
        if isinstance(v, GroupFamily):
            return v
        if not isinstance(v, str) or v not in allowed:
            raise ValueError(f"Family must be one of: {', '.join(sorted(allowed))}")
        return v

    @model_validator(mode="after")
    def validate_conditions(self) -> "PresentationParams":
        m, n, r = self.m, self.n, self.r
        if not metacyclic_conditions_hold(m, n, r):
            raise ValueError(f"Need r^n ≡ 1 (mod m) and gcd(m, n(r-1)) = 1; got m={m}, n={n}, r={r}")
        family = self.family
        if family == GroupFamily.II:
            self._check_type_ii()
        elif family in (GroupFamily.III, GroupFamily.IV):
            if n % 2 == 0 or n % 3:
                raise ValueError(f"Type {family.value} needs n odd and divisible by 3, got n={n}")
            if family == GroupFamily.IV:
                self._check_type_iv()
        elif family in (GroupFamily.NS_I, GroupFamily.NS_II):
            p = self.p
            if p is None or p < 5 or not isprime(p):
                raise ValueError(f"Non-solvable families need a prime p ≥ 5, got p={p}")
            if gcd(m * n, p * (p * p - 1)) != 1:
                raise ValueError(f"Need gcd(mn, p(p²-1)) = 1; got mn={m * n}, p={p}")
        return self

    def _check_type_ii(self) -> None:
        m, n, r, l, k = self.m, self.n, self.r, self.l, self.k
        if l is None or k is None:
            raise ValueError("Type II needs both l and k")
        u = factorint(n).get(2, 0)
        if u < 2:
            raise ValueError(f"Type II needs 4 | n, got n={n}")
        if pow(l, 2, m) != 1 % m or pow(r, (k - 1) % n, m) != 1 % m:
            raise ValueError("Type II needs l² ≡ r^(k-1) ≡ 1 (mod m)")
        if (k + 1) % (2**u):
            raise ValueError(f"Type II needs k ≡ -1 (mod {2**u})")
        if (k * k - 1) % n:
            raise ValueError(f"Type II needs k² ≡ 1 (mod {n})")

    def _check_type_iv(self) -> None:
        m, n, r, k, t = self.m, self.n, self.r, self.k, self.t
        if k is None or t is None:
            raise ValueError("Type IV needs both k and t")
        if pow(r, (k - 1) % n, m) != 1 % m or pow(t, 2, m) != 1 % m:
            raise ValueError("Type IV needs r^(k-1) ≡ t² ≡ 1 (mod m)")
        if (k + 1) % 3:
            raise ValueError("Type IV needs k ≡ -1 (mod 3)")
        if (k * k - 1) % n:
            raise ValueError(f"Type IV needs k² ≡ 1 (mod {n})")

    @property
    def order(self) -> int:
        """Order of the presented group."""
        m, n = self.m, self.n
        family = self.family
        if family in (GroupFamily.I, GroupFamily.METACYCLIC):
            return m * n
        if family == GroupFamily.II:
            return 2 * m * n
        if family == GroupFamily.III:
            return 8 * m * n
        if family == GroupFamily.IV:
            return 16 * m * n
        p = self.p
        sl2 = p * (p * p - 1)
        return m * n * sl2 * (2 if family == GroupFamily.NS_II else 1)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [
                {"family": "metacyclic", "m": 7, "n": 3, "r": 2},
                {"family": "III", "m": 1, "n": 3, "r": 1},
                {"family": "IV", "m": 1, "n": 3, "r": 1, "k": 2, "t": 1},
            ]
        },
    )
