# app/schemas/invariants.py
"""
Abelian Invariants Schema

A finitely generated abelian group is reported by its invariant factors
d1 | d2 | ... | dk (each > 1) together with its free rank. Schur and
Bogomolov multipliers, cohomology groups and abelianizations are all
serialized with this schema.
"""

from functools import reduce
from math import prod
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint


class AbelianInvariants(BaseModel):
    """Invariant-factor form of a finitely generated abelian group."""

    factors: List[int] = Field(
        default_factory=list,
        description="Invariant factors d1 | d2 | ... | dk, each greater than 1",
        examples=[[2, 4]],
    )
    rank: int = Field(0, ge=0, description="Free rank")

    @field_validator("factors")
    @classmethod
    def validate_factors(cls, v: List[int]) -> List[int]:
        if any(d <= 1 for d in v):
            raise ValueError("Invariant factors must be greater than 1")
        return v

    @model_validator(mode="after")
    def validate_chain(self) -> "AbelianInvariants":
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"Invariant factors must form a divisibility chain, got {self.factors}")
        return self

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"examples": [{"factors": [], "rank": 0}, {"factors": [2, 2, 4], "rank": 0}]},
    )

    @classmethod
    def trivial(cls) -> "AbelianInvariants":
        return cls(factors=[], rank=0)

    @classmethod
    def from_cyclic_orders(cls, orders: List[int], rank: int = 0) -> "AbelianInvariants":
        """
        Normalize a direct sum of cyclic groups of arbitrary orders.

        Example:
        >>> AbelianInvariants.from_cyclic_orders([2, 3, 4]).factors
        [2, 12]
        """
        by_prime: dict[int, list[int]] = {}
        for d in orders:
            for p, e in factorint(d).items():
                by_prime.setdefault(p, []).append(p**e)
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for powers in by_prime.values():
            for i, pe in enumerate(sorted(powers, reverse=True)):
                factors[i] *= pe
        return cls(factors=sorted(f for f in factors if f > 1), rank=rank)

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when the group is infinite."""
        return None if self.rank else prod(self.factors)

    @property
    def exponent(self) -> Optional[int]:
        return None if self.rank else reduce(lambda a, b: b, self.factors, 1)

    @property
    def is_trivial(self) -> bool:
        return not self.factors and not self.rank

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"
