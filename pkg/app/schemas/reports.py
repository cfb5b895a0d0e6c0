"""
Report Schemas

Everything an analysis hands back to the command line is one of these
pydantic models, so text and JSON output come from the same object:

- CheckResult / VerificationReport: named pass/fail checks of a construction.
- StructureChecks / FrobeniusSummary / FrobeniusReport: Frobenius structure detection.
- ComplementCriterion / GZReport: Z- and GZ-group recognition.
- CohomologySummary / B0Result: multipliers.
- TraceStep / RuleAttempt / Verdict: rationality certificates.
"""

from enum import Enum
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from app.core.errors import ToolkitError
from app.schemas.invariants import AbelianInvariants
from app.schemas.presentation import PresentationParams


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------
class CheckResult(BaseModel):
    name: str = Field(..., description="Check identifier", examples=["phi_isomorphism"])
    passed: bool
    detail: str = ""


class VerificationReport(BaseModel):
    """Independent pass/fail checks; one failing check never hides the others."""

    subject: str = Field(..., examples=["binary icosahedral group over F_11"])
    checks: List[CheckResult] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))
        return bool(passed)

    def run(self, name: str, check: Callable[[], bool], detail: str = "") -> bool:
        """Record ``check()``; a toolkit error counts as a failure with its message."""
        try:
            return self.add(name, check(), detail)
        except ToolkitError as exc:
            return self.add(name, False, f"{type(exc).__name__}: {exc}")

    def result(self, name: str) -> Optional[bool]:
        for c in self.checks:
            if c.name == name:
                return c.passed
        return None


# ----------------------------------------------------------------------
# Frobenius
# ----------------------------------------------------------------------
class StructureChecks(BaseModel):
    coprime_orders: bool
    even_complement_implies_abelian_kernel: bool
    kernel_nilpotent: bool
    complement_sylow_shapes: bool

    @property
    def all_true(self) -> bool:
        return all(self.model_dump().values())


class FrobeniusSummary(BaseModel):
    kernel_order: int
    complement_order: int
    kernel_abelian: bool
    kernel_generators: List[List[int]]
    complement_generators: List[List[int]]
    checks: Optional[StructureChecks] = None


class FrobeniusReport(BaseModel):
    group: str
    order: int
    structures: List[FrobeniusSummary] = Field(default_factory=list)

    @computed_field
    @property
    def is_frobenius(self) -> bool:
        return bool(self.structures)


# ----------------------------------------------------------------------
# GZ classification
# ----------------------------------------------------------------------
HTag = Literal["trivial", "SL2F3", "SL2F5"]


class ComplementCriterion(BaseModel):
    """Decomposition of the subgroup generated by prime-order elements as C_n × H."""

    prime_order_subgroup: Any = Field(None, exclude=True)
    prime_order_subgroup_order: int
    n: Optional[int] = Field(None, description="Squarefree order of the cyclic factor")
    h_tag: Optional[HTag] = None
    is_frobenius_complement: bool

    model_config = ConfigDict(arbitrary_types_allowed=True)


class GZReport(BaseModel):
    is_z_group: bool
    is_gz_group: bool
    solvable_type: Literal["I", "II", "III", "IV", "none"] = "none"
    nonsolvable_type: Literal["NS-I", "NS-II", "none"] = "none"
    params: Optional[PresentationParams] = None
    complement_criterion: Optional[ComplementCriterion] = None

    @model_validator(mode="after")
    def validate_flags(self) -> "GZReport":
        if self.is_z_group and not self.is_gz_group:
            raise ValueError("A Z-group is always a GZ-group")
        if (self.solvable_type != "none" or self.nonsolvable_type != "none") and not self.is_gz_group:
            raise ValueError("Only GZ-groups carry a classification type")
        return self


# ----------------------------------------------------------------------
# Multipliers
# ----------------------------------------------------------------------
class CohomologySummary(BaseModel):
    group: str
    order: int
    kind: Literal["H2_mod_n", "H2_QZ_model"]
    modulus: int
    invariants: AbelianInvariants


B0Method = Literal["full_cocycle", "sylow_reduction", "criterion", "unknown"]


class B0Result(BaseModel):
    """
    Bogomolov multiplier.

    ``invariants`` is None only for method ``unknown``; the Sylow-reduction and
    criterion methods only ever prove triviality.
    """

    invariants: Optional[AbelianInvariants] = None
    method: B0Method
    details: str = ""
    witnesses: List[List[List[int]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_method(self) -> "B0Result":
        if self.method in ("sylow_reduction", "criterion"):
            if self.invariants is None or not self.invariants.is_trivial:
                raise ValueError(f"Method {self.method} only proves B0 = 0")
        if self.method == "unknown" and self.invariants is not None:
            raise ValueError("An unknown result carries no invariants")
        if self.method == "full_cocycle" and self.invariants is None:
            raise ValueError("A full computation always yields invariants")
        return self

    @property
    def is_trivial(self) -> Optional[bool]:
        return None if self.invariants is None else self.invariants.is_trivial


# ----------------------------------------------------------------------
# Rationality
# ----------------------------------------------------------------------
class Outcome(str, Enum):
    RETRACT_RATIONAL = "RetractRational"
    NOT_RETRACT_RATIONAL = "NotRetractRational"
    UNKNOWN = "Unknown"


class TraceStep(BaseModel):
    rule: str = Field(..., examples=["R-ZK"])
    citation: str = Field(..., description="Theorem reference and the statement the rule instantiates", examples=["Theorem c4.2: a Frobenius group with Z-group complement and abelian kernel ..."])
    subject: str = Field(..., description="Label of the group the rule was applied to", examples=["G.G0"])
    outcome: Literal["RetractRational", "NotRetractRational"]
    bindings: Dict[str, Any] = Field(default_factory=dict)
    note: Optional[str] = None


class RuleAttempt(BaseModel):
    rule: str
    subject: str
    failed_premise: str


class Verdict(BaseModel):
    group: str
    field: str
    outcome: Outcome
    trace: List[TraceStep] = Field(default_factory=list)
    corollaries: List[str] = Field(default_factory=list)
    attempts: List[RuleAttempt] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_trace(self) -> "Verdict":
        if self.outcome != Outcome.UNKNOWN and not self.trace:
            raise ValueError("A definite verdict needs a nonempty trace")
        return self
