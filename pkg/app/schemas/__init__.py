from .group_file import GroupFile
from .invariants import AbelianInvariants
from .presentation import GroupFamily, PresentationParams
from .reports import (
    B0Result,
    CheckResult,
    CohomologySummary,
    ComplementCriterion,
    FrobeniusReport,
    FrobeniusSummary,
    GZReport,
    Outcome,
    RuleAttempt,
    StructureChecks,
    TraceStep,
    Verdict,
    VerificationReport,
)

__all__ = [
    'GroupFile',
    'AbelianInvariants',
    'GroupFamily',
    'PresentationParams',
    'B0Result',
    'CheckResult',
    'CohomologySummary',
    'ComplementCriterion',
    'FrobeniusReport',
    'FrobeniusSummary',
    'GZReport',
    'Outcome',
    'RuleAttempt',
    'StructureChecks',
    'TraceStep',
    'Verdict',
    'VerificationReport',
]
