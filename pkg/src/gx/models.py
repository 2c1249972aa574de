"""Pydantic models for the machine-readable (--json) reports of every command."""

from __future__ import annotations

from pydantic import BaseModel, Field


class GroupPresentation(BaseModel):
    text: str
    free_rank: int = 0
    circle_rank: int = 0
    torsion: list[int] = Field(default_factory=list)


class CohomologyReport(BaseModel):
    complex: str
    coefficients: str
    degree: int
    group: GroupPresentation
    representatives: list[dict[str, str]] = Field(default_factory=list)


class FiltrationEntry(BaseModel):
    level: str  # G/G1, G1/G2, G2, identity
    coordinates: list[str] = Field(default_factory=list)


class StructureReportModel(BaseModel):
    complex: str
    h1: int
    sh2: int
    h3: GroupPresentation
    alpha: list[list[int]] = Field(default_factory=list)
    z_table: list[list[FiltrationEntry]] = Field(default_factory=list)
    group_order: int | None = None


class TripleModel(BaseModel):
    """Supports of w, p and a keyed by simplex label; absent simplices are zero."""

    complex: str
    w: dict[str, str] = Field(default_factory=dict)
    p: dict[str, str] = Field(default_factory=dict)
    a: dict[str, str] = Field(default_factory=dict)


class OpResult(BaseModel):
    operation: str
    verdict: bool | None = None
    value: str | None = None
    triple: TripleModel | None = None
    cochain: dict[str, str] | None = None
    filtration: FiltrationEntry | None = None


class EvaluationReport(BaseModel):
    complex: str
    value: str
    spin_term: str = "0"
    arf_term: str | None = None


class ArfReport(BaseModel):
    name: str
    dimension: int
    radical_dimension: int
    gauss_sum: list[int]
    degenerate: bool
    k: int | None = None
    value: str | None = None


class AppendixStep(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    counterexamples: list[str] = Field(default_factory=list)


class AppendixReport(BaseModel):
    steps: list[AppendixStep] = Field(default_factory=list)
    evaluation: str
    passed: bool


class LawResult(BaseModel):
    name: str
    trials: int
    failures: int = 0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


class LawsReport(BaseModel):
    seed: int
    complexes: int
    trials: int
    laws: list[LawResult] = Field(default_factory=list)
    passed: bool


class SubdivisionReport(BaseModel):
    source: str
    f_vector_before: list[int]
    f_vector_after: list[int]
    emitted: list[str] = Field(default_factory=list)


class BuiltinReport(BaseModel):
    name: str
    description: str = ""
    f_vector: list[int] = Field(default_factory=list)
    orientable: bool = False
    cochains: list[str] = Field(default_factory=list)
    emitted: list[str] = Field(default_factory=list)
