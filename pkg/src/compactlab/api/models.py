from __future__ import annotations

from typing import Any

from pydantic import ConfigDict, Field, model_validator

from compactlab.closed_forms import FamilyName
from compactlab.wire import WireModel


class AnalyzeRequest(WireModel):
    """An equation (DSL text or alias) with parameter bindings to analyze."""

    equation: str = Field(..., description="DSL text or alias such as KdV, K22 or Knm:3,3")
    params: dict[str, float] = Field(default_factory=dict)
    branch: str | None = Field(None, description="Sign branch such as '++-'")
    law_alpha: float = Field(1.0, description="alpha in the velocity law V = alpha*A^p")
    law_power: int = Field(1, description="p in the velocity law V = alpha*A^p")
    paper_compat: bool = Field(
        False, description="Include printed reference width laws next to the engine's"
    )


class AnalyzeResponse(WireModel):
    equation: str
    relation: str
    width: str
    branch: str | None = None
    branch_relation: str | None = None
    branch_width: str | None = None
    validation: dict[str, Any]
    report: dict[str, Any]
    ledger: list[dict[str, Any]] | None = None


class SolveWidthRequest(WireModel):
    equation: str
    A: float
    V: float
    params: dict[str, float] = Field(default_factory=dict)
    branch: str | None = None


class SolveWidthResponse(WireModel):
    branch: str
    roots: list[float]
    method: str
    closed_form: str | None = None
    double_root: bool = False


class ExactProfileRequest(WireModel):
    """A closed-form family and where to sample it.

    Only the parameters the family needs are required; ``lambda`` is the KAK plateau
    length and ``top_V`` the velocity of the compound's top compacton.
    """

    model_config = ConfigDict(populate_by_name=True)

    family: FamilyName
    A: float | None = None
    V: float | None = None
    flat: float | None = Field(None, alias="lambda")
    delta: float | None = None
    n: int | None = None
    k: float | None = None
    top_V: float | None = None
    t: float = 0.0
    points: int = Field(201, ge=2, le=100_000)
    range: tuple[float, float] | None = Field(
        None, description="Sampling interval; defaults to the support plus a margin"
    )

    @model_validator(mode="after")
    def _check_range(self) -> ExactProfileRequest:
        if self.range is not None and self.range[1] <= self.range[0]:
            raise ValueError(f"empty sampling range {self.range}")
        return self


class ExactProfileResponse(WireModel):
    wave: dict[str, Any]
    t: float
    x: list[float]
    u: list[float]


class TwoScaleRequest(WireModel):
    j: int = 0
    k: int = 0
    shift: int = 1


class TwoScaleResponse(WireModel):
    j: int
    k: int
    shift: int
    defect: float
