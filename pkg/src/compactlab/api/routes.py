from __future__ import annotations

import logging
from collections.abc import Iterator
from contextlib import contextmanager

import numpy as np
from fastapi import APIRouter, HTTPException

from compactlab.api.models import (
    AnalyzeRequest,
    AnalyzeResponse,
    ExactProfileRequest,
    ExactProfileResponse,
    SolveWidthRequest,
    SolveWidthResponse,
    TwoScaleRequest,
    TwoScaleResponse,
)
from compactlab.closed_forms import FAMILY_FIELDS, build_wave, sample_grid
from compactlab.dsl import EquationParseError, resolve_equation, validate
from compactlab.frame import two_scale_check
from compactlab.similarity import (
    build_relation,
    classify,
    format_branch,
    ledger_for,
    parse_branch,
    relation_text,
    solve_width,
    width_text,
)
from compactlab.similarity.relation import check_branch
from compactlab.version import get_version_info

router = APIRouter()
logger = logging.getLogger(__name__)


@contextmanager
def _http_errors(operation: str) -> Iterator[None]:
    try:
        yield
    except EquationParseError as e:
        logger.warning("%s: equation rejected: %s", operation, e)
        raise HTTPException(status_code=400, detail=str(e)) from e
    except (ValueError, ArithmeticError) as e:
        logger.warning("%s: invalid request: %s", operation, e)
        raise HTTPException(status_code=422, detail=str(e)) from e


@router.get("/health")
async def health() -> dict[str, str]:
    logger.info("Health check requested")
    return {"status": "ok"}


@router.get("/api/version")
async def get_version() -> dict[str, str | None]:
    """Package version plus git commit and timestamp when the image provides them."""
    logger.debug("Version info requested")
    return get_version_info()


# solver routes are sync so FastAPI runs them in its threadpool, off the event loop
@router.post("/analyze", response_model=AnalyzeResponse, response_model_exclude_none=True)
def analyze(request: AnalyzeRequest) -> AnalyzeResponse:
    """Similarity relation, width law and qualitative report for one equation."""
    logger.info("Processing analyze request for equation='%s'", request.equation)
    with _http_errors("analyze"):
        ast = resolve_equation(request.equation, parameters=request.params)
        rel = build_relation(ast)
        branch = parse_branch(request.branch) if request.branch else None
        if branch is not None:
            check_branch(rel, branch)
        report = classify(
            rel,
            branch,
            params=request.params,
            law_alpha=request.law_alpha,
            law_power=request.law_power,
        )
        ledger = None
        if request.paper_compat:
            ledger = [entry.model_dump(mode="json") for entry in ledger_for(ast, request.params)]
    response = AnalyzeResponse(
        equation=ast.to_text(),
        relation=relation_text(rel),
        width=width_text(rel),
        branch=format_branch(branch) if branch is not None else None,
        branch_relation=relation_text(rel, branch) if branch is not None else None,
        branch_width=width_text(rel, branch) if branch is not None else None,
        validation=validate(ast).model_dump(mode="json"),
        report=report.model_dump(mode="json"),
        ledger=ledger,
    )
    logger.info("Analyze complete: %s", response.width)
    return response


@router.post("/solve-width", response_model=SolveWidthResponse)
def solve_width_endpoint(request: SolveWidthRequest) -> SolveWidthResponse:
    logger.info(
        "Processing width request for equation='%s' at A=%s V=%s",
        request.equation,
        request.A,
        request.V,
    )
    with _http_errors("solve-width"):
        rel = build_relation(resolve_equation(request.equation, parameters=request.params))
        branch = parse_branch(request.branch) if request.branch else None
        if branch is not None:
            check_branch(rel, branch)
        solution = solve_width(rel, request.A, request.V, branch, params=request.params)
    logger.info("Found %s width root(s) on branch %s", len(solution.roots), solution.branch_text)
    return SolveWidthResponse(
        branch=solution.branch_text,
        roots=list(solution.roots),
        method=solution.method,
        closed_form=solution.closed_form,
        double_root=solution.double_root,
    )


@router.post("/exact/profile", response_model=ExactProfileResponse)
def exact_profile(request: ExactProfileRequest) -> ExactProfileResponse:
    """Sample a closed-form traveling wave at time ``t``."""
    logger.info("Processing profile request for family=%s", request.family)
    with _http_errors("exact/profile"):
        values = {name: getattr(request, name) for name in FAMILY_FIELDS}
        wave = build_wave(request.family, **values)
        if request.range is not None:
            x = np.linspace(request.range[0], request.range[1], request.points)
        else:
            x = sample_grid(wave, request.t, request.points)
        u = wave.evaluate(x, request.t)
    return ExactProfileResponse(
        wave=wave.model_dump(by_alias=True), t=request.t, x=x.tolist(), u=u.tolist()
    )


@router.post("/frame/two-scale", response_model=TwoScaleResponse)
def frame_two_scale(request: TwoScaleRequest) -> TwoScaleResponse:
    logger.info("Checking two-scale identity at j=%s k=%s", request.j, request.k)
    with _http_errors("frame/two-scale"):
        defect = two_scale_check(request.j, request.k, shift=request.shift)
    return TwoScaleResponse(j=request.j, k=request.k, shift=request.shift, defect=defect)
