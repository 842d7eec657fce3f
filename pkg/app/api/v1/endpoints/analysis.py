from typing import Any, Dict, Literal, Optional

from fastapi import APIRouter, Form

from app.api.v1.endpoints.common import run_operation
from app.services.workbench import WorkbenchService

router = APIRouter()


@router.post("/explore", response_model=Dict[str, Any])
async def explore(
    term: str = Form(..., description="Closed term"),
    language: Optional[Literal["r", "s"]] = Form(None),
    max_states: Optional[int] = Form(None, gt=0),
    max_depth: Optional[int] = Form(None, gt=0),
    timed: bool = Form(True, description="Include time steps"),
) -> Dict[str, Any]:
    """
    Explore the transition system of a term within the given bounds.

    Args:
        term: Closed term
        language: Algebra of the term
        max_states: State bound; the configured default when omitted
        max_depth: Depth bound; the configured default when omitted
        timed: Whether time steps are explored

    Returns:
        Dict with the states, edges and the truncation flag
    """
    return run_operation(
        "explore",
        WorkbenchService.explore,
        text=term,
        language=language,
        max_states=max_states,
        max_depth=max_depth,
        timed=timed,
    )


@router.post("/bisim", response_model=Dict[str, Any])
async def bisim(
    left: str = Form(...),
    right: str = Form(...),
    scheme: Literal["r", "s", "untimed"] = Form("r"),
    max_states: Optional[int] = Form(None, gt=0),
    max_depth: Optional[int] = Form(None, gt=0),
) -> Dict[str, Any]:
    """Timed bisimilarity of two terms with a distinguishing experiment when they differ."""
    return run_operation(
        "bisim",
        WorkbenchService.bisim,
        left=left,
        right=right,
        scheme=scheme,
        max_states=max_states,
        max_depth=max_depth,
    )


@router.post("/fair/member", response_model=Dict[str, Any])
async def fair_member(
    term: str = Form(...),
    word: str = Form("", description="Visible actions, e.g. aab or send,recv"),
    max_states: Optional[int] = Form(None, gt=0),
) -> Dict[str, Any]:
    return run_operation("fair member", WorkbenchService.fair_member, text=term, word=word, max_states=max_states)


@router.post("/fair/words", response_model=Dict[str, Any])
async def fair_words(
    term: str = Form(...),
    max_len: int = Form(4, ge=0),
    max_states: Optional[int] = Form(None, gt=0),
) -> Dict[str, Any]:
    return run_operation("fair words", WorkbenchService.fair_words, text=term, max_len=max_len, max_states=max_states)


@router.post("/fair/lasso", response_model=Dict[str, Any])
async def fair_lasso(
    term: str = Form(...),
    prefix: str = Form(""),
    loop: Optional[str] = Form(None, description="Repeated part; searched when omitted"),
    max_len: int = Form(4, ge=1),
) -> Dict[str, Any]:
    """Check or search an infinite fair trace of the form prefix loop loop ..."""
    return run_operation(
        "fair lasso", WorkbenchService.fair_lasso, text=term, prefix=prefix, loop=loop, max_len=max_len
    )


@router.post("/traces", response_model=Dict[str, Any])
async def traces(
    term: str = Form(...),
    max_len: int = Form(3, ge=0),
    trace: Optional[str] = Form(None, description="Refusal trace to check, e.g. 1a1a or 1 a {b} a"),
    max_states: Optional[int] = Form(None, gt=0),
) -> Dict[str, Any]:
    """Bounded refusal traces of a term, or membership of one trace."""
    return run_operation(
        "traces", WorkbenchService.traces, text=term, max_len=max_len, trace=trace, max_states=max_states
    )


@router.post("/traces/compare", response_model=Dict[str, Any])
async def compare_traces(
    left: str = Form(...),
    right: str = Form(...),
    max_len: int = Form(3, ge=0),
) -> Dict[str, Any]:
    return run_operation(
        "compare traces", WorkbenchService.compare_traces, left=left, right=right, max_len=max_len
    )
