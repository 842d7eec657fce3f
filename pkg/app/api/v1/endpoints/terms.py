from typing import Any, Dict, Literal, Optional

from fastapi import APIRouter, Form

from app.api.v1.endpoints.common import run_operation
from app.services.workbench import WorkbenchService

router = APIRouter()

Lang = Optional[Literal["r", "s"]]


@router.post("/parse", response_model=Dict[str, Any])
async def parse_term(
    term: str = Form(..., description="Term or equation program"),
    language: Lang = Form(None, description="r (read prefixes) or s (read sets); inferred when omitted"),
) -> Dict[str, Any]:
    """
    Parse a program and return its canonical form.

    Args:
        term: Term or equation program
        language: Algebra of the program

    Returns:
        Dict with the printed term, its sort and the equation names

    Raises:
        HTTPException: 400 with the error kind and position if the program is rejected
    """
    return run_operation("parse", WorkbenchService.parse_check, text=term, language=language)


@router.post("/steps", response_model=Dict[str, Any])
async def steps(
    term: str = Form(..., description="Closed term"),
    language: Lang = Form(None),
) -> Dict[str, Any]:
    """Action transitions of a term with their successors."""
    return run_operation("steps", WorkbenchService.steps, text=term, language=language)


@router.post("/time", response_model=Dict[str, Any])
async def time_step(
    term: str = Form(..., description="Closed term"),
    language: Lang = Form(None),
    refusal: Optional[str] = Form(None, description="Refusal set such as 1, {a,b} or -{a}; maximal when omitted"),
) -> Dict[str, Any]:
    """Time step of a term for the maximal or a given refusal set."""
    return run_operation("time", WorkbenchService.time, text=term, language=language, refusal=refusal)


@router.post("/proper", response_model=Dict[str, Any])
async def proper(term: str = Form(...)) -> Dict[str, Any]:
    return run_operation("proper", WorkbenchService.proper, text=term)


@router.post("/rnf", response_model=Dict[str, Any])
async def rnf(term: str = Form(...)) -> Dict[str, Any]:
    return run_operation("rnf", WorkbenchService.rnf, text=term)


@router.post("/translate", response_model=Dict[str, Any])
async def translate(
    term: str = Form(...),
    direction: Literal["s2r", "r2s"] = Form(..., description="s2r or r2s"),
) -> Dict[str, Any]:
    """Translate a proper read-set term into read prefixes or an RNF term into read sets."""
    return run_operation("translate", WorkbenchService.translate, text=term, direction=direction)


@router.post("/normalize", response_model=Dict[str, Any])
async def normalize(term: str = Form(...)) -> Dict[str, Any]:
    return run_operation("normalize", WorkbenchService.normalize, text=term)


@router.post("/laws/apply", response_model=Dict[str, Any])
async def apply_law(
    term: str = Form(...),
    law: str = Form(..., description="L1 to L7, DetChoice or Rename"),
    at: str = Form("", description="Position of the subterm as child indices, e.g. 0.1"),
) -> Dict[str, Any]:
    """
    Rewrite the subterm at a position with one algebraic law.

    Args:
        term: Read-action term
        law: Law identifier
        at: Dotted child-index path; empty for the whole term

    Returns:
        Dict with the rewritten term
    """
    return run_operation("apply law", WorkbenchService.apply_law, text=term, law=law, at=at)
