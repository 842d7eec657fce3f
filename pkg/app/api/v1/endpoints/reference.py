from typing import Any, Dict

from fastapi import APIRouter

from app.api.v1.endpoints.common import run_operation
from app.services.workbench import WorkbenchService

router = APIRouter()


@router.post("/validate", response_model=Dict[str, Any])
async def validate() -> Dict[str, Any]:
    """Run the built-in worked examples and report each outcome."""
    return run_operation("validate", WorkbenchService.validate_reference)
