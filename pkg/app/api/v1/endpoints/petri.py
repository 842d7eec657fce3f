import logging
from typing import Any, Dict, Optional

from fastapi import APIRouter, File, Form, HTTPException, UploadFile

from app.api.v1.endpoints.common import run_operation
from app.services.workbench import WorkbenchService

logger = logging.getLogger(__name__)
router = APIRouter()


async def _read_net(net: UploadFile) -> str:
    content = await net.read()
    try:
        return content.decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail={"kind": "net_format", "message": "net file is not UTF-8 text"})


@router.post("/import", response_model=Dict[str, Any])
async def import_net(
    net: UploadFile = File(..., description="Net in the text format or as JSON"),
    max_states: Optional[int] = Form(None, gt=0, description="Bound for the safety check"),
) -> Dict[str, Any]:
    """
    Translate an uploaded safe read-arc net into a read-set term.

    Args:
        net: Uploaded net file
        max_states: Marking bound for the safety check

    Returns:
        Dict with the translated term and whether it is proper

    Raises:
        HTTPException: 400 if the net is malformed or not safe
    """
    logger.info(f"Importing net file: {net.filename}")
    text = await _read_net(net)
    return run_operation("import net", WorkbenchService.import_net, text=text, max_states=max_states)


@router.post("/correspondence", response_model=Dict[str, Any])
async def correspondence(net: UploadFile = File(...)) -> Dict[str, Any]:
    """Untimed bisimilarity of the marking graph and the translated term."""
    text = await _read_net(net)
    return run_operation("net correspondence", WorkbenchService.net_correspondence, text=text)
