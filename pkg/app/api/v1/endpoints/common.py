import logging
from typing import Any, Callable, Dict

from fastapi import HTTPException

from app.core.errors import WorkbenchError

logger = logging.getLogger(__name__)


def run_operation(name: str, operation: Callable[..., Dict[str, Any]], **arguments: Any) -> Dict[str, Any]:
    """
    Run a service operation and translate its failures into HTTP errors.

    Args:
        name (str): operation name used in log messages
        operation: WorkbenchService method
        **arguments: keyword arguments for the operation

    Returns:
        dict: the operation's result document

    Raises:
        HTTPException: 400 for rejected input, 500 for anything unexpected
    """
    try:
        return operation(**arguments)
    except WorkbenchError as e:
        logger.error(f"Rejected input in {name}: {e.message}")
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.error(f"Error in {name} endpoint: {str(e)}")
        raise HTTPException(
            status_code=500,
            detail=f"Internal server error during {name}: {str(e)}",
        )
