"""Helpers shared by the MCP tool modules."""

import asyncio
import logging
from functools import partial
from typing import Any, Callable, Dict

from server.errors import GameError
from server.games import PayoffMatrix

logger = logging.getLogger(__name__)


async def run_blocking(func: Callable[..., Any], *args, **kwargs) -> Any:
    """Run a numpy-heavy call in the default executor."""
    loop = asyncio.get_event_loop()
    return await loop.run_in_executor(None, partial(func, *args, **kwargs))


def error_result(e: Exception) -> Dict[str, Any]:
    """Tool-level error dict; unexpected exceptions are logged with a traceback."""
    if not isinstance(e, GameError):
        logger.exception("Unexpected tool failure")
    return {
        "success": False,
        "error": str(e),
        "error_type": type(e).__name__,
    }


def matrix_from_args(a: float, b: float, c: float, d: float) -> PayoffMatrix:
    return PayoffMatrix(a=float(a), b=float(b), c=float(c), d=float(d))
