"""MCP tool running the density-matrix checks."""

from typing import Any, Dict, Optional

from server.config import Settings
from server.oracle import verify_game as run_verification
from server.tools.common import error_result, matrix_from_args, run_blocking


async def verify_game(
    settings: Settings,
    a: float,
    b: float,
    c: float,
    d: float,
    x: float,
    grid: Optional[int] = None
) -> Dict[str, Any]:
    """Check closed forms, density invariants and every equilibrium at X.

    A failed check is reported with success=True and passed=False; only
    invalid input yields an error.
    """
    try:
        m = matrix_from_args(a, b, c, d)
        result = await run_blocking(
            run_verification, m, x, grid or settings.verify_grid, settings.tolerance
        )
        return {"success": True, **result.as_dict()}
    except Exception as e:
        return error_result(e)
