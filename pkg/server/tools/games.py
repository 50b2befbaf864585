"""MCP tools for classifying and analysing a single game."""

from typing import Any, Dict, Optional

from server.config import Settings
from server.games import classify_family
from server.reports import analyze_report
from server.tools.common import error_result, matrix_from_args, run_blocking


async def classify_game(a: float, b: float, c: float, d: float) -> Dict[str, Any]:
    """Classify a symmetric game by its payoff ordering.

    Args:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)

    Returns:
        Dictionary with success status and the family name
    """
    try:
        m = matrix_from_args(a, b, c, d)
        return {"success": True, "game": m.as_dict(), "family": classify_family(m).value}
    except Exception as e:
        return error_result(e)


async def analyze_game(
    settings: Settings,
    a: float,
    b: float,
    c: float,
    d: float,
    x: float,
    name: Optional[str] = None
) -> Dict[str, Any]:
    """Analyse the quantized game at X = |alpha|^2.

    Args:
        settings: Runtime settings (tolerance)
        a, b, c, d: Payoff parameters
        x: Entanglement in [0, 1]
        name: Optional game name carried into the report

    Returns:
        Dictionary with success status and the analysis report, or error

    Example:
        >>> result = await analyze_game(settings, 1, 2/3, 1/3, 0, 0.5)
        >>> result["report"]["stag_hunt"]["regime"]["regime"]
        4
    """
    try:
        m = matrix_from_args(a, b, c, d)
        report = await run_blocking(analyze_report, m, x, name=name, tol=settings.tolerance)
        return {"success": True, "report": report}
    except Exception as e:
        return error_result(e)
