"""MCP tools producing tables over the entanglement X."""

from typing import Any, Dict, Optional

from server.analysis import pd_exploration
from server.config import Settings
from server.games import GameFamily, normalized_exemplar
from server.reports import families_table, sweep_table, write_atomic, x_grid
from server.tools.common import error_result, matrix_from_args, run_blocking


def _table_result(table, out: Optional[str]) -> Dict[str, Any]:
    text = table.to_csv()
    result: Dict[str, Any] = {
        "success": True,
        "columns": table.columns,
        "row_count": len(table.rows),
    }
    if out:
        result["path"] = str(write_atomic(out, text))
    else:
        result["csv"] = text
    return result


async def sweep_game(
    settings: Settings,
    a: float,
    b: float,
    c: float,
    d: float,
    resolution: Optional[int] = None,
    out: Optional[str] = None
) -> Dict[str, Any]:
    """Sweep X over [0, 1] and tabulate equilibrium payoffs.

    Args:
        settings: Runtime settings (default resolution, tolerance)
        a, b, c, d: Payoff parameters
        resolution: Number of X intervals
        out: Optional CSV path; the CSV text is returned when omitted

    Returns:
        Dictionary with columns, row count and either the CSV or its path
    """
    try:
        m = matrix_from_args(a, b, c, d)
        table = await run_blocking(
            sweep_table, m, resolution or settings.sweep_resolution, settings.tolerance
        )
        result = _table_result(table, out)
        result["family"] = table.family.value
        return result
    except Exception as e:
        return error_result(e)


async def compare_families(
    settings: Settings,
    resolution: Optional[int] = None,
    out: Optional[str] = None
) -> Dict[str, Any]:
    """Tabulate Chicken, Leader and Secret Meeting exemplars over X."""
    try:
        table = await run_blocking(families_table, resolution or settings.family_grid)
        return _table_result(table, out)
    except Exception as e:
        return error_result(e)


async def explore_prisoners_dilemma(
    a: Optional[float] = None,
    b: Optional[float] = None,
    c: Optional[float] = None,
    d: Optional[float] = None,
    resolution: int = 20
) -> Dict[str, Any]:
    """Rank the quantum equilibria of a Prisoner's Dilemma over X.

    Uses the normalised exemplar unless all four payoffs are given.
    """
    try:
        if None in (a, b, c, d):
            m = normalized_exemplar(GameFamily.PRISONERS_DILEMMA)
        else:
            m = matrix_from_args(a, b, c, d)
        report = await run_blocking(pd_exploration, m, x_grid(resolution))
        return {"success": True, "game": m.as_dict(), **report.as_dict()}
    except Exception as e:
        return error_result(e)
