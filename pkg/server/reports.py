"""JSON reports and CSV tables shared by the CLI and the MCP tools.

CSV numbers use 12 significant digits with a '.' decimal point, rows end in
LF, and files are written once through a temporary sibling and os.replace.
"""

import csv
import io
import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from server.analysis import (
    TABLE_FAMILIES,
    best_equilibrium,
    classify_regime,
    delta_polynomials,
    family_equilibrium_table,
    m_q,
    quantum_bracket,
    quantum_nash_equilibria,
    stag_hunt_equilibrium_payoffs,
    thresholds,
)
from server.classical import classical_nash_equilibria
from server.config import DEFAULT_TOLERANCE
from server.engine import check_x, closed_form_payoffs
from server.errors import DomainError, OutputError
from server.games import GameFamily, PayoffMatrix, StrategyProfile, classify_family
from server.oracle import verify_equilibria

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

STAG_HUNT_COLUMNS = ["X", "P11", "P00", "Pmq", "m_interior", "regime", "boundary", "best"]
TABLE_COLUMNS = ["X", "P10_A", "P10_B", "P01_A", "P01_B", "Pm_A", "Pm_B", "m_interior", "best"]
GENERIC_COLUMNS = [
    "X", "P11_A", "P11_B", "P00_A", "P00_B", "P10_A", "P10_B", "P01_A", "P01_B",
    "m_interior", "n_equilibria", "best",
]
FAMILIES_COLUMNS = ["family", "X", "P10_A", "P10_B", "P01_A", "P01_B", "Pm_A", "Pm_B", "m_interior"]

_CORNERS = {
    "P11": StrategyProfile(1.0, 1.0),
    "P00": StrategyProfile(0.0, 0.0),
    "P10": StrategyProfile(1.0, 0.0),
    "P01": StrategyProfile(0.0, 1.0),
}

Cell = Union[None, bool, int, float, str]


def format_number(value: Cell) -> str:
    """Render a CSV cell: 12 significant digits, blank for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        text = format(float(value), ".12g")
        return "0" if text == "-0" else text
    return str(value)


def x_grid(resolution: int) -> np.ndarray:
    """resolution + 1 evenly spaced X values; quarter points are exact."""
    if resolution < 2:
        raise DomainError(f"Resolution must be at least 2, got {resolution}")
    return np.arange(resolution + 1) / resolution


def render_csv(columns: Sequence[str], rows: List[Dict[str, Cell]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format_number(row.get(k)) for k in columns})
    return buffer.getvalue()


def write_atomic(path: Union[str, Path], text: str) -> Path:
    """Write text to path through a temporary file in the same directory.

    Raises:
        OutputError: If the directory or file cannot be written
    """
    path = Path(path)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except OSError as e:
        try:
            tmp_path.unlink()
        except OSError:
            pass
        raise OutputError(f"Cannot write {path}: {e}") from e

    logger.info("Wrote %s (%d bytes)", path, len(text))
    return path


def _interior(m: PayoffMatrix, x: float) -> Optional[float]:
    root = quantum_bracket(m, x).root()
    if root is None or not 0.0 < root < 1.0:
        return None
    return root


@dataclass(frozen=True)
class SweepTable:
    """Column names plus one row per X grid point."""
    family: GameFamily
    columns: List[str]
    rows: List[Dict[str, Cell]]

    def to_csv(self) -> str:
        return render_csv(self.columns, self.rows)


def _stag_hunt_rows(m: PayoffMatrix, grid: np.ndarray, tol: float) -> List[Dict[str, Cell]]:
    payoffs = stag_hunt_equilibrium_payoffs(m, grid)
    mixed = m_q(m, grid)
    rows = []
    for i, x in enumerate(grid):
        x = float(x)
        regime = classify_regime(m, x, tol)
        rows.append({
            "X": x,
            "P11": float(payoffs.p11[i]),
            "P00": float(payoffs.p00[i]),
            "Pmq": float(payoffs.pmq[i]),
            "m_interior": float(mixed[i]),
            "regime": regime.regime,
            "boundary": regime.boundary,
            "best": best_equilibrium(m, x, tol).label,
        })
    return rows


def _table_rows(m: PayoffMatrix, family: GameFamily, grid: np.ndarray, tol: float) -> List[Dict[str, Cell]]:
    rows = []
    for x in grid:
        x = float(x)
        row = _family_row(family, x, m)
        row["best"] = best_equilibrium(m, x, tol).label
        rows.append(row)
    return rows


def _generic_rows(m: PayoffMatrix, grid: np.ndarray, tol: float) -> List[Dict[str, Cell]]:
    rows = []
    for x in grid:
        x = float(x)
        row: Dict[str, Cell] = {"X": x}
        for name, profile in _CORNERS.items():
            row[f"{name}_A"], row[f"{name}_B"] = closed_form_payoffs(m, x, profile)
        row["m_interior"] = _interior(m, x)
        row["n_equilibria"] = len(quantum_nash_equilibria(m, x))
        row["best"] = best_equilibrium(m, x, tol).label
        rows.append(row)
    return rows


def sweep_table(m: PayoffMatrix, resolution: int, tol: float = DEFAULT_TOLERANCE) -> SweepTable:
    """Equilibrium payoffs over X in [0, 1] for a game.

    Stag hunts get the three equilibrium payoffs and the regime; Chicken,
    Leader and Secret Meeting get both players' payoffs at (1,0), (0,1) and
    the interior point; other games get the four corner payoffs.

    Args:
        m: Payoff matrix
        resolution: Number of X intervals (>= 2)
        tol: Regime and best-equilibrium tolerance

    Returns:
        SweepTable with resolution + 1 rows in increasing X
    """
    grid = x_grid(resolution)
    family = classify_family(m)
    logger.info("Sweeping %s game over %d X values", family.value, len(grid))

    if family == GameFamily.STAG_HUNT:
        return SweepTable(family, STAG_HUNT_COLUMNS, _stag_hunt_rows(m, grid, tol))
    if family in TABLE_FAMILIES:
        return SweepTable(family, TABLE_COLUMNS, _table_rows(m, family, grid, tol))
    return SweepTable(family, GENERIC_COLUMNS, _generic_rows(m, grid, tol))


def _family_row(family: GameFamily, x: float, m: Optional[PayoffMatrix] = None) -> Dict[str, Cell]:
    table = family_equilibrium_table(family, x, m)
    row: Dict[str, Cell] = {"X": x}
    for label, (payoff_a, payoff_b) in table.payoffs.items():
        row[f"{label}_A"] = payoff_a
        row[f"{label}_B"] = payoff_b
    row["m_interior"] = table.interior
    return row


def families_table(resolution: int = 1000) -> SweepTable:
    """Chicken, Leader and Secret Meeting exemplars over the X grid, family by family."""
    grid = x_grid(resolution)
    rows = []
    for family in TABLE_FAMILIES:
        for x in grid:
            row = _family_row(family, float(x))
            row["family"] = family.value
            rows.append(row)
    return SweepTable(GameFamily.OTHER, FAMILIES_COLUMNS, rows)


def _stag_hunt_section(m: PayoffMatrix, x: float, tol: float) -> dict:
    section: dict = {}
    payoffs = stag_hunt_equilibrium_payoffs(m, x)
    section["payoffs"] = {k: float(v) for k, v in payoffs.as_dict().items()}
    section["m_q"] = float(m_q(m, x))
    delta_11, delta_00 = delta_polynomials(m)
    section["delta_11"] = delta_11.as_dict()
    section["delta_00"] = delta_00.as_dict()
    section["thresholds"] = thresholds(m).as_dict()
    section["regime"] = classify_regime(m, x, tol).as_dict()
    return section


def analyze_report(
    m: PayoffMatrix,
    x: float,
    name: Optional[str] = None,
    grid_n: int = 1001,
    tol: float = DEFAULT_TOLERANCE
) -> dict:
    """Full analysis of one game at one X.

    Returns:
        JSON-ready dict with schema_version, family, quantum and classical
        equilibria, the best equilibrium, stag hunt thresholds and regime
        (stag hunts only) and the brute-force verification summary

    Raises:
        DomainError: If x is outside [0, 1]
    """
    check_x(x)
    family = classify_family(m)
    equilibria = quantum_nash_equilibria(m, x)
    checks = verify_equilibria(m, x, equilibria, grid_n, tol)

    report = {
        "schema_version": SCHEMA_VERSION,
        "game": {"name": name, **m.as_dict()},
        "family": family.value,
        "x": x,
        "equilibria": [eq.to_dict() for eq in equilibria],
        "best": best_equilibrium(m, x, tol).label if equilibria else None,
        "classical_equilibria": [eq.to_dict() for eq in classical_nash_equilibria(m)],
        "stag_hunt": _stag_hunt_section(m, x, tol) if family == GameFamily.STAG_HUNT else None,
        "family_table": (family_equilibrium_table(family, x, m).as_dict()
                         if family in TABLE_FAMILIES else None),
        "verification": {
            "grid": grid_n,
            "tol": tol,
            "passed": all(c.passed for c in checks),
            "worst_violation": max((c.worst_violation for c in checks), default=None),
            "equilibria": [c.as_dict() for c in checks],
        },
    }
    return report


