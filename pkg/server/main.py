"""qgames MCP server - local stdio entry point."""

import logging
from typing import Optional
from contextlib import asynccontextmanager

from mcp.server import FastMCP

from server.config import Settings, configure_logging, load_config, load_settings
from server.tools import games, sweeps, verification

# Load configuration before anything else
config_path = load_config()
settings: Settings = load_settings(default_log_level="INFO")

configure_logging(settings.log_level)
logger = logging.getLogger(__name__)

if config_path:
    logger.info("Loaded configuration from: %s", config_path)
else:
    logger.info("No .env file found. Using environment variables only.")


@asynccontextmanager
async def lifespan(mcp: FastMCP):
    """Lifespan context manager for startup and shutdown."""
    logger.info("Starting qgames MCP server (tolerance %g, sweep resolution %d)...",
                settings.tolerance, settings.sweep_resolution)
    yield
    logger.info("qgames MCP server shutdown complete.")


mcp = FastMCP(
    "qgames",
    lifespan=lifespan
)


# =============================================================================
# Game Tools
# =============================================================================

@mcp.tool()
async def classify_game(a: float, b: float, c: float, d: float) -> dict:
    """Classify a symmetric 2x2 game (StagHunt, Chicken, Leader, SecretMeeting, PrisonersDilemma, Other).

    Args:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
    """
    return await games.classify_game(a, b, c, d)


@mcp.tool()
async def analyze_game(a: float, b: float, c: float, d: float, x: float, name: Optional[str] = None) -> dict:
    """Equilibria, thresholds, regime and verification of the quantized game at X = |alpha|^2.

    Args:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
        x: Entanglement |alpha|^2 in [0, 1]
        name: Optional game name
    """
    return await games.analyze_game(settings, a, b, c, d, x, name)


# =============================================================================
# Sweep Tools
# =============================================================================

@mcp.tool()
async def sweep_game(
    a: float,
    b: float,
    c: float,
    d: float,
    resolution: Optional[int] = None,
    out: Optional[str] = None
) -> dict:
    """Equilibrium payoffs over X in [0, 1] as CSV.

    Args:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
        resolution: Number of X intervals (default: QGAMES_SWEEP_RESOLUTION)
        out: Optional output path; CSV text is returned when omitted
    """
    return await sweeps.sweep_game(settings, a, b, c, d, resolution, out)


@mcp.tool()
async def compare_families(resolution: Optional[int] = None, out: Optional[str] = None) -> dict:
    """Compare Chicken, Leader and Secret Meeting equilibrium payoffs over X.

    Args:
        resolution: Number of X intervals (default: QGAMES_FAMILY_GRID)
        out: Optional output path; CSV text is returned when omitted
    """
    return await sweeps.compare_families(settings, resolution, out)


@mcp.tool()
async def explore_prisoners_dilemma(
    a: Optional[float] = None,
    b: Optional[float] = None,
    c: Optional[float] = None,
    d: Optional[float] = None,
    resolution: int = 20
) -> dict:
    """Rank Prisoner's Dilemma equilibria by payoff sum over X.

    Args:
        a: Payoff at (C, C) (default: normalised exemplar)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
        resolution: Number of X intervals (default: 20)
    """
    return await sweeps.explore_prisoners_dilemma(a, b, c, d, resolution)


# =============================================================================
# Verification Tools
# =============================================================================

@mcp.tool()
async def verify_game(a: float, b: float, c: float, d: float, x: float, grid: Optional[int] = None) -> dict:
    """Check closed forms and every equilibrium against the density-matrix engine.

    Args:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
        x: Entanglement |alpha|^2 in [0, 1]
        grid: Grid size (default: QGAMES_VERIFY_GRID)
    """
    return await verification.verify_game(settings, a, b, c, d, x, grid)


def main():
    """Main entry point."""
    logger.info("qgames MCP server starting...")
    mcp.run()


if __name__ == "__main__":
    main()
