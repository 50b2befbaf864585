"""Independent density-matrix checks of the closed-form results.

Nothing in this module evaluates the polynomial payoff forms except
check_closed_form, whose job is to compare them against the engine.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from server.analysis import quantum_nash_equilibria
from server.classical import NashEquilibrium
from server.config import DEFAULT_TOLERANCE
from server.engine import (
    HERMITIAN_TOL,
    PSD_SLACK,
    TRACE_TOL,
    InitialState,
    PayoffOperators,
    check_x,
    closed_form_arrays,
    evolve,
    evolve_many,
    expected_payoffs,
    expected_payoffs_many,
    initial_density,
    payoff_operators,
)
from server.errors import DomainError
from server.games import PayoffMatrix, StrategyProfile

logger = logging.getLogger(__name__)

# Nonzero phases used for the phase-invariance pass of the equivalence check
PHASE_PROBE = (0.7, -1.9)


def _check_grid(grid_n: int) -> np.ndarray:
    if grid_n < 2:
        raise DomainError(f"Grid size must be at least 2, got {grid_n}")
    return np.arange(grid_n) / (grid_n - 1)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a brute-force Nash check for one candidate profile.

    worst_violation is the largest payoff gain any unilateral deviation on
    the grid achieves (<= 0 means no deviation helps).
    """
    candidate: StrategyProfile
    passed: bool
    worst_violation: float
    deviator: str
    deviation: float
    label: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "p": self.candidate.p,
            "q": self.candidate.q,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "deviator": self.deviator,
            "deviation": self.deviation,
        }


def brute_force_verify(
    m: PayoffMatrix,
    x: float,
    candidate: StrategyProfile,
    grid_n: int = 1001,
    tol: float = DEFAULT_TOLERANCE,
    ops: Optional[PayoffOperators] = None,
    label: Optional[str] = None
) -> VerificationReport:
    """Check through the density-matrix engine that no deviation pays.

    Args:
        m: Payoff matrix
        x: Entanglement X in [0, 1]
        candidate: Profile claimed to be a Nash equilibrium
        grid_n: Number of deviation probabilities in [0, 1]
        tol: Largest tolerated payoff gain
        ops: Payoff operators to use instead of payoff_operators(m)
        label: Optional equilibrium label carried into the report

    Returns:
        VerificationReport; a refuted candidate is a report, not an error
    """
    grid = _check_grid(grid_n)
    ops = ops or payoff_operators(m)
    rho_in = initial_density(InitialState.from_x(x))

    base_a, base_b = expected_payoffs(evolve(rho_in, candidate), ops)
    dev_a, _ = expected_payoffs_many(evolve_many(rho_in, grid, np.full_like(grid, candidate.q)), ops)
    _, dev_b = expected_payoffs_many(evolve_many(rho_in, np.full_like(grid, candidate.p), grid), ops)

    gain_a = dev_a - base_a
    gain_b = dev_b - base_b
    i_a, i_b = int(np.argmax(gain_a)), int(np.argmax(gain_b))

    if gain_a[i_a] >= gain_b[i_b]:
        worst, deviator, deviation = float(gain_a[i_a]), "A", float(grid[i_a])
    else:
        worst, deviator, deviation = float(gain_b[i_b]), "B", float(grid[i_b])

    passed = worst <= tol
    if not passed:
        logger.warning("Candidate (%g, %g) refuted at X=%g: player %s gains %.3e by moving to %g",
                       candidate.p, candidate.q, x, deviator, worst, deviation)
    return VerificationReport(
        candidate=candidate,
        passed=passed,
        worst_violation=worst,
        deviator=deviator,
        deviation=deviation,
        label=label,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Largest |engine - closed form| payoff gap over a (p, q) grid."""
    worst_deviation: float
    p: float
    q: float
    phases: tuple
    passed: bool

    def as_dict(self) -> dict:
        return {
            "worst_deviation": self.worst_deviation,
            "p": self.p,
            "q": self.q,
            "phases": list(self.phases),
            "passed": self.passed,
        }


def check_closed_form(
    m: PayoffMatrix,
    x: float,
    grid_n: int = 101,
    tol: float = DEFAULT_TOLERANCE,
    ops: Optional[PayoffOperators] = None
) -> EquivalenceReport:
    """Compare engine payoffs with the closed forms on a (p, q) grid.

    The engine runs once with real amplitudes and once with PHASE_PROBE
    phases; the worst gap over both passes is reported.
    """
    check_x(x)
    grid = _check_grid(grid_n)
    ops = ops or payoff_operators(m)
    p, q = (a.ravel() for a in np.meshgrid(grid, grid, indexing="ij"))
    expected_a, expected_b = closed_form_arrays(m, x, p, q)

    worst, where, worst_phases = -1.0, 0, (0.0, 0.0)
    for phases in ((0.0, 0.0), PHASE_PROBE):
        rho_in = initial_density(InitialState.from_x(x, *phases))
        got_a, got_b = expected_payoffs_many(evolve_many(rho_in, p, q), ops)
        gap = np.maximum(np.abs(got_a - expected_a), np.abs(got_b - expected_b))
        i = int(np.argmax(gap))
        if gap[i] > worst:
            worst, where, worst_phases = float(gap[i]), i, phases

    return EquivalenceReport(
        worst_deviation=worst,
        p=float(p[where]),
        q=float(q[where]),
        phases=worst_phases,
        passed=worst <= tol,
    )


@dataclass(frozen=True)
class DensityReport:
    """Worst hermiticity, trace and positivity errors over evolved states."""
    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float

    @property
    def passed(self) -> bool:
        return (self.hermiticity_error <= HERMITIAN_TOL
                and self.trace_error <= TRACE_TOL
                and self.min_eigenvalue >= -PSD_SLACK)

    def as_dict(self) -> dict:
        return {
            "hermiticity_error": self.hermiticity_error,
            "trace_error": self.trace_error,
            "min_eigenvalue": self.min_eigenvalue,
            "passed": self.passed,
        }


def check_density_invariants(x: float, grid_n: int = 101) -> DensityReport:
    """Validate the initial state and every evolved state on a (p, q) grid."""
    grid = _check_grid(grid_n)
    rho_in = initial_density(InitialState.from_x(x, *PHASE_PROBE))
    p, q = (a.ravel() for a in np.meshgrid(grid, grid, indexing="ij"))
    stack = np.concatenate([rho_in.data[np.newaxis], evolve_many(rho_in, p, q)])

    adjoint = np.conj(np.swapaxes(stack, -1, -2))
    hermitian_part = (stack + adjoint) / 2
    return DensityReport(
        hermiticity_error=float(np.max(np.abs(stack - adjoint))),
        trace_error=float(np.max(np.abs(np.trace(stack, axis1=1, axis2=2) - 1.0))),
        min_eigenvalue=float(np.min(np.linalg.eigvalsh(hermitian_part))),
    )


@dataclass(frozen=True)
class GameVerification:
    """Everything cmd_verify runs for one game at one X."""
    x: float
    tol: float
    equivalence: EquivalenceReport
    density: DensityReport
    equilibria: List[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.equivalence.passed
                and self.density.passed
                and all(r.passed for r in self.equilibria))

    @property
    def worst_violation(self) -> float:
        return max((r.worst_violation for r in self.equilibria), default=float("-inf"))

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "tol": self.tol,
            "passed": self.passed,
            "closed_form_equivalence": self.equivalence.as_dict(),
            "density_invariants": self.density.as_dict(),
            "equilibria": [r.as_dict() for r in self.equilibria],
        }


def verify_equilibria(
    m: PayoffMatrix,
    x: float,
    equilibria: List[NashEquilibrium],
    grid_n: int = 1001,
    tol: float = DEFAULT_TOLERANCE,
    ops: Optional[PayoffOperators] = None
) -> List[VerificationReport]:
    return [
        brute_force_verify(m, x, eq.profile, grid_n, tol, ops=ops, label=eq.label)
        for eq in equilibria
    ]


def verify_game(
    m: PayoffMatrix,
    x: float,
    grid_n: int = 101,
    tol: float = DEFAULT_TOLERANCE,
    ops: Optional[PayoffOperators] = None
) -> GameVerification:
    """Run the closed-form equivalence, density invariant and Nash checks.

    Args:
        m: Payoff matrix
        x: Entanglement X in [0, 1]
        grid_n: Grid size for both the (p, q) grid and the deviation grid
        tol: Tolerance on every worst deviation
        ops: Override of the payoff operators (negative controls)

    Returns:
        GameVerification whose `passed` is True iff every check is within tol
    """
    check_x(x)
    result = GameVerification(
        x=x,
        tol=tol,
        equivalence=check_closed_form(m, x, grid_n, tol, ops=ops),
        density=check_density_invariants(x, grid_n),
        equilibria=verify_equilibria(m, x, quantum_nash_equilibria(m, x), grid_n, tol, ops=ops),
    )
    logger.info("Verification at X=%g: %s (closed-form gap %.3e, %d equilibria)",
                x, "passed" if result.passed else "FAILED",
                result.equivalence.worst_deviation, len(result.equilibria))
    return result
