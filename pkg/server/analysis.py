"""Quantum equilibrium analysis as a function of the entanglement X = |alpha|^2.

Covers:
- quantum Nash equilibria from the shared best-response bracket
- the stag hunt triple $(1,1), $(0,0), $(m_q,m_q) and the mixed point m_q
- the difference polynomials Delta_(1,1), Delta_(0,0) and their roots
- the seven-regime ordering classifier
- equilibrium tables for Chicken / Leader / Secret Meeting exemplars
- Prisoner's Dilemma exploration and best-equilibrium selection

The difference polynomials are expanded directly from the payoff forms. Their
linear coefficients are B1 = (a - c) - C and B0 = -(a - c) - C; see
docs/adr/0003-derived-difference-coefficients.md.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from server.classical import (
    EPS,
    BestResponseBracket,
    EquilibriumKind,
    NashEquilibrium,
    enumerate_equilibria,
)
from server.config import DEFAULT_TOLERANCE
from server.engine import ArrayLike, check_x, closed_form_payoffs
from server.errors import DegenerateDenominatorError, DomainError, FamilyMismatchError
from server.games import (
    GameFamily,
    PayoffMatrix,
    StrategyProfile,
    classify_family,
    normalized_exemplar,
)

logger = logging.getLogger(__name__)

REGIME_DESCRIPTIONS = {
    1: "$(0,0) > $(m_q,m_q) > $(1,1)",
    2: "$(0,0) > $(m_q,m_q) = $(1,1)",
    3: "$(0,0) > $(1,1) > $(m_q,m_q)",
    4: "$(0,0) = $(1,1) > $(m_q,m_q)",
    5: "$(1,1) > $(0,0) > $(m_q,m_q)",
    6: "$(1,1) > $(0,0) = $(m_q,m_q)",
    7: "$(1,1) > $(m_q,m_q) > $(0,0)",
}

BOUNDARY_REGIMES = frozenset({2, 4, 6})

TABLE_FAMILIES = (GameFamily.CHICKEN, GameFamily.LEADER, GameFamily.SECRET_MEETING)


def require_family(m: PayoffMatrix, *families: GameFamily) -> GameFamily:
    """Return m's family, raising FamilyMismatchError unless it is one of `families`."""
    family = classify_family(m)
    if family not in families:
        expected = ", ".join(f.value for f in families)
        raise FamilyMismatchError(f"Expected a {expected} game, got {family.value}")
    return family


def _stag_hunt_denominator(m: PayoffMatrix) -> float:
    denominator = m.a - m.b + m.c - m.d
    if abs(denominator) <= EPS:
        raise DegenerateDenominatorError(
            f"a - b + c - d = {denominator!r} is too close to zero"
        )
    return denominator


def quantum_bracket(m: PayoffMatrix, x: float) -> BestResponseBracket:
    """Shared bracket t(a + c - b - d) + X(d - c) + (1 - X)(b - a)."""
    return BestResponseBracket(
        slope=m.a + m.c - m.b - m.d,
        intercept=x * (m.d - m.c) + (1 - x) * (m.b - m.a),
    )


def quantum_nash_equilibria(m: PayoffMatrix, x: float) -> List[NashEquilibrium]:
    """Nash equilibria of the quantized game at X = |alpha|^2.

    Raises:
        DomainError: If x is outside [0, 1]
    """
    check_x(x)
    bracket = quantum_bracket(m, x)
    return enumerate_equilibria(bracket, bracket, lambda s: closed_form_payoffs(m, x, s))


def rank_equilibria(equilibria: List[NashEquilibrium], tol: float = DEFAULT_TOLERANCE) -> List[NashEquilibrium]:
    """Order by decreasing payoff sum; sums within tol keep their listed order."""
    ranking: List[NashEquilibrium] = []
    for eq in equilibria:
        position = len(ranking)
        for i, ranked in enumerate(ranking):
            if eq.payoff_sum > ranked.payoff_sum + tol:
                position = i
                break
        ranking.insert(position, eq)
    return ranking


def best_equilibrium(m: PayoffMatrix, x: float, tol: float = DEFAULT_TOLERANCE) -> NashEquilibrium:
    """Equilibrium with the largest payoff sum; ties go to the earlier one."""
    return rank_equilibria(quantum_nash_equilibria(m, x), tol)[0]


@dataclass(frozen=True)
class StagHuntPayoffs:
    """Payoffs of the three stag hunt equilibria (equal for both players)."""
    p11: float
    p00: float
    pmq: float

    def as_dict(self) -> Dict[str, float]:
        return {"P11": self.p11, "P00": self.p00, "Pmq": self.pmq}


def stag_hunt_equilibrium_payoffs(m: PayoffMatrix, x: ArrayLike) -> StagHuntPayoffs:
    """Closed-form payoffs of (1,1), (0,0) and (m_q, m_q).

    Accepts an array of X values for vectorised sweeps.

    Raises:
        FamilyMismatchError: If m is not a stag hunt
    """
    require_family(m, GameFamily.STAG_HUNT)
    check_x(x)
    a, b, c, d = m.a, m.b, m.c, m.d
    denominator = _stag_hunt_denominator(m)
    y = 1 - x
    return StagHuntPayoffs(
        p11=a * x + c * y,
        p00=c * x + a * y,
        pmq=((a * c - b * d) + x * y * (a + b - c - d) * (a - b - c + d)) / denominator,
    )


def m_q(m: PayoffMatrix, x: ArrayLike) -> ArrayLike:
    """Symmetric mixed equilibrium ((c - d)X + (a - b)(1 - X)) / (a - b + c - d).

    Raises:
        FamilyMismatchError: If m is not a stag hunt
        DegenerateDenominatorError: If a - b + c - d vanishes
    """
    require_family(m, GameFamily.STAG_HUNT)
    check_x(x)
    return ((m.c - m.d) * x + (m.a - m.b) * (1 - x)) / _stag_hunt_denominator(m)


@dataclass(frozen=True)
class DeltaPolynomial:
    """Quadratic c2 X^2 + c1 X + c0."""
    c2: float
    c1: float
    c0: float

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return (self.c2 * x + self.c1) * x + self.c0

    def is_linear(self, eps: float = EPS) -> bool:
        return abs(self.c2) <= eps

    def roots(self, eps: float = EPS) -> Tuple[float, ...]:
        """Real roots, falling back to the linear root when c2 vanishes.

        A constant polynomial has no roots.
        """
        if self.is_linear(eps):
            if abs(self.c1) <= eps:
                return ()
            return (-self.c0 / self.c1,)
        disc = self.c1 ** 2 - 4 * self.c2 * self.c0
        if disc < 0:
            return ()
        sqrt_disc = disc ** 0.5
        # Numerically stable pair
        q = -0.5 * (self.c1 + (sqrt_disc if self.c1 >= 0 else -sqrt_disc))
        if q == 0:
            return (0.0,)
        return tuple(sorted((q / self.c2, self.c0 / q)))

    def as_dict(self) -> Dict[str, float]:
        return {"C": self.c2, "B": self.c1, "A": self.c0}


def delta_polynomials(m: PayoffMatrix) -> Tuple[DeltaPolynomial, DeltaPolynomial]:
    """Delta_(1,1) = $(1,1) - $(m_q,m_q) and Delta_(0,0) = $(0,0) - $(m_q,m_q) in X.

    Returns:
        Tuple (delta_11, delta_00)

    Raises:
        FamilyMismatchError: If m is not a stag hunt
        DegenerateDenominatorError: If a - b + c - d vanishes
    """
    require_family(m, GameFamily.STAG_HUNT)
    a, b, c, d = m.a, m.b, m.c, m.d
    denominator = _stag_hunt_denominator(m)
    quadratic = (a + b - c - d) * (a - b - c + d) / denominator
    delta_11 = DeltaPolynomial(
        c2=quadratic,
        c1=(a - c) - quadratic,
        c0=-(b - c) * (c - d) / denominator,
    )
    delta_00 = DeltaPolynomial(
        c2=quadratic,
        c1=-(a - c) - quadratic,
        c0=(a - b) * (a - d) / denominator,
    )
    return delta_11, delta_00


@dataclass(frozen=True)
class Thresholds:
    """Roots of the difference polynomials.

    x1_plus and x0_minus govern the regime changes; x1_minus and x0_plus are
    reported for completeness (None when their denominator vanishes) and
    never used for classification.
    """
    x1_plus: float
    x0_minus: float
    x1_minus: Optional[float] = None
    x0_plus: Optional[float] = None

    def as_dict(self) -> Dict[str, Optional[float]]:
        return {
            "x1_plus": self.x1_plus,
            "x1_minus": self.x1_minus,
            "x0_minus": self.x0_minus,
            "x0_plus": self.x0_plus,
        }


def _ratio(numerator: float, denominator: float, name: str) -> float:
    if abs(denominator) <= EPS:
        raise DegenerateDenominatorError(f"{name}: denominator {denominator!r} is too close to zero")
    return numerator / denominator


def _optional_ratio(numerator: float, denominator: float) -> Optional[float]:
    return None if abs(denominator) <= EPS else numerator / denominator


def thresholds(m: PayoffMatrix) -> Thresholds:
    """Closed-form roots of Delta_(1,1) and Delta_(0,0).

    Raises:
        FamilyMismatchError: If m is not a stag hunt
        DegenerateDenominatorError: If a + b - c - d vanishes
    """
    require_family(m, GameFamily.STAG_HUNT)
    a, b, c, d = m.a, m.b, m.c, m.d
    return Thresholds(
        x1_plus=_ratio(b - c, a + b - c - d, "x1_plus"),
        x0_minus=_ratio(a - d, a + b - c - d, "x0_minus"),
        x1_minus=_optional_ratio(c - d, -a + b + c - d),
        x0_plus=_optional_ratio(a - b, a - b - c + d),
    )


@dataclass(frozen=True)
class RegimeClassification:
    """Which payoff ordering holds at X."""
    regime: int
    boundary: bool

    @property
    def description(self) -> str:
        return REGIME_DESCRIPTIONS[self.regime]

    def as_dict(self) -> dict:
        return {"regime": self.regime, "boundary": self.boundary, "description": self.description}


def interval_regime(m: PayoffMatrix, x: float, tol: float = DEFAULT_TOLERANCE) -> int:
    """Regime from the position of X relative to x1_plus, 1/2 and x0_minus."""
    t = thresholds(m)
    for boundary, regime in ((t.x1_plus, 2), (0.5, 4), (t.x0_minus, 6)):
        if abs(x - boundary) <= tol:
            return regime
        if x < boundary:
            return regime - 1
    return 7


def classify_regime(m: PayoffMatrix, x: float, tol: float = DEFAULT_TOLERANCE) -> RegimeClassification:
    """Classify the ordering of the three stag hunt payoffs by direct comparison.

    Args:
        m: Stag hunt payoff matrix
        x: Entanglement X in [0, 1]
        tol: Equality tolerance on payoff differences

    Returns:
        RegimeClassification with boundary=True for regimes 2, 4 and 6
    """
    payoffs = stag_hunt_equilibrium_payoffs(m, x)
    p11, p00, pmq = float(payoffs.p11), float(payoffs.p00), float(payoffs.pmq)

    def gt(u: float, v: float) -> bool:
        return u - v > tol

    def eq(u: float, v: float) -> bool:
        return abs(u - v) <= tol

    if gt(p00, pmq) and gt(pmq, p11):
        regime = 1
    elif gt(p00, pmq) and eq(pmq, p11):
        regime = 2
    elif gt(p00, p11) and gt(p11, pmq):
        regime = 3
    elif eq(p00, p11) and gt(p11, pmq):
        regime = 4
    elif gt(p11, p00) and gt(p00, pmq):
        regime = 5
    elif gt(p11, p00) and eq(p00, pmq):
        regime = 6
    elif gt(p11, pmq) and gt(pmq, p00):
        regime = 7
    else:
        regime = interval_regime(m, x, tol)
        logger.warning(
            "Payoff comparison at X=%r is ambiguous within tol=%g; using interval regime %d",
            x, tol, regime,
        )

    return RegimeClassification(regime=regime, boundary=regime in BOUNDARY_REGIMES)


@dataclass(frozen=True)
class FamilyTable:
    """Payoff pairs of the three equilibria of a Chicken-like family at X."""
    family: GameFamily
    x: float
    interior: float
    payoffs: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "x": self.x,
            "m_interior": self.interior,
            "payoffs": {label: list(pair) for label, pair in self.payoffs.items()},
        }


def family_equilibrium_table(
    family: GameFamily,
    x: float,
    m: Optional[PayoffMatrix] = None
) -> FamilyTable:
    """Payoffs at (1,0), (0,1) and the interior point for a table family.

    Args:
        family: Chicken, Leader or SecretMeeting
        x: Entanglement X in [0, 1]
        m: Optional matrix of that family (default: the normalised exemplar)

    Raises:
        FamilyMismatchError: For other families, or if m is not of `family`
        DomainError: If no interior equilibrium exists
    """
    family = GameFamily(family)
    if family not in TABLE_FAMILIES:
        raise FamilyMismatchError(f"No equilibrium table for family {family.value}")
    if m is None:
        m = normalized_exemplar(family)
    else:
        require_family(m, family)

    check_x(x)
    interior = quantum_bracket(m, x).root()
    if interior is None or not 0.0 < interior < 1.0:
        raise DomainError(f"No interior equilibrium for {family.value} at X={x!r}")

    payoffs = {
        "P10": closed_form_payoffs(m, x, StrategyProfile(1.0, 0.0)),
        "P01": closed_form_payoffs(m, x, StrategyProfile(0.0, 1.0)),
        "Pm": closed_form_payoffs(m, x, StrategyProfile(interior, interior)),
    }
    return FamilyTable(family=family, x=x, interior=interior, payoffs=payoffs)


@dataclass(frozen=True)
class PDRow:
    """Equilibria at one X ranked by payoff sum."""
    x: float
    ranking: List[NashEquilibrium]

    @property
    def best(self) -> NashEquilibrium:
        return self.ranking[0]

    @property
    def mixed_best(self) -> bool:
        return self.best.kind != EquilibriumKind.CORNER

    @property
    def defection_best(self) -> bool:
        best = self.best
        return best.kind == EquilibriumKind.CORNER and best.profile.p == 0.0 and best.profile.q == 0.0

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "best": self.best.label,
            "mixed_best": self.mixed_best,
            "defection_best": self.defection_best,
            "equilibria": [eq.to_dict() for eq in self.ranking],
        }


@dataclass(frozen=True)
class PDExplorationReport:
    """Per-X ranking plus an observation about mixed profiles near X=0 and X=1."""
    rows: List[PDRow]
    observation: str

    def as_dict(self) -> dict:
        return {"observation": self.observation, "rows": [row.as_dict() for row in self.rows]}


def pd_exploration(
    m: PayoffMatrix,
    x_grid: Sequence[float],
    edge_width: float = 0.05,
    tol: float = DEFAULT_TOLERANCE
) -> PDExplorationReport:
    """Rank the quantum equilibria of a Prisoner's Dilemma over X.

    Args:
        m: Prisoner's Dilemma payoff matrix
        x_grid: X values in [0, 1]
        edge_width: Width of the regions near X=0 and X=1 covered by the observation
        tol: Payoff sums closer than this rank as ties

    Raises:
        FamilyMismatchError: If m is not a Prisoner's Dilemma
    """
    require_family(m, GameFamily.PRISONERS_DILEMMA)

    rows = []
    for x in x_grid:
        rows.append(PDRow(x=float(x), ranking=rank_equilibria(quantum_nash_equilibria(m, x), tol)))

    near_edges = [row for row in rows if row.x <= edge_width or row.x >= 1.0 - edge_width]
    mixed_edges = [row.x for row in near_edges if row.mixed_best]
    defection_rows = [row.x for row in rows if not row.defection_best]

    if not near_edges:
        observation = "No grid points near X=0 or X=1; mixed-profile claim not examined."
    elif mixed_edges:
        observation = (f"A non-corner equilibrium ranks first near the edges at X in "
                       f"{[round(x, 6) for x in mixed_edges]}.")
    else:
        observation = (f"No non-corner equilibrium ranks first within {edge_width} of X=0 or X=1; "
                       f"mutual defection is not best at {len(defection_rows)} of {len(rows)} grid points.")

    logger.info("PD exploration over %d points: %s", len(rows), observation)
    return PDExplorationReport(rows=rows, observation=observation)
