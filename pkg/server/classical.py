"""Classical mixed strategies and best-response equilibrium enumeration.

Both the classical game and its quantized version have payoffs that are
bilinear in (p, q). A player's incentive to raise their own probability is
an affine "bracket" in the opponent's probability, and every Nash
equilibrium follows from the signs of the two brackets. The enumerator in
this module is shared with server.analysis.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

from server.errors import DegenerateDenominatorError
from server.games import PayoffMatrix, StrategyProfile

logger = logging.getLogger(__name__)

# Denominator / bracket degeneracy threshold
EPS = 1e-12

PayoffFn = Callable[[StrategyProfile], Tuple[float, float]]


class EquilibriumKind(str, Enum):
    """Shape of an equilibrium set."""
    CORNER = "corner"
    INTERIOR = "interior"
    CONTINUUM = "continuum"


@dataclass(frozen=True)
class NashEquilibrium:
    """A Nash equilibrium with both expected payoffs.

    For CONTINUUM entries, `profile` is a representative point (the midpoint
    of the free range), `continuum_axis` names the free coordinate ("p", "q"
    or "pq") and `interval` gives its range.
    """
    profile: StrategyProfile
    payoff_a: float
    payoff_b: float
    kind: EquilibriumKind
    continuum_axis: Optional[str] = None
    interval: Optional[Tuple[float, float]] = None

    @property
    def payoff_sum(self) -> float:
        return self.payoff_a + self.payoff_b

    @property
    def label(self) -> str:
        p, q = self.profile.p, self.profile.q
        if self.kind == EquilibriumKind.CORNER:
            return f"({p:g},{q:g})"
        if self.kind == EquilibriumKind.INTERIOR:
            return "(m,m)" if abs(p - q) <= EPS else "(m_p,m_q)"
        return f"continuum[{self.continuum_axis}]"

    def to_dict(self) -> dict:
        result = {
            "label": self.label,
            "p": self.profile.p,
            "q": self.profile.q,
            "payoff_a": self.payoff_a,
            "payoff_b": self.payoff_b,
            "kind": self.kind.value,
        }
        if self.kind == EquilibriumKind.CONTINUUM:
            result["continuum_axis"] = self.continuum_axis
            result["interval"] = list(self.interval)
        return result


@dataclass(frozen=True)
class BestResponseBracket:
    """Affine incentive slope * t + intercept in the opponent's probability t.

    A positive value makes the identity tactic (probability 1) the best
    response, a negative value the flip (probability 0).
    """
    slope: float
    intercept: float

    def __call__(self, t: float) -> float:
        return self.slope * t + self.intercept

    def is_zero(self, eps: float = EPS) -> bool:
        return abs(self.slope) <= eps and abs(self.intercept) <= eps

    def root(self, eps: float = EPS) -> Optional[float]:
        """Opponent probability at which the bracket vanishes, if unique."""
        if abs(self.slope) <= eps:
            return None
        return -self.intercept / self.slope


def classical_payoffs(m: PayoffMatrix, s: StrategyProfile) -> Tuple[float, float]:
    """Expected classical payoffs of a mixed strategy profile.

    Args:
        m: Payoff matrix
        s: Probabilities of playing C for Alice (p) and Bob (q)

    Returns:
        Tuple of (Alice's payoff, Bob's payoff)
    """
    p, q = s.p, s.q
    payoff_a = p * q * m.a + p * (1 - q) * m.d + q * (1 - p) * m.b + (1 - p) * (1 - q) * m.c
    payoff_b = p * q * m.a + p * (1 - q) * m.b + q * (1 - p) * m.d + (1 - p) * (1 - q) * m.c
    return payoff_a, payoff_b


def classical_delta(
    m: PayoffMatrix,
    star: StrategyProfile,
    dev: StrategyProfile
) -> Tuple[float, float]:
    """Gain of each player from sticking to `star` instead of deviating.

    Alice deviates to dev.p against star.q; Bob deviates to dev.q against star.p.

    Returns:
        Tuple (delta_a, delta_b); both are >= 0 at a Nash equilibrium
    """
    bracket = classical_bracket(m)
    delta_a = (star.p - dev.p) * bracket(star.q)
    delta_b = (star.q - dev.q) * bracket(star.p)
    return delta_a, delta_b


def classical_bracket(m: PayoffMatrix) -> BestResponseBracket:
    """Classical bracket q(a - b) + (1 - q)(d - c), shared by both players."""
    return BestResponseBracket(slope=(m.a - m.b) - (m.d - m.c), intercept=m.d - m.c)


def classical_mixed_m(m: PayoffMatrix) -> float:
    """Symmetric mixed equilibrium probability (c - d) / (a - b + c - d).

    Raises:
        DegenerateDenominatorError: If |a - b + c - d| <= 1e-12
    """
    denominator = m.a - m.b + m.c - m.d
    if abs(denominator) <= EPS:
        raise DegenerateDenominatorError(
            f"a - b + c - d = {denominator!r} is too close to zero"
        )
    return (m.c - m.d) / denominator


def classical_nash_equilibria(m: PayoffMatrix) -> List[NashEquilibrium]:
    """All Nash equilibria of the classical mixed-strategy game.

    Returns:
        Corner, interior and continuum equilibria with their payoffs
    """
    bracket = classical_bracket(m)
    return enumerate_equilibria(bracket, bracket, lambda s: classical_payoffs(m, s))


def _clip(t: float) -> float:
    return min(1.0, max(0.0, t))


def _sign_interval(
    bracket: BestResponseBracket,
    sign: int,
    eps: float = EPS
) -> Optional[Tuple[float, float]]:
    """Closed sub-interval of [0, 1] where sign * bracket(t) >= 0."""
    if abs(bracket.slope) <= eps:
        return (0.0, 1.0) if sign * bracket.intercept >= -eps else None

    r = bracket.root(eps)
    if sign * bracket.slope > 0:
        # sign * bracket grows with t
        if r > 1.0 + eps:
            return None
        return (_clip(r), 1.0)
    if r < -eps:
        return None
    return (0.0, _clip(r))


def _make(
    p: float,
    q: float,
    payoff_fn: PayoffFn,
    kind: EquilibriumKind,
    axis: Optional[str] = None,
    interval: Optional[Tuple[float, float]] = None
) -> NashEquilibrium:
    profile = StrategyProfile(p=_clip(p), q=_clip(q))
    payoff_a, payoff_b = payoff_fn(profile)
    return NashEquilibrium(
        profile=profile,
        payoff_a=payoff_a,
        payoff_b=payoff_b,
        kind=kind,
        continuum_axis=axis,
        interval=interval,
    )


def _indifferent_player(
    responder: BestResponseBracket,
    free_axis: str,
    payoff_fn: PayoffFn,
    eps: float
) -> List[NashEquilibrium]:
    """Equilibria when one player is indifferent against every opponent move.

    `free_axis` names the indifferent player's coordinate; the responder
    best-responds to it through `responder`.
    """
    def profile(t: float, response: float) -> Tuple[float, float]:
        return (t, response) if free_axis == "p" else (response, t)

    other_axis = "q" if free_axis == "p" else "p"
    found = []

    for response, sign in ((1.0, 1), (0.0, -1)):
        interval = _sign_interval(responder, sign, eps)
        if interval is None:
            continue
        lo, hi = interval
        if hi - lo <= eps and (lo <= eps or lo >= 1.0 - eps):
            p, q = profile(round(lo), response)
            found.append(_make(p, q, payoff_fn, EquilibriumKind.CORNER))
        else:
            p, q = profile((lo + hi) / 2, response)
            found.append(_make(p, q, payoff_fn, EquilibriumKind.CONTINUUM, free_axis, (lo, hi)))

    r = responder.root(eps)
    if r is not None and -eps <= r <= 1.0 + eps:
        p, q = profile(_clip(r), 0.5)
        found.append(_make(p, q, payoff_fn, EquilibriumKind.CONTINUUM, other_axis, (0.0, 1.0)))

    return found


def enumerate_equilibria(
    bracket_a: BestResponseBracket,
    bracket_b: BestResponseBracket,
    payoff_fn: PayoffFn,
    eps: float = EPS
) -> List[NashEquilibrium]:
    """Enumerate the Nash equilibria of a bilinear 2x2 game.

    Args:
        bracket_a: Alice's incentive to play p = 1, as a function of q
        bracket_b: Bob's incentive to play q = 1, as a function of p
        payoff_fn: Maps a profile to (payoff_a, payoff_b)
        eps: Zero threshold for brackets and probabilities

    Returns:
        Equilibria in the order corners (1,1), (0,0), (1,0), (0,1), interior,
        then continua
    """
    a_flat = bracket_a.is_zero(eps)
    b_flat = bracket_b.is_zero(eps)

    if a_flat and b_flat:
        return [_make(0.5, 0.5, payoff_fn, EquilibriumKind.CONTINUUM, "pq", (0.0, 1.0))]
    if a_flat:
        return _indifferent_player(bracket_b, "p", payoff_fn, eps)
    if b_flat:
        return _indifferent_player(bracket_a, "q", payoff_fn, eps)

    def best_response_ok(bracket: BestResponseBracket, own: float, other: float) -> bool:
        value = bracket(other)
        return value >= -eps if own == 1.0 else value <= eps

    found: List[NashEquilibrium] = []
    for p, q in ((1.0, 1.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)):
        if best_response_ok(bracket_a, p, q) and best_response_ok(bracket_b, q, p):
            found.append(_make(p, q, payoff_fn, EquilibriumKind.CORNER))

    q_star = bracket_a.root(eps)
    p_star = bracket_b.root(eps)
    if (
        q_star is not None and p_star is not None
        and eps < q_star < 1.0 - eps and eps < p_star < 1.0 - eps
    ):
        found.append(_make(p_star, q_star, payoff_fn, EquilibriumKind.INTERIOR))

    # Edge continua: one player's root sits exactly on the boundary
    if q_star is not None and (abs(q_star) <= eps or abs(q_star - 1.0) <= eps):
        q_fixed = round(q_star)
        interval = _sign_interval(bracket_b, 1 if q_fixed == 1 else -1, eps)
        if interval is not None and interval[1] - interval[0] > eps:
            lo, hi = interval
            found.append(_make((lo + hi) / 2, q_fixed, payoff_fn,
                               EquilibriumKind.CONTINUUM, "p", (lo, hi)))
    if p_star is not None and (abs(p_star) <= eps or abs(p_star - 1.0) <= eps):
        p_fixed = round(p_star)
        interval = _sign_interval(bracket_a, 1 if p_fixed == 1 else -1, eps)
        if interval is not None and interval[1] - interval[0] > eps:
            lo, hi = interval
            found.append(_make(p_fixed, (lo + hi) / 2, payoff_fn,
                               EquilibriumKind.CONTINUUM, "q", (lo, hi)))

    logger.debug("Enumerated %d equilibria: %s", len(found), [e.label for e in found])
    return found
