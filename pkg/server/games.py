"""Symmetric 2x2 games: payoff matrices, game families and strategy profiles.

The bimatrix is fixed by the row player's (Alice's) view:

              Bob C     Bob D
    Alice C   (a, a)    (d, b)
    Alice D   (b, d)    (c, c)

Families are recognised by the strict ordering of (a, b, c, d); any tie
classifies as OTHER.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, FiniteFloat, ValidationError

from server.errors import DomainError, FamilyMismatchError, GameDefinitionError

logger = logging.getLogger(__name__)


class GameFamily(str, Enum):
    """Game family determined by payoff ordering."""
    STAG_HUNT = "StagHunt"
    CHICKEN = "Chicken"
    LEADER = "Leader"
    SECRET_MEETING = "SecretMeeting"
    PRISONERS_DILEMMA = "PrisonersDilemma"
    OTHER = "Other"


@dataclass(frozen=True)
class PayoffMatrix:
    """The four payoff parameters of a symmetric bimatrix.

    Attributes:
        a: Payoff at (C, C)
        b: Row player's payoff at (D, C)
        c: Payoff at (D, D)
        d: Row player's payoff at (C, D)
    """
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"Payoff {name} must be a finite real, got {value!r}")

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True)
class StrategyProfile:
    """Probabilities with which Alice (p) and Bob (q) apply the identity tactic."""
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise DomainError(f"Probability {name} must lie in [0, 1], got {value!r}")


def classify_family(m: PayoffMatrix) -> GameFamily:
    """Classify a payoff matrix by the strict ordering of its parameters.

    Args:
        m: Payoff matrix

    Returns:
        The unique matching GameFamily, or GameFamily.OTHER
    """
    a, b, c, d = m.a, m.b, m.c, m.d

    # Any tie is OTHER
    if len({a, b, c, d}) < 4:
        return GameFamily.OTHER

    if a > b > c > d:
        return GameFamily.STAG_HUNT
    if b > a > d > c:
        return GameFamily.CHICKEN
    if b > d > a > c:
        return GameFamily.LEADER
    if d > b > a > c:
        return GameFamily.SECRET_MEETING
    if b > a > c > d and b + d < 2 * a:
        return GameFamily.PRISONERS_DILEMMA
    return GameFamily.OTHER


# Parameter names from largest to smallest payoff, per family
_FAMILY_ORDER = {
    GameFamily.STAG_HUNT: ("a", "b", "c", "d"),
    GameFamily.CHICKEN: ("b", "a", "d", "c"),
    GameFamily.LEADER: ("b", "d", "a", "c"),
    GameFamily.SECRET_MEETING: ("d", "b", "a", "c"),
}

_EVENLY_SPACED = (1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0)


def normalized_exemplar(family: GameFamily) -> PayoffMatrix:
    """Canonical payoff matrix of a family, normalised to [0, 1].

    The four payoffs are spaced evenly (1, 2/3, 1/3, 0) in the family's
    order. The Prisoner's Dilemma uses b=1, a=5/6, c=1/3, d=0.

    Args:
        family: Game family other than OTHER

    Returns:
        PayoffMatrix exemplar

    Raises:
        FamilyMismatchError: If family is OTHER
    """
    family = GameFamily(family)
    if family == GameFamily.PRISONERS_DILEMMA:
        return PayoffMatrix(a=5.0 / 6.0, b=1.0, c=1.0 / 3.0, d=0.0)
    if family not in _FAMILY_ORDER:
        raise FamilyMismatchError(f"No exemplar exists for family {family.value}")

    values = dict(zip(_FAMILY_ORDER[family], _EVENLY_SPACED))
    return PayoffMatrix(**values)


class GameDefinition(BaseModel):
    """JSON game-definition document.

    Any "family" key in the input is ignored; classification is always
    recomputed from the payoffs. Payoffs must be JSON numbers; strings and
    booleans are rejected.
    """

    model_config = ConfigDict(frozen=True, extra="ignore", strict=True)

    a: FiniteFloat
    b: FiniteFloat
    c: FiniteFloat
    d: FiniteFloat
    name: Optional[str] = None

    @property
    def matrix(self) -> PayoffMatrix:
        return PayoffMatrix(a=self.a, b=self.b, c=self.c, d=self.d)

    @property
    def family(self) -> GameFamily:
        return classify_family(self.matrix)


def parse_game_definition(text: str) -> GameDefinition:
    """Parse a JSON game definition.

    Raises:
        GameDefinitionError: If the text is not valid JSON or misses payoffs
    """
    try:
        return GameDefinition.model_validate_json(text)
    except ValidationError as e:
        raise GameDefinitionError(f"Invalid game definition: {e.error_count()} error(s): "
                                  f"{e.errors()[0]['msg']}") from e


def load_game_file(path: Union[str, Path]) -> GameDefinition:
    """Read and parse a JSON game-definition file.

    Args:
        path: Path to the JSON document

    Returns:
        GameDefinition

    Raises:
        GameDefinitionError: If the file is missing, unreadable or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GameDefinitionError(f"Cannot read game file {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise GameDefinitionError(f"Game file {path} is not valid UTF-8: {e.reason} at byte {e.start}") from e

    game = parse_game_definition(text)
    logger.debug("Loaded game %s from %s (family %s)", game.name, path, game.family.value)
    return game

