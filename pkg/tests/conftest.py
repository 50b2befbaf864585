"""Shared pytest fixtures for the quantized-games tests."""

import os
import json
import shutil
import tempfile
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import pytest

from server.engine import PayoffOperators
from server.games import GameFamily, PayoffMatrix, normalized_exemplar


# =============================================================================
# Game Fixtures
# =============================================================================

@pytest.fixture
def stag_hunt():
    """Equidistant stag hunt exemplar (1, 2/3, 1/3, 0)."""
    return normalized_exemplar(GameFamily.STAG_HUNT)


@pytest.fixture
def chicken():
    return normalized_exemplar(GameFamily.CHICKEN)


@pytest.fixture
def leader():
    return normalized_exemplar(GameFamily.LEADER)


@pytest.fixture
def secret_meeting():
    return normalized_exemplar(GameFamily.SECRET_MEETING)


@pytest.fixture
def prisoners_dilemma():
    """Prisoner's Dilemma exemplar b=1, a=5/6, c=1/3, d=0."""
    return normalized_exemplar(GameFamily.PRISONERS_DILEMMA)


@pytest.fixture
def skewed_stag_hunt():
    """Stag hunt off the a-b-c+d=0 manifold, so the difference polynomials are quadratic."""
    return PayoffMatrix(a=1.0, b=0.6, c=0.3, d=0.0)


def make_random_stag_hunts(count: int, seed: int = 0, min_gap: float = 0.05) -> List[PayoffMatrix]:
    """Random stag hunts a > b > c > d in [0, 1] with neighbouring gaps >= min_gap."""
    rng = np.random.default_rng(seed)
    games = []
    while len(games) < count:
        a, b, c, d = np.sort(rng.uniform(0.0, 1.0, size=4))[::-1]
        if min(a - b, b - c, c - d) >= min_gap:
            games.append(PayoffMatrix(a=float(a), b=float(b), c=float(c), d=float(d)))
    return games


@pytest.fixture
def random_stag_hunts() -> Callable[..., List[PayoffMatrix]]:
    """Factory for seeded random stag hunt matrices."""
    return make_random_stag_hunts


@pytest.fixture
def corrupted_operators(stag_hunt):
    """Payoff operators with b and d exchanged for Alice only."""
    m = stag_hunt
    return PayoffOperators(
        weights_a=(m.a, m.b, m.d, m.c),
        weights_b=(m.a, m.b, m.d, m.c),
    )


# =============================================================================
# Filesystem Fixtures
# =============================================================================

@pytest.fixture
def temp_dir():
    """Create a temporary directory that is cleaned up after the test."""
    temp_path = tempfile.mkdtemp()
    yield Path(temp_path)
    shutil.rmtree(temp_path)


@pytest.fixture
def game_file(temp_dir) -> Callable[..., Path]:
    """Factory writing a JSON game definition into the temp directory."""
    def _write(m: PayoffMatrix, name: Optional[str] = None, filename: str = "game.json") -> Path:
        doc = m.as_dict()
        if name is not None:
            doc["name"] = name
        path = temp_dir / filename
        path.write_text(json.dumps(doc))
        return path

    return _write


@pytest.fixture
def clean_env(monkeypatch):
    """Remove QGAMES_* variables for the duration of the test."""
    for key in list(os.environ):
        if key.startswith("QGAMES_"):
            monkeypatch.delenv(key)
    monkeypatch.setattr(Path, "home", classmethod(lambda cls: Path(tempfile.gettempdir()) / "qgames-no-home"))
    yield
    for key in list(os.environ):
        if key.startswith("QGAMES_"):
            os.environ.pop(key)
