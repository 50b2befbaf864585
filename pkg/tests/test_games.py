"""Tests for payoff matrices, strategy profiles, family classification and game files."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from server.errors import DomainError, FamilyMismatchError, GameDefinitionError
from server.games import (
    GameDefinition,
    GameFamily,
    PayoffMatrix,
    StrategyProfile,
    classify_family,
    load_game_file,
    normalized_exemplar,
    parse_game_definition,
)


class TestPayoffMatrix:
    """Test PayoffMatrix validation and helpers."""

    def test_rejects_non_finite_payoff(self):
        """Should reject NaN and infinite payoffs."""
        with pytest.raises(DomainError):
            PayoffMatrix(a=math.nan, b=0.5, c=0.2, d=0.0)
        with pytest.raises(DomainError):
            PayoffMatrix(a=1.0, b=math.inf, c=0.2, d=0.0)

    def test_as_dict(self):
        assert PayoffMatrix(1, 2, 3, 4).as_dict() == {"a": 1, "b": 2, "c": 3, "d": 4}


class TestStrategyProfile:
    """Test StrategyProfile range checks."""

    @pytest.mark.parametrize("p,q", [(-0.1, 0.5), (0.5, 1.01), (math.nan, 0.0)])
    def test_rejects_out_of_range(self, p, q):
        """Should reject probabilities outside [0, 1]."""
        with pytest.raises(DomainError):
            StrategyProfile(p=p, q=q)

    def test_accepts_bounds(self):
        s = StrategyProfile(p=0.0, q=1.0)
        assert (s.p, s.q) == (0.0, 1.0)


class TestClassifyFamily:
    """Test family classification by payoff ordering."""

    @pytest.mark.parametrize("family", [
        GameFamily.STAG_HUNT,
        GameFamily.CHICKEN,
        GameFamily.LEADER,
        GameFamily.SECRET_MEETING,
        GameFamily.PRISONERS_DILEMMA,
    ])
    def test_exemplars_classify_to_their_family(self, family):
        """Every normalised exemplar should classify to its own family."""
        assert classify_family(normalized_exemplar(family)) == family

    def test_stag_hunt_exemplar_values(self, stag_hunt):
        assert stag_hunt == PayoffMatrix(a=1.0, b=2.0 / 3.0, c=1.0 / 3.0, d=0.0)

    def test_leader_exemplar_values(self, leader):
        """Leader exemplar should be b=1, d=2/3, a=1/3, c=0."""
        assert leader.b == 1.0
        assert leader.d == pytest.approx(2.0 / 3.0)
        assert leader.a == pytest.approx(1.0 / 3.0)
        assert leader.c == 0.0

    def test_tie_is_other(self):
        """Any tie among the payoffs should classify as Other."""
        assert classify_family(PayoffMatrix(a=1.0, b=1.0, c=0.5, d=0.0)) == GameFamily.OTHER

    def test_dilemma_requires_cooperation_beats_alternation(self):
        """b > a > c > d with b + d >= 2a is not a Prisoner's Dilemma."""
        assert classify_family(PayoffMatrix(a=0.5, b=1.0, c=0.3, d=0.0)) == GameFamily.OTHER

    def test_unmatched_ordering_is_other(self):
        assert classify_family(PayoffMatrix(a=0.0, b=1.0, c=2.0, d=3.0)) == GameFamily.OTHER

    @settings(max_examples=60, deadline=None)
    @given(
        family=st.sampled_from([
            GameFamily.STAG_HUNT, GameFamily.CHICKEN, GameFamily.LEADER,
            GameFamily.SECRET_MEETING, GameFamily.PRISONERS_DILEMMA,
        ]),
        scale=st.floats(min_value=0.1, max_value=10.0),
        shift=st.floats(min_value=-5.0, max_value=5.0),
    )
    def test_invariant_under_positive_affine_maps(self, family, scale, shift):
        """Classification should not change under x -> scale * x + shift."""
        m = normalized_exemplar(family)
        moved = PayoffMatrix(*(scale * v + shift for v in (m.a, m.b, m.c, m.d)))
        assert classify_family(moved) == family

    def test_no_exemplar_for_other(self):
        with pytest.raises(FamilyMismatchError):
            normalized_exemplar(GameFamily.OTHER)


class TestGameDefinition:
    """Test JSON game-definition parsing."""

    def test_parse_valid_document(self):
        """Should parse payoffs and the optional name."""
        game = parse_game_definition('{"a": 1, "b": 0.6, "c": 0.3, "d": 0, "name": "hunt"}')
        assert game.name == "hunt"
        assert game.matrix == PayoffMatrix(a=1.0, b=0.6, c=0.3, d=0.0)
        assert game.family == GameFamily.STAG_HUNT

    def test_family_key_is_ignored(self):
        """A family key in the input should never override classification."""
        game = parse_game_definition('{"a": 1, "b": 0.6, "c": 0.3, "d": 0, "family": "Chicken"}')
        assert game.family == GameFamily.STAG_HUNT

    def test_missing_payoff(self):
        with pytest.raises(GameDefinitionError):
            parse_game_definition('{"a": 1, "b": 0.6, "c": 0.3}')

    def test_invalid_json(self):
        with pytest.raises(GameDefinitionError):
            parse_game_definition("{not json")

    def test_non_numeric_payoff(self):
        with pytest.raises(GameDefinitionError):
            parse_game_definition('{"a": "high", "b": 0.6, "c": 0.3, "d": 0}')

    def test_load_missing_file(self, temp_dir):
        """Should raise GameDefinitionError for a missing file."""
        with pytest.raises(GameDefinitionError):
            load_game_file(temp_dir / "missing.json")

    def test_load_file(self, game_file, chicken):
        game = load_game_file(game_file(chicken, name="chicken"))
        assert isinstance(game, GameDefinition)
        assert game.family == GameFamily.CHICKEN

    @pytest.mark.parametrize("document", [
        '{"a": "1", "b": 0.6, "c": 0.3, "d": 0}',
        '{"a": 1, "b": true, "c": 0.3, "d": false}',
        '{"a": 1, "b": 0.6, "c": null, "d": 0}',
    ])
    def test_payoffs_must_be_json_numbers(self, document):
        """Numeric strings, booleans and null should not pass as payoffs."""
        with pytest.raises(GameDefinitionError):
            parse_game_definition(document)

    def test_integer_payoffs_accepted(self):
        game = parse_game_definition('{"a": 3, "b": 2, "c": 1, "d": 0}')
        assert game.matrix == PayoffMatrix(a=3.0, b=2.0, c=1.0, d=0.0)

    def test_load_invalid_utf8(self, temp_dir):
        """A file that is not UTF-8 should raise GameDefinitionError."""
        path = temp_dir / "latin1.json"
        path.write_bytes(b'{"a": 1, "b": 0.6, "c": 0.3, "d": 0, "name": "\xff\xfe"}')
        with pytest.raises(GameDefinitionError, match="UTF-8"):
            load_game_file(path)
