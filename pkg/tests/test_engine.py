"""Tests for the density-matrix engine and the closed-form payoffs."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from server.classical import classical_payoffs
from server.engine import (
    BASIS,
    FLIP,
    DensityMatrix,
    InitialState,
    check_x,
    closed_form_arrays,
    closed_form_payoffs,
    engine_payoffs,
    evolve,
    evolve_many,
    expected_payoffs,
    expected_payoffs_many,
    initial_density,
    payoff_operators,
)
from server.errors import DomainError, NormalizationError
from server.games import GameFamily, PayoffMatrix, StrategyProfile, normalized_exemplar

unit = st.floats(min_value=0.0, max_value=1.0)
phase = st.floats(min_value=-np.pi, max_value=np.pi)
payoff = st.floats(min_value=-10.0, max_value=10.0)

STAG_HUNT = normalized_exemplar(GameFamily.STAG_HUNT)


class TestInitialState:
    """Test initial state construction."""

    def test_from_x(self):
        """from_x should give |alpha|^2 = X and a unit norm."""
        state = InitialState.from_x(0.3)
        assert state.x == pytest.approx(0.3)
        assert state.norm_squared == pytest.approx(1.0)

    def test_from_x_with_phases(self):
        state = InitialState.from_x(0.3, phase_alpha=1.0, phase_beta=-2.0)
        assert abs(state.alpha) ** 2 == pytest.approx(0.3)
        assert np.angle(state.beta) == pytest.approx(-2.0)

    def test_from_x_out_of_range(self):
        with pytest.raises(DomainError):
            InitialState.from_x(1.5)

    def test_initial_density(self):
        """The projector should carry X and 1 - X on CC and DD."""
        rho = initial_density(InitialState.from_x(0.3))
        assert np.allclose(rho.diagonal().real, [0.3, 0.0, 0.0, 0.7])
        assert rho.entry("CC", "DD") == pytest.approx(np.sqrt(0.21))
        assert rho.is_valid()

    def test_unnormalised_state(self):
        """A state with |alpha|^2 + |beta|^2 != 1 should be rejected."""
        with pytest.raises(NormalizationError):
            initial_density(InitialState(alpha=1.0, beta=1.0))


class TestDensityMatrix:
    """Test DensityMatrix validation."""

    def test_wrong_shape(self):
        with pytest.raises(DomainError):
            DensityMatrix(np.eye(2))

    def test_read_only(self):
        """The stored array should be immutable."""
        rho = DensityMatrix(np.eye(4) / 4)
        with pytest.raises(ValueError):
            rho.data[0, 0] = 1.0

    def test_invalid_trace(self):
        assert DensityMatrix(np.eye(4)).is_valid() is False

    def test_basis_order(self):
        assert BASIS == ("CC", "CD", "DC", "DD")


class TestEvolve:
    """Test the identity/flip mixture."""

    def test_flip_operator(self):
        assert np.array_equal(FLIP.matrix @ FLIP.matrix, np.eye(2))

    def test_identity_profile_keeps_state(self):
        rho = initial_density(InitialState.from_x(0.3))
        assert np.allclose(evolve(rho, StrategyProfile(1, 1)).data, rho.data)

    def test_double_flip_swaps_cc_and_dd(self):
        rho = initial_density(InitialState.from_x(0.3))
        assert np.allclose(evolve(rho, StrategyProfile(0, 0)).diagonal().real, [0.7, 0.0, 0.0, 0.3])

    def test_bob_flip(self):
        """Only Bob flipping should move CC to CD and DD to DC."""
        rho = initial_density(InitialState.from_x(0.3))
        assert np.allclose(evolve(rho, StrategyProfile(1, 0)).diagonal().real, [0.0, 0.3, 0.7, 0.0])

    @settings(max_examples=50, deadline=None)
    @given(x=unit, p=unit, q=unit)
    def test_final_diagonal(self, x, p, q):
        """The final diagonal should follow the four-branch mixture."""
        rho = evolve(initial_density(InitialState.from_x(x)), StrategyProfile(p, q))
        y = 1 - x
        expected = [
            p * q * x + (1 - p) * (1 - q) * y,
            p * (1 - q) * x + (1 - p) * q * y,
            p * (1 - q) * y + (1 - p) * q * x,
            p * q * y + (1 - p) * (1 - q) * x,
        ]
        assert np.allclose(rho.diagonal().real, expected, atol=1e-12)
        assert rho.is_valid()

    def test_evolve_many_matches_evolve(self):
        rho = initial_density(InitialState.from_x(0.4, 0.5, 1.5))
        p = np.array([0.0, 0.25, 0.9])
        q = np.array([1.0, 0.5, 0.1])
        stack = evolve_many(rho, p, q)
        assert stack.shape == (3, 4, 4)
        for i in range(3):
            assert np.allclose(stack[i], evolve(rho, StrategyProfile(p[i], q[i])).data)

    def test_evolve_many_rejects_bad_probability(self):
        rho = initial_density(InitialState.from_x(0.4))
        with pytest.raises(DomainError):
            evolve_many(rho, np.array([1.2]), np.array([0.5]))


class TestPayoffs:
    """Test payoff operators and the closed forms."""

    def test_payoff_operator_weights(self, stag_hunt):
        """Alice earns d on CD and b on DC; Bob the mirror image."""
        ops = payoff_operators(stag_hunt)
        m = stag_hunt
        assert ops.weights_a == (m.a, m.d, m.b, m.c)
        assert ops.weights_b == (m.a, m.b, m.d, m.c)
        assert np.allclose(np.diag(ops.matrix_a()).real, ops.weights_a)

    def test_exemplar_at_half(self, stag_hunt):
        """At X = 1/2 mutual cooperation should pay (a + c)/2 = 2/3."""
        payoff_a, payoff_b = closed_form_payoffs(stag_hunt, 0.5, StrategyProfile(1, 1))
        assert payoff_a == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert payoff_b == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_rejects_x_out_of_range(self, stag_hunt):
        with pytest.raises(DomainError):
            closed_form_payoffs(stag_hunt, -0.1, StrategyProfile(1, 1))
        with pytest.raises(DomainError):
            check_x(np.array([0.2, 1.1]))

    @settings(max_examples=100, deadline=None)
    @given(
        a=payoff, b=payoff, c=payoff, d=payoff,
        x=unit, p=unit, q=unit, phase_alpha=phase, phase_beta=phase,
    )
    def test_engine_matches_closed_form(self, a, b, c, d, x, p, q, phase_alpha, phase_beta):
        """Engine payoffs should match the closed forms for any phases."""
        m = PayoffMatrix(a=a, b=b, c=c, d=d)
        s = StrategyProfile(p, q)
        engine = engine_payoffs(m, InitialState.from_x(x, phase_alpha, phase_beta), s)
        closed = closed_form_payoffs(m, x, s)
        assert engine == pytest.approx(closed, abs=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(x=unit, p=unit, q=unit)
    def test_player_swap_symmetry(self, x, p, q):
        """Alice's payoff at (p, q) should equal Bob's at (q, p)."""
        payoff_a, _ = closed_form_payoffs(STAG_HUNT, x, StrategyProfile(p, q))
        _, payoff_b = closed_form_payoffs(STAG_HUNT, x, StrategyProfile(q, p))
        assert payoff_a == pytest.approx(payoff_b, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(x=unit, p=unit, q=unit)
    def test_payoff_gap_identity(self, x, p, q):
        """$A - $B should equal (p - q)(d - b)(2X - 1)."""
        m = PayoffMatrix(a=1.0, b=0.6, c=0.3, d=0.0)
        payoff_a, payoff_b = closed_form_payoffs(m, x, StrategyProfile(p, q))
        assert payoff_a - payoff_b == pytest.approx((p - q) * (m.d - m.b) * (2 * x - 1), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(p=unit, q=unit)
    def test_reduces_to_classical_at_full_entanglement(self, p, q):
        """X = 1 should reproduce the classical payoffs."""
        s = StrategyProfile(p, q)
        assert closed_form_payoffs(STAG_HUNT, 1.0, s) == pytest.approx(classical_payoffs(STAG_HUNT, s), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(p=unit, q=unit)
    def test_relabels_moves_at_zero_entanglement(self, p, q):
        """X = 0 should reproduce the classical payoffs with C and D exchanged."""
        quantum = closed_form_payoffs(STAG_HUNT, 0.0, StrategyProfile(p, q))
        classical = classical_payoffs(STAG_HUNT, StrategyProfile(1 - p, 1 - q))
        assert quantum == pytest.approx(classical, abs=1e-12)

    def test_expected_payoffs_of_initial_state(self, stag_hunt):
        rho = initial_density(InitialState.from_x(0.25))
        payoff_a, payoff_b = expected_payoffs(rho, payoff_operators(stag_hunt))
        assert payoff_a == pytest.approx(0.25 * stag_hunt.a + 0.75 * stag_hunt.c)
        assert payoff_b == pytest.approx(payoff_a)


class TestRandomisedStates:
    """Invariants over 10^4 random initial states and profiles."""

    STATES = 100
    PROFILES_PER_STATE = 100

    def _random_stacks(self, seed: int):
        rng = np.random.default_rng(seed)
        for _ in range(self.STATES):
            x = float(rng.uniform(0.0, 1.0))
            phase_alpha, phase_beta = rng.uniform(-np.pi, np.pi, size=2)
            p = rng.uniform(0.0, 1.0, size=self.PROFILES_PER_STATE)
            q = rng.uniform(0.0, 1.0, size=self.PROFILES_PER_STATE)
            rho = initial_density(InitialState.from_x(x, float(phase_alpha), float(phase_beta)))
            yield x, p, q, evolve_many(rho, p, q)

    def test_evolved_states_are_density_matrices(self):
        """Every evolved state should be Hermitian, unit-trace and positive semidefinite."""
        checked = 0
        for _, _, _, stack in self._random_stacks(seed=2024):
            adjoint = np.conj(np.swapaxes(stack, -1, -2))
            assert np.max(np.abs(stack - adjoint)) <= 1e-12
            assert np.max(np.abs(np.trace(stack, axis1=1, axis2=2) - 1.0)) <= 1e-12
            assert np.min(np.linalg.eigvalsh((stack + adjoint) / 2)) >= -1e-10
            checked += len(stack)
        assert checked == 10_000

    def test_engine_matches_closed_form(self, random_stag_hunts):
        """Trace payoffs should match the closed forms for random phases and games."""
        games = random_stag_hunts(self.STATES, seed=31)
        for m, (x, p, q, stack) in zip(games, self._random_stacks(seed=77)):
            got_a, got_b = expected_payoffs_many(stack, payoff_operators(m))
            want_a, want_b = closed_form_arrays(m, x, p, q)
            assert np.allclose(got_a, want_a, atol=1e-12)
            assert np.allclose(got_b, want_b, atol=1e-12)
