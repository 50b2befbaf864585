"""Density-matrix engine for the identity/flip quantization of 2x2 games.

Two qubits in the ordered basis (CC, CD, DC, DD) start in the entangled state
alpha|CC> + beta|DD>. Each player applies the identity with probability p
(Alice) or q (Bob) and the flip U otherwise, and the payoffs are traces of
diagonal payoff operators against the final density matrix.

The engine works on full 4x4 complex matrices; closed_form_payoffs is the
polynomial form it is checked against.
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from server.errors import DomainError, NormalizationError
from server.games import PayoffMatrix, StrategyProfile

logger = logging.getLogger(__name__)

BASIS = ("CC", "CD", "DC", "DD")

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_SLACK = 1e-10
NORMALIZATION_TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class FlipOperator:
    """Exchange operator U with U|C> = |D> and U|D> = |C>."""

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[0, 1], [1, 0]], dtype=complex)


FLIP = FlipOperator()


@dataclass(frozen=True)
class InitialState:
    """Amplitudes of the starting state alpha|CC> + beta|DD>."""
    alpha: complex
    beta: complex

    @classmethod
    def from_x(cls, x: float, phase_alpha: float = 0.0, phase_beta: float = 0.0) -> "InitialState":
        """Build a state with |alpha|^2 = x and the given phases (radians).

        Raises:
            DomainError: If x is outside [0, 1]
        """
        check_x(x)
        return cls(
            alpha=cmath.rect(float(np.sqrt(x)), phase_alpha),
            beta=cmath.rect(float(np.sqrt(1.0 - x)), phase_beta),
        )

    @property
    def x(self) -> float:
        """Entanglement parameter X = |alpha|^2."""
        return abs(self.alpha) ** 2

    @property
    def norm_squared(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, 0, 0, self.beta], dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Immutable 4x4 density matrix over (CC, CD, DC, DD)."""
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        array = np.array(self.data, dtype=complex)
        if array.shape != (4, 4):
            raise DomainError(f"Density matrix must be 4x4, got shape {array.shape}")
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    def entry(self, row: str, col: str) -> complex:
        return complex(self.data[BASIS.index(row), BASIS.index(col)])

    def diagonal(self) -> np.ndarray:
        return np.diag(self.data)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def trace_error(self) -> float:
        return float(abs(np.trace(self.data) - 1.0))

    def min_eigenvalue(self) -> float:
        hermitian_part = (self.data + self.data.conj().T) / 2
        return float(np.linalg.eigvalsh(hermitian_part)[0])

    def is_valid(self) -> bool:
        """Hermitian, unit trace and positive semidefinite within tolerance."""
        return (
            self.hermiticity_error() <= HERMITIAN_TOL
            and self.trace_error() <= TRACE_TOL
            and self.min_eigenvalue() >= -PSD_SLACK
        )


@dataclass(frozen=True)
class PayoffOperators:
    """Diagonal payoff weights on (CC, CD, DC, DD) for each player."""
    weights_a: Tuple[float, float, float, float]
    weights_b: Tuple[float, float, float, float]

    def matrix_a(self) -> np.ndarray:
        return np.diag(np.array(self.weights_a, dtype=complex))

    def matrix_b(self) -> np.ndarray:
        return np.diag(np.array(self.weights_b, dtype=complex))


def check_x(x: ArrayLike) -> None:
    """Raise DomainError unless every X lies in [0, 1]."""
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise DomainError(f"X = |alpha|^2 must lie in [0, 1], got {x!r}")


def initial_density(state: InitialState) -> DensityMatrix:
    """Projector onto alpha|CC> + beta|DD>.

    Raises:
        NormalizationError: If |alpha|^2 + |beta|^2 deviates from 1 by more than 1e-9
    """
    if abs(state.norm_squared - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(
            f"|alpha|^2 + |beta|^2 = {state.norm_squared!r}, expected 1"
        )
    psi = state.vector()
    return DensityMatrix(np.outer(psi, psi.conj()))


# Local tactic pairs in mixture order: pq, p(1-q), (1-p)q, (1-p)(1-q)
_TACTIC_PAIRS = (
    (IDENTITY, IDENTITY),
    (IDENTITY, FLIP.matrix),
    (FLIP.matrix, IDENTITY),
    (FLIP.matrix, FLIP.matrix),
)


def _branches(rho: np.ndarray) -> np.ndarray:
    """Conjugate rho by each of the four tactic pairs; shape (4, 4, 4)."""
    result = []
    for u_a, u_b in _TACTIC_PAIRS:
        k = np.kron(u_a, u_b)
        result.append(k @ rho @ k.conj().T)
    return np.stack(result)


def _mixture_weights(p: ArrayLike, q: ArrayLike) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.stack([p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)], axis=-1)


def evolve(rho_in: DensityMatrix, s: StrategyProfile) -> DensityMatrix:
    """Apply both players' identity/flip mixtures to rho_in.

    Args:
        rho_in: Initial density matrix
        s: Identity probabilities (p, q)

    Returns:
        Final density matrix
    """
    weights = _mixture_weights(s.p, s.q)
    return DensityMatrix(np.tensordot(weights, _branches(rho_in.data), axes=1))


def evolve_many(rho_in: DensityMatrix, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorised evolve over arrays of profiles.

    Args:
        rho_in: Initial density matrix
        p: Alice's identity probabilities, shape (n,)
        q: Bob's identity probabilities, shape (n,)

    Returns:
        Array of final density matrices, shape (n, 4, 4)
    """
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    if np.any((p < 0) | (p > 1) | (q < 0) | (q > 1)):
        raise DomainError("Probabilities must lie in [0, 1]")
    weights = _mixture_weights(p.ravel(), q.ravel())
    branches = _branches(rho_in.data).reshape(4, 16)
    return (weights @ branches).reshape(-1, 4, 4)


def payoff_operators(m: PayoffMatrix) -> PayoffOperators:
    """Diagonal payoff operators consistent with the bimatrix.

    Alice earns d on CD and b on DC; Bob the mirror image.
    """
    return PayoffOperators(
        weights_a=(m.a, m.d, m.b, m.c),
        weights_b=(m.a, m.b, m.d, m.c),
    )


def _real_diagonal(diag: np.ndarray) -> np.ndarray:
    worst = float(np.max(np.abs(diag.imag))) if diag.size else 0.0
    if worst >= HERMITIAN_TOL:
        logger.warning("Discarding diagonal imaginary part of size %.3e", worst)
    return diag.real


def expected_payoffs(rho_fin: DensityMatrix, ops: PayoffOperators) -> Tuple[float, float]:
    """Trace of each payoff operator against the final density matrix."""
    diag = _real_diagonal(rho_fin.diagonal())
    return (
        float(np.dot(ops.weights_a, diag)),
        float(np.dot(ops.weights_b, diag)),
    )


def expected_payoffs_many(stack: np.ndarray, ops: PayoffOperators) -> Tuple[np.ndarray, np.ndarray]:
    """expected_payoffs over an (n, 4, 4) stack from evolve_many."""
    diag = _real_diagonal(np.einsum("nii->ni", stack))
    return diag @ np.asarray(ops.weights_a), diag @ np.asarray(ops.weights_b)


def engine_payoffs(m: PayoffMatrix, state: InitialState, s: StrategyProfile) -> Tuple[float, float]:
    """Payoffs through the full pipeline initial_density -> evolve -> expected_payoffs."""
    rho_fin = evolve(initial_density(state), s)
    return expected_payoffs(rho_fin, payoff_operators(m))


def closed_form_arrays(
    m: PayoffMatrix,
    x: ArrayLike,
    p: ArrayLike,
    q: ArrayLike
) -> Tuple[ArrayLike, ArrayLike]:
    """Polynomial payoff forms, broadcasting over x, p and q."""
    a, b, c, d = m.a, m.b, m.c, m.d
    y = 1 - x
    coupling = p * q * (a + c - b - d)
    constant = a * y + c * x
    payoff_a = (coupling + p * (x * (d - c) + y * (b - a))
                + q * (x * (b - c) + y * (d - a)) + constant)
    payoff_b = (coupling + p * (x * (b - c) + y * (d - a))
                + q * (x * (d - c) + y * (b - a)) + constant)
    return payoff_a, payoff_b


def closed_form_payoffs(m: PayoffMatrix, x: float, s: StrategyProfile) -> Tuple[float, float]:
    """Closed-form quantum payoffs at X = |alpha|^2.

    Raises:
        DomainError: If x is outside [0, 1]
    """
    check_x(x)
    payoff_a, payoff_b = closed_form_arrays(m, x, s.p, s.q)
    return float(payoff_a), float(payoff_b)
