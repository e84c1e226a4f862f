"""Pure and density states, Bloch and Schmidt decompositions, named constructors.

Bipartite index convention: amplitude index ``i_A * n_b + i_B`` (A-major),
matching ``numkernel.kron(a_factor, b_factor)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from core.numkernel import (
    DEFAULT_HERMITICITY_TOL,
    IDENTITY2,
    PAULI,
    Subsystem,
    bipartite_shape,
    hermitian_part,
    partial_trace,
    singular_values,
)

logger = logging.getLogger(__name__)

DEFAULT_PSD_TOL = 1e-9
DEFAULT_TRACE_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-9
MIN_NORM = 1e-12


class StateValidationError(ValueError):
    """A vector or matrix does not describe a valid quantum state."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """A nonzero ket. Amplitudes are kept as given; ``normalized`` rescales."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0:
            raise StateValidationError("Pure state needs at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise StateValidationError("Pure state amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if norm < MIN_NORM:
            raise StateValidationError(f"Zero vector is not a state (norm {norm:.3e})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> np.ndarray:
        return self.amplitudes / self.norm

    def scaled(self, factor: complex) -> "PureState":
        return PureState(self.amplitudes * complex(factor))


@dataclass(frozen=True, eq=False)
class DensityState:
    """Positive semidefinite, unit-trace Hermitian matrix.

    States failing positivity by more than ``psd_tol`` are rejected, never clipped.
    """

    matrix: np.ndarray
    psd_tol: float = DEFAULT_PSD_TOL
    trace_tol: float = DEFAULT_TRACE_TOL
    hermiticity_tol: float = field(default=DEFAULT_HERMITICITY_TOL, repr=False)

    def __post_init__(self):
        try:
            mat = hermitian_part(self.matrix, self.hermiticity_tol)
        except ValueError as e:
            raise StateValidationError(f"Density matrix rejected: {e}") from e
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > self.trace_tol:
            raise StateValidationError(f"Density matrix trace is {trace.real:.12g}, expected 1")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -self.psd_tol:
            raise StateValidationError(f"Density matrix is not positive: smallest eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, tol: float = DEFAULT_RANK_TOL) -> int:
        return int(np.sum(self.eigenvalues() > tol))


@dataclass(frozen=True)
class BipartiteDims:
    n_a: int
    n_b: int

    def __post_init__(self):
        if int(self.n_a) < 2 or int(self.n_b) < 2:
            raise StateValidationError(f"Each factor needs dimension >= 2, got ({self.n_a}, {self.n_b})")

    @property
    def total(self) -> int:
        return self.n_a * self.n_b

    @property
    def square(self) -> bool:
        return self.n_a == self.n_b

    def as_tuple(self) -> tuple[int, int]:
        return (self.n_a, self.n_b)


@dataclass(frozen=True)
class SchmidtData:
    coefficients: tuple[float, ...]
    rank: int


def projector(psi: PureState) -> DensityState:
    """Rank-one projector ``|psi><psi| / <psi|psi>``."""
    ket = psi.normalized()
    return DensityState(np.outer(ket, ket.conj()))


def purity(rho: DensityState) -> float:
    return float(np.real(np.einsum("ij,ji->", rho.matrix, rho.matrix)))


def bloch_decompose(rho: DensityState) -> tuple[float, np.ndarray]:
    """``rho = Y0 * I + Y · sigma`` with ``Y_k = Tr(rho sigma_k) / 2``."""
    if rho.dim != 2:
        raise StateValidationError(f"Bloch decomposition needs a 2x2 state, got {rho.dim}x{rho.dim}")
    y0 = 0.5 * float(np.real(np.trace(rho.matrix)))
    y = np.array([0.5 * float(np.real(np.trace(rho.matrix @ s))) for s in PAULI])
    return y0, y


def bloch_reconstruct(y0: float, y) -> DensityState:
    vec = np.asarray(y, dtype=float).reshape(3)
    return DensityState(y0 * IDENTITY2 + sum(c * s for c, s in zip(vec, PAULI)))


def schmidt(psi: PureState, dims: BipartiteDims, rank_tol: float = DEFAULT_RANK_TOL) -> SchmidtData:
    n_a, n_b = bipartite_shape(psi.dim, dims.as_tuple())
    coefficients = singular_values(psi.normalized().reshape(n_a, n_b))
    rank = int(np.sum(coefficients > rank_tol))
    return SchmidtData(tuple(float(c) for c in coefficients), rank)


def reduced(rho: DensityState, dims: BipartiteDims, keep: Subsystem = "A") -> DensityState:
    return DensityState(
        partial_trace(rho.matrix, dims.as_tuple(), keep),
        psd_tol=rho.psd_tol,
        trace_tol=rho.trace_tol,
        hermiticity_tol=rho.hermiticity_tol,
    )


def product_state(psi_a: PureState, psi_b: PureState) -> PureState:
    return PureState(np.kron(psi_a.normalized(), psi_b.normalized()))


def bell_phi_plus() -> PureState:
    """``(|0>⊗|0> + |1>⊗|1>) / sqrt(2)``."""
    return PureState(np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2.0))


def max_mixed(n: int) -> DensityState:
    if int(n) < 1:
        raise StateValidationError(f"Dimension must be positive, got {n}")
    return DensityState(np.eye(int(n), dtype=np.complex128) / int(n))


def werner(x: float) -> DensityState:
    """``x |phi+><phi+| + (1 - x) I/4`` for ``0 <= x <= 1``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise StateValidationError(f"Werner weight must lie in [0, 1], got {x}")
    bell = projector(bell_phi_plus()).matrix
    return DensityState(x * bell + (1.0 - x) * np.eye(4, dtype=np.complex128) / 4.0)


def random_pure_state(n: int, rng: np.random.Generator) -> PureState:
    return PureState(rng.normal(size=n) + 1j * rng.normal(size=n))


def random_density_state(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityState:
    """Random state of the given rank (full rank by default)."""
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise StateValidationError(f"Rank must lie in [1, {n}], got {rank}")
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    mat = g @ g.conj().T
    return DensityState(mat / np.trace(mat).real)
