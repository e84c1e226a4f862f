"""GNS construction for the full matrix algebra M_N(C) and a density state.

The algebra is spanned by matrix units ``E_(i,j)``, flattened to index
``i * N + j``. The GNS inner product ``<a|b>_rho = Tr(rho a^dagger b)`` gives the
Gram matrix; its null space is the Gelfand ideal and its rank is the dimension
of the GNS Hilbert space (``N * rank(rho)``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.states import DEFAULT_RANK_TOL, DensityState

logger = logging.getLogger(__name__)

DEFAULT_GNS_RANK_REL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GnsResult:
    gram: np.ndarray
    ideal_dim: int
    hilbert_dim: int
    quotient_basis: tuple[int, ...]
    spectrum: np.ndarray

    @property
    def algebra_dim(self) -> int:
        return int(self.gram.shape[0])

    def quotient_gram(self) -> np.ndarray:
        """Gram matrix restricted to ``quotient_basis``; positive definite."""
        idx = np.asarray(self.quotient_basis, dtype=int)
        return self.gram[np.ix_(idx, idx)]


def matrix_units(n: int) -> np.ndarray:
    """Stack of ``E_(i,j)`` with shape ``(n*n, n, n)``."""
    return np.eye(n * n, dtype=np.complex128).reshape(n * n, n, n)


def gns_gram(rho: DensityState) -> np.ndarray:
    """``gram[a, b] = Tr(rho E_a^dagger E_b)``."""
    units = matrix_units(rho.dim)
    gram = np.einsum("xy,azy,bzx->ab", rho.matrix, units.conj(), units)
    return 0.5 * (gram + gram.conj().T)


def _rank(matrix: np.ndarray, threshold: float) -> int:
    if matrix.size == 0:
        return 0
    return int(np.sum(np.linalg.eigvalsh(matrix) > threshold))


def _independent_units(gram: np.ndarray, threshold: float, target: int) -> tuple[int, ...]:
    """Greedy maximal subset of units whose Gram block has full rank."""
    chosen: list[int] = []
    for a in range(gram.shape[0]):
        if len(chosen) == target:
            break
        trial = chosen + [a]
        if _rank(gram[np.ix_(trial, trial)], threshold) == len(trial):
            chosen = trial
    return tuple(chosen)


def gns_construct(rho: DensityState, rel_tol: float = DEFAULT_GNS_RANK_REL_TOL) -> GnsResult:
    """Gram matrix, Gelfand ideal dimension and quotient basis.

    Gram eigenvalues below ``rel_tol * max eigenvalue`` belong to the ideal.
    """
    gram = gns_gram(rho)
    spectrum = np.linalg.eigvalsh(gram)
    threshold = rel_tol * float(max(spectrum[-1], 0.0))
    if spectrum[0] < -1e-10:
        logger.warning("GNS gram has negative eigenvalue %.3e", spectrum[0])
    hilbert_dim = int(np.sum(spectrum > threshold))
    basis = _independent_units(gram, threshold, hilbert_dim)
    logger.debug("GNS: N=%d hilbert_dim=%d ideal_dim=%d", rho.dim, hilbert_dim, gram.shape[0] - hilbert_dim)
    return GnsResult(
        gram=gram,
        ideal_dim=int(gram.shape[0] - hilbert_dim),
        hilbert_dim=hilbert_dim,
        quotient_basis=basis,
        spectrum=spectrum,
    )


def eigenvalue_multiplicities(rho: DensityState, tol: float = DEFAULT_RANK_TOL) -> list[int]:
    values = np.sort(rho.eigenvalues())
    counts = [1]
    for prev, cur in zip(values[:-1], values[1:]):
        if cur - prev <= tol:
            counts[-1] += 1
        else:
            counts.append(1)
    return counts


def gns_orbit_dimension(rho: DensityState, tol: float = DEFAULT_RANK_TOL) -> int:
    """Real dimension of the unitary orbit ``U(N) rho``: ``N^2 - sum m_k^2``."""
    n = rho.dim
    return n * n - sum(m * m for m in eigenvalue_multiplicities(rho, tol))
