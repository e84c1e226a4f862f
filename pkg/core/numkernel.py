"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` complex arrays. Functions here never mutate their
inputs and always return fresh arrays, so results can be shared across threads.

Symmetrized products use the halved convention ``sym_product(a, b) = (ab + ba) / 2``
throughout the toolkit. With that convention the local-product coefficient
matrix of a Werner state has ones on its diagonal.
"""

from __future__ import annotations

import logging
from typing import Literal

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_HERMITICITY_TOL = 1e-10

Subsystem = Literal["A", "B"]

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class DimensionError(ValueError):
    """Operands have incompatible or non-factorizable shapes."""


class HermiticityError(ValueError):
    """An operator expected to be Hermitian is not, within tolerance."""


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"Expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix contains NaN or infinite entries")
    return arr


def as_hermitian(m, tol: float = DEFAULT_HERMITICITY_TOL) -> np.ndarray:
    """Validate ``m`` as a square Hermitian matrix (max-norm deviation <= tol)."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Hermitian operator must be square, got shape {arr.shape}")
    deviation = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if deviation > tol:
        raise HermiticityError(f"Operator is not Hermitian: max |A - A^dagger| = {deviation:.3e} > {tol:.1e}")
    return arr


def hermitian_part(m, tol: float = DEFAULT_HERMITICITY_TOL) -> np.ndarray:
    """Validate ``m`` like ``as_hermitian`` and return ``(m + m^dagger) / 2``, Hermitian to the last bit."""
    arr = as_hermitian(m, tol)
    return 0.5 * (arr + arr.conj().T)


def is_hermitian(m, tol: float = DEFAULT_HERMITICITY_TOL) -> bool:
    try:
        as_hermitian(m, tol)
    except ValueError:
        return False
    return True


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"Cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product, A-major: ``(a⊗b)[i*p+k, j*q+l] = a[i,j] * b[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def bipartite_shape(size: int, dims: tuple[int, int]) -> tuple[int, int]:
    n_a, n_b = int(dims[0]), int(dims[1])
    if n_a < 1 or n_b < 1 or n_a * n_b != size:
        raise DimensionError(f"Size {size} does not factor as {n_a} x {n_b}")
    return n_a, n_b


def partial_trace(m, dims: tuple[int, int], keep: Subsystem = "A") -> np.ndarray:
    """Trace out one factor of an operator on C^{n_a} ⊗ C^{n_b}."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Partial trace needs a square matrix, got {arr.shape}")
    n_a, n_b = bipartite_shape(arr.shape[0], dims)
    blocks = arr.reshape(n_a, n_b, n_a, n_b)
    if keep == "A":
        return np.einsum("ijkj->ik", blocks)
    if keep == "B":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def herm_eig(a, tol: float = DEFAULT_HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns).

    No ordering is promised inside a degenerate cluster.
    """
    arr = as_hermitian(a, tol)
    # eigh reads one triangle only; symmetrize so the tolerance slack is averaged out.
    values, vectors = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    return values, vectors


def singular_values(m) -> np.ndarray:
    """Singular values in descending order."""
    arr = as_matrix(m)
    if arr.size == 0:
        return np.zeros(0)
    return np.linalg.svd(arr, compute_uv=False)


def ky_fan_norm(m) -> float:
    """Sum of all singular values, ``Tr sqrt(m^dagger m)``."""
    return float(np.sum(singular_values(m)))


def _same_square(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Operators must be square and the same size, got {a.shape} and {b.shape}")


def commutator(a, b) -> np.ndarray:
    """``[a, b] = ab - ba`` (anti-Hermitian for Hermitian inputs)."""
    a, b = as_matrix(a), as_matrix(b)
    _same_square(a, b)
    return a @ b - b @ a


def sym_product(a, b) -> np.ndarray:
    """Halved anticommutator ``(ab + ba) / 2`` (Hermitian for Hermitian inputs)."""
    a, b = as_matrix(a), as_matrix(b)
    _same_square(a, b)
    return 0.5 * (a @ b + b @ a)


def expectation(operator, rho) -> complex:
    """``Tr(rho · operator)`` without forming the product."""
    op, r = as_matrix(operator), as_matrix(rho)
    _same_square(op, r)
    return complex(np.einsum("ij,ji->", r, op))
