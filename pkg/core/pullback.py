"""Pull-back tensor coefficients on unitary orbits and the entanglement criteria built on them.

Storage conventions:

* ``sym`` uses the halved anticommutator ``(R_j R_k + R_k R_j) / 2``.
* ``antisym`` is the real matrix ``<-i [R_j, R_k]>``; the raw commutator
  expectations are imaginary. For pure states ``antisym = -ray_poisson``.
* ``pure_pullback`` subtracts first moments (covariance), ``mixed_tensor`` does
  not. Both follow their defining formulas; do not unify them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from core.numkernel import (
    DimensionError,
    as_hermitian,
    ky_fan_norm,
    partial_trace,
)
from core.states import (
    DEFAULT_RANK_TOL,
    BipartiteDims,
    DensityState,
    PureState,
    projector,
    reduced,
    schmidt,
    werner,
)

logger = logging.getLogger(__name__)

DEFAULT_ZERO_BLOCK_REL_TOL = 1e-9
DEFAULT_ANTISYM_TOL = 1e-9
DEFAULT_DISTANCE_FLOOR = 1e-14
# Inclusive boundary for the Ky Fan bound: rounding must not flip x = 1/3.
BOUNDARY_REL_TOL = 1e-12

SEPARABLE = "separable"
ENTANGLED = "entangled"
INCONCLUSIVE = "inconclusive"
MAXIMAL = "maximally_entangled"
NOT_MAXIMAL = "not_maximally_entangled"


class CriterionNotApplicable(ValueError):
    """The requested criterion cannot be evaluated for this input."""


@dataclass(frozen=True, eq=False)
class LieAlgebraRep:
    """Ordered Hermitian generators ``R(X_j)`` with an optional A/B-local split."""

    generators: tuple
    labels: tuple[str, ...]
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        gens = tuple(as_hermitian(g) for g in self.generators)
        if not gens:
            raise ValueError("A representation needs at least one generator")
        size = gens[0].shape[0]
        if any(g.shape != (size, size) for g in gens):
            raise DimensionError("All generators must have the same dimension")
        if len(self.labels) != len(gens):
            raise ValueError(f"{len(self.labels)} labels for {len(gens)} generators")
        for g in gens:
            g.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.partition is not None:
            self._check_partition(size)

    def _check_partition(self, size: int):
        if self.dims is None:
            raise ValueError("A partitioned representation must record its bipartite dims")
        n_a, n_b = self.dims
        a_idx, b_idx = self.partition
        if sorted(a_idx + b_idx) != list(range(len(self.generators))):
            raise ValueError("Partition must split the generator indices exactly once")
        for j in a_idx:
            g = self.generators[j]
            local = partial_trace(g, (n_a, n_b), "A") / n_b
            if not np.allclose(g, np.kron(local, np.eye(n_b)), atol=1e-10):
                raise ValueError(f"Generator {self.labels[j]!r} is not of the form h ⊗ 1")
        for j in b_idx:
            g = self.generators[j]
            local = partial_trace(g, (n_a, n_b), "B") / n_a
            if not np.allclose(g, np.kron(np.eye(n_a), local), atol=1e-10):
                raise ValueError(f"Generator {self.labels[j]!r} is not of the form 1 ⊗ h")

    @property
    def size(self) -> int:
        return int(self.generators[0].shape[0])

    def __len__(self) -> int:
        return len(self.generators)

    def stacked(self) -> np.ndarray:
        return np.stack(self.generators)


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    sym: np.ndarray
    antisym: np.ndarray
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        sym = np.asarray(self.sym, dtype=float)
        antisym = np.asarray(self.antisym, dtype=float)
        if sym.shape != antisym.shape or sym.ndim != 2 or sym.shape[0] != sym.shape[1]:
            raise DimensionError(f"Coefficient matrices must be square and equal in shape: {sym.shape}, {antisym.shape}")
        # Projected so symmetry holds exactly as stored.
        object.__setattr__(self, "sym", 0.5 * (sym + sym.T))
        object.__setattr__(self, "antisym", 0.5 * (antisym - antisym.T))


@dataclass
class SeparabilityReport:
    verdict: str
    criterion: str
    statistic: float
    bound: float
    blocks: dict[str, float] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class DistanceToSeparable:
    g_ab_sq: float
    r_sq: float
    ratio: float | None


@dataclass(frozen=True)
class WernerRow:
    x: float
    statistic: float
    bound: float
    verdict: str


def su_basis(n: int) -> LieAlgebraRep:
    """Generalized Gell-Mann matrices with ``Tr(l_j l_k) = 2 δ_jk``.

    Order: symmetric pairs, antisymmetric pairs, diagonals, each lexicographic.
    For ``n = 2`` this is exactly ``(sigma_x, sigma_y, sigma_z)``.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"su(N) basis needs N >= 2, got {n}")
    symmetric, antisymmetric, diagonal = [], [], []
    sym_labels, asym_labels, diag_labels = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            symmetric.append(s)
            sym_labels.append(f"sym({j},{k})")
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k], a[k, j] = -1j, 1j
            antisymmetric.append(a)
            asym_labels.append(f"asym({j},{k})")
    for level in range(1, n):
        d = np.zeros(n, dtype=np.complex128)
        d[:level] = 1.0
        d[level] = -level
        diagonal.append(np.sqrt(2.0 / (level * (level + 1))) * np.diag(d))
        diag_labels.append(f"diag({level})")
    labels = sym_labels + asym_labels + diag_labels
    if n == 2:
        labels = ["sigma_x", "sigma_y", "sigma_z"]
    return LieAlgebraRep(tuple(symmetric + antisymmetric + diagonal), tuple(labels))


def local_product_rep(n_a: int, n_b: int | None = None) -> LieAlgebraRep:
    """``{l_j ⊗ 1} ∪ {1 ⊗ l_k}``, all A-local generators first."""
    n_b = n_a if n_b is None else n_b
    basis_a, basis_b = su_basis(n_a), su_basis(n_b)
    eye_a, eye_b = np.eye(n_a), np.eye(n_b)
    gens = [np.kron(g, eye_b) for g in basis_a.generators] + [np.kron(eye_a, g) for g in basis_b.generators]
    labels = [f"A:{lab}" for lab in basis_a.labels] + [f"B:{lab}" for lab in basis_b.labels]
    count_a = len(basis_a)
    partition = (tuple(range(count_a)), tuple(range(count_a, len(gens))))
    return LieAlgebraRep(tuple(gens), tuple(labels), partition=partition, dims=(int(n_a), int(n_b)))


def _second_moments(rho: np.ndarray, rep: LieAlgebraRep) -> np.ndarray:
    """``Q_jk = Tr(rho R_j R_k)``; ``Q_kj = conj(Q_jk)``."""
    if rho.shape[0] != rep.size:
        raise DimensionError(f"State of dimension {rho.shape[0]} does not match generators of size {rep.size}")
    stack = rep.stacked()
    return np.einsum("ab,jbc,kca->jk", rho, stack, stack)


def _first_moments(rho: np.ndarray, rep: LieAlgebraRep) -> np.ndarray:
    return np.real(np.einsum("ab,jba->j", rho, rep.stacked()))


def pure_pullback(psi: PureState, rep: LieAlgebraRep) -> CoefficientMatrix:
    """Covariance ``<(R_j R_k + R_k R_j)/2> - <R_j><R_k>`` and ``<-i[R_j, R_k]>`` at ``|psi><psi|``."""
    if psi.dim != rep.size:
        raise DimensionError(f"State of dimension {psi.dim} does not match generators of size {rep.size}")
    rho = projector(psi).matrix
    moments = _second_moments(rho, rep)
    means = _first_moments(rho, rep)
    return CoefficientMatrix(moments.real - np.outer(means, means), 2.0 * moments.imag, rep.partition)


def mixed_tensor(rho: DensityState, rep: LieAlgebraRep) -> CoefficientMatrix:
    """``Tr(rho (R_j R_k + R_k R_j)/2)`` and ``Tr(rho (-i)[R_j, R_k])``; no first-moment subtraction."""
    moments = _second_moments(rho.matrix, rep)
    return CoefficientMatrix(moments.real, 2.0 * moments.imag, rep.partition)


def block_decompose(c: CoefficientMatrix, which: str = "sym") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(A-block, B-block, AB-block)``; AB is the upper-right rectangle."""
    if c.partition is None:
        raise ValueError("Coefficient matrix carries no A/B partition")
    if which not in ("sym", "antisym"):
        raise ValueError(f"which must be 'sym' or 'antisym', got {which!r}")
    mat = getattr(c, which)
    a_idx, b_idx = (np.asarray(ix, dtype=int) for ix in c.partition)
    return mat[np.ix_(a_idx, a_idx)], mat[np.ix_(b_idx, b_idx)], mat[np.ix_(a_idx, b_idx)]


def block_norms(c: CoefficientMatrix) -> dict[str, float]:
    norms: dict[str, float] = {}
    for which in ("sym", "antisym"):
        a, b, ab = block_decompose(c, which)
        norms[f"{which}_A"] = float(np.linalg.norm(a))
        norms[f"{which}_B"] = float(np.linalg.norm(b))
        norms[f"{which}_AB"] = float(np.linalg.norm(ab))
    return norms


def _bipartite(psi: PureState, dims: BipartiteDims):
    if psi.dim != dims.total:
        raise DimensionError(f"State of dimension {psi.dim} does not factor as {dims.n_a} x {dims.n_b}")


def separability_pure(
    psi: PureState,
    dims: BipartiteDims,
    rel_tol: float = DEFAULT_ZERO_BLOCK_REL_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> SeparabilityReport:
    """Separable iff the AB block of the covariance vanishes: ``‖G^AB‖_F <= rel_tol (1 + ‖G‖_F)``."""
    _bipartite(psi, dims)
    coeffs = pure_pullback(psi, local_product_rep(dims.n_a, dims.n_b))
    _, _, g_ab = block_decompose(coeffs)
    statistic = float(np.linalg.norm(g_ab))
    bound = rel_tol * (1.0 + float(np.linalg.norm(coeffs.sym)))
    verdict = SEPARABLE if statistic <= bound else ENTANGLED
    data = schmidt(psi, dims, rank_tol)
    if (data.rank == 1) != (verdict == SEPARABLE):
        logger.warning(
            "Block test (%s, |G^AB|=%.3e) disagrees with Schmidt rank %d", verdict, statistic, data.rank
        )
    logger.debug("separability_pure: |G^AB|_F=%.3e bound=%.3e verdict=%s", statistic, bound, verdict)
    return SeparabilityReport(
        verdict=verdict,
        criterion="covariance AB block vanishes",
        statistic=statistic,
        bound=bound,
        blocks=block_norms(coeffs),
        details={"schmidt_rank": data.rank, "schmidt_coefficients": list(data.coefficients)},
    )


def max_entanglement_pure(
    psi: PureState,
    dims: BipartiteDims,
    tol: float = DEFAULT_ANTISYM_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> SeparabilityReport:
    """Maximally entangled iff the antisymmetric coefficients vanish."""
    if not dims.square:
        raise CriterionNotApplicable(f"Maximal entanglement test needs n_a = n_b, got {dims.as_tuple()}")
    _bipartite(psi, dims)
    coeffs = pure_pullback(psi, local_product_rep(dims.n_a, dims.n_b))
    statistic = float(np.linalg.norm(coeffs.antisym))
    verdict = MAXIMAL if statistic <= tol else NOT_MAXIMAL
    data = schmidt(psi, dims, rank_tol)
    flat = bool(np.allclose(data.coefficients, 1.0 / np.sqrt(dims.n_a), atol=1e-6))
    if flat != (verdict == MAXIMAL):
        logger.warning("Antisymmetric test (%s, |L|=%.3e) disagrees with Schmidt spectrum", verdict, statistic)
    return SeparabilityReport(
        verdict=verdict,
        criterion="antisymmetric coefficients vanish",
        statistic=statistic,
        bound=tol,
        blocks=block_norms(coeffs),
        details={"schmidt_rank": data.rank, "schmidt_coefficients": list(data.coefficients)},
    )


def distance_to_separable(
    psi: PureState,
    dims: BipartiteDims,
    floor: float = DEFAULT_DISTANCE_FLOOR,
) -> DistanceToSeparable:
    """``Tr((G^AB)^T G^AB)`` against ``Tr(R^dagger R)``, ``R = rho - rho_A ⊗ rho_B``.

    With the ``Tr(l_j l_k) = 2 δ_jk`` normalization the ratio is 4 for every state.
    """
    _bipartite(psi, dims)
    coeffs = pure_pullback(psi, local_product_rep(dims.n_a, dims.n_b))
    _, _, g_ab = block_decompose(coeffs)
    g_ab_sq = float(np.sum(g_ab * g_ab))
    rho = projector(psi)
    residual = rho.matrix - np.kron(reduced(rho, dims, "A").matrix, reduced(rho, dims, "B").matrix)
    r_sq = float(np.real(np.vdot(residual, residual)))
    ratio = g_ab_sq / r_sq if r_sq > floor else None
    return DistanceToSeparable(g_ab_sq, r_sq, ratio)


def devicente_check(rho: DensityState, dims: BipartiteDims) -> SeparabilityReport:
    """``(2/N) ‖L^AB‖_KF <= (N^2 - N)/2`` on the local-product coefficients.

    Exceeding the bound proves entanglement. Staying within it proves
    separability only for ``N = 2``; for larger ``N`` the result is inconclusive.
    """
    if not dims.square:
        raise CriterionNotApplicable(f"Ky Fan criterion needs n_a = n_b, got {dims.as_tuple()}")
    if rho.dim != dims.total:
        raise DimensionError(f"State of dimension {rho.dim} does not factor as {dims.n_a} x {dims.n_b}")
    n = dims.n_a
    coeffs = mixed_tensor(rho, local_product_rep(n))
    _, _, corr = block_decompose(coeffs)
    statistic = (2.0 / n) * ky_fan_norm(corr)
    bound = 0.5 * (n * n - n)
    if statistic > bound * (1.0 + BOUNDARY_REL_TOL):
        verdict = ENTANGLED
    else:
        verdict = SEPARABLE if n == 2 else INCONCLUSIVE
    logger.debug("devicente_check: N=%d statistic=%.15g bound=%.15g verdict=%s", n, statistic, bound, verdict)
    return SeparabilityReport(
        verdict=verdict,
        criterion="Ky Fan norm of correlation block",
        statistic=float(statistic),
        bound=float(bound),
        blocks=block_norms(coeffs),
    )


def werner_scan(x_grid) -> list[WernerRow]:
    dims = BipartiteDims(2, 2)
    rows = []
    for x in x_grid:
        report = devicente_check(werner(float(x)), dims)
        rows.append(WernerRow(float(x), report.statistic, report.bound, report.verdict))
    return rows


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def local_unitary(u_a: np.ndarray, u_b: np.ndarray) -> np.ndarray:
    return np.kron(u_a, u_b)
