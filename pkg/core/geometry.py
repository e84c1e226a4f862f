"""Kähler brackets on the realified Hilbert space and ray tensors on expectation functions.

Coordinates are ``z^j = x^j + i y^j``. For quadratic functions ``f_A = <psi|A|psi>``
the analytic gradients are ``df/dx = 2 Re(A z)`` and ``df/dy = 2 Im(A z)``, which
fixes the bracket constants of this implementation:

* ``{f_A, f_B} = 2 f_{i[A,B]}``           (POISSON_SCALE)
* ``(f_A, f_B) = 4 f_{(AB+BA)/2}``        (SYMMETRIC_SCALE)
* ``((f_A, f_B)) = (f_A, f_B) + i {f_A, f_B} = 4 f_{BA}``

Ray tensors are exposed through their action on expectation functions, using the
closed forms ``Λ̃(de_A, de_B) = e_{i[A,B]}`` and ``G̃(de_A, de_B) = e_{(AB+BA)/2} - e_A e_B``.
The coordinate construction from the dilation and phase fields reproduces them
scaled by SYMMETRIC_SCALE and POISSON_SCALE respectively.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.numkernel import (
    DEFAULT_HERMITICITY_TOL,
    DimensionError,
    as_hermitian,
    as_matrix,
    commutator,
    sym_product,
)
from core.states import MIN_NORM, PureState, StateValidationError

logger = logging.getLogger(__name__)

POISSON_SCALE = 2.0
SYMMETRIC_SCALE = 4.0
# ((e_A, e_B)) = G̃ + e_A e_B + i * LAMBDA_COUPLING * Λ̃ closes to e_{AB}.
LAMBDA_COUPLING = -0.5


@dataclass(frozen=True, eq=False)
class RealifiedPoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if x.shape != y.shape:
            raise DimensionError(f"x and y must have equal length, got {x.size} and {y.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("Realified coordinates must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_complex(cls, z) -> "RealifiedPoint":
        z = np.asarray(z, dtype=np.complex128).reshape(-1)
        return cls(z.real.copy(), z.imag.copy())

    @classmethod
    def from_state(cls, psi: PureState) -> "RealifiedPoint":
        return cls.from_complex(psi.amplitudes)

    @property
    def dim(self) -> int:
        return int(self.x.size)

    def to_complex(self) -> np.ndarray:
        return self.x + 1j * self.y

    def norm_sq(self) -> float:
        return float(self.x @ self.x + self.y @ self.y)


@dataclass(frozen=True, eq=False)
class QuadraticFunction:
    """``f_A(psi) = <psi|A|psi>``."""

    operator: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "operator", as_hermitian(self.operator, DEFAULT_HERMITICITY_TOL))


@dataclass(frozen=True, eq=False)
class ExpectationFunction:
    """``e_A(psi) = <psi|A|psi> / <psi|psi>``, constant on rays."""

    operator: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "operator", as_hermitian(self.operator, DEFAULT_HERMITICITY_TOL))


@dataclass(frozen=True, eq=False)
class ComplexObservable:
    """Complex function ``f_{A + iB}`` stored as its Hermitian pair ``(A, B)``."""

    real: np.ndarray
    imag: np.ndarray

    def __post_init__(self):
        real = as_hermitian(self.real)
        imag = as_hermitian(self.imag)
        if real.shape != imag.shape:
            raise DimensionError(f"Real and imaginary parts differ in shape: {real.shape} vs {imag.shape}")
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "imag", imag)

    @classmethod
    def from_operator(cls, operator) -> "ComplexObservable":
        op = as_matrix(operator)
        return cls(0.5 * (op + op.conj().T), (op - op.conj().T) / 2j)

    def operator(self) -> np.ndarray:
        return self.real + 1j * self.imag

    def conj(self) -> "ComplexObservable":
        return ComplexObservable(self.real, -self.imag)


def _check_dim(operator: np.ndarray, dim: int):
    if operator.shape[0] != dim:
        raise DimensionError(f"Operator of size {operator.shape[0]} does not act on a point of dimension {dim}")


def _ket(psi: PureState) -> np.ndarray:
    if psi.norm < MIN_NORM:
        raise StateValidationError("Ray quantities are undefined at the zero vector")
    return psi.normalized()


def _expect(operator: np.ndarray, ket: np.ndarray) -> complex:
    return complex(np.vdot(ket, operator @ ket))


def eval_quadratic(f: QuadraticFunction, p: RealifiedPoint) -> float:
    _check_dim(f.operator, p.dim)
    return float(np.real(_expect(f.operator, p.to_complex())))


def eval_expectation(e: ExpectationFunction, p: RealifiedPoint) -> float:
    _check_dim(e.operator, p.dim)
    c = p.norm_sq()
    if c < MIN_NORM**2:
        raise StateValidationError("Expectation functions are undefined at the zero vector")
    return float(np.real(_expect(e.operator, p.to_complex()))) / c


def quadratic_gradient(f: QuadraticFunction, p: RealifiedPoint) -> tuple[np.ndarray, np.ndarray]:
    """Analytic ``(df/dx, df/dy)``."""
    _check_dim(f.operator, p.dim)
    az = f.operator @ p.to_complex()
    return 2.0 * az.real, 2.0 * az.imag


def expectation_gradient(e: ExpectationFunction, p: RealifiedPoint) -> tuple[np.ndarray, np.ndarray]:
    c = p.norm_sq()
    if c < MIN_NORM**2:
        raise StateValidationError("Expectation functions are undefined at the zero vector")
    gx, gy = quadratic_gradient(QuadraticFunction(e.operator), p)
    value = eval_expectation(e, p)
    return (gx - 2.0 * value * p.x) / c, (gy - 2.0 * value * p.y) / c


def poisson_from_gradients(df, dg) -> float:
    """``{f, g} = df/dy · dg/dx - df/dx · dg/dy``."""
    (fx, fy), (gx, gy) = df, dg
    return float(np.dot(fy, gx) - np.dot(fx, gy))


def symmetric_from_gradients(df, dg) -> float:
    """``(f, g) = df/dx · dg/dx + df/dy · dg/dy``."""
    (fx, fy), (gx, gy) = df, dg
    return float(np.dot(fx, gx) + np.dot(fy, gy))


def poisson_bracket(f: QuadraticFunction, g: QuadraticFunction, p: RealifiedPoint) -> float:
    return poisson_from_gradients(quadratic_gradient(f, p), quadratic_gradient(g, p))


def symmetric_bracket(f: QuadraticFunction, g: QuadraticFunction, p: RealifiedPoint) -> float:
    return symmetric_from_gradients(quadratic_gradient(f, p), quadratic_gradient(g, p))


def hermitian_bracket(f: QuadraticFunction, g: QuadraticFunction, p: RealifiedPoint) -> complex:
    """``((f, g)) = (f, g) + i {f, g}``."""
    df, dg = quadratic_gradient(f, p), quadratic_gradient(g, p)
    return complex(symmetric_from_gradients(df, dg), poisson_from_gradients(df, dg))


def central_element_bracket(a, p: RealifiedPoint) -> float:
    """``{c, f_A}`` with ``c = <psi|psi>``; zero for every Hermitian ``A``."""
    f = QuadraticFunction(a)
    c = QuadraticFunction(np.eye(f.operator.shape[0], dtype=np.complex128))
    return poisson_bracket(c, f, p)


def jordan_product(a, b) -> np.ndarray:
    return sym_product(as_hermitian(a), as_hermitian(b))


def lie_product(a, b) -> np.ndarray:
    """``i[A, B]``, Hermitian for Hermitian inputs."""
    return 1j * commutator(as_hermitian(a), as_hermitian(b))


def star_product(f: ComplexObservable, g: ComplexObservable) -> ComplexObservable:
    """``f_{A+iB} * f_{M+iN} = f_{(A+iB)(M+iN)}``; associative, non-local."""
    left, right = f.operator(), g.operator()
    if left.shape != right.shape:
        raise DimensionError(f"Star product operands differ in size: {left.shape} vs {right.shape}")
    return ComplexObservable.from_operator(left @ right)


def ray_poisson(a, b, psi: PureState) -> float:
    """``Λ̃(de_A, de_B)(psi) = e_{i[A,B]}(psi)``."""
    ket = _ket(psi)
    op = lie_product(a, b)
    _check_dim(op, ket.size)
    return float(np.real(_expect(op, ket)))


def ray_symmetric(a, b, psi: PureState) -> float:
    """``G̃(de_A, de_B)(psi) = e_{(AB+BA)/2}(psi) - e_A(psi) e_B(psi)``."""
    ket = _ket(psi)
    a, b = as_hermitian(a), as_hermitian(b)
    _check_dim(a, ket.size)
    e_a = float(np.real(_expect(a, ket)))
    e_b = float(np.real(_expect(b, ket)))
    return float(np.real(_expect(sym_product(a, b), ket))) - e_a * e_b


def ray_cstar_product(a, b, psi: PureState) -> complex:
    """``((e_A, e_B)) = G̃ + e_A e_B + i * LAMBDA_COUPLING * Λ̃``, which equals ``e_{AB}``."""
    ket = _ket(psi)
    a, b = as_hermitian(a), as_hermitian(b)
    _check_dim(a, ket.size)
    pointwise = float(np.real(_expect(a, ket))) * float(np.real(_expect(b, ket)))
    return complex(ray_symmetric(a, b, psi) + pointwise, LAMBDA_COUPLING * ray_poisson(a, b, psi))


def ray_tensors_coordinate(a, b, psi: PureState) -> tuple[float, float]:
    """Coordinate form of ``(G̃, Λ̃)`` on ``(de_A, de_B)`` built from the dilation and phase fields.

    ``G̃ = c G - (Δ⊗Δ + Γ⊗Γ)`` and ``Λ̃ = c Λ - (Δ⊗Γ - Γ⊗Δ)``, with
    ``Δ = x ∂x + y ∂y`` and ``Γ = y ∂x - x ∂y``.
    """
    p = RealifiedPoint.from_state(psi)
    c = p.norm_sq()
    da = expectation_gradient(ExpectationFunction(a), p)
    db = expectation_gradient(ExpectationFunction(b), p)

    def dilation(grad):
        return float(np.dot(p.x, grad[0]) + np.dot(p.y, grad[1]))

    def phase(grad):
        return float(np.dot(p.y, grad[0]) - np.dot(p.x, grad[1]))

    g_tilde = c * symmetric_from_gradients(da, db) - (dilation(da) * dilation(db) + phase(da) * phase(db))
    lambda_tilde = c * poisson_from_gradients(da, db) - (dilation(da) * phase(db) - phase(da) * dilation(db))
    return g_tilde, lambda_tilde
