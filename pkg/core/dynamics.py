"""Schrödinger evolution and the projective Riccati flow for two-level systems.

For ``psi = (z1, z2)`` the chart ``xi = z1 / z2`` obeys

    i hbar xi'  = H12 + (H11 - H22) xi  - H21 xi^2

and the chart ``eta = z2 / z1``

    i hbar eta' = H21 + (H22 - H11) eta - H12 eta^2

Integration is fixed-step RK4. Whenever ``|value|`` exceeds the switch
threshold the point moves to the other chart (``value -> 1/value``); with a
threshold of 2 it only comes back once ``|value| < 1/2`` in the original chart.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from core.numkernel import DEFAULT_HERMITICITY_TOL, DimensionError, herm_eig, hermitian_part
from core.states import MIN_NORM, PureState, StateValidationError, bloch_decompose, projector

logger = logging.getLogger(__name__)

Chart = Literal["xi", "eta"]

DEFAULT_SWITCH_THRESHOLD = 2.0
DEFAULT_STEP = 1e-3


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    h: np.ndarray
    hbar: float = 1.0
    tol: float = field(default=DEFAULT_HERMITICITY_TOL, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "h", hermitian_part(self.h, self.tol))
        if not float(self.hbar) > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def dim(self) -> int:
        return int(self.h.shape[0])


@dataclass(frozen=True)
class RiccatiChart:
    chart: Chart
    value: complex

    def __post_init__(self):
        if self.chart not in ("xi", "eta"):
            raise ValueError(f"chart must be 'xi' or 'eta', got {self.chart!r}")
        value = complex(self.value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError(f"Chart value is not finite: {value}")
        object.__setattr__(self, "value", value)

    def switched(self) -> "RiccatiChart":
        if self.value == 0:
            raise ValueError("Cannot switch charts at the chart origin")
        return RiccatiChart("eta" if self.chart == "xi" else "xi", 1.0 / self.value)

    def to_ket(self) -> np.ndarray:
        if self.chart == "xi":
            return np.array([self.value, 1.0], dtype=np.complex128)
        return np.array([1.0, self.value], dtype=np.complex128)

    def xi(self) -> complex:
        """Value in the ``xi`` chart; infinite at the north pole."""
        if self.chart == "xi":
            return self.value
        return complex(math.inf) if self.value == 0 else 1.0 / self.value


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    points: list

    def __post_init__(self):
        times = _check_times(self.times)
        if len(self.points) != times.size:
            raise ValueError(f"{len(self.points)} points for {times.size} times")
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return int(self.times.size)


def _check_times(times) -> np.ndarray:
    arr = np.asarray(times, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError("At least one output time is required")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Output times must be finite")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise ValueError("Output times must be strictly increasing")
    return arr


def _require_qubit(spec: HamiltonianSpec):
    if spec.dim != 2:
        raise DimensionError(f"Riccati dynamics needs a 2x2 Hamiltonian, got {spec.dim}x{spec.dim}")


def schrodinger_evolve(spec: HamiltonianSpec, psi0: PureState, times) -> Trajectory:
    """``psi(t) = exp(-i H t / hbar) psi0`` from the eigendecomposition of ``H``."""
    if psi0.dim != spec.dim:
        raise DimensionError(f"State of dimension {psi0.dim} does not match H of size {spec.dim}")
    times = _check_times(times)
    values, vectors = herm_eig(spec.h, spec.tol)
    coeffs = vectors.conj().T @ psi0.amplitudes
    points = [PureState(vectors @ (np.exp(-1j * values * t / spec.hbar) * coeffs)) for t in times]
    return Trajectory(times, points)


def _riccati_coefficients(h: np.ndarray, chart: Chart, hbar: float) -> tuple[complex, complex, complex]:
    """``(c0, c1, c2)`` with ``value' = c0 + c1 value + c2 value^2``."""
    h11, h12, h21, h22 = complex(h[0, 0]), complex(h[0, 1]), complex(h[1, 0]), complex(h[1, 1])
    if chart == "xi":
        coeffs = (h12, h11 - h22, -h21)
    elif chart == "eta":
        coeffs = (h21, h22 - h11, -h12)
    else:
        raise ValueError(f"chart must be 'xi' or 'eta', got {chart!r}")
    scale = 1j * hbar
    return coeffs[0] / scale, coeffs[1] / scale, coeffs[2] / scale


def riccati_rhs(h: np.ndarray, value: complex, chart: Chart, hbar: float = 1.0) -> complex:
    """Time derivative of the chart coordinate."""
    c0, c1, c2 = _riccati_coefficients(h, chart, hbar)
    return c0 + (c1 + c2 * value) * value


def _rk4_step(coeffs: tuple[complex, complex, complex], value: complex, dt: float) -> complex:
    c0, c1, c2 = coeffs

    def rate(v: complex) -> complex:
        return c0 + (c1 + c2 * v) * v

    k1 = rate(value)
    k2 = rate(value + 0.5 * dt * k1)
    k3 = rate(value + 0.5 * dt * k2)
    k4 = rate(value + dt * k3)
    return value + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def riccati_evolve(
    spec: HamiltonianSpec,
    x0: RiccatiChart,
    times,
    step: float = DEFAULT_STEP,
    threshold: float | None = DEFAULT_SWITCH_THRESHOLD,
) -> Trajectory:
    """RK4 on the chart coordinate; ``x0`` is the state at ``t = 0``.

    When ``times[0] != 0`` the flow is first carried from 0 to ``times[0]``
    without recording. Each interval between output times is split into equal
    sub-steps no larger than ``step``. ``threshold=None`` disables chart switching.
    """
    _require_qubit(spec)
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if threshold is not None and not threshold > 1.0:
        raise ValueError(f"Chart switch threshold must exceed 1, got {threshold}")
    times = _check_times(times)
    coefficients = {c: _riccati_coefficients(spec.h, c, spec.hbar) for c in ("xi", "eta")}
    chart, value = x0.chart, complex(x0.value)
    switches = 0

    def maybe_switch():
        nonlocal chart, value, switches
        if threshold is not None and abs(value) > threshold:
            chart, value = ("eta" if chart == "xi" else "xi"), 1.0 / value
            switches += 1

    def advance(t_start: float, t_end: float):
        nonlocal value
        count = max(1, math.ceil(abs(t_end - t_start) / step - 1e-9))
        dt = (t_end - t_start) / count
        for _ in range(count):
            value = _rk4_step(coefficients[chart], value, dt)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"Riccati flow left the {chart} chart near t={t_end:.6g}")
            maybe_switch()

    maybe_switch()
    if times[0] != 0.0:
        advance(0.0, float(times[0]))
    points = [RiccatiChart(chart, value)]
    for t_start, t_end in zip(times[:-1], times[1:]):
        advance(float(t_start), float(t_end))
        points.append(RiccatiChart(chart, value))
    logger.debug("riccati_evolve: %d output points, %d chart switches", len(points), switches)
    return Trajectory(times, points)


def project_to_chart(psi: PureState) -> RiccatiChart:
    """``xi`` when ``|z1| <= |z2|``, otherwise ``eta``; the value then has modulus <= 1."""
    if psi.dim != 2:
        raise DimensionError(f"Chart projection needs a 2-dim state, got {psi.dim}")
    z1, z2 = complex(psi.amplitudes[0]), complex(psi.amplitudes[1])
    if abs(z1) <= abs(z2):
        return RiccatiChart("xi", z1 / z2)
    return RiccatiChart("eta", z2 / z1)


def bloch_point(psi: PureState) -> np.ndarray:
    """Unit vector ``2Y`` with ``Y_k = Tr(rho sigma_k) / 2``."""
    if psi.dim != 2:
        raise DimensionError(f"Bloch point needs a 2-dim state, got {psi.dim}")
    _, y = bloch_decompose(projector(psi))
    return 2.0 * y


def chart_to_bloch(point: RiccatiChart) -> np.ndarray:
    return bloch_point(PureState(point.to_ket()))


def chordal_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``|2Y - 2Y'|`` between two Bloch points."""
    return float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def cross_ratio(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    denominator = (z1 - z4) * (z2 - z3)
    if abs(denominator) < MIN_NORM:
        raise StateValidationError("Cross-ratio needs four distinct points")
    return (z1 - z3) * (z2 - z4) / denominator


def energy(spec: HamiltonianSpec, psi: PureState) -> float:
    """``e_H(psi) = <psi|H|psi> / <psi|psi>``."""
    if psi.dim != spec.dim:
        raise DimensionError(f"State of dimension {psi.dim} does not match H of size {spec.dim}")
    ket = psi.normalized()
    return float(np.real(np.vdot(ket, spec.h @ ket)))


def consistency_check(
    spec: HamiltonianSpec,
    psi0: PureState,
    times,
    step: float = DEFAULT_STEP,
    threshold: float | None = DEFAULT_SWITCH_THRESHOLD,
) -> float:
    """Largest chordal distance between the Riccati flow and the projected Schrödinger flow."""
    _require_qubit(spec)
    exact = schrodinger_evolve(spec, psi0, times)
    riccati = riccati_evolve(spec, project_to_chart(psi0), times, step, threshold)
    return max(
        chordal_distance(chart_to_bloch(r), bloch_point(s)) for r, s in zip(riccati.points, exact.points)
    )
