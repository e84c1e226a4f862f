"""Unit tests for Schrödinger and Riccati dynamics."""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from core.dynamics import (
    HamiltonianSpec,
    RiccatiChart,
    Trajectory,
    bloch_point,
    chart_to_bloch,
    consistency_check,
    cross_ratio,
    energy,
    project_to_chart,
    riccati_evolve,
    riccati_rhs,
    schrodinger_evolve,
)
from core.numkernel import SIGMA_X, SIGMA_Z, DimensionError, HermiticityError
from core.states import PureState, StateValidationError, random_pure_state


def _random_hermitian(rng, n, scale=1.0):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (m + m.conj().T)


class SchrodingerTests(unittest.TestCase):
    def test_zero_hamiltonian_is_stationary(self):
        psi = PureState([0.6, 0.8j])
        traj = schrodinger_evolve(HamiltonianSpec(np.zeros((2, 2))), psi, [0.0, 1.0, 5.0])
        for point in traj.points:
            assert_allclose(point.amplitudes, psi.amplitudes, atol=1e-15)

    def test_sigma_z_closed_form(self):
        traj = schrodinger_evolve(HamiltonianSpec(SIGMA_Z), PureState([1.0, 0.0]), np.linspace(0, 3, 7))
        for t, point in zip(traj.times, traj.points):
            assert_allclose(point.amplitudes, [np.exp(-1j * t), 0.0], atol=1e-12)

    def test_rabi_oscillation(self):
        traj = schrodinger_evolve(HamiltonianSpec(SIGMA_X), PureState([1.0, 0.0]), [0.0, np.pi / 2, np.pi])
        assert_allclose(traj.points[1].amplitudes, [0.0, -1j], atol=1e-12)
        self.assertAlmostEqual(abs(np.vdot(traj.points[2].amplitudes, [1.0, 0.0])), 1.0, places=12)

    def test_hbar_rescales_time(self):
        psi = PureState([1.0, 1.0])
        a = schrodinger_evolve(HamiltonianSpec(SIGMA_X, hbar=2.0), psi, [0.0, 2.0]).points[1]
        b = schrodinger_evolve(HamiltonianSpec(SIGMA_X), psi, [0.0, 1.0]).points[1]
        assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)

    def test_norm_and_energy_conservation(self):
        rng = np.random.default_rng(61)
        spec = HamiltonianSpec(_random_hermitian(rng, 4))
        psi = PureState(2.0 * random_pure_state(4, rng).normalized())
        traj = schrodinger_evolve(spec, psi, np.linspace(0, 10, 21))
        e0 = energy(spec, psi)
        for point in traj.points:
            self.assertAlmostEqual(point.norm, psi.norm, delta=1e-10)
            self.assertAlmostEqual(energy(spec, point), e0, delta=1e-10)

    def test_validation(self):
        with self.assertRaises(HermiticityError):
            HamiltonianSpec(np.array([[0, 1], [0, 0]]))
        with self.assertRaises(ValueError):
            HamiltonianSpec(SIGMA_Z, hbar=0.0)
        with self.assertRaises(DimensionError):
            schrodinger_evolve(HamiltonianSpec(SIGMA_Z), PureState([1, 0, 0]), [0.0])
        with self.assertRaises(ValueError):
            Trajectory(np.array([0.0, 0.0]), [None, None])

    def test_loose_hermiticity_tolerance_is_honoured(self):
        h = SIGMA_X.copy()
        h[0, 1] += 1e-8
        with self.assertRaises(HermiticityError):
            HamiltonianSpec(h)
        spec = HamiltonianSpec(h, tol=1e-6)
        np.testing.assert_array_equal(spec.h, spec.h.conj().T)
        traj = schrodinger_evolve(spec, PureState([1.0, 0.0]), [0.0, np.pi / 2])
        assert_allclose(traj.points[1].amplitudes, [0.0, -1j], atol=1e-7)
        self.assertLessEqual(consistency_check(spec, PureState([1.0, 0.0]), [0.0, 1.0, 2.0]), 1e-6)


class ChartTests(unittest.TestCase):
    def test_projection_examples(self):
        plus = PureState([1.0, 1.0])
        self.assertEqual(project_to_chart(plus), RiccatiChart("xi", 1.0))
        assert_allclose(bloch_point(plus), [1.0, 0.0, 0.0], atol=1e-12)

        up = PureState([1.0, 0.0])
        self.assertEqual(project_to_chart(up), RiccatiChart("eta", 0.0))
        assert_allclose(bloch_point(up), [0.0, 0.0, 1.0], atol=1e-12)

        circular = PureState([1.0, 1j])
        chart = project_to_chart(circular)
        self.assertEqual(chart.chart, "xi")
        self.assertAlmostEqual(chart.value, -1j)
        assert_allclose(bloch_point(circular), [0.0, 1.0, 0.0], atol=1e-12)

    def test_bloch_point_is_unit(self):
        rng = np.random.default_rng(71)
        for _ in range(10):
            self.assertAlmostEqual(float(np.linalg.norm(bloch_point(random_pure_state(2, rng)))), 1.0, delta=1e-10)

    def test_switched_chart_is_the_same_ray(self):
        point = RiccatiChart("xi", 3.0 - 1.0j)
        assert_allclose(chart_to_bloch(point), chart_to_bloch(point.switched()), atol=1e-12)
        with self.assertRaises(ValueError):
            RiccatiChart("eta", 0.0).switched()

    def test_riccati_rhs_matches_differentiated_ket(self):
        rng = np.random.default_rng(73)
        h = _random_hermitian(rng, 2)
        z = np.array([0.3 + 0.4j, 1.0 - 0.2j])
        dz = h @ z / 1j
        xi = z[0] / z[1]
        eta = z[1] / z[0]
        self.assertAlmostEqual(riccati_rhs(h, xi, "xi"), (dz[0] * z[1] - z[0] * dz[1]) / z[1] ** 2, places=12)
        self.assertAlmostEqual(riccati_rhs(h, eta, "eta"), (dz[1] * z[0] - z[1] * dz[0]) / z[0] ** 2, places=12)

    def test_sigma_x_has_stationary_point(self):
        self.assertAlmostEqual(abs(riccati_rhs(SIGMA_X, 1.0, "xi")), 0.0, places=15)
        traj = riccati_evolve(HamiltonianSpec(SIGMA_X), RiccatiChart("xi", 1.0), [0.0, 5.0], step=0.01)
        self.assertAlmostEqual(traj.points[-1].value, 1.0, places=12)

    def test_zero_vector_rejected(self):
        with self.assertRaises(StateValidationError):
            project_to_chart(PureState([0.0, 0.0]))


class RiccatiTests(unittest.TestCase):
    def test_diagonal_hamiltonian_rotates_xi(self):
        omega = 1.5
        spec = HamiltonianSpec(np.diag([omega / 2, -omega / 2]))
        xi0 = 0.8 + 0.3j
        times = np.linspace(0.0, 4.0, 9)
        traj = riccati_evolve(spec, RiccatiChart("xi", xi0), times, step=1e-3)
        for t, point in zip(times, traj.points):
            self.assertEqual(point.chart, "xi")
            self.assertAlmostEqual(point.value, xi0 * np.exp(-1j * omega * t), places=10)

    def test_crossing_the_chart_boundary(self):
        spec = HamiltonianSpec(SIGMA_X)
        psi0 = PureState([10.0, 1.0])
        times = np.linspace(0.0, 6.0, 61)
        traj = riccati_evolve(spec, project_to_chart(psi0), times, step=1e-3)
        self.assertEqual({p.chart for p in traj.points}, {"xi", "eta"})
        for p in traj.points:
            self.assertLessEqual(abs(p.value), 2.0 + 1e-12)
        self.assertLessEqual(consistency_check(spec, psi0, times, step=1e-3), 1e-6)

    def test_output_grid_may_start_after_zero(self):
        spec = HamiltonianSpec(SIGMA_X)
        psi0 = PureState([1.0, 0.0])
        self.assertLessEqual(consistency_check(spec, psi0, np.linspace(1.0, 2.0, 11)), 1e-6)

        omega = 1.5
        diagonal = HamiltonianSpec(np.diag([omega / 2, -omega / 2]))
        xi0 = 0.8 + 0.3j
        times = np.linspace(1.0, 3.0, 5)
        traj = riccati_evolve(diagonal, RiccatiChart("xi", xi0), times, step=1e-3)
        for t, point in zip(times, traj.points):
            self.assertAlmostEqual(point.value, xi0 * np.exp(-1j * omega * t), places=10)

    def test_disabled_switching_reports_non_finite_state(self):
        spec = HamiltonianSpec(SIGMA_X)
        with self.assertRaises(ValueError):
            riccati_evolve(spec, RiccatiChart("xi", 0.0), [0.0, 20.0], step=1.0, threshold=None)

    def test_invalid_step(self):
        with self.assertRaises(ValueError):
            riccati_evolve(HamiltonianSpec(SIGMA_Z), RiccatiChart("xi", 0.5), [0.0, 1.0], step=0.0)
        with self.assertRaises(DimensionError):
            riccati_evolve(HamiltonianSpec(np.eye(3)), RiccatiChart("xi", 0.5), [0.0, 1.0])

    def test_consistency_with_exact_flow(self):
        rng = np.random.default_rng(101)
        times = np.linspace(0.0, 10.0, 41)
        self.assertLess(consistency_check(HamiltonianSpec(np.zeros((2, 2))), PureState([0.3, 0.7j]), times), 1e-14)
        crossed = 0
        for _ in range(20):
            spec = HamiltonianSpec(_random_hermitian(rng, 2))
            psi0 = random_pure_state(2, rng)
            self.assertLessEqual(consistency_check(spec, psi0, times, step=1e-3), 1e-6)
            charts = {p.chart for p in riccati_evolve(spec, project_to_chart(psi0), times, step=1e-3).points}
            crossed += len(charts) == 2
        self.assertGreater(crossed, 0)

    def test_rk4_step_halving_gains_fourth_order(self):
        spec = HamiltonianSpec(SIGMA_Z)
        psi0 = PureState([0.8 + 0.3j, 1.0])
        coarse = consistency_check(spec, psi0, np.arange(41) * 0.05, step=0.05)
        fine = consistency_check(spec, psi0, np.arange(41) * 0.05, step=0.025)
        self.assertGreater(fine, 0.0)
        self.assertTrue(8.0 <= coarse / fine <= 32.0, msg=f"ratio {coarse / fine}")

    def test_cross_ratio_is_conserved(self):
        spec = HamiltonianSpec(SIGMA_Z + 0.2 * SIGMA_X)
        starts = [0.1, 0.3 + 0.2j, -0.4, 0.5j]
        times = np.linspace(0.0, 3.0, 31)
        tracks = [riccati_evolve(spec, RiccatiChart("xi", v), times, step=1e-3).points for v in starts]
        ratios = [cross_ratio(*(p.xi() for p in column)) for column in zip(*tracks)]
        for r in ratios:
            self.assertLess(abs(r - ratios[0]), 1e-6 * abs(ratios[0]))

    def test_cross_ratio_needs_distinct_points(self):
        with self.assertRaises(StateValidationError):
            cross_ratio(1.0, 2.0, 2.0, 3.0)


if __name__ == "__main__":
    unittest.main()
