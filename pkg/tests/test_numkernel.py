"""Unit tests for the dense linear-algebra kernel."""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from core.numkernel import (
    PAULI,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionError,
    HermiticityError,
    as_hermitian,
    commutator,
    expectation,
    herm_eig,
    hermitian_part,
    is_hermitian,
    kron,
    ky_fan_norm,
    matmul,
    partial_trace,
    singular_values,
    sym_product,
)


def _random_complex(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def _random_unitary(rng, n):
    q, r = np.linalg.qr(_random_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


class NumKernelTests(unittest.TestCase):
    def test_as_hermitian_rejects_non_hermitian_and_non_square(self):
        with self.assertRaises(HermiticityError):
            as_hermitian(np.array([[0, 1], [0, 0]]))
        with self.assertRaises(DimensionError):
            as_hermitian(np.zeros((2, 3)))
        self.assertTrue(is_hermitian(SIGMA_Y))
        self.assertFalse(is_hermitian(1j * SIGMA_X))

    def test_matmul_shape_mismatch(self):
        with self.assertRaises(DimensionError):
            matmul(np.eye(2), np.eye(3))

    def test_kron_is_a_major(self):
        a = np.array([[1, 2], [3, 4]])
        b = np.eye(2)
        out = kron(a, b)
        self.assertEqual(out.shape, (4, 4))
        self.assertEqual(out[0, 2], 2)
        self.assertEqual(out[3, 1], 3)

    def test_partial_trace_of_product(self):
        rng = np.random.default_rng(7)
        a = _random_hermitian(rng, 2)
        b = _random_hermitian(rng, 3)
        ab = kron(a, b)
        assert_allclose(partial_trace(ab, (2, 3), "A"), a * np.trace(b), atol=1e-12)
        assert_allclose(partial_trace(ab, (2, 3), "B"), b * np.trace(a), atol=1e-12)

    def test_partial_trace_rejects_bad_factorization(self):
        with self.assertRaises(DimensionError):
            partial_trace(np.eye(6), (2, 2), "A")
        with self.assertRaises(ValueError):
            partial_trace(np.eye(4), (2, 2), "C")

    def test_herm_eig_reconstructs_matrix(self):
        rng = np.random.default_rng(11)
        h = _random_hermitian(rng, 5)
        values, vectors = herm_eig(h)
        self.assertTrue(np.all(np.diff(values) >= 0))
        assert_allclose(vectors @ np.diag(values) @ vectors.conj().T, h, atol=1e-12)
        assert_allclose(vectors.conj().T @ vectors, np.eye(5), atol=1e-12)

    def test_ky_fan_norm_is_sum_of_singular_values(self):
        m = np.diag([0.5, -0.5, 0.5])
        self.assertAlmostEqual(ky_fan_norm(m), 1.5, places=14)
        assert_allclose(singular_values(np.diag([1.0, -3.0])), [3.0, 1.0])

    def test_pauli_algebra(self):
        assert_allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z, atol=1e-15)
        for s in PAULI:
            assert_allclose(sym_product(s, s), np.eye(2), atol=1e-15)
        assert_allclose(sym_product(SIGMA_X, SIGMA_Z), np.zeros((2, 2)), atol=1e-15)

    def test_expectation_matches_trace(self):
        rho = np.array([[0.75, 0.25], [0.25, 0.25]])
        self.assertAlmostEqual(expectation(SIGMA_X, rho).real, 0.5, places=14)
        self.assertAlmostEqual(expectation(SIGMA_Z, rho).real, 0.5, places=14)

    def test_hermitian_part_is_exactly_hermitian(self):
        m = SIGMA_X.copy()
        m[0, 1] += 1e-8
        with self.assertRaises(HermiticityError):
            hermitian_part(m)
        h = hermitian_part(m, tol=1e-6)
        np.testing.assert_array_equal(h, h.conj().T)
        self.assertAlmostEqual(h[0, 1].real, 1.0 + 5e-9, places=15)

    def test_matmul_matches_triple_loop(self):
        rng = np.random.default_rng(19)
        a, b = _random_complex(rng, 3, 4), _random_complex(rng, 4, 2)
        expected = np.zeros((3, 2), dtype=complex)
        for i in range(3):
            for j in range(2):
                for k in range(4):
                    expected[i, j] += a[i, k] * b[k, j]
        assert_allclose(matmul(a, b), expected, atol=1e-12)

    def test_matmul_is_associative(self):
        rng = np.random.default_rng(23)
        for n in (2, 3, 6):
            a, b, c = (_random_complex(rng, n) for _ in range(3))
            assert_allclose(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), atol=1e-10)

    def test_kron_matches_index_formula(self):
        rng = np.random.default_rng(29)
        a, b = _random_complex(rng, 2, 3), _random_complex(rng, 3, 2)
        out = kron(a, b)
        self.assertEqual(out.shape, (6, 6))
        for i in range(2):
            for j in range(3):
                for k in range(3):
                    for m in range(2):
                        self.assertLess(abs(out[i * 3 + k, j * 2 + m] - a[i, j] * b[k, m]), 1e-13)

    def test_kron_mixed_product(self):
        rng = np.random.default_rng(31)
        a, c = _random_complex(rng, 2), _random_complex(rng, 2)
        b, d = _random_complex(rng, 3), _random_complex(rng, 3)
        assert_allclose(matmul(kron(a, b), kron(c, d)), kron(matmul(a, c), matmul(b, d)), atol=1e-10)

    def test_partial_trace_preserves_trace(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            m = _random_complex(rng, 4)
            for keep in ("A", "B"):
                self.assertAlmostEqual(complex(np.trace(partial_trace(m, (2, 2), keep))), complex(np.trace(m)), places=12)

    def test_herm_eig_residual_up_to_sixteen(self):
        rng = np.random.default_rng(41)
        for n in (1, 2, 3, 4, 8, 16):
            h = _random_hermitian(rng, n)
            values, vectors = herm_eig(h)
            scale = max(1.0, float(np.max(np.abs(values))))
            self.assertLessEqual(float(np.max(np.abs(h @ vectors - vectors * values))), 1e-10 * scale)
            assert_allclose(vectors.conj().T @ vectors, np.eye(n), atol=1e-12)

    def test_sigma_x_eigenvectors(self):
        values, vectors = herm_eig(SIGMA_X)
        assert_allclose(values, [-1.0, 1.0], atol=1e-15)
        minus, plus = vectors[:, 0], vectors[:, 1]
        self.assertAlmostEqual(abs(np.vdot(minus, [1.0, -1.0])) / np.sqrt(2.0), 1.0, places=12)
        self.assertAlmostEqual(abs(np.vdot(plus, [1.0, 1.0])) / np.sqrt(2.0), 1.0, places=12)

    def test_singular_values_square_to_gram_eigenvalues(self):
        rng = np.random.default_rng(43)
        for rows, cols in ((3, 3), (4, 2), (2, 5)):
            m = _random_complex(rng, rows, cols)
            gram = np.linalg.eigvalsh(m.conj().T @ m)[::-1][: min(rows, cols)]
            assert_allclose(singular_values(m) ** 2, gram, rtol=1e-10, atol=1e-10)

    def test_ky_fan_norm_is_unitarily_invariant(self):
        rng = np.random.default_rng(47)
        for n in (2, 3, 5):
            m = _random_complex(rng, n)
            u, v = _random_unitary(rng, n), _random_unitary(rng, n)
            self.assertAlmostEqual(ky_fan_norm(u @ m @ v), ky_fan_norm(m), delta=1e-10 * ky_fan_norm(m))

    def test_inputs_are_not_mutated(self):
        a = np.array([[1.0, 2.0], [2.0, 1.0]])
        before = a.copy()
        sym_product(a, SIGMA_Z)
        herm_eig(a)
        assert_allclose(a, before)


if __name__ == "__main__":
    unittest.main()
