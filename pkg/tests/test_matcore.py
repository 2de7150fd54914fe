import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uhlfid import (
    ConvergenceError,
    DimensionError,
    DomainError,
    HermiticityError,
    NegativityError,
    SpectrumError,
    drazin_pinv_psd,
    general_eigenvalues,
    herm_eig,
    kron,
    matmul,
    psd_power,
    psd_sqrt,
    schur_sqrt,
    singular_values,
    trace,
)
from uhlfid.matcore import as_complex_matrix, max_abs

from conftest import random_hermitian

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def ginibre_psd(rng, n, rank=None):
    rank = rank or n
    g = (rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))) / np.sqrt(2)
    return g @ g.conj().T


class TestMatmul:
    def test_identity(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_array_equal(matmul(np.eye(3), a), a)

    def test_diagonal(self):
        out = matmul(np.diag([2.0, 3.0]), np.diag([5.0, 7.0]))
        np.testing.assert_allclose(out, np.diag([10.0, 21.0]))

    def test_pauli_x_involution(self):
        np.testing.assert_allclose(matmul(PAULI_X, PAULI_X), np.eye(2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            matmul(np.eye(2), np.eye(3))

    def test_inputs_unmodified(self, rng):
        a = rng.standard_normal((4, 4)) + 0j
        b = rng.standard_normal((4, 4)) + 0j
        a0, b0 = a.copy(), b.copy()
        matmul(a, b)
        np.testing.assert_array_equal(a, a0)
        np.testing.assert_array_equal(b, b0)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            as_complex_matrix(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            as_complex_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_trace_multiplicative(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert abs(trace(kron(a, b)) - trace(a) * trace(b)) < 1e-12 * max_abs(a) * max_abs(b)

    def test_diagonal(self):
        np.testing.assert_allclose(kron(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])),
                                   np.diag([3.0, 4.0, 6.0, 8.0]))


class TestTrace:
    def test_identity(self):
        assert trace(np.eye(4)) == 4.0

    def test_complex_diagonal(self):
        assert trace(np.diag([1.0 + 2.0j, 3.0])) == 4.0 + 2.0j

    def test_density_matrix_unit_trace(self):
        from conftest import state_pair

        rho, _ = state_pair(6)
        assert abs(trace(rho.mat) - 1.0) < 1e-12


class TestHermEig:
    def test_diagonal_sorted_ascending(self):
        res = herm_eig(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(res.eigenvalues, [1.0, 3.0])

    def test_pauli_x(self):
        res = herm_eig(PAULI_X)
        np.testing.assert_allclose(res.eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_reconstruction_residual_8x8(self, rng):
        a = random_hermitian(rng, 8)
        res = herm_eig(a)
        recon = (res.eigenvectors * res.eigenvalues) @ res.eigenvectors.conj().T
        assert max_abs(recon - a) <= 1e-10 * 8 * max(1.0, max_abs(a))

    def test_rejects_non_hermitian(self):
        with pytest.raises(HermiticityError):
            herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
    def test_invariants_bulk(self, n):
        gen = np.random.Generator(np.random.Philox(key=[5, n]))
        for _ in range(100):
            a = random_hermitian(gen, n)
            res = herm_eig(a)
            v = res.eigenvectors
            assert max_abs(v.conj().T @ v - np.eye(n)) <= 1e-10 * n
            recon = (v * res.eigenvalues) @ v.conj().T
            assert max_abs(recon - a) <= 1e-10 * n * max_abs(a)
            assert np.all(np.diff(res.eigenvalues) >= 0)


class TestGeneralEigenvalues:
    def test_triangular(self):
        lam = general_eigenvalues(np.array([[1.0, 5.0], [0.0, 2.0]]))
        np.testing.assert_allclose(sorted(lam.real), [1.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(lam.imag, 0.0, atol=1e-12)

    def test_diagonal(self):
        lam = general_eigenvalues(np.diag([3.0 / 8.0, 1.0 / 8.0]))
        np.testing.assert_allclose(lam.real, [3.0 / 8.0, 1.0 / 8.0])

    def test_ordering_descending_real_then_imag(self):
        lam = general_eigenvalues(np.diag([1.0 + 1.0j, 2.0, 1.0 + 3.0j]))
        assert lam[0] == 2.0
        assert lam[1] == 1.0 + 3.0j
        assert lam[2] == 1.0 + 1.0j

    def test_state_product_is_real(self):
        from conftest import state_pair

        rho, sigma = state_pair(4, master=3)
        lam = general_eigenvalues(rho.mat @ sigma.mat)
        assert np.max(np.abs(lam.imag)) <= 1e-10
        # independent oracle: the Hermitian sandwich has the same spectrum
        s = psd_sqrt(rho.mat)
        w = herm_eig(s @ sigma.mat @ s).eigenvalues
        np.testing.assert_allclose(np.sort(lam.real), np.sort(w), atol=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_triangular_spectrum_equals_diagonal(self, n):
        gen = np.random.Generator(np.random.Philox(key=[6, n]))
        for _ in range(20):
            t = np.triu(gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n)))
            lam = general_eigenvalues(t)
            diag = np.diagonal(t)
            order = np.lexsort((-diag.imag, -diag.real))
            np.testing.assert_allclose(lam, diag[order], atol=1e-12)


class TestPsdSqrt:
    def test_diagonal(self):
        np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]),
                                   atol=1e-14)

    def test_identity(self):
        np.testing.assert_allclose(psd_sqrt(np.eye(5)), np.eye(5), atol=1e-14)

    def test_ginibre_reconstruction(self, rng):
        a = ginibre_psd(rng, 6)
        s = psd_sqrt(a)
        assert max_abs(s @ s - a) <= 1e-9 * max(1.0, max_abs(a))

    def test_commutes_with_input(self, rng):
        a = ginibre_psd(rng, 5)
        s = psd_sqrt(a)
        assert max_abs(s @ a - a @ s) <= 1e-9 * max_abs(a)

    def test_negativity_rejected(self):
        with pytest.raises(NegativityError):
            psd_sqrt(np.array([[0.5, 0.6], [0.6, 0.5]]))

    def test_hermiticity_rejected(self):
        with pytest.raises(HermiticityError):
            psd_sqrt(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestPsdPower:
    def test_half_matches_sqrt(self, rng):
        a = ginibre_psd(rng, 4)
        assert max_abs(psd_power(a, 0.5) - psd_sqrt(a)) <= 1e-12

    def test_power_one_with_null(self):
        np.testing.assert_allclose(psd_power(np.diag([4.0, 0.0]), 1.0),
                                   np.diag([4.0, 0.0]), atol=1e-14)

    def test_cube_root(self):
        np.testing.assert_allclose(psd_power(np.diag([8.0, 1.0]), 1.0 / 3.0),
                                   np.diag([2.0, 1.0]), atol=1e-14)

    def test_power_zero_is_identity(self, rng):
        a = ginibre_psd(rng, 4, rank=2)
        np.testing.assert_allclose(psd_power(a, 0.0), np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("x", [-0.1, 1.5, np.nan])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            psd_power(np.eye(2), x)


class TestSchurSqrt:
    def test_diagonal(self):
        np.testing.assert_allclose(schur_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]),
                                   atol=1e-14)

    def test_triangular_hand_value(self):
        root = schur_sqrt(np.array([[4.0, 6.0], [0.0, 1.0]]))
        np.testing.assert_allclose(root, np.array([[2.0, 2.0], [0.0, 1.0]]), atol=1e-12)

    def test_product_trace_matches_classic(self):
        from uhlfid import fidelity_classic
        from conftest import state_pair

        rho, sigma = state_pair(4, master=9)
        value = trace(schur_sqrt(rho.mat @ sigma.mat)).real ** 2
        assert abs(value - fidelity_classic(rho, sigma).raw_value) <= 1e-8

    def test_agrees_with_psd_sqrt_on_psd(self, rng):
        a = ginibre_psd(rng, 6)
        assert max_abs(schur_sqrt(a) - psd_sqrt(a)) <= 1e-8

    def test_negative_spectrum_rejected(self):
        with pytest.raises(SpectrumError):
            schur_sqrt(np.diag([-1.0, 1.0]))

    def test_complex_spectrum_rejected(self):
        with pytest.raises(SpectrumError):
            schur_sqrt(np.array([[0.0, -1.0], [1.0, 0.0]]))  # eigenvalues +-i

    def test_defective_zero_rejected(self):
        with pytest.raises(SpectrumError):
            schur_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_residual_on_rank_deficient_products(self):
        gen = np.random.Generator(np.random.Philox(key=[7, 1]))
        for n, rank in ((4, 2), (8, 3), (16, 8)):
            g = (gen.standard_normal((n, rank)) + 1j * gen.standard_normal((n, rank)))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            h = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
            sigma = h @ h.conj().T
            sigma /= np.trace(sigma).real
            prod = rho @ sigma
            root = schur_sqrt(prod)
            assert max_abs(root @ root - prod) <= 1e-8 * max(1.0, max_abs(prod))


class TestSingularValues:
    def test_identity(self):
        np.testing.assert_allclose(singular_values(np.eye(3)), [1.0, 1.0, 1.0])

    def test_sign_and_order(self):
        np.testing.assert_allclose(singular_values(np.diag([3.0, -4.0])), [4.0, 3.0])

    def test_sum_matches_trace_of_abs(self, rng):
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        total = float(np.sum(singular_values(a)))
        oracle = trace(psd_sqrt(a @ a.conj().T)).real
        assert abs(total - oracle) <= 1e-9 * max(1.0, abs(oracle))

    def test_psd_singular_values_equal_eigenvalues(self, rng):
        a = ginibre_psd(rng, 6)
        sv = singular_values(a)
        w = herm_eig(a).eigenvalues[::-1]
        np.testing.assert_allclose(sv, w, atol=1e-10)


class TestDrazinPinv:
    def test_diagonal(self):
        np.testing.assert_allclose(drazin_pinv_psd(np.diag([2.0, 0.0])),
                                   np.diag([0.5, 0.0]), atol=1e-14)

    def test_identity(self):
        np.testing.assert_allclose(drazin_pinv_psd(np.eye(4)), np.eye(4), atol=1e-14)

    def test_defining_identities_rank2(self, rng):
        a = ginibre_psd(rng, 4, rank=2)
        d = drazin_pinv_psd(a)
        scale = max(1.0, max_abs(a), max_abs(d))
        assert max_abs(d @ a @ d - d) <= 1e-9 * scale
        assert max_abs(a @ d @ a - a) <= 1e-9 * scale
        assert max_abs(a @ d - d @ a) <= 1e-9 * scale

    def test_product_is_projector(self, rng):
        a = ginibre_psd(rng, 4, rank=2)
        proj = a @ drazin_pinv_psd(a)
        assert max_abs(proj @ proj - proj) <= 1e-9

    def test_zero_matrix(self):
        np.testing.assert_array_equal(drazin_pinv_psd(np.zeros((3, 3))), np.zeros((3, 3)))


class TestConvergenceWrapping:
    def test_linalgerror_becomes_convergence_error(self, monkeypatch):
        def boom(*args, **kwargs):
            raise np.linalg.LinAlgError("did not converge")

        monkeypatch.setattr(np.linalg, "eigvals", boom)
        with pytest.raises(ConvergenceError):
            general_eigenvalues(np.eye(2))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4),
       st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_kron_trace_identity_property(xs, ys):
    a = np.array(xs, dtype=complex).reshape(2, 2)
    b = np.array(ys, dtype=complex).reshape(2, 2)
    lhs = trace(kron(a, b))
    rhs = trace(a) * trace(b)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_herm_eig_reconstructs_property(n, key):
    gen = np.random.Generator(np.random.Philox(key=[key, 0]))
    a = random_hermitian(gen, n)
    res = herm_eig(a)
    recon = (res.eigenvectors * res.eigenvalues) @ res.eigenvectors.conj().T
    assert max_abs(recon - a) <= 1e-10 * n * max(1.0, max_abs(a))
