import numpy as np
import pytest

from belldiag.linalg import (
    BadSubsystemError,
    DomainError,
    IDENTITY_2,
    NotHermitianError,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    binary_entropy,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    pauli_expectations,
    state_from_pauli,
    trace_distance,
    von_neumann_entropy_bits,
)
from belldiag.states import bds_density, bell_state, t_to_probs, werner_density
from conftest import random_density


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(IDENTITY_2, IDENTITY_2), np.eye(4))

    def test_diagonal_pauli_product(self):
        assert np.allclose(kron(PAULI_Z, PAULI_Z), np.diag([1, -1, -1, 1]))

    def test_projector_block_structure(self):
        proj0 = np.array([[1, 0], [0, 0]])
        m = kron(proj0, PAULI_X)
        assert np.allclose(m[:2, :2], PAULI_X)
        assert np.allclose(m[2:, :], 0)
        assert np.allclose(m[:, 2:], 0)


class TestHermitianEig:
    def test_diagonal_input(self):
        w, _ = hermitian_eig(np.diag([0.5, 0.5, 0.0, 0.0]))
        assert np.allclose(w, [0.5, 0.5, 0.0, 0.0])

    def test_pure_bell_state_rank_one(self):
        b = bell_state(0, 0)
        w, _ = hermitian_eig(np.outer(b, b.conj()))
        assert np.allclose(w, [1, 0, 0, 0], atol=1e-12)

    def test_werner_half(self):
        # weights of t = (-1/2, -1/2, -1/2): three at 1/8, one at 5/8
        w, _ = hermitian_eig(werner_density(0.5))
        assert np.allclose(w, [0.625, 0.125, 0.125, 0.125], atol=1e-12)

    def test_reconstruction_and_orthonormality(self, rng):
        for _ in range(20):
            g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            m = (g + g.conj().T) / 2
            w, v = hermitian_eig(m)
            assert np.all(np.diff(w) <= 1e-12)
            assert np.max(np.abs((v * w) @ v.conj().T - m)) <= 1e-9
            assert np.max(np.abs(v.conj().T @ v - np.eye(8))) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestPartialTrace:
    def test_bell_marginal_is_maximally_mixed(self):
        b = bell_state(0, 0)
        assert np.allclose(partial_trace(np.outer(b, b.conj()), [0]), IDENTITY_2 / 2)

    def test_product_state(self, rng):
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 2)
        assert np.allclose(partial_trace(kron(rho_a, rho_b), [0]), rho_a, atol=1e-12)
        assert np.allclose(partial_trace(kron(rho_a, rho_b), [1]), rho_b, atol=1e-12)

    def test_four_qubit_purification_of_uniform_mixture(self):
        # |tau> = sum_jk sqrt(p_jk) |jk> x |beta_jk> traced over the first pair
        basis = np.eye(4)
        tau = np.zeros(16, dtype=complex)
        for idx, (j, k) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            tau += 0.5 * np.kron(basis[2 * j + k], bell_state(j, k))
        reduced = partial_trace(np.outer(tau, tau.conj()), [2, 3])
        assert np.allclose(reduced, np.eye(4) / 4, atol=1e-12)

    def test_trace_preserving_and_psd(self, rng):
        for _ in range(10):
            rho = random_density(rng, 8)
            for keep in ([0], [1, 2], [0, 2]):
                red = partial_trace(rho, keep, 3)
                assert abs(np.trace(red).real - 1.0) < 1e-12
                assert np.linalg.eigvalsh(red).min() > -1e-12

    def test_invalid_subsystems(self):
        rho = np.eye(4) / 4
        with pytest.raises(BadSubsystemError):
            partial_trace(rho, [])
        with pytest.raises(BadSubsystemError):
            partial_trace(rho, [0, 1])
        with pytest.raises(BadSubsystemError):
            partial_trace(rho, [5])


class TestPartialTranspose:
    def test_flips_second_correlation_sign(self, rng):
        for _ in range(10):
            t = rng.uniform(-1, 1, 3) * 0.4
            pt = partial_transpose(bds_density(t_to_probs(t)), 1)
            expected = bds_density(t_to_probs([t[0], -t[1], t[2]]))
            assert np.max(np.abs(pt - expected)) < 1e-12

    def test_product_state_stays_psd(self, rng):
        rho = kron(random_density(rng, 2), random_density(rng, 2))
        assert np.linalg.eigvalsh(partial_transpose(rho, 1)).min() >= -1e-12

    def test_werner_one_min_eigenvalue(self):
        # partial transpose eigenvalue (1 - 3w)/4 at w = 1
        w = np.linalg.eigvalsh(partial_transpose(werner_density(1.0), 1))
        assert abs(w.min() + 0.5) < 1e-12

    def test_involution(self, rng):
        rho = random_density(rng, 4)
        for sub in (0, 1):
            assert np.allclose(partial_transpose(partial_transpose(rho, sub), sub), rho)


class TestMatrixSqrt:
    def test_identity(self):
        assert np.allclose(matrix_sqrt_psd(np.eye(4)), np.eye(4))

    def test_diagonal(self):
        assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 1.0, 0.0, 0.0])), np.diag([2.0, 1.0, 0.0, 0.0]))

    def test_quarter_identity(self):
        assert np.allclose(matrix_sqrt_psd(np.eye(4) / 4), np.eye(4) / 2)

    def test_square_reconstructs(self, rng):
        for _ in range(10):
            rho = random_density(rng, 4)
            s = matrix_sqrt_psd(rho)
            assert np.max(np.abs(s @ s - rho)) <= 1e-8

    def test_rejects_significantly_negative(self):
        with pytest.raises(ValueError):
            matrix_sqrt_psd(np.diag([1.0, -0.1]))


class TestEntropy:
    def test_pure_state(self):
        b = bell_state(1, 1)
        assert von_neumann_entropy_bits(np.outer(b, b.conj())) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert von_neumann_entropy_bits(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)

    def test_bds_marginals_are_one_bit(self, grid_points):
        for p in grid_points[::29]:
            rho_a = partial_trace(bds_density(p), [0])
            assert von_neumann_entropy_bits(rho_a) == pytest.approx(1.0, abs=1e-10)

    def test_unitary_invariance(self, rng):
        rho = random_density(rng, 4)
        herm = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        _, u = hermitian_eig(herm + herm.conj().T)
        rotated = u @ rho @ u.conj().T
        assert von_neumann_entropy_bits(rotated) == pytest.approx(
            von_neumann_entropy_bits(rho), abs=1e-10
        )


class TestBinaryEntropy:
    def test_half(self):
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_quarter(self):
        assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-12)

    def test_symmetry(self, rng):
        for x in rng.uniform(0, 1, 20):
            assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            binary_entropy(1.5)
        with pytest.raises(DomainError):
            binary_entropy(-0.1)


class TestBlochDecomposition:
    def test_roundtrip(self, rng):
        for _ in range(10):
            rho = random_density(rng, 4)
            r, s, t = pauli_expectations(rho)
            assert np.max(np.abs(state_from_pauli(r, s, t) - rho)) <= 1e-10

    def test_bds_components(self):
        r, s, t = pauli_expectations(bds_density(t_to_probs([0.2, -0.3, 0.4])))
        assert np.max(np.abs(r)) < 1e-12
        assert np.max(np.abs(s)) < 1e-12
        assert np.allclose(np.diag(t), [0.2, -0.3, 0.4], atol=1e-12)
        assert np.max(np.abs(t - np.diag(np.diag(t)))) < 1e-12


def test_trace_distance():
    b = bell_state(0, 0)
    rho = np.outer(b, b.conj())
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert trace_distance(rho, np.eye(4) / 4) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(NotHermitianError):
        trace_distance(np.array([[0, 1], [0, 0]]), np.zeros((2, 2)))
