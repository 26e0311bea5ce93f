import numpy as np
import pytest

from belldiag.linalg import DomainError, partial_trace, partial_transpose, state_from_pauli
from belldiag.states import (
    OutsideTetrahedronError,
    bds_density,
    bell_state,
    check_probabilities,
    is_separable_bds,
    probs_to_t,
    t_to_probs,
    tetrahedron_grid,
    werner_density,
    werner_line,
)

SQ2 = np.sqrt(2)


class TestBellStates:
    def test_amplitudes(self):
        assert np.allclose(bell_state(0, 0), [1 / SQ2, 0, 0, 1 / SQ2])
        assert np.allclose(bell_state(1, 0), [1 / SQ2, 0, 0, -1 / SQ2])
        assert np.allclose(bell_state(0, 1), [0, 1 / SQ2, 1 / SQ2, 0])
        assert np.allclose(bell_state(1, 1), [0, 1 / SQ2, -1 / SQ2, 0])

    def test_orthonormal(self):
        kets = [bell_state(j, k) for j in (0, 1) for k in (0, 1)]
        gram = np.array([[np.vdot(a, b) for b in kets] for a in kets])
        assert np.allclose(gram, np.eye(4), atol=1e-12)

    def test_rejects_non_bits(self):
        with pytest.raises(DomainError):
            bell_state(2, 0)


class TestCoordinateMaps:
    def test_corner_correspondence(self):
        assert np.allclose(probs_to_t([1, 0, 0, 0]), [1, -1, 1])
        assert np.allclose(probs_to_t([0, 1, 0, 0]), [1, 1, -1])
        assert np.allclose(probs_to_t([0, 0, 1, 0]), [-1, 1, 1])
        assert np.allclose(probs_to_t([0, 0, 0, 1]), [-1, -1, -1])

    def test_uniform_mixture_is_origin(self):
        assert np.allclose(probs_to_t([0.25] * 4), [0, 0, 0])

    def test_t_to_probs_examples(self):
        assert np.allclose(t_to_probs([0, 0, 0]), [0.25] * 4)
        assert np.allclose(t_to_probs([-1, -1, -1]), [0, 0, 0, 1])
        assert np.allclose(t_to_probs([-0.5, -0.5, -0.5]), [0.125, 0.125, 0.125, 0.625])

    def test_roundtrip_is_exact(self, grid_points):
        # linear maps: no error beyond machine epsilon
        for p in grid_points:
            assert np.max(np.abs(t_to_probs(probs_to_t(p)) - p)) <= np.finfo(float).eps

    def test_outside_tetrahedron_raises(self):
        with pytest.raises(OutsideTetrahedronError):
            t_to_probs([1, 1, 1])

    def test_probability_validation(self):
        with pytest.raises(ValueError):
            check_probabilities([0.5, 0.5, 0.5, 0.5])
        with pytest.raises(DomainError):
            check_probabilities([1.5, -0.5, 0, 0])


class TestBdsDensity:
    def test_pure_corner(self):
        b = bell_state(0, 0)
        assert np.allclose(bds_density([1, 0, 0, 0]), np.outer(b, b.conj()))

    def test_uniform_is_maximally_mixed(self):
        assert np.allclose(bds_density([0.25] * 4), np.eye(4) / 4)

    def test_matches_pauli_form(self, grid_points):
        for p in grid_points[::17]:
            t = probs_to_t(p)
            pauli_form = state_from_pauli(np.zeros(3), np.zeros(3), np.diag(t))
            assert np.max(np.abs(bds_density(p) - pauli_form)) <= 1e-12

    def test_eigenvalues_are_the_weights(self, grid_points):
        for p in grid_points[::13]:
            evals = np.sort(np.linalg.eigvalsh(bds_density(p)))
            assert np.allclose(evals, np.sort(p), atol=1e-10)

    def test_marginals_maximally_mixed(self, grid_points):
        for p in grid_points[::23]:
            rho = bds_density(p)
            assert np.max(np.abs(partial_trace(rho, [0]) - np.eye(2) / 2)) <= 1e-10
            assert np.max(np.abs(partial_trace(rho, [1]) - np.eye(2) / 2)) <= 1e-10


class TestWerner:
    def test_endpoints(self):
        assert np.allclose(werner_density(0.0), np.eye(4) / 4)
        b = bell_state(1, 1)
        assert np.allclose(werner_density(1.0), np.outer(b, b.conj()))

    def test_computational_basis_matrix(self):
        w = 0.7
        expected = np.array(
            [
                [1 - w, 0, 0, 0],
                [0, 1 + w, -2 * w, 0],
                [0, -2 * w, 1 + w, 0],
                [0, 0, 0, 1 - w],
            ]
        ) / 4
        assert np.max(np.abs(werner_density(w) - expected)) <= 1e-12

    def test_matches_bds_parameterization(self):
        for w in np.linspace(0, 1, 7):
            assert np.allclose(werner_density(w), bds_density(t_to_probs([-w, -w, -w])))

    def test_separability_threshold(self):
        # PPT eigenvalue hits zero exactly at w = 1/3
        pt = partial_transpose(werner_density(1 / 3), 1)
        assert abs(np.linalg.eigvalsh(pt).min()) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            werner_density(1.2)


class TestSeparability:
    def test_examples(self):
        assert is_separable_bds([0, 0, 0])
        assert not is_separable_bds([1, -1, 1])
        assert not is_separable_bds([-0.4, -0.4, -0.4])

    def test_agrees_with_ppt_on_grid(self, grid_points):
        for p in grid_points:
            t = probs_to_t(p)
            ppt_min = np.linalg.eigvalsh(partial_transpose(bds_density(p), 1)).min()
            assert is_separable_bds(t) == (ppt_min >= -1e-9)

    def test_outside_raises(self):
        with pytest.raises(OutsideTetrahedronError):
            is_separable_bds([0.9, 0.9, 0.9])


class TestGrids:
    def test_lattice_size_and_validity(self, grid_points):
        assert len(grid_points) == 364
        assert np.allclose(grid_points.sum(axis=1), 1.0)
        assert grid_points.min() >= 0.0

    def test_contains_corners(self, grid_points):
        for corner in np.eye(4):
            assert any(np.array_equal(p, corner) for p in grid_points)

    def test_deterministic_order(self):
        assert np.array_equal(tetrahedron_grid(5), tetrahedron_grid(5))

    def test_werner_line(self):
        line = werner_line(100)
        assert len(line) == 100
        assert line[0] == 0.0 and line[-1] == 1.0
        assert np.allclose(np.diff(line), 1 / 99)
