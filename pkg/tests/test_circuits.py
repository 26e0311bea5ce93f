import math

import numpy as np
import pytest

from belldiag.circuits import (
    BadEncoderError,
    CanonicalParams,
    Circuit,
    CompactParams,
    bell_basis_change,
    build_four_qubit,
    build_four_qubit_ancilla,
    build_g_canonical,
    build_g_compact,
    build_preparation,
    build_two_qubit,
    build_werner_circuit,
    canonical_amplitudes,
    cnot_equivalents,
    compact_amplitudes,
    op_unitary,
    solve_canonical_params,
    solve_compact_params,
    statevector,
)
from belldiag.linalg import partial_trace
from belldiag.measures import fidelity
from belldiag.simulator import evolve, principal_density
from belldiag.states import bds_density, bell_state, t_to_probs, werner_density


def simplex_points(n, seed):
    return np.random.default_rng(seed).dirichlet([1, 1, 1, 1], size=n)


class TestCompactEncoder:
    def test_zero_angles_give_00(self):
        amps = statevector(build_g_compact(CompactParams(0, 0, 0)))
        assert np.allclose(amps, [1, 0, 0, 0])

    def test_alpha_zero_is_product(self):
        beta, gamma = 0.9, -0.4
        amps = statevector(build_g_compact(CompactParams(0, beta, gamma)))
        cb, sb = math.cos(beta / 2), math.sin(beta / 2)
        cg, sg = math.cos(gamma / 2), math.sin(gamma / 2)
        assert np.allclose(amps, [cb * cg, cb * sg, sb * cg, sb * sg], atol=1e-12)

    def test_alpha_half_pi_entangles(self):
        amps = statevector(build_g_compact(CompactParams(math.pi / 2, 0, 0)))
        assert np.allclose(amps, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-12)

    def test_closed_form_matches_circuit(self, rng):
        for _ in range(100):
            params = CompactParams(*rng.uniform(-math.pi, math.pi, 3))
            assert np.allclose(
                statevector(build_g_compact(params)), compact_amplitudes(params), atol=1e-12
            )

    def test_determinant_identity(self, rng):
        # a00 a11 - a01 a10 = sin(alpha) / 2 for the circuit's amplitudes
        for _ in range(100):
            params = CompactParams(*rng.uniform(-math.pi, math.pi, 3))
            a = statevector(build_g_compact(params)).real
            det = a[0] * a[3] - a[1] * a[2]
            assert det == pytest.approx(math.sin(params.alpha) / 2, abs=1e-12)


class TestCanonicalEncoder:
    def test_psi_zero_gives_00(self):
        amps = statevector(build_g_canonical(CanonicalParams(0, 0.7, 1.1)))
        assert abs(amps[0]) == pytest.approx(1.0, abs=1e-12)

    def test_psi_half_pi_theta_zero_gives_01(self):
        amps = statevector(build_g_canonical(CanonicalParams(math.pi / 2, 0, 0.3)))
        assert abs(amps[0b01]) == pytest.approx(1.0, abs=1e-12)

    def test_all_half_pi_phi_zero_gives_11(self):
        amps = statevector(build_g_canonical(CanonicalParams(math.pi / 2, math.pi / 2, 0)))
        assert abs(amps[0b11]) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_matches_circuit(self, rng):
        for _ in range(100):
            params = CanonicalParams(*rng.uniform(0, math.pi / 2, 3))
            assert np.allclose(
                statevector(build_g_canonical(params)), canonical_amplitudes(params), atol=1e-12
            )


class TestCompactSolver:
    def test_pure_00_corner(self):
        assert solve_compact_params([1, 0, 0, 0]) == CompactParams(0, 0, 0)

    def test_singular_branch(self):
        params = solve_compact_params([0.5, 0, 0, 0.5])
        assert params.alpha == pytest.approx(math.pi / 2, abs=1e-12)
        assert params.beta == pytest.approx(0.0, abs=1e-12)
        assert params.gamma == 0.0
        amps = statevector(build_g_compact(params))
        assert np.allclose(amps, np.sqrt([0.5, 0, 0, 0.5]), atol=1e-12)

    def test_random_roundtrip(self):
        for p in simplex_points(50, seed=11):
            amps = statevector(build_g_compact(solve_compact_params(p)))
            assert np.max(np.abs(amps - np.sqrt(p))) < 1e-9

    def test_alpha_branch_and_sign_fixing(self):
        for p in simplex_points(200, seed=12):
            params = solve_compact_params(p)
            assert -math.pi / 2 <= params.alpha <= math.pi / 2
            cb = math.cos(params.beta / 2)
            assert cb >= -1e-12 or math.sin(params.beta / 2) >= -1e-12


class TestCanonicalSolver:
    def test_degenerate_quotients(self):
        assert solve_canonical_params([1, 0, 0, 0]) == CanonicalParams(0, 0, 0)

    def test_uniform_mixture_cosines(self):
        params = solve_canonical_params([0.25] * 4)
        assert math.cos(params.psi) ** 2 == pytest.approx(0.25, abs=1e-12)
        assert math.cos(params.theta) ** 2 == pytest.approx(1 / 3, abs=1e-12)
        assert math.cos(params.phi) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_random_roundtrip(self):
        for p in simplex_points(50, seed=13):
            amps = statevector(build_g_canonical(solve_canonical_params(p)))
            assert np.max(np.abs(amps - np.sqrt(p))) < 1e-9

    def test_angles_in_first_quadrant(self):
        for p in simplex_points(50, seed=14):
            params = solve_canonical_params(p)
            assert all(0 <= a <= math.pi / 2 for a in params)


class TestEncoderEquivalence:
    def test_both_encoders_hit_sqrt_p_on_grid(self, grid_points):
        for p in grid_points:
            compact = statevector(build_g_compact(solve_compact_params(p)))
            canonical = statevector(build_g_canonical(solve_canonical_params(p)))
            assert np.max(np.abs(compact - np.sqrt(p))) < 1e-9
            assert np.max(np.abs(canonical - compact)) < 1e-9


class TestBellBasisChange:
    def test_maps_all_basis_states(self):
        b = bell_basis_change()
        for j in (0, 1):
            for k in (0, 1):
                initial = np.zeros(4)
                initial[2 * j + k] = 1.0
                out = statevector(b, initial=initial)
                assert np.max(np.abs(out - bell_state(j, k))) < 1e-12

    def test_unitary(self):
        b = bell_basis_change()
        u = np.eye(4, dtype=complex)
        for op in b.ops:
            u = op_unitary(op, 2) @ u
        assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


class TestFourQubitTemplate:
    def test_uniform_mixture(self):
        c = build_preparation([0.25] * 4, "four-qubit", "compact")
        assert c.principal == (2, 3)
        rho = principal_density(evolve(c), c.principal)
        assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-9

    def test_pure_corner_by_statevector(self):
        # independent of the branch simulator: pure circuit, exact amplitudes
        c = build_preparation([1, 0, 0, 0], "four-qubit", "compact")
        psi = statevector(c)
        rho = partial_trace(np.outer(psi, psi.conj()), [2, 3], 4)
        b = bell_state(0, 0)
        assert np.max(np.abs(rho - np.outer(b, b.conj()))) < 1e-9

    def test_random_points_oracle(self):
        for p in simplex_points(20, seed=15):
            c = build_preparation(p, "four-qubit", "compact")
            rho = principal_density(evolve(c), c.principal)
            assert fidelity(bds_density(p), rho) == pytest.approx(1.0, abs=1e-9)

    def test_rejects_bad_encoder(self):
        g = Circuit(2, 1)
        g.measure(0, 0)
        with pytest.raises(BadEncoderError):
            build_four_qubit(g)
        with pytest.raises(BadEncoderError):
            build_four_qubit(Circuit(3))


class TestTwoQubitTemplate:
    def test_uniform_mixture(self):
        c = build_preparation([0.25] * 4, "two-qubit", "compact")
        rho = principal_density(evolve(c), c.principal)
        assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-9

    def test_pure_corner(self):
        c = build_preparation([1, 0, 0, 0], "two-qubit", "compact")
        rho = principal_density(evolve(c), c.principal)
        b = bell_state(0, 0)
        assert np.max(np.abs(rho - np.outer(b, b.conj()))) < 1e-9

    def test_matches_four_qubit_template(self):
        for p in simplex_points(20, seed=16):
            two = principal_density(evolve(build_preparation(p, "two-qubit", "compact")), (0, 1))
            four = principal_density(evolve(build_preparation(p, "four-qubit", "compact")), (2, 3))
            assert np.max(np.abs(two - four)) < 1e-9

    def test_rejects_bad_encoder(self):
        g = Circuit(2, 1)
        g.measure(1, 0)
        with pytest.raises(BadEncoderError):
            build_two_qubit(g)


class TestAncillaTemplate:
    def test_uniform_mixture(self):
        c = build_preparation([0.25] * 4, "four-qubit-ancilla", "canonical")
        assert c.principal == (0, 1)
        rho = principal_density(evolve(c), c.principal)
        assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-9

    def test_beta01_corner(self):
        c = build_preparation([0, 1, 0, 0], "four-qubit-ancilla", "compact")
        rho = principal_density(evolve(c), c.principal)
        b = bell_state(0, 1)
        assert np.max(np.abs(rho - np.outer(b, b.conj()))) < 1e-9

    def test_random_points_oracle(self):
        for p in simplex_points(10, seed=17):
            c = build_preparation(p, "four-qubit-ancilla", "compact")
            rho = principal_density(evolve(c), c.principal)
            assert fidelity(bds_density(p), rho) == pytest.approx(1.0, abs=1e-9)


class TestTemplateEquivalence:
    def test_all_three_agree_on_grid(self, grid_points):
        for p in grid_points[::7]:
            outputs = []
            for template in ("four-qubit", "two-qubit", "four-qubit-ancilla"):
                c = build_preparation(p, template, "compact")
                outputs.append(principal_density(evolve(c), c.principal))
            assert np.max(np.abs(outputs[0] - outputs[1])) < 1e-9
            assert np.max(np.abs(outputs[0] - outputs[2])) < 1e-9


class TestWernerCircuit:
    def test_w_zero_maximally_mixed(self):
        rho = principal_density(evolve(build_werner_circuit(0.0)), (0, 1))
        assert np.max(np.abs(rho - np.eye(4) / 4)) < 1e-9

    def test_w_one_pure_bell(self):
        rho = principal_density(evolve(build_werner_circuit(1.0)), (0, 1))
        b = bell_state(1, 1)
        assert np.max(np.abs(rho - np.outer(b, b.conj()))) < 1e-9

    def test_intermediate(self):
        rho = principal_density(evolve(build_werner_circuit(0.5)), (0, 1))
        assert fidelity(werner_density(0.5), rho) == pytest.approx(1.0, abs=1e-9)


class TestTwoParameterEncoderIsInsufficient:
    def test_product_form_cannot_entangle(self):
        # RY on each qubit separately: amplitudes always factor as u_j v_k,
        # so the amplitude determinant vanishes; sqrt of (1/2,0,0,1/2)
        # needs determinant 1/2.
        target = np.sqrt([0.5, 0, 0, 0.5])
        target_det = target[0] * target[3] - target[1] * target[2]
        assert target_det == pytest.approx(0.5)
        for theta in np.linspace(0, 2 * math.pi, 25):
            for alpha in np.linspace(0, 2 * math.pi, 25):
                g = Circuit(2)
                g.ry(theta, 0)
                g.ry(alpha, 1)
                a = statevector(g).real
                assert abs(a[0] * a[3] - a[1] * a[2]) < 1e-12


class TestCircuitInfrastructure:
    def test_json_roundtrip(self):
        c = build_werner_circuit(0.3)
        restored = Circuit.loads(c.dumps())
        assert restored == c

    def test_cnot_cost_counts_cry_twice(self):
        compact = build_preparation([0.25] * 4, "two-qubit", "compact")
        canonical = build_preparation([0.25] * 4, "two-qubit", "canonical")
        assert cnot_equivalents(compact) == 2  # encoder CNOT + basis change CNOT
        assert cnot_equivalents(canonical) == 5  # two CRYs at cost 2 + basis change

    def test_statevector_rejects_measurement(self):
        c = Circuit(1, 1)
        c.measure(0, 0)
        with pytest.raises(ValueError):
            statevector(c)

    def test_bad_indices_rejected(self):
        c = Circuit(2, 1)
        with pytest.raises(ValueError):
            c.h(2)
        with pytest.raises(ValueError):
            c.measure(0, 1)
        with pytest.raises(ValueError):
            c.x(0, condition=(1, 1))
