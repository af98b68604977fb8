import numpy as np
import pytest

from circleclone.cloner import clone, coefficients, reduced_clones
from circleclone.linalg import is_psd
from circleclone.nosignalling import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    FeasibilityReport,
    bound_rhs,
    build_joint_output,
    constrain_tensor,
    covariance_residual,
    feasibility,
    free_parameters,
    machine_witness_tensor,
    max_radius,
    no_signalling_residual,
    positivity_matrix_up,
    rotate_correlations,
)
from circleclone.pauli import great_circle_bloch, pauli_decompose

RNG = np.random.default_rng(42)

SYMMETRIC_ETA = 2**-0.5


def random_constrained(rng):
    return constrain_tensor(rng.uniform(-1, 1, 7))


# Closed-form quarter-, half- and three-quarter-turn actions on the
# correlation tensor, written independently of rotate_correlations.  The
# half-turn is also cross-checked below as two composed quarter turns.
def quarter_turn(t):
    return np.array([
        [t[2, 2], t[2, 1], -t[2, 0]],
        [t[1, 2], t[1, 1], -t[1, 0]],
        [-t[0, 2], -t[0, 1], t[0, 0]],
    ])


def half_turn(t):
    return np.array([
        [t[0, 0], -t[0, 1], t[0, 2]],
        [-t[1, 0], t[1, 1], -t[1, 2]],
        [t[2, 0], -t[2, 1], t[2, 2]],
    ])


def three_quarter_turn(t):
    return np.array([
        [t[2, 2], -t[2, 1], -t[2, 0]],
        [-t[1, 2], t[1, 1], t[1, 0]],
        [-t[0, 2], t[0, 1], t[0, 0]],
    ])


class TestConstrainTensor:
    def test_zeros(self):
        assert np.array_equal(constrain_tensor(np.zeros(7)), np.zeros((3, 3)))

    def test_diagonal_propagation(self):
        t = constrain_tensor([0.5, 0, 0, 0, 0, 0, 0])
        assert t[0, 0] == 0.5
        assert t[2, 2] == 0.5

    def test_antisymmetric_propagation(self):
        t = constrain_tensor([0, 0.2, 0, 0, 0, 0, 0])
        assert t[0, 2] == 0.2
        assert t[2, 0] == -0.2

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            constrain_tensor([1.5, 0, 0, 0, 0, 0, 0])

    def test_round_trip_with_free_parameters(self):
        free = RNG.uniform(-1, 1, 7)
        assert np.allclose(free_parameters(constrain_tensor(free)), free, atol=1e-15)


class TestBuildJointOutput:
    def test_isotropic_point(self):
        rho = build_joint_output(UP, (0, 0), np.zeros((3, 3)))
        assert np.allclose(rho, np.eye(4) / 4, atol=1e-15)

    def test_decomposition_round_trip(self):
        t = np.diag([1.0, 1.0, 1.0])
        dec = pauli_decompose(build_joint_output(UP, (1, 1), t))
        assert np.allclose(dec.a, [0, 0, 1], atol=1e-14)
        assert np.allclose(dec.b, [0, 0, 1], atol=1e-14)
        assert np.allclose(dec.t, t, atol=1e-14)

    def test_decomposition_round_trip_generic(self):
        m = great_circle_bloch(RNG.uniform(0, 2 * np.pi))
        etas = RNG.uniform(0, 1, 2)
        t = random_constrained(RNG)
        dec = pauli_decompose(build_joint_output(m, etas, t))
        assert np.allclose(dec.a, etas[0] * m, atol=1e-14)
        assert np.allclose(dec.b, etas[1] * m, atol=1e-14)
        assert np.allclose(dec.t, t, atol=1e-14)

    def test_machine_tensor_is_positive(self):
        etas = (SYMMETRIC_ETA, SYMMETRIC_ETA)
        rho_ob = reduced_clones(clone(0.0, coefficients(etas)))[2]
        t = pauli_decompose(rho_ob).t
        rebuilt = build_joint_output(UP, etas, t)
        assert np.max(np.abs(rebuilt - rho_ob)) < 1e-12
        psd, lam = is_psd(rebuilt, tol=1e-10)
        assert psd
        assert lam >= -1e-10

    def test_off_circle_rejected(self):
        with pytest.raises(ValueError, match="off great circle"):
            build_joint_output([0, 1, 0], (0.5, 0.5), np.zeros((3, 3)))


class TestRotateCorrelations:
    def test_zero_angle_identity(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert np.array_equal(rotate_correlations(t, 0.0), t)

    def test_quarter_turn_relations(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert np.allclose(rotate_correlations(t, np.pi / 2), quarter_turn(t), atol=1e-15)

    def test_half_turn_relations(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert np.allclose(rotate_correlations(t, np.pi), half_turn(t), atol=1e-15)

    def test_three_quarter_turn_relations(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert np.allclose(rotate_correlations(t, 3 * np.pi / 2), three_quarter_turn(t), atol=1e-15)

    def test_half_turn_is_two_quarter_turns(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert np.allclose(quarter_turn(quarter_turn(t)), half_turn(t), atol=1e-15)
        assert np.allclose(quarter_turn(half_turn(t)), three_quarter_turn(t), atol=1e-15)

    def test_group_action(self):
        for _ in range(100):
            t = RNG.uniform(-1, 1, (3, 3))
            b1, b2 = RNG.uniform(0, 2 * np.pi, 2)
            two_step = rotate_correlations(rotate_correlations(t, b1), b2)
            assert np.max(np.abs(two_step - rotate_correlations(t, b1 + b2))) < 1e-12


class TestCovarianceResidual:
    def test_random_point(self):
        t = RNG.uniform(-1, 1, (3, 3))
        assert covariance_residual(UP, (0.3, 0.4), t, 0.7) <= 1e-12

    def test_isotropic_state(self):
        for beta in RNG.uniform(0, 2 * np.pi, 5):
            assert covariance_residual(UP, (0, 0), np.zeros((3, 3)), beta) <= 1e-15

    def test_cardinal_point(self):
        assert covariance_residual(RIGHT, (1, 0), np.zeros((3, 3)), np.pi) <= 1e-12

    def test_many_random(self):
        for _ in range(100):
            m = great_circle_bloch(RNG.uniform(0, 2 * np.pi))
            etas = RNG.uniform(0, 1, 2)
            t = RNG.uniform(-1, 1, (3, 3))
            beta = RNG.uniform(0, 2 * np.pi)
            assert covariance_residual(m, etas, t, beta) <= 1e-12


class TestNoSignallingResidual:
    def test_zero_tensor(self):
        assert no_signalling_residual((0.3, 0.9), np.zeros((3, 3))) <= 1e-15

    def test_constrained_tensor(self):
        t = np.array([
            [0.3, 0.4, 0.1],
            [-0.2, 0.7, 0.25],
            [-0.1, -0.6, 0.3],
        ])
        assert no_signalling_residual((0.5, 0.5), t) <= 1e-12

    def test_violation_is_reported(self):
        t = np.zeros((3, 3))
        t[0, 0] = 1.0  # t_xx != t_zz
        residual = no_signalling_residual((0.2, 0.2), t)
        assert residual == pytest.approx(0.5, abs=1e-12)

    def test_zero_iff_constraints(self):
        for _ in range(50):
            t = RNG.uniform(-1, 1, (3, 3))
            residual = no_signalling_residual(RNG.uniform(0, 1, 2), t)
            constrained = abs(t[0, 0] - t[2, 2]) < 1e-13 and abs(t[0, 2] + t[2, 0]) < 1e-13
            assert (residual <= 1e-12) == constrained


class TestPositivityMatrixUp:
    def test_isotropic_point(self):
        assert np.allclose(positivity_matrix_up((0, 0), np.zeros((3, 3))), np.eye(4) / 4, atol=1e-15)

    def test_entrywise_evaluation(self):
        eta = SYMMETRIC_ETA
        t = constrain_tensor([0.5, 0, 0, 0, 0, 0, 0])
        expected = 0.25 * np.array([
            [1 + 2 * eta + 0.5, 0, 0, 0.5],
            [0, 1 - 0.5, 0.5, 0],
            [0, 0.5, 1 - 0.5, 0],
            [0.5, 0, 0, 1 - 2 * eta + 0.5],
        ], dtype=complex)
        assert np.max(np.abs(positivity_matrix_up((eta, eta), t) - expected)) < 1e-15
        assert np.max(np.abs(positivity_matrix_up((eta, eta), t)
                             - build_joint_output(UP, (eta, eta), t))) < 1e-14

    def test_matches_pauli_route(self):
        for _ in range(100):
            etas = RNG.uniform(0, 1, 2)
            t = random_constrained(RNG)
            gap = np.max(np.abs(positivity_matrix_up(etas, t) - build_joint_output(UP, etas, t)))
            assert gap < 1e-14

    def test_rejects_unconstrained(self):
        t = np.zeros((3, 3))
        t[0, 0] = 0.5  # t_zz left at 0
        with pytest.raises(ValueError, match="no-signalling"):
            positivity_matrix_up((0.1, 0.1), t)


class TestBoundRhs:
    def test_zero_tensor(self):
        assert bound_rhs(np.zeros((3, 3))) == 1.0

    def test_full_yy(self):
        t = np.zeros((3, 3))
        t[1, 1] = 1.0
        assert bound_rhs(t) == 0.0

    def test_mixed_entries(self):
        t = np.zeros((3, 3))
        t[0, 1] = 0.5
        t[1, 0] = 0.5
        assert bound_rhs(t) == 0.5

    def test_ignores_constrained_entries(self):
        t = constrain_tensor([0.9, 0.7, 0, 0, 0, 0, 0])
        assert bound_rhs(t) == 1.0


class TestBoundSoundness:
    def test_positive_outputs_respect_bound(self):
        count = 0
        while count < 60:
            radius = RNG.uniform(0, 1)
            phi = RNG.uniform(0, np.pi / 2)
            etas = (radius * np.cos(phi), radius * np.sin(phi))
            free = free_parameters(machine_witness_tensor(etas))
            free = np.clip(free + RNG.uniform(-0.15, 0.15, 7), -1, 1)
            t = constrain_tensor(free)
            if not is_psd(positivity_matrix_up(etas, t), tol=1e-10)[0]:
                continue
            count += 1
            assert etas[0] ** 2 + etas[1] ** 2 <= bound_rhs(t) + 1e-8


class TestMachineWitness:
    def test_on_circle_value(self):
        t = machine_witness_tensor((0.6, 0.8))
        assert np.allclose(t, np.diag([0.48, 0, 0.48]), atol=1e-12)

    def test_interior_certificate(self):
        for _ in range(20):
            radius = RNG.uniform(0, 1)
            phi = RNG.uniform(0, np.pi / 2)
            etas = (radius * np.cos(phi), radius * np.sin(phi))
            t = machine_witness_tensor(etas)
            psd, lam = is_psd(positivity_matrix_up(etas, t), tol=1e-10)
            assert psd, f"witness not PSD at {etas}: {lam}"

    def test_outside_disk_rejected(self):
        with pytest.raises(ValueError, match="unit disk"):
            machine_witness_tensor((0.9, 0.9))


class TestFeasibility:
    def test_origin_short_circuit(self):
        report = feasibility((0, 0))
        assert report.feasible
        assert report.best_min_eigenvalue == pytest.approx(0.25, abs=1e-12)
        assert report.evaluations == 1

    def test_symmetric_boundary_point(self):
        report = feasibility((SYMMETRIC_ETA, SYMMETRIC_ETA), rng=0)
        assert report.feasible
        assert report.best_min_eigenvalue >= -1e-9

    def test_beyond_circle_infeasible(self):
        report = feasibility((0.8, 0.8), budget=800, rng=0)
        assert not report.feasible
        assert report.best_min_eigenvalue < -1e-4
        # reported witness always satisfies the no-signalling equalities exactly
        assert report.witness[0, 0] == report.witness[2, 2]
        assert report.witness[0, 2] == -report.witness[2, 0]

    def test_report_consistency(self):
        report = feasibility((0.4, 0.7), budget=500, psd_tol=1e-9, rng=1)
        assert isinstance(report, FeasibilityReport)
        assert report.feasible == (report.best_min_eigenvalue >= -1e-9)
        assert report.evaluations <= 500 + 21  # simplex polls may finish a step past the cap


class TestMaxRadius:
    def test_axis_directions(self):
        assert max_radius(0.0, rng=0) == pytest.approx(1.0, abs=1e-12)
        assert max_radius(np.pi / 2, rng=0) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_direction(self):
        found = max_radius(np.pi / 4, budget=800, rng=0)
        assert abs(found - 1.0) <= 2e-3

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            max_radius(-0.1)
        with pytest.raises(ValueError):
            max_radius(2.0)
