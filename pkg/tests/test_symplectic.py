import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacent import symplectic as sc
from vacent.scenarios import InertialSpec, evolve_schedule, inertial_layout, schedule_for


def rotation(theta):
    return np.array([[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]])


def test_symplectic_form_single_mode():
    np.testing.assert_array_equal(sc.symplectic_form(1), [[0, 1], [-1, 0]])


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_symplectic_form_squares_to_minus_identity(n):
    J = sc.symplectic_form(n)
    np.testing.assert_array_equal(J @ J, -np.eye(2 * n))


def test_symplectic_form_three_modes_is_block_diagonal():
    J = sc.symplectic_form(3)
    blk = np.array([[0, 1], [-1, 0]])
    for i in range(3):
        for j in range(3):
            want = blk if i == j else np.zeros((2, 2))
            np.testing.assert_array_equal(J[2 * i : 2 * i + 2, 2 * j : 2 * j + 2], want)


def test_symplectic_form_rejects_zero_modes():
    with pytest.raises(ValueError):
        sc.symplectic_form(0)


class TestLayout:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            sc.SystemLayout((1.0, 1.0), (1.0,), (0.0, 0.0), [[0.1, 0.2]])

    def test_positive_frequencies(self):
        with pytest.raises(ValueError):
            sc.SystemLayout((0.0,), (1.0,), (0.0,), [[0.1]])

    def test_positions_per_detector(self):
        with pytest.raises(ValueError):
            sc.SystemLayout((1.0,), (1.0,), (0.0, 1.0), [[0.1]])


class TestBuildHamiltonian:
    def test_free_hamiltonian_is_diagonal(self):
        layout = sc.SystemLayout((1.5, 2.5), (3.0,), (0.3, -0.2), [[0.7], [0.4]])
        H = sc.build_hamiltonian(layout, [])
        np.testing.assert_array_equal(H.W, np.diag([1.5, 1.5, 2.5, 2.5, 3.0, 3.0]))

    def test_single_detector_at_origin(self):
        layout = sc.SystemLayout.resonant(2.0, (0.0,), [[0.3]])
        W = sc.build_hamiltonian(layout, [0]).W
        assert W[0, 2] == pytest.approx(0.6)
        assert W[0, 3] == 0.0

    def test_quarter_wave_position(self):
        omega, lam = 2.0, 0.3
        layout = sc.SystemLayout.resonant(omega, (math.pi / (2 * omega),), [[lam]])
        W = sc.build_hamiltonian(layout, [0]).W
        assert W[0, 2] == pytest.approx(0.0, abs=1e-15)
        assert W[0, 3] == pytest.approx(-2 * lam)

    def test_exactly_symmetric(self):
        layout = sc.SystemLayout((1.1, 0.7), (2.3, 0.9), (0.37, -1.4), [[0.3, 0.2], [0.5, 0.1]])
        W = sc.build_hamiltonian(layout, [0, 1]).W
        assert np.array_equal(W, W.T)

    def test_inactive_detector_contributes_only_free_terms(self):
        layout = sc.SystemLayout.resonant(2.0, (0.1, 0.5), [[0.3], [0.4]])
        W = sc.build_hamiltonian(layout, [1]).W
        assert not W[0:2, 4:6].any()
        assert W[2:4, 4:6].any()

    def test_rejects_unknown_detector(self):
        layout = sc.SystemLayout.resonant(2.0, (0.0,), [[0.3]])
        with pytest.raises(ValueError):
            sc.build_hamiltonian(layout, [1])

    def test_quadratic_form_matches_hamiltonian(self):
        # independent evaluation of the quadrature-form Hamiltonian on
        # classical phase-space points
        rng = np.random.default_rng(3)
        w = (1.1, 0.7)
        W_f = (2.3, 0.9)
        x = (0.37, -1.4)
        lam = np.array([[0.3, 0.2], [0.5, 0.1]])
        layout = sc.SystemLayout(w, W_f, x, lam)
        W = sc.build_hamiltonian(layout, [0, 1]).W
        for _ in range(5):
            X = rng.normal(size=8)
            q, p, Q, P = X[0:4:2], X[1:4:2], X[4::2], X[5::2]
            energy = sum(w[i] / 2 * (q[i] ** 2 + p[i] ** 2) for i in range(2))
            energy += sum(W_f[j] / 2 * (Q[j] ** 2 + P[j] ** 2) for j in range(2))
            energy += sum(
                2 * lam[i, j] * q[i] * (Q[j] * math.cos(W_f[j] * x[i]) - P[j] * math.sin(W_f[j] * x[i]))
                for i in range(2)
                for j in range(2)
            )
            assert 0.5 * X @ W @ X == pytest.approx(energy, rel=1e-13)

    def test_stability(self):
        layout = sc.SystemLayout.resonant(2.0, (0.0,), [[0.9]])
        assert sc.build_hamiltonian(layout, [0]).is_stable
        layout = sc.SystemLayout.resonant(2.0, (0.0,), [[1.1]])
        assert not sc.build_hamiltonian(layout, [0]).is_stable


class TestMatrixExp:
    def test_zero(self):
        np.testing.assert_array_equal(sc.matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_nilpotent(self):
        np.testing.assert_allclose(sc.matrix_exp([[0.0, 1.0], [0.0, 0.0]]), [[1, 1], [0, 1]], atol=1e-15)

    def test_diagonal(self):
        a, b = 0.3, -1.7
        np.testing.assert_allclose(
            sc.matrix_exp(np.diag([a, b])), np.diag([math.exp(a), math.exp(b)]), rtol=1e-14
        )

    def test_rotation_generator(self):
        theta = 0.83
        np.testing.assert_allclose(
            sc.matrix_exp(theta * np.array([[0.0, 1.0], [-1.0, 0.0]])), rotation(theta), atol=1e-15
        )

    def test_non_finite_input(self):
        with pytest.raises(sc.NumericalError):
            sc.matrix_exp([[np.nan, 0.0], [0.0, 1.0]])

    def test_overflow(self):
        with pytest.raises(sc.NumericalError):
            sc.matrix_exp(np.diag([800.0, 1.0]))


class TestEvolveSegment:
    def free(self, omega):
        layout = sc.SystemLayout((omega,), (omega,), (0.0,), [[0.0]])
        return sc.build_hamiltonian(layout)

    def test_zero_duration(self):
        np.testing.assert_array_equal(sc.evolve_segment(self.free(1.3), 0.0).S, np.eye(4))

    def test_full_period(self):
        omega = 1.7
        S = sc.evolve_segment(self.free(omega), 2 * math.pi / omega).S
        np.testing.assert_allclose(S, np.eye(4), atol=1e-14)

    def test_quarter_period(self):
        omega = 1.7
        S = sc.evolve_segment(self.free(omega), math.pi / (2 * omega)).S
        np.testing.assert_allclose(S[:2, :2], [[0, 1], [-1, 0]], atol=1e-15)

    def test_heisenberg_direction(self):
        omega, t = 0.9, 0.4
        S = sc.evolve_segment(self.free(omega), t).S
        np.testing.assert_allclose(S[:2, :2], rotation(omega * t), atol=1e-15)

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            sc.evolve_segment(self.free(1.0), -0.1)

    def test_unstable_flag(self):
        layout = sc.SystemLayout.resonant(2.0, (0.0,), [[4.8]])
        assert not sc.evolve_segment(sc.build_hamiltonian(layout, [0]), 1.0).stable
        assert sc.evolve_segment(sc.build_hamiltonian(layout, []), 1.0).stable


class TestCompose:
    def test_identity(self):
        layout = sc.SystemLayout.resonant(2.0, (0.2,), [[0.4]])
        S = sc.evolve_segment(sc.build_hamiltonian(layout, [0]), 0.7)
        assert np.array_equal(sc.compose(sc.SymplecticTransform.identity(2), S).S, S.S)

    def test_rotations_add(self):
        omega = 1.3
        layout = sc.SystemLayout((omega,), (omega,), (0.0,), [[0.0]])
        H = sc.build_hamiltonian(layout)
        total = sc.compose(sc.evolve_segment(H, 0.4), sc.evolve_segment(H, 0.9))
        np.testing.assert_allclose(total.S[:2, :2], rotation(omega * 1.3), atol=1e-15)
        assert total.duration == pytest.approx(1.3)

    def test_chronological_order(self):
        layout = sc.SystemLayout.resonant(2.0, (-0.3, 0.3), [[0.5], [0.5]])
        S1 = sc.evolve_segment(sc.build_hamiltonian(layout, [0]), 1.0)
        S2 = sc.evolve_segment(sc.build_hamiltonian(layout, [1]), 1.0)
        got = sc.compose(S2, S1).S
        np.testing.assert_array_equal(got, S2.S @ S1.S)
        assert not np.allclose(got, S1.S @ S2.S)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sc.compose(sc.SymplecticTransform.identity(2), sc.SymplecticTransform.identity(3))


class TestStates:
    def test_vacuum(self):
        vac = sc.vacuum_state(1)
        np.testing.assert_array_equal(vac.cov, np.eye(2))
        np.testing.assert_array_equal(vac.mean, [0, 0])
        assert vac.is_physical()

    def test_free_evolution_keeps_vacuum(self):
        layout = sc.SystemLayout((1.3, 0.4), (2.2,), (0.0, 1.0), [[0.0], [0.0]])
        S = sc.evolve_segment(sc.build_hamiltonian(layout), 3.1)
        np.testing.assert_allclose(sc.apply(S, sc.vacuum_state(3)).cov, np.eye(6), atol=1e-14)

    def test_apply_preserves_determinant(self):
        layout = sc.SystemLayout.resonant(2.0, (0.1, -0.4), [[0.6], [0.3]])
        S = sc.evolve_segment(sc.build_hamiltonian(layout, [0, 1]), 1.3)
        state = sc.apply(sc.two_mode_squeeze(0.4, 0, 2, 3), sc.vacuum_state(3))
        assert np.linalg.det(sc.apply(S, state).cov) == pytest.approx(np.linalg.det(state.cov), rel=1e-10)

    def test_tmsv_covariance(self):
        state = sc.apply(sc.two_mode_squeeze(1.0, 0, 1, 2), sc.vacuum_state(2))
        ch, sh = math.cosh(2.0), math.sinh(2.0)
        want = np.block([[ch * np.eye(2), sh * np.diag([1, -1])], [sh * np.diag([1, -1]), ch * np.eye(2)]])
        np.testing.assert_allclose(state.cov, want, rtol=1e-14)
        assert state.cov[0, 0] == pytest.approx(3.76220, abs=1e-5)

    def test_squeeze_identity_at_zero(self):
        np.testing.assert_array_equal(sc.two_mode_squeeze(0.0, 1, 2, 3).S, np.eye(6))

    def test_squeeze_is_symplectic(self):
        assert sc.two_mode_squeeze(1.3, 0, 2, 3).defect() < 1e-12

    def test_squeeze_needs_distinct_modes(self):
        with pytest.raises(ValueError):
            sc.two_mode_squeeze(0.5, 1, 1, 3)

    def test_squeeze_quadrature_action(self):
        r = 0.7
        S = sc.two_mode_squeeze(r, 0, 1, 2).S
        ch, sh = math.cosh(r), math.sinh(r)
        want = np.array([[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]])
        np.testing.assert_allclose(S, want)

    def test_partial_trace_keep_all(self):
        state = sc.apply(sc.two_mode_squeeze(0.4, 0, 1, 2), sc.vacuum_state(2))
        kept = sc.partial_trace(state, [0, 1])
        np.testing.assert_array_equal(kept.cov, state.cov)

    def test_partial_trace_order(self):
        state = sc.apply(sc.two_mode_squeeze(0.4, 0, 2, 3), sc.vacuum_state(3))
        swapped = sc.partial_trace(state, [2, 0])
        assert swapped.cov[0, 2] == pytest.approx(math.sinh(0.8))
        assert swapped.labels == ("mode2", "mode0")

    def test_partial_trace_vacuum(self):
        np.testing.assert_array_equal(sc.partial_trace(sc.vacuum_state(4), [1, 3]).cov, np.eye(4))

    def test_partial_trace_tmsv_is_thermal(self):
        r = 0.9
        state = sc.apply(sc.two_mode_squeeze(r, 0, 1, 2), sc.vacuum_state(2))
        np.testing.assert_allclose(sc.partial_trace(state, [1]).cov, math.cosh(2 * r) * np.eye(2))

    @pytest.mark.parametrize("keep", [[], [0, 0], [5]])
    def test_partial_trace_invalid(self, keep):
        with pytest.raises((ValueError, IndexError)):
            sc.partial_trace(sc.vacuum_state(2), keep)

    def test_unphysical_state_detected(self):
        assert not sc.GaussianState(0.5 * np.eye(2), np.zeros(2)).is_physical()


stable_specs = st.builds(
    lambda scen, omega, frac, t, x, T: InertialSpec(scen, omega, frac * omega, t, x, T),
    st.sampled_from("abcd"),
    st.floats(0.5, 6.0),
    st.floats(0.0, 0.35),
    st.floats(0.0, 3.0),
    st.floats(0.0, 3.0),
    st.floats(0.0, 3.0),
)


@settings(max_examples=60, deadline=None)
@given(stable_specs)
def test_evolution_invariants(spec):
    S = evolve_schedule(inertial_layout(spec), schedule_for(spec))
    assert S.defect() < 1e-10
    state = sc.apply(S, sc.vacuum_state(3))
    assert abs(np.linalg.det(state.cov) - 1) < 1e-8
    assert state.physicality_defect() < 1e-9


@settings(max_examples=40, deadline=None)
@given(stable_specs, st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_segment_splitting(spec, t1, t2):
    H = sc.build_hamiltonian(inertial_layout(spec), [0, 1])
    whole = sc.evolve_segment(H, t1 + t2).S
    parts = sc.compose(sc.evolve_segment(H, t2), sc.evolve_segment(H, t1)).S
    np.testing.assert_allclose(parts, whole, atol=1e-10)
