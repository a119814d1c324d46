import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvqpv.measurement import homodyne_stats
from cvqpv.states import (
    GaussianState,
    SymplecticTransform,
    apply_symplectic,
    beamsplitter,
    coherent_state,
    lossy_channel,
    rotation,
    symplectic_eigenvalue_single_mode,
    symplectic_form,
    tensor,
    tmsv,
    vacuum_state,
)
from wigner_oracle import grid_moments


def symplectic_defect(s: np.ndarray) -> float:
    omega = symplectic_form(s.shape[0] // 2)
    return float(np.abs(s @ omega @ s.T - omega).max())


class TestCoherentState:
    def test_vacuum_is_zero_displacement_coherent(self):
        state = coherent_state(0.0, 0.0)
        assert np.array_equal(state.displacement, [0.0, 0.0])
        assert np.array_equal(state.covariance, np.eye(2))

    def test_displacement_and_identity_covariance(self):
        state = coherent_state(3.0, -1.0)
        assert np.array_equal(state.displacement, [3.0, -1.0])
        assert np.array_equal(state.covariance, np.eye(2))
        assert state.mode_count == 1

    def test_homodyne_marginal_is_shot_noise(self):
        mean, var = homodyne_stats(coherent_state(3.0, -1.0), 0, 0.0)
        assert mean == pytest.approx(3.0)
        assert var == pytest.approx(0.5)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite_input_rejected(self, bad):
        with pytest.raises(ValueError):
            coherent_state(bad, 0.0)


class TestTmsv:
    def test_zero_squeezing_is_two_vacua(self):
        assert np.allclose(tmsv(0.0).covariance, np.eye(4))

    def test_unit_squeezing_blocks(self):
        g = tmsv(1.0).covariance
        z = np.diag([1.0, -1.0])
        assert np.allclose(g[:2, :2], np.cosh(2.0) * np.eye(2))
        assert np.allclose(g[2:, 2:], np.cosh(2.0) * np.eye(2))
        assert np.allclose(g[:2, 2:], np.sinh(2.0) * z)

    def test_single_mode_marginal_is_thermal(self):
        zeta = 0.8
        reduced = tmsv(zeta).reduced([0])
        assert np.allclose(reduced.covariance, np.cosh(2 * zeta) * np.eye(2))
        assert np.allclose(reduced.displacement, 0.0)

    def test_negative_squeezing_rejected(self):
        with pytest.raises(ValueError):
            tmsv(-0.1)


class TestBeamsplitter:
    def test_full_transmittance_is_identity(self):
        assert np.allclose(beamsplitter(1.0).matrix, np.eye(4))

    def test_balanced_displacement_map(self):
        state = tensor(coherent_state(2.0, -3.0), vacuum_state(1))
        out = apply_symplectic(state, beamsplitter(0.5))
        expected = np.array([2.0, -3.0, -2.0, 3.0]) / np.sqrt(2.0)
        assert np.allclose(out.displacement, expected)

    def test_inverse_exponent_block_pattern(self):
        # scalar covariance blocks g1, g2: the inverse of the output covariance
        # weights (r1 - d1)^2 by (T g2 + (1-T) g1) / det and symmetrically
        g1, g2, t = 1.0, 3.0, 0.5
        gamma = np.diag([g1, g1, g2, g2])
        out = beamsplitter(t).matrix @ gamma @ beamsplitter(t).matrix.T
        inv = np.linalg.inv(out)
        det = g1 * g2  # per quadrature pair
        assert np.allclose(np.diag(inv)[:2], (t * g2 + (1 - t) * g1) / det)
        assert np.allclose(np.diag(inv)[2:], (t * g1 + (1 - t) * g2) / det)

    def test_thermal_with_vacuum_block_formula(self):
        zeta = 0.9
        k_a = np.cosh(2 * zeta) * np.eye(2)
        state = GaussianState(np.zeros(4), np.block(
            [[k_a, np.zeros((2, 2))], [np.zeros((2, 2)), np.eye(2)]]
        ))
        out = apply_symplectic(state, beamsplitter(0.5))
        eye = np.eye(2)
        assert np.allclose(out.covariance[:2, :2], 0.5 * (eye + k_a))
        assert np.allclose(out.covariance[:2, 2:], 0.5 * (eye - k_a))
        assert np.allclose(out.covariance[:2, :2], np.cosh(zeta) ** 2 * eye)
        assert np.allclose(out.covariance[:2, 2:], -np.sinh(zeta) ** 2 * eye)

    @pytest.mark.parametrize("bad", [-0.1, 1.1, np.nan])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            beamsplitter(bad)

    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_degenerate_transmittances_allowed(self, t):
        assert symplectic_defect(beamsplitter(t).matrix) < 1e-10

    @given(st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=50)
    def test_symplectic_invariant(self, t):
        assert symplectic_defect(beamsplitter(t).matrix) < 1e-10


class TestRotation:
    def test_zero_angle_is_identity(self):
        assert np.allclose(rotation(0.0).matrix, np.eye(2))

    def test_quarter_turn_reads_p(self):
        state = coherent_state(1.4, -2.2)
        rotated = apply_symplectic(state, rotation(np.pi / 2.0))
        mean, _ = homodyne_stats(rotated, 0, 0.0)
        assert mean == pytest.approx(-2.2)

    def test_challenge_geometry_recovers_r(self):
        theta, r, r_perp = 0.7, 1.9, -0.6
        x0 = r * np.cos(theta) + r_perp * np.sin(theta)
        p0 = r * np.sin(theta) - r_perp * np.cos(theta)
        mean, _ = homodyne_stats(coherent_state(x0, p0), 0, theta)
        assert mean == pytest.approx(r, abs=1e-12)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            rotation(0.3, mode=2, n_modes=2)

    @given(st.floats(min_value=-10, max_value=10))
    @settings(max_examples=50)
    def test_symplectic_invariant(self, theta):
        assert symplectic_defect(rotation(theta, 0, 2).matrix) < 1e-10


class TestApplySymplectic:
    def test_identity_leaves_state_unchanged(self):
        state = tmsv(0.5)
        out = apply_symplectic(state, SymplecticTransform(np.eye(4)))
        assert np.allclose(out.displacement, state.displacement)
        assert np.allclose(out.covariance, state.covariance)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            apply_symplectic(coherent_state(0, 0), beamsplitter(0.5))

    def test_mode_targeting(self):
        # mixing modes (0, 2) must leave mode 1 untouched
        state = tensor(tensor(coherent_state(1.0, 0.0), coherent_state(0.0, 2.0)), vacuum_state(1))
        out = apply_symplectic(state, beamsplitter(0.5), modes=(0, 2))
        assert np.allclose(out.displacement[2:4], [0.0, 2.0])
        assert out.displacement[0] == pytest.approx(1.0 / np.sqrt(2))
        assert out.displacement[4] == pytest.approx(-1.0 / np.sqrt(2))

    def test_positivity_preserved(self):
        state = tensor(tmsv(1.2), vacuum_state(1))
        out = apply_symplectic(state, beamsplitter(0.3), modes=(0, 2))
        out = apply_symplectic(out, rotation(1.1, 1, 3))
        assert np.linalg.eigvalsh(out.covariance).min() > 0

    def test_grid_oracle_confirms_moments_after_mixing(self):
        # mode A of a squeezed pair mixed with vacuum; check both 2-mode
        # marginals of the 3-mode result against brute-force integration
        state = tensor(tmsv(0.6), vacuum_state(1))
        out = apply_symplectic(state, beamsplitter(0.5), modes=(0, 2))
        for pair in ((0, 1), (0, 2), (1, 2)):
            marginal = out.reduced(pair)
            mass, mean, gamma = grid_moments(
                marginal.displacement, marginal.covariance, points=61
            )
            assert mass == pytest.approx(1.0, rel=1e-6)
            scale = np.maximum(1.0, np.abs(marginal.displacement))
            assert np.all(np.abs(mean - marginal.displacement) / scale < 1e-4)
            gscale = np.maximum(1.0, np.abs(marginal.covariance))
            assert np.all(np.abs(gamma - marginal.covariance) / gscale < 1e-4)


class TestLossyChannel:
    def test_identity_channel(self):
        state = coherent_state(1.0, 2.0)
        out = lossy_channel(state, 0, 1.0, 0.0)
        assert np.allclose(out.displacement, state.displacement)
        assert np.allclose(out.covariance, state.covariance)

    def test_coherent_state_formula(self):
        out = lossy_channel(coherent_state(2.0, -1.0), 0, 0.8, 0.1)
        assert np.allclose(out.displacement, np.sqrt(0.8) * np.array([2.0, -1.0]))
        assert np.allclose(out.covariance, 1.2 * np.eye(2))
        _, var = homodyne_stats(out, 0, 0.0)
        assert var == pytest.approx(0.6)

    @pytest.mark.parametrize("t", [1.0, 0.9, 0.7, 0.31])
    @pytest.mark.parametrize("u", [0.0, 0.1, 0.27])
    def test_coherent_state_channel_is_bitwise_exact(self, t, u):
        out = lossy_channel(coherent_state(2.0, -1.0), 0, t, u)
        expected_d = np.array([2.0, -1.0]) * np.sqrt(t)
        expected_g = (1.0 + 2.0 * u) * np.eye(2)
        assert np.array_equal(out.displacement, expected_d)
        assert np.array_equal(out.covariance, expected_g)

    def test_signal_to_noise_factor(self):
        t, u = 0.7, 0.15
        before = homodyne_stats(coherent_state(3.0, 0.0), 0, 0.0)
        after = homodyne_stats(lossy_channel(coherent_state(3.0, 0.0), 0, t, u), 0, 0.0)
        snr_change = (after[0] ** 2 / after[1]) / (before[0] ** 2 / before[1])
        assert snr_change == pytest.approx(t / (1 + 2 * u))

    def test_composition_at_zero_excess_noise(self):
        state = tmsv(0.4)
        t1, t2 = 0.9, 0.7
        twice = lossy_channel(lossy_channel(state, 0, t1, 0.0), 0, t2, 0.0)
        once = lossy_channel(state, 0, t1 * t2, 0.0)
        assert np.allclose(twice.displacement, once.displacement)
        assert np.allclose(twice.covariance, once.covariance)

    def test_positivity_preserved(self):
        out = lossy_channel(tmsv(1.5), 1, 0.3, 0.05)
        assert np.linalg.eigvalsh(out.covariance).min() > 0

    def test_matches_grid_oracle(self):
        out = lossy_channel(coherent_state(1.5, -0.5), 0, 0.6, 0.2)
        mass, mean, gamma = grid_moments(out.displacement, out.covariance)
        assert mass == pytest.approx(1.0, rel=1e-6)
        assert np.all(np.abs(mean - out.displacement) < 1e-4 * np.maximum(1, np.abs(out.displacement)))
        assert np.all(np.abs(gamma - out.covariance) < 1e-4 * np.maximum(1, np.abs(out.covariance)))

    @pytest.mark.parametrize("t,u", [(0.0, 0.0), (1.2, 0.0), (0.5, -0.1)])
    def test_bad_parameters_rejected(self, t, u):
        with pytest.raises(ValueError):
            lossy_channel(coherent_state(0, 0), 0, t, u)


class TestSymplecticEigenvalue:
    def test_identity(self):
        assert symplectic_eigenvalue_single_mode(np.eye(2)) == pytest.approx(1.0)

    @pytest.mark.parametrize("a", [0.2, 1.0, 7.0])
    def test_minimum_uncertainty_family(self, a):
        assert symplectic_eigenvalue_single_mode(np.diag([a, 1 / a])) == pytest.approx(1.0)

    def test_prover_state_eigenvalue(self):
        t, sigma, u = 0.8, 5.0, 0.1
        nu = 2 * t * sigma**2 + 2 * u + 1
        assert symplectic_eigenvalue_single_mode(nu * np.eye(2)) == pytest.approx(nu)

    def test_non_positive_definite_rejected(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalue_single_mode(np.diag([1.0, -1.0]))


class TestValidation:
    def test_uncertainty_floor_enforced(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(2), 0.5 * np.eye(2))

    def test_asymmetric_covariance_rejected(self):
        g = np.eye(2)
        g = g + np.array([[0.0, 1e-6], [0.0, 0.0]])
        with pytest.raises(ValueError):
            GaussianState(np.zeros(2), g)

    def test_dimension_consistency_enforced(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(4), np.eye(2))

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(3), np.eye(3))

    def test_non_symplectic_matrix_rejected(self):
        with pytest.raises(ValueError):
            SymplecticTransform(2.0 * np.eye(2))

    def test_states_are_immutable(self):
        state = coherent_state(1.0, 0.0)
        with pytest.raises(ValueError):
            state.displacement[0] = 5.0

    def test_json_dump_round_trips(self):
        state = tmsv(0.3)
        data = json.loads(state.to_json())
        assert np.allclose(data["displacement"], state.displacement)
        assert np.allclose(data["covariance"], state.covariance)

    def test_large_squeezing_conditionals_stay_constructible(self):
        # Schur updates at zeta = 6 cancel ~1e9-sized entries; the floor
        # check must absorb the resulting ~1e-6 rounding
        from cvqpv.measurement import homodyne_sample

        state = tmsv(6.0)
        out = homodyne_sample(state, 0, 0.0, np.random.default_rng(7))
        assert out.post_state is not None
        assert out.post_state.mode_count == 1
