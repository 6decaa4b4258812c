import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import stats as scipy_stats

from coherent_knn import photonic
from coherent_knn.photonic import IDEAL_NOISE, NoiseModel

ATOL = 1e-12

# Mode counts must be powers of two for the resource splitter.
phase_vectors = st.integers(0, 3).flatmap(
    lambda t: st.lists(
        st.floats(0.0, math.pi / 2), min_size=2**t, max_size=2**t
    )
).map(np.array)


def encoded_pair(theta, theta_tilde, alpha):
    n = len(theta)
    base = photonic.split_resource_coherent(alpha, n)
    return (
        photonic.encode_phases(base, theta),
        photonic.encode_phases(base, theta_tilde),
    )


class TestNoiseModel:
    def test_defaults_are_ideal(self):
        noise = NoiseModel()
        assert noise.transmissivity_eta == 1.0
        assert noise.detector_efficiency_tau == 1.0

    def test_eta_derived_from_loss_coefficient(self):
        noise = NoiseModel(loss_coefficient_lambda=0.2, propagation_length_L=3.0)
        assert abs(noise.transmissivity_eta - math.exp(-0.6)) < ATOL

    def test_inconsistent_eta_rejected(self):
        with pytest.raises(ValueError):
            NoiseModel(
                transmissivity_eta=0.9,
                loss_coefficient_lambda=0.2,
                propagation_length_L=3.0,
            )

    @pytest.mark.parametrize("eta", [-0.1, 1.1])
    def test_range_checks(self, eta):
        with pytest.raises(ValueError):
            NoiseModel(transmissivity_eta=eta)


class TestDistributeSinglePhoton:
    def test_first_port_of_four_is_uniform(self):
        amps = photonic.distribute_single_photon(4, 0)
        assert_allclose(amps, np.full(4, 0.5), atol=ATOL, rtol=0)

    def test_second_port_of_two_carries_sign(self):
        amps = photonic.distribute_single_photon(2, 1)
        assert_allclose(amps, [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=ATOL, rtol=0)

    @pytest.mark.parametrize("port", range(8))
    def test_eight_modes_always_uniform_modulus(self, port):
        amps = photonic.distribute_single_photon(8, port)
        assert_allclose(np.abs(amps) ** 2, np.full(8, 1 / 8), atol=ATOL, rtol=0)
        assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-9

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            photonic.distribute_single_photon(6, 0)


class TestSplitResource:
    def test_two_way_split(self):
        assert_allclose(
            photonic.split_resource_coherent(math.sqrt(2), 2), [1, 1], atol=ATOL, rtol=0
        )

    def test_four_way_split_conserves_energy(self):
        amps = photonic.split_resource_coherent(2.0, 4)
        assert_allclose(amps, np.ones(4), atol=ATOL, rtol=0)
        assert abs(np.sum(np.abs(amps) ** 2) - 4.0) < ATOL

    @given(
        re=st.floats(-3, 3), im=st.floats(-3, 3), t=st.integers(0, 5)
    )
    @settings(max_examples=100)
    def test_norm_always_preserved(self, re, im, t):
        alpha = complex(re, im)
        amps = photonic.split_resource_coherent(alpha, 2**t)
        assert abs(np.sum(np.abs(amps) ** 2) - abs(alpha) ** 2) < 1e-12

    def test_rejects_zero_modes(self):
        with pytest.raises(ValueError):
            photonic.split_resource_coherent(1.0, 0)


class TestEncodePhases:
    def test_zero_phases_do_nothing(self):
        state = photonic.split_resource_coherent(1.5, 4)
        assert_allclose(photonic.encode_phases(state, np.zeros(4)), state, atol=ATOL)

    def test_quarter_turn(self):
        out = photonic.encode_phases(np.array([1.0 + 0j]), np.array([math.pi / 2]))
        assert_allclose(out, [1j], atol=ATOL, rtol=0)

    @given(phase_vectors)
    @settings(max_examples=100)
    def test_moduli_unchanged(self, phases):
        state = photonic.split_resource_coherent(2.0, 8)[: len(phases)]
        out = photonic.encode_phases(state, phases)
        assert_allclose(np.abs(out), np.abs(state), atol=ATOL, rtol=0)

    def test_rejects_out_of_range_phase(self):
        with pytest.raises(ValueError):
            photonic.encode_phases(np.ones(2, dtype=complex), np.array([0.1, 2.0]))


class TestInterference:
    def test_identical_inputs_darken_difference_ports(self):
        theta = np.array([0.3, 1.1])
        train, test = encoded_pair(theta, theta, math.sqrt(2))
        _, diff = photonic.interfere_pairs(train, test)
        assert_allclose(diff, np.zeros(2), atol=ATOL, rtol=0)

    def test_quarter_parity_single_mode(self):
        train, test = encoded_pair(np.array([math.pi / 2]), np.array([0.0]), 1.0)
        _, diff = photonic.interfere_pairs(train, test)
        assert abs(np.abs(diff[0]) ** 2 - 1.0) < ATOL

    @given(phase_vectors, st.integers(0, 100))
    @settings(max_examples=100)
    def test_energy_conserved(self, theta, seed):
        rng = np.random.default_rng(seed)
        theta_tilde = rng.uniform(0, math.pi / 2, len(theta))
        alpha = 1.7
        train, test = encoded_pair(theta, theta_tilde, alpha)
        s, d = photonic.interfere_pairs(train, test)
        total = np.sum(np.abs(s) ** 2) + np.sum(np.abs(d) ** 2)
        assert abs(total - 2 * abs(alpha) ** 2) < 1e-12

    def test_rejects_mode_mismatch(self):
        with pytest.raises(ValueError):
            photonic.interfere_pairs(np.ones(2, dtype=complex), np.ones(4, dtype=complex))


class TestNoPhotonProbability:
    def test_vacuum_ports_give_certainty(self):
        assert photonic.no_photon_probability(np.zeros(4, dtype=complex)) == 1.0

    def test_maximal_parity_reaches_lower_bound(self):
        alpha = math.sqrt(3.0)
        n = 4
        theta = np.full(n, math.pi / 2)
        train, test = encoded_pair(theta, np.zeros(n), alpha)
        _, diff = photonic.interfere_pairs(train, test)
        assert abs(
            photonic.no_photon_probability(diff) - math.exp(-abs(alpha) ** 2)
        ) < ATOL

    def test_hand_evaluated_point(self):
        # |alpha|^2 = 2, two modes, parity pi/3 each: exponent is exactly 1.
        train, test = encoded_pair(
            np.array([math.pi / 3, math.pi / 3]), np.zeros(2), math.sqrt(2)
        )
        _, diff = photonic.interfere_pairs(train, test)
        assert abs(photonic.no_photon_probability(diff) - math.exp(-1)) < ATOL

    @given(phase_vectors, st.integers(0, 100))
    @settings(max_examples=100)
    def test_bounded_by_alpha_energy(self, theta, seed):
        rng = np.random.default_rng(seed)
        theta_tilde = rng.uniform(0, math.pi / 2, len(theta))
        alpha_sq = rng.uniform(0.1, 6.0)
        train, test = encoded_pair(theta, theta_tilde, math.sqrt(alpha_sq))
        _, diff = photonic.interfere_pairs(train, test)
        p0 = photonic.no_photon_probability(diff)
        assert math.exp(-alpha_sq) - ATOL <= p0 <= 1.0 + ATOL


class TestLossAndFidelity:
    def test_unit_transmissivity_is_identity(self):
        state = np.array([0.3 + 0.4j, 1.0])
        out = photonic.apply_loss(state, NoiseModel(transmissivity_eta=1.0))
        assert_allclose(out, state, atol=ATOL, rtol=0)

    def test_zero_transmissivity_gives_vacuum(self):
        out = photonic.apply_loss(np.ones(3, dtype=complex), NoiseModel(transmissivity_eta=0.0))
        assert_allclose(out, np.zeros(3), atol=ATOL, rtol=0)

    def test_amplitude_scaling(self):
        out = photonic.apply_loss(np.array([1.0 + 0j]), NoiseModel(transmissivity_eta=0.81))
        assert abs(out[0] - 0.9) < ATOL

    def test_loss_exponentiates_no_photon_probability(self):
        train, test = encoded_pair(np.array([0.4, 1.2, 0.1, 0.9]), np.zeros(4), 2.0)
        _, diff = photonic.interfere_pairs(train, test)
        for eta in (0.25, 0.5, 0.9):
            lossy = photonic.apply_loss(diff, NoiseModel(transmissivity_eta=eta))
            assert abs(
                photonic.no_photon_probability(lossy)
                - photonic.no_photon_probability(diff) ** eta
            ) < 1e-12

    def test_fidelity_limits(self):
        assert photonic.transmission_fidelity(3.0, 1.0) == 1.0
        assert photonic.transmission_fidelity(0.0, 0.3) == 1.0

    def test_fidelity_decreases_with_amplitude(self):
        values = [photonic.transmission_fidelity(b, 0.8) for b in np.linspace(0.1, 5, 40)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestDetection:
    def test_vacuum_never_clicks(self):
        rng = np.random.default_rng(1)
        clicks = photonic.sample_detection(np.zeros(4, dtype=complex), IDEAL_NOISE, rng)
        assert not clicks.any()

    def test_blind_detector_never_clicks(self):
        rng = np.random.default_rng(1)
        noise = NoiseModel(detector_efficiency_tau=0.0)
        clicks = photonic.sample_detection(np.full(4, 2.0 + 0j), noise, rng)
        assert not clicks.any()

    def test_click_frequency_matches_closed_form(self):
        rng = np.random.default_rng(7)
        beta = np.array([0.8 + 0.2j])
        noise = NoiseModel(detector_efficiency_tau=0.7)
        runs = 100_000
        silent = sum(
            not photonic.sample_detection(beta, noise, rng)[0] for _ in range(runs)
        )
        p = float(np.exp(-0.7 * abs(beta[0]) ** 2))
        se = math.sqrt(p * (1 - p) / runs)
        assert abs(silent / runs - p) < 3 * se

    def test_all_silent_frequency_matches_no_photon_probability(self):
        rng = np.random.default_rng(11)
        theta = np.array([0.2, 0.9, 0.5, 1.3])
        train, test = encoded_pair(theta, np.zeros(4), 1.2)
        _, diff = photonic.interfere_pairs(train, test)
        runs = 100_000
        silent = sum(
            not photonic.sample_detection(diff, IDEAL_NOISE, rng).any()
            for _ in range(runs)
        )
        p = photonic.no_photon_probability(diff)
        assert abs(photonic.silent_run_probability(diff, IDEAL_NOISE) - p) < ATOL
        se = math.sqrt(p * (1 - p) / runs)
        assert abs(silent / runs - p) < 3 * se


class TestDetectorError:
    def test_reference_operating_point(self):
        err = photonic.detector_error_probability(1.0, 2, math.pi / 2, 0.9, 5)
        assert 0.030 <= err <= 0.034

    def test_perfect_detector_never_errs(self):
        assert photonic.detector_error_probability(2.0, 4, 1.0, 1.0, 10) == 0.0

    def test_cutoff_five_close_to_closed_form(self):
        err = photonic.detector_error_probability(1.0, 2, math.pi / 2, 0.9, 5)
        limit = photonic.detector_error_limit(1.0, 2, math.pi / 2, 0.9)
        assert abs(limit - (math.exp(-0.45) - math.exp(-0.5))) < ATOL
        assert abs(err - limit) < 1e-4

    def test_monotone_in_cutoff_and_convergent(self):
        errs = [
            photonic.detector_error_probability(2.0, 2, 1.1, 0.85, c)
            for c in range(1, 40)
        ]
        assert all(b >= a for a, b in zip(errs, errs[1:]))
        assert abs(errs[-1] - photonic.detector_error_limit(2.0, 2, 1.1, 0.85)) < 1e-12


class TestHeralding:
    def test_single_point_is_always_chosen(self):
        rng = np.random.default_rng(0)
        assert photonic.herald_training_index(1, rng) == 0

    def test_four_point_frequencies(self):
        rng = np.random.default_rng(3)
        runs = 100_000
        counts = np.bincount(
            [photonic.herald_training_index(4, rng) for _ in range(runs)], minlength=4
        )
        bound = 3 * math.sqrt(0.25 * 0.75 / runs)
        assert np.all(np.abs(counts / runs - 0.25) < bound)

    def test_chi_square_uniformity_eight_points(self):
        rng = np.random.default_rng(5)
        runs = 80_000
        counts = np.bincount(
            [photonic.herald_training_index(8, rng) for _ in range(runs)], minlength=8
        )
        expected = runs / 8
        chi_square = float(np.sum((counts - expected) ** 2 / expected))
        assert chi_square < scipy_stats.chi2.ppf(0.99, df=7)


class TestHeraldedRound:
    def test_outcome_shapes(self):
        rng = np.random.default_rng(2)
        train_phases = np.random.default_rng(0).uniform(0, math.pi / 2, (8, 4))
        test_phases = np.random.default_rng(1).uniform(0, math.pi / 2, 4)
        outcome = photonic.run_heralded_round(
            train_phases, test_phases, 2.0, IDEAL_NOISE, rng
        )
        assert outcome.clicks.shape == (4,)
        assert 0 <= outcome.heralded_index < 8

    def test_matching_test_point_stays_silent(self):
        rng = np.random.default_rng(4)
        row = np.array([0.3, 0.7, 1.0, 0.2])
        outcome = photonic.run_heralded_round(
            np.tile(row, (3, 1)), row, 2.0, IDEAL_NOISE, rng
        )
        assert not outcome.clicks.any()


class TestPadding:
    def test_power_of_two_untouched(self):
        phases = np.array([0.1, 0.2, 0.3, 0.4])
        assert photonic.pad_to_power_of_two(phases) is phases

    def test_pads_with_zero_phases(self):
        padded = photonic.pad_to_power_of_two(np.array([0.1, 0.2, 0.3]))
        assert padded.shape == (4,)
        assert padded[3] == 0.0

    def test_pads_matrix_rows(self):
        padded = photonic.pad_to_power_of_two(np.ones((2, 5)))
        assert padded.shape == (2, 8)
        assert_allclose(padded[:, 5:], 0.0)
