import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from coherent_knn import linear_optics as lo

ATOL = 1e-12

H1 = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
H2_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
    ],
    dtype=np.complex128,
)


class TestBeamSplitter:
    def test_canonical_params_give_real_hadamard(self):
        u = lo.bs_unitary(lo.balanced_splitter_params())
        assert_allclose(u, H1, atol=ATOL, rtol=0)

    def test_fully_transmitting_is_identity(self):
        u = lo.bs_unitary(lo.BeamSplitterParams(gamma=0.0))
        assert_allclose(u, np.eye(2), atol=ATOL, rtol=0)

    def test_zero_global_phase_convention_gives_i_times_hadamard(self):
        params = lo.BeamSplitterParams(
            gamma=math.pi / 4, phi_0=0.0, phi_tau=math.pi / 2, phi_rho=math.pi / 2
        )
        assert_allclose(lo.bs_unitary(params), 1j * H1, atol=ATOL, rtol=0)

    def test_transmittance_reflectance_sum_to_one(self):
        params = lo.BeamSplitterParams(gamma=0.3)
        assert abs(params.transmittance + params.reflectance - 1.0) < ATOL

    @pytest.mark.parametrize("gamma", [-0.1, math.pi / 2 + 0.1, 3.2])
    def test_rejects_gamma_out_of_range(self, gamma):
        with pytest.raises(ValueError):
            lo.BeamSplitterParams(gamma=gamma)

    @given(
        gamma=st.floats(0.0, math.pi / 2),
        phi_0=st.floats(-math.pi, math.pi),
        phi_tau=st.floats(-math.pi, math.pi),
        phi_rho=st.floats(-math.pi, math.pi),
    )
    @settings(max_examples=200)
    def test_always_unitary(self, gamma, phi_0, phi_tau, phi_rho):
        u = lo.bs_unitary(lo.BeamSplitterParams(gamma, phi_0, phi_tau, phi_rho))
        assert lo.is_unitary(u)


class TestWalshHadamardMatrix:
    def test_order_zero_is_scalar_one(self):
        assert_allclose(lo.walsh_hadamard_matrix(0), [[1.0]], atol=ATOL, rtol=0)

    def test_order_one_is_hadamard(self):
        assert_allclose(lo.walsh_hadamard_matrix(1), H1, atol=ATOL, rtol=0)

    def test_order_two_matches_sign_pattern(self):
        assert_allclose(lo.walsh_hadamard_matrix(2), H2_SIGNS / 2, atol=ATOL, rtol=0)

    @pytest.mark.parametrize("t", range(7))
    def test_involution(self, t):
        h = lo.walsh_hadamard_matrix(t)
        assert_allclose(h @ h, np.eye(2**t), atol=ATOL, rtol=0)

    def test_rejects_negative_and_oversized(self):
        with pytest.raises(ValueError):
            lo.walsh_hadamard_matrix(-1)
        with pytest.raises(ValueError):
            lo.walsh_hadamard_matrix(40)


class TestEmbedTwoMode:
    def test_embedding_in_two_modes_is_the_gate(self):
        assert_allclose(lo.embed_two_mode(H1, 0, 1, 2), H1, atol=ATOL, rtol=0)

    def test_embedding_identity_gate_is_identity(self):
        u = lo.embed_two_mode(np.eye(2), 2, 5, 7)
        assert_allclose(u, np.eye(7), atol=ATOL, rtol=0)

    def test_cascade_reproduces_four_mode_transform(self):
        # Layer 0 couples pairs differing in bit 0, layer 1 in bit 1.
        first = lo.embed_two_mode(H1, 0, 1, 4) @ lo.embed_two_mode(H1, 2, 3, 4)
        second = lo.embed_two_mode(H1, 0, 2, 4) @ lo.embed_two_mode(H1, 1, 3, 4)
        assert_allclose(second @ first, lo.walsh_hadamard_matrix(2), atol=ATOL, rtol=0)

    def test_rejects_bad_indices(self):
        with pytest.raises(ValueError):
            lo.embed_two_mode(H1, 1, 1, 4)
        with pytest.raises(ValueError):
            lo.embed_two_mode(H1, 0, 4, 4)


class TestSynthesis:
    @pytest.mark.parametrize("total", [2, 4, 8, 16, 32, 64])
    def test_matches_recursive_matrix_with_exact_count(self, total):
        layout = lo.synthesize_walsh_hadamard(total)
        t = int(math.log2(total))
        assert len(layout.placements) == (total // 2) * t
        assert_allclose(
            layout.unitary(), lo.walsh_hadamard_matrix(t), atol=ATOL, rtol=0
        )

    def test_two_modes_is_single_splitter(self):
        layout = lo.synthesize_walsh_hadamard(2)
        assert len(layout.placements) == 1
        assert_allclose(layout.unitary(), H1, atol=ATOL, rtol=0)

    @pytest.mark.parametrize("total", [0, 1, 3, 6, 12])
    def test_rejects_non_powers_of_two(self, total):
        with pytest.raises(ValueError):
            lo.synthesize_walsh_hadamard(total)

    def test_layout_unitary_is_unitary(self):
        assert lo.is_unitary(lo.synthesize_walsh_hadamard(16).unitary())

    def test_json_round_trip(self):
        layout = lo.synthesize_walsh_hadamard(4)
        restored = lo.InterferometerLayout.from_json(layout.to_json())
        assert restored.mode_count == layout.mode_count
        assert len(restored.placements) == len(layout.placements)
        assert_allclose(restored.unitary(), layout.unitary(), atol=ATOL, rtol=0)


class TestApplyUnitary:
    def test_identity_keeps_vector(self):
        v = np.array([0.3 + 0.1j, -0.2j, 1.0])
        assert_allclose(lo.apply_unitary(np.eye(3), v), v, atol=ATOL, rtol=0)

    def test_four_mode_transform_spreads_first_port_uniformly(self):
        e0 = np.array([1.0, 0, 0, 0], dtype=np.complex128)
        out = lo.apply_unitary(lo.walsh_hadamard_matrix(2), e0)
        assert_allclose(out, np.full(4, 0.5), atol=ATOL, rtol=0)

    def test_hadamard_is_involution_on_vectors(self):
        e0 = np.array([1.0, 0], dtype=np.complex128)
        once = lo.apply_unitary(H1, e0)
        assert_allclose(lo.apply_unitary(H1, once), e0, atol=ATOL, rtol=0)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lo.apply_unitary(np.eye(3), np.ones(4))

    @given(
        st.lists(
            st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=4, max_size=4
        ),
        st.integers(0, 5),
    )
    @settings(max_examples=100)
    def test_norm_preserved(self, entries, seed):
        v = np.array([complex(re, im) for re, im in entries])
        u = lo.synthesize_walsh_hadamard(4).unitary()
        rng = np.random.default_rng(seed)
        phases = np.exp(1j * rng.uniform(0, 2 * math.pi, 4))
        u = u @ np.diag(phases)
        assert abs(np.linalg.norm(lo.apply_unitary(u, v)) - np.linalg.norm(v)) < 1e-12
