import pytest

from coherent_knn import resources


class TestAudit:
    def test_four_by_four(self):
        audit = resources.audit_resources(4, 4)
        assert audit.beam_splitters == 16
        assert audit.cross_kerr_gates == 16
        assert audit.phase_shifters == 4
        assert audit.photons == 9
        assert audit.space_complexity_terms == {
            "photon_register": 2,
            "coherent_registers": 16,
        }

    def test_two_by_two(self):
        assert resources.audit_resources(2, 2).beam_splitters == 5

    def test_single_feature_photon_budget(self):
        assert resources.audit_resources(8, 1).photons == 3

    def test_padding_recorded(self):
        audit = resources.audit_resources(100, 10)
        assert (audit.requested_training_points, audit.requested_features) == (100, 10)
        assert (audit.training_points, audit.features) == (128, 16)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            resources.audit_resources(0, 4)


class TestInstantiatedCounts:
    @pytest.mark.parametrize("m,n", [(2, 2), (4, 4), (8, 2), (16, 8), (100, 10)])
    def test_formulas_match_synthesized_layouts(self, m, n):
        audit = resources.audit_resources(m, n)
        counts = resources.instantiated_gate_counts(m, n)
        assert counts["beam_splitters"] == audit.beam_splitters
        assert counts["cross_kerr_gates"] == audit.cross_kerr_gates
        assert counts["phase_shifters"] == audit.phase_shifters
