"""Classical simulator of a coherent-state optical KNN pipeline.

Subpackages by stage: `linear_optics` synthesizes beam splitter cascades for
the Walsh-Hadamard multiport; `photonic` carries phase-encoded coherent
amplitude vectors through interference, loss, and bucket-detector sampling;
`metric` maps features to phases and measures the coherent distance exactly
or by Monte-Carlo detection counts; `knn` is the classical neighbour-voting
stage; `datasets` loads benchmark CSVs and generates synthetic families;
`resources` audits gate and photon counts; `cli` glues everything into a
reproducible experiment harness.
"""

from .datasets import LabeledDataset, SplitSpec, generate_synthetic, load_csv, load_named, split
from .knn import EvaluationReport, Prediction, classify, evaluate
from .linear_optics import (
    BeamSplitterParams,
    GatePlacement,
    InterferometerLayout,
    apply_unitary,
    balanced_splitter_params,
    bs_unitary,
    embed_two_mode,
    synthesize_walsh_hadamard,
    walsh_hadamard_matrix,
)
from .metric import (
    CdmEstimate,
    ScalerParams,
    cdm_exact,
    cdm_from_probability,
    estimate_cdm,
    fit_scaler,
    manhattan,
    to_phases,
)
from .photonic import (
    DetectionOutcome,
    NoiseModel,
    detector_error_probability,
    distribute_single_photon,
    encode_phases,
    interfere_pairs,
    no_photon_probability,
    sample_detection,
    split_resource_coherent,
    transmission_fidelity,
)
from .resources import ResourceAudit, audit_resources

__all__ = [
    "BeamSplitterParams",
    "CdmEstimate",
    "DetectionOutcome",
    "EvaluationReport",
    "GatePlacement",
    "InterferometerLayout",
    "LabeledDataset",
    "NoiseModel",
    "Prediction",
    "ResourceAudit",
    "ScalerParams",
    "SplitSpec",
    "apply_unitary",
    "audit_resources",
    "balanced_splitter_params",
    "bs_unitary",
    "cdm_exact",
    "cdm_from_probability",
    "classify",
    "detector_error_probability",
    "distribute_single_photon",
    "embed_two_mode",
    "encode_phases",
    "estimate_cdm",
    "evaluate",
    "fit_scaler",
    "generate_synthetic",
    "interfere_pairs",
    "load_csv",
    "load_named",
    "manhattan",
    "no_photon_probability",
    "sample_detection",
    "split",
    "split_resource_coherent",
    "synthesize_walsh_hadamard",
    "to_phases",
    "transmission_fidelity",
    "walsh_hadamard_matrix",
]

__version__ = "0.1.0"
