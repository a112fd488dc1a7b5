"""Sending-or-not-sending twin-field QKD: simulation and security analysis."""

from ._core import (
    ChannelModel,
    ClickProbabilities,
    GroundTruth,
    McOptions,
    McResult,
    ObservedCounts,
    OptimizeOptions,
    OptimizeResult,
    ProtocolParams,
    SearchSpace,
    SecurityBounds,
    SourceEquivalence,
    SweepRow,
    analyze,
    binary_entropy,
    channel_transmittance,
    check_source_equivalence,
    click_probabilities,
    expected_observables,
    key_length,
    monte_carlo_observables,
    optimize,
    phase_slice_accept,
    poisson_pmf,
    scale_to_matched,
    single_photon_e1ph,
    slice_acceptance_probability,
    sweep,
    transmittance,
)

__all__ = [
    "ChannelModel",
    "ClickProbabilities",
    "GroundTruth",
    "McOptions",
    "McResult",
    "ObservedCounts",
    "OptimizeOptions",
    "OptimizeResult",
    "ProtocolParams",
    "SearchSpace",
    "SecurityBounds",
    "SourceEquivalence",
    "SweepRow",
    "analyze",
    "binary_entropy",
    "channel_transmittance",
    "check_source_equivalence",
    "click_probabilities",
    "expected_observables",
    "key_length",
    "monte_carlo_observables",
    "optimize",
    "phase_slice_accept",
    "poisson_pmf",
    "scale_to_matched",
    "single_photon_e1ph",
    "slice_acceptance_probability",
    "sweep",
    "transmittance",
]
