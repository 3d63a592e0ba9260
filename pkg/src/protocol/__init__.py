# ABOUTME: Protocol layer: device models, round records and the end-to-end executor.
# ABOUTME: Covers the abort test, completeness experiments and secrecy bookkeeping.

from src.protocol.devices import (
    DeterministicDevice,
    DeviceKind,
    DeviceModel,
    HonestQuantumDevice,
    ScriptedDevice,
)
from src.protocol.executor import (
    AbortExperiment,
    ExtractorSettings,
    abort_predicate,
    execute_rounds,
    frequency_of,
    honest_abort_experiment,
    predicted_frequency,
    replay,
    run,
    secrecy_distance,
    secrecy_epsilon,
)
from src.protocol.records import AbortReason, ProtocolOutcome, RoundRecord, Transcript

__all__ = [
    "AbortExperiment",
    "AbortReason",
    "DeterministicDevice",
    "DeviceKind",
    "DeviceModel",
    "ExtractorSettings",
    "HonestQuantumDevice",
    "ProtocolOutcome",
    "RoundRecord",
    "ScriptedDevice",
    "Transcript",
    "abort_predicate",
    "execute_rounds",
    "frequency_of",
    "honest_abort_experiment",
    "predicted_frequency",
    "replay",
    "run",
    "secrecy_distance",
    "secrecy_epsilon",
]
