# ABOUTME: Weak-source layer: SV/MDL parameters, adversarial source models and seed draws.
# ABOUTME: Also hosts the counter-based randomness streams every simulation uses.

from src.sources.bits import BitString
from src.sources.models import (
    PAIRS,
    AuditReport,
    SourceKind,
    SourceModel,
    from_sv,
    pair_index,
    pairs_from_uniforms,
    sample_block,
    sample_pair,
)
from src.sources.params import (
    MdlParams,
    SvParams,
    as_input_distribution,
    sv_to_mdl,
    uniform_inputs,
)
from src.sources.rng import RoundRandomness
from src.sources.seed import draw_seed, seed_min_entropy, shannon_pair_entropy

__all__ = [
    "PAIRS",
    "AuditReport",
    "BitString",
    "MdlParams",
    "RoundRandomness",
    "SourceKind",
    "SourceModel",
    "SvParams",
    "as_input_distribution",
    "draw_seed",
    "from_sv",
    "pair_index",
    "pairs_from_uniforms",
    "sample_block",
    "sample_pair",
    "seed_min_entropy",
    "shannon_pair_entropy",
    "sv_to_mdl",
    "uniform_inputs",
]
