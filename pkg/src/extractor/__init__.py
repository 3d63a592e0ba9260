# ABOUTME: Two-source extraction: the GF(2) convolution extractor and its parameter arithmetic.
# ABOUTME: Includes the Markov-model lifts, the key-length solver and a toy-size error oracle.

from src.extractor.bitio import read_bits, read_header, write_bits, write_header
from src.extractor.convolution import conv_extract, cyclic_counts, extraction_table
from src.extractor.oracle import exact_error, flat_source_family
from src.extractor.params import (
    ClassicalRequirement,
    ExtractorParams,
    LiftedParams,
    SmoothRequirement,
    classical_log_inv_error,
    classical_requirement,
    markov_lift,
    output_length,
    smooth_requirement,
    working_lengths,
)

__all__ = [
    "ClassicalRequirement",
    "ExtractorParams",
    "LiftedParams",
    "SmoothRequirement",
    "classical_log_inv_error",
    "classical_requirement",
    "conv_extract",
    "cyclic_counts",
    "exact_error",
    "extraction_table",
    "flat_source_family",
    "markov_lift",
    "output_length",
    "read_bits",
    "read_header",
    "smooth_requirement",
    "write_bits",
    "working_lengths",
    "write_header",
]
