# ABOUTME: Tests for the weak-source layer.
# ABOUTME: Covers SV/MDL parameters, source models, randomness streams, bit strings and seeds.
