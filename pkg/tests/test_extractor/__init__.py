# ABOUTME: Tests for the two-source extractor.
# ABOUTME: Covers the convolution kernel, parameter lifts, the exact-error oracle and bit I/O.
