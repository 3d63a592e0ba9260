# ABOUTME: Test suite for the MDL randomness amplification toolkit.
# ABOUTME: Covers sources, quantum optimization, rates, extraction, the protocol and the CLI.
