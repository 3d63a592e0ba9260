# ABOUTME: Root package for the MDL randomness amplification toolkit.
# ABOUTME: Bell-value optimization, entropy rates, two-source extraction and protocol simulation.
