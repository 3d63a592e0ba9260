# ABOUTME: Tests for the entropy-rate layer.
# ABOUTME: Covers the single-round bound, the min-tradeoff function, EAT rates and maximal entropy.
