# ABOUTME: Tests for infrastructure services.
# ABOUTME: Covers the optimizer result cache.
