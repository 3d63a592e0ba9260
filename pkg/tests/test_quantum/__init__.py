# ABOUTME: Tests for the quantum layer.
# ABOUTME: Covers states, measurements, behaviors, Bell functionals, the LHV oracle and the optimizer.
