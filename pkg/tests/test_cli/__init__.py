# ABOUTME: Tests for the command-line front end.
# ABOUTME: Covers the run-config schema, CSV writers and subcommand exit codes.
