# ABOUTME: Tests for the protocol layer.
# ABOUTME: Covers device models, transcripts, the executor and abort experiments.
