"""Experiment plumbing: RNG streams, statistics, exact oracles, pipelines, CLI."""
