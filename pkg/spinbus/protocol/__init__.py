"""Experiment drivers: gates, selectivity, sensing, sweeps, molecules."""
