"""Molecular VQE pipeline: integrals, mappings, simulation, optimization, mitigation."""

__version__ = "0.1.0"
