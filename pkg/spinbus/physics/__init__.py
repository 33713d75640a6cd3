"""Spin registers, operators, geometry and Hamiltonian assembly."""
