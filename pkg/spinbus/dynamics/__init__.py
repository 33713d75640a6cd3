"""Lindblad dynamics with scheduled resets and pulses."""
