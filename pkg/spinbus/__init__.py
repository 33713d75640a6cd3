"""spinbus: NV-mediated nuclear spin coupling simulator.

Exact Lindblad dynamics of an NV dressed spin with periodic reinitialization,
the closed-form effective nuclear model, and experiment drivers for gate and
sensing protocols.
"""

__version__ = "1.0.0"
ENGINE_VERSION: str = __version__
