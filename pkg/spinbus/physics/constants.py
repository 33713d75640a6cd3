"""Physical constants (SI, CODATA 2018) and engine-wide numerical bounds."""

import math

from scipy import constants as _c

TWO_PI: float = 2.0 * math.pi

MU0: float = _c.mu_0  # 1.25664e-6 T m / A
HBAR: float = _c.hbar  # 1.05457e-34 J s
# electron gyromagnetic ratio magnitude, rad s^-1 T^-1 (1.76086e11)
GAMMA_E: float = abs(_c.physical_constants["electron gyromag. ratio"][0])
# 13C gyromagnetic ratio, rad s^-1 T^-1 (6.72828e7)
GAMMA_13C: float = TWO_PI * 10.7084e6

NM: float = 1e-9

# point-dipole prefactors at r = 1 nm, rad/s
ELECTRON_NUCLEAR_DIPOLE_1NM: float = MU0 * GAMMA_E * GAMMA_13C * HBAR / (4.0 * math.pi * NM**3)
NUCLEAR_NUCLEAR_DIPOLE_1NM: float = MU0 * GAMMA_13C**2 * HBAR / (4.0 * math.pi * NM**3)

CONTACT_RADIUS_NM: float = 0.3
MAX_NUCLEI: int = 4
UNIT_TOLERANCE: float = 1e-12
