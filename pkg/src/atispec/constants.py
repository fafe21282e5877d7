"""Fixed physical constants, natural units (hbar = c = 1, electron mass m = 1)."""

import math

# fine-structure constant; e^2 = alpha in Gaussian natural units
FINE_STRUCTURE = 1.0 / 137.035999

# electron charge e = sqrt(alpha)
E_CHARGE = math.sqrt(FINE_STRUCTURE)

# electron rest energy, used for eV <-> internal unit conversion
ELECTRON_MASS_EV = 510998.95

# atomic unit of electric field in V/cm (e / a0^2); internal field unit is m^2
ATOMIC_FIELD_V_PER_CM = 5.14220675e9

# Gamma(2/3), fixed so no general Gamma implementation is shipped
GAMMA_TWO_THIRDS = 1.3541179394264005
