"""Physical constants, CODATA 2018 values, SI units.

Everything downstream imports constants from here so that estimates,
profiles and the overlap oracle agree to the last digit.
"""

GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2
REDUCED_PLANCK = 1.054571817e-34  # J s
ELECTRON_MASS = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C
