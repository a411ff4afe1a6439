"""Physical constants (CODATA 2018), SI units throughout.

All values are pinned here so that computed numbers are bit-stable across
runs and machines; nothing else in the package hardcodes a constant.
"""

HBAR = 1.054571817e-34          # reduced Planck constant [J s]
PLANCK_H = 6.62607015e-34       # Planck constant [J s]
M_ELECTRON = 9.1093837015e-31   # electron mass [kg]
ATOMIC_MASS = 1.66053906660e-27  # unified atomic mass unit [kg]
K_BOLTZMANN = 1.380649e-23      # Boltzmann constant [J/K]
E_CHARGE = 1.602176634e-19      # elementary charge [C]
