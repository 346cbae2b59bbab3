"""Physical constants and default model parameters.

Frequencies are in MHz, energies in meV, temperatures in K, pressures in GPa
unless a name says otherwise.
"""

# Boltzmann constant, meV / K
KB_MEV_PER_K = 0.08617333

# Ground-state spin Hamiltonian defaults (MHz)
D_GS_MHZ = 2870.0
E_GS_MHZ = 10.0          # strain splitting of the measured nanodiamond
A_PAR_GS_MHZ = -2.14     # 14N axial hyperfine
A_PERP_GS_MHZ = -2.70    # 14N transverse hyperfine

# Excited-state spin Hamiltonian defaults (MHz); hyperfine approximately isotropic
D_ES_MHZ = 1420.0
A_ES_MHZ = 40.0

# Orbital strain model of the excited-state E parameter
D_PERP_ES_MHZ = 775.0        # low-temperature orbital splitting
STRAIN_ENERGY_MEV = 4.7      # phonon energy scale of the thermal reduction

# Debye-Waller model defaults
HUANG_RHYS_S = 4.57
T_DEBYE_K = 1614.0
T_DEBYE_BULK_K = 2220.0      # bulk-diamond value, for comparison only

# Laser-power calibration defaults
T0_K = 294.0                 # ambient temperature
B_K_PER_MW = 0.51            # heating slope

# Thermal-expansion shift model
BULK_MODULUS_GPA = 442.0
GAMMA_GS_MHZ_PER_GPA = 14.58
GAMMA_ES_MHZ_PER_GPA = 11.0

# Quadratic ground-state D(T) shift, valid 294-600 K
QUAD_A_MHZ = 2870.0
QUAD_B_MHZ_PER_K = 0.06
QUAD_C_MHZ_PER_K2 = -2.3e-4
QUAD_T_MIN_K = 294.0
QUAD_T_MAX_K = 600.0

# Phonon cutoff used by the electron-phonon shift integral (meV)
OMEGA_MAX_MEV = 168.0

# Photophysics defaults for sensitivity estimates
COLLECTION_EFF = 0.021
EMISSION_RATE_HZ = 4.0e7
DWF_TYPICAL = 0.005
PHI_MEASURED_K = 154.0       # measured thermometry scale factor

# Optical transition energies (eV), for reference
E_ZPL_VISIBLE_EV = 1.946
E_ZPL_INFRARED_EV = 1.19
