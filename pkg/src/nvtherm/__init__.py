"""nvtherm: spin-resonance and Debye-Waller-factor thermometry for NV- centers.

Subpackages and modules:

- :mod:`nvtherm.spin` -- spin-1 Hamiltonian, transitions, resonance synthesis
- :mod:`nvtherm.thermo` -- closed-form temperature models and sensitivity
- :mod:`nvtherm.leastsq` / :mod:`nvtherm.models` -- fitting engine and models
- :mod:`nvtherm.spectra` -- spectrum container, fit recipes, DWF extraction
- :mod:`nvtherm.noise` -- synthetic sources, Monte-Carlo floors, time series
- :mod:`nvtherm.config` / :mod:`nvtherm.dataio` / :mod:`nvtherm.cli` -- I/O surface
"""

__version__ = "0.1.0"
