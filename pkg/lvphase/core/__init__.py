"""
Core functionality of lvphase.

- potentials:      free-energy densities and their analytic partials
- cubic:           closed-form real cubic roots
- equilibrium:     stationary points and equilibrium thermodynamics
- integrator:      Dormand-Prince 5(4) with PI step control
- dynamics:        homogeneous isothermal and thermal relaxation
- pde1d:           1-D gradient flow of interface profiles
- thermo_validate: thermodynamic audits
- commands:        CLI command implementations
"""
