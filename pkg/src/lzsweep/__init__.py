"""Landau-Zener tunneling in tridiagonal n-level systems under linear,
sinusoidal and tabulated sweeps."""
from .analytic import (SineMode, crossing_sine_probability, figure1a_data, figure1b_data,
                       lz_classic, lz_sine)
from .dynamics import (AdiabaticResult, Method, StateTrajectory, adiabatic_populations,
                       adiabatic_state, basis_state, evolve, lz_survival)
from .errors import (ConventionError, CrossingSingularityError, DegenerateProfileError,
                     InputError, LZError, NumericalError, SingularPivotError)
from .model import Hermiticity, LevelSystem, Scaling, TridiagonalMatrix, hamiltonian_at
from .morris_shore import BlockHamiltonian, MsResult, ms_transform
from .numerics import TimeGrid, eigh, unitary_step
from .sweep import Linear, Sinusoidal, Tabulated, find_crossings, gamma, gamma_rate
from .triangular import Recursion, cascade_discrepancy, cascade_evolve, triangularize

__version__ = "0.1.0"
