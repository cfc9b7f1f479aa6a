"""mollab: mollification commutators, Besov scaling estimation, and energy
budgets for compressible flows on periodic grids."""

__version__ = "0.1.0"

from ._kernels import backend
from .grid import Field, Grid, lp_norm, make_grid, mixed_norm
from .synth import (Constant, FourierMode, Holder, Indicator, Product,
                    Separable, Sum, TwoState, VacuumBump, generate)
from .mollify import (Mollifier, kernel_normalization, kernel_value,
                      mollify_space, mollify_spacetime, spectral_gradient)
from .besov import (BesovEstimate, BesovParams, besov_seminorm_space,
                    besov_seminorm_spacetime, holder_exponent_fit)
from .commutator import (CommutatorReport, cet_commutator, cet_split_check,
                         commutator_sweep, lions_commutator, rate_fit)
from .euler import (EulerState, PressureLaw, SimConfig, Trajectory, energy,
                    pressure, simulate, sound_speed, step)
from .balance import EnergyBalanceReport, PhiWindow, balance_terms
from .criteria import (CriterionParams, Verdict, check_global, check_local,
                       check_vacuum, preset_params, run_check)
