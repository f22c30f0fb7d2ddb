"""High-order WENO finite-volume solver library for the 1D/2D compressible
Euler equations: WENO reconstruction of orders 3/5/7, deferred-correction time
integration of matching order, and eight interchangeable interface fluxes
(lxf, force, rus, hll, cu, ldcu, hllc, exact), plus a benchmark catalog with
exact/reference solutions and convergence tooling.
"""

from .benchmark import (ConvergenceTable, ErrorReport, convergence_study,
                        error_norms, reference_run, run_and_measure)
from .cases import CaseSpec, case_catalog, exact_solution, get_case
from .dec import DeCTableau, bdec_step, build_tableau, ssprk2_step
from .euler import (GAS, GasModel, InvalidStateError, conserved_to_primitive,
                    eigensystem, max_signal_speed, physical_flux,
                    primitive_to_conserved, sound_speed)
from .fluxes import SCHEMES, ConfigurationError, FluxContext, numerical_flux
from .riemann import (RiemannConvergenceError, StarRegion, VacuumError, sample,
                      solve_star, speed_bounds_davis, speed_bounds_rigorous)
from .solver import (Boundary, CellField, Mesh, RunConfig, RunResult,
                     compute_dt, fill_ghosts, initialize, run, semidiscrete_rhs)
from .weno import (ReconstructionTable, WenoConfig, build_table,
                   nonlinear_weights, reconstruct_faces_1d,
                   reconstruct_faces_2d, reconstruct_point,
                   smoothness_indicators)

__version__ = "0.1.0"
