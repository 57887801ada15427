"""Thermal models for pipe flow with variable velocity.

Simulators for the medium/wall transport PDE, the delay-PDE model and its
finite-difference reductions, and the lumped ODE/DDE models, together with
the variable transport delay, constant-flow oracles, error metrics and
coefficient identification.
"""

from .analytic import (
    ImpulseKernel,
    bessel_i1,
    build_kernel,
    convolve_constant_flow,
    impulse_response,
    kernel_mass,
    steady_outlet,
)
from .dpde import DelayedField, Dpde1Constants, dpde_constants, reconstruct_wall, simulate_dpde, simulate_dpde1
from .estimators import AdaptedDDEModel, DPDEModel, PDEModel
from .identification import FitResult, MeasurementSet, identify
from .lumped import simulate_adapted_dde, simulate_dde, simulate_ode
from .metrics import max_error, rms_error
from .models import run_model
from .output import ModelOutput
from .params import (
    MEASUREMENT_PARAMS,
    SIMULATION_PARAMS,
    DerivedCoefficients,
    HeatTransferSpec,
    MaterialProperties,
    PipeGeometry,
    PipeParameters,
    alpha_ma,
    h_parameters,
    load_parameters,
    mean_radii,
    overall_coefficients,
)
from .pde import FieldState, semidiscretize, simulate_pde, simulate_simplified_pde
from .scenario import ComparisonReport, Scenario, run_scenario
from .signals import (
    BoundaryConditions,
    Signal,
    characteristic_time,
    cumulative_flow,
    delayed_velocity,
    solve_delay,
)

__version__ = "0.1.0"
