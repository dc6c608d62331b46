"""Quadrotor sliding-mode control with an implicit proxy super-twisting kernel.

The package bundles the scalar control kernels, a rigid-body quadrotor
plant, the cascaded position/attitude controller, a deterministic simulation
harness with CSV logging, and a command-line interface.
"""

from .cascade import CascadeController, attitude_errors, desired_attitude
from .disturbance import DisturbanceProfile, SinusoidChannel, disturbance_at
from .kernels import (
    NonFiniteInputError,
    PsmcGains,
    PsmcState,
    PstaGains,
    PstaState,
    SmcGains,
    proj_interval,
    psmc_step,
    psta_step,
    sgn_pow,
    smc_step,
)
from .logio import COLUMNS, read_csv, write_csv, write_report
from .metrics import MetricsReport, compute_metrics, settling_time
from .plant import (
    ControlInput,
    IntegrationError,
    QuadParams,
    RigidBodyState,
    Wrench,
    apply_actuator_limits,
    dynamics_deriv,
    integrate_step,
    mix_inverse,
    thrust_moments,
)
from .reference import (
    CircleTrajectory,
    EllipseTrajectory,
    ReferenceSample,
    SetpointTrajectory,
    TableTrajectory,
    reference_at,
    trajectory_from_mapping,
)
from .scenario import Scenario, ScenarioError, apply_override, load_scenario, scenario_from_mapping
from .sim import SimLog, run_scenario

__version__ = "0.1.0"

__all__ = [
    "CascadeController",
    "CircleTrajectory",
    "COLUMNS",
    "ControlInput",
    "DisturbanceProfile",
    "EllipseTrajectory",
    "IntegrationError",
    "MetricsReport",
    "NonFiniteInputError",
    "PsmcGains",
    "PsmcState",
    "PstaGains",
    "PstaState",
    "QuadParams",
    "ReferenceSample",
    "RigidBodyState",
    "Scenario",
    "ScenarioError",
    "SetpointTrajectory",
    "SimLog",
    "SinusoidChannel",
    "SmcGains",
    "TableTrajectory",
    "Wrench",
    "apply_actuator_limits",
    "apply_override",
    "attitude_errors",
    "compute_metrics",
    "desired_attitude",
    "disturbance_at",
    "dynamics_deriv",
    "integrate_step",
    "load_scenario",
    "mix_inverse",
    "proj_interval",
    "psmc_step",
    "psta_step",
    "read_csv",
    "reference_at",
    "run_scenario",
    "scenario_from_mapping",
    "settling_time",
    "sgn_pow",
    "smc_step",
    "thrust_moments",
    "trajectory_from_mapping",
    "write_csv",
    "write_report",
    "__version__",
]
