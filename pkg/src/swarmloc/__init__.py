"""TDOA localization of primary-user emulation attackers with particle swarm variants."""

__version__ = "0.1.0"

from .detector import DetectionDecision, Verdict, classify
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    DivergenceError,
    DomainError,
    SwarmlocError,
    UsageError,
)
from .measurement import NoiseModel, RangeDifferenceSet, synthesize, true_range_difference
from .metrics import TrialErrorSet, cdf_curve, mean_position, median_error, mse, rms
from .objective import LocalizationObjective, fitness
from .pso import PsoConfig, RunTrace, convergence_iteration, init_swarm, run, step
from .scenario import DeployConfig, Point, Scenario, deploy_network, distance
from .schedules import VariantSpec, accel_coeffs, get_variant, inertia_weight, variant_table
from .tse import TseConfig, TseResult, jacobian, tse_solve

__all__ = [
    "ConfigError", "DegenerateGeometryError", "DeployConfig", "DetectionDecision", "DivergenceError",
    "DomainError", "LocalizationObjective", "NoiseModel", "Point", "PsoConfig", "RangeDifferenceSet",
    "RunTrace", "Scenario", "SwarmlocError", "TrialErrorSet", "TseConfig", "TseResult", "UsageError",
    "VariantSpec", "Verdict", "accel_coeffs", "cdf_curve", "classify", "convergence_iteration",
    "deploy_network", "distance", "fitness", "get_variant", "inertia_weight", "init_swarm", "jacobian",
    "mean_position", "median_error", "mse", "rms", "run", "step", "synthesize", "true_range_difference",
    "tse_solve", "variant_table",
]
