"""Maximal-perimeter convex shapes of prescribed area inside a convex container."""

__version__ = "0.1.0"

from .disk_solver import (
    AngleProgram,
    CentralAngleSolution,
    LagrangianSolution,
    lambda_of,
    lambda_table,
    side_count,
    solve_angle_program,
    solve_disk,
    solve_lagrangian,
)
from .errors import ContainerError, DegeneracyError, DomainError, InfeasibleError, OptimizationError
from .geometry import (
    CentralAngles,
    ConvexPolygon,
    InscribedPolygon,
    TrigRadial,
    UnitDisk,
    container_from_json,
    load_container,
)
from .optimizer import DeltaVars, OptimizationConfig, OptimizationRun, maximize, prune_redundant
from .oracle import brute_force_disk, gradient_check, perturb_triple, structure_check

__all__ = [
    "AngleProgram",
    "CentralAngleSolution",
    "CentralAngles",
    "ContainerError",
    "ConvexPolygon",
    "DegeneracyError",
    "DeltaVars",
    "DomainError",
    "InfeasibleError",
    "InscribedPolygon",
    "LagrangianSolution",
    "OptimizationConfig",
    "OptimizationError",
    "OptimizationRun",
    "TrigRadial",
    "UnitDisk",
    "brute_force_disk",
    "container_from_json",
    "gradient_check",
    "lambda_of",
    "lambda_table",
    "load_container",
    "maximize",
    "perturb_triple",
    "prune_redundant",
    "side_count",
    "solve_angle_program",
    "solve_disk",
    "solve_lagrangian",
    "structure_check",
]
