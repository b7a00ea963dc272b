"""Quantum-optical estimation of the gravitational acceleration.

Schwarzschild light-travel phases, closed-form interferometric sensitivities
and a Gaussian-state simulator that checks them.
"""

from .geometry import GeometryConfig, PathTimes, path_times
from .interferometer import InterferometerConfig, Topology, run, simulate_sensitivity
from .sensitivity import Detection, Method, SensitivityResult

__all__ = [
    "Detection",
    "GeometryConfig",
    "InterferometerConfig",
    "Method",
    "PathTimes",
    "SensitivityResult",
    "Topology",
    "path_times",
    "run",
    "simulate_sensitivity",
]
