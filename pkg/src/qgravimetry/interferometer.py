"""End-to-end Gaussian simulation of the MZ and SU(1,1) optical fountains.

Mode 0 is the coherent/reference beam ``a`` that stays on the ground and
mode 1 is the signal beam ``b`` that climbs the tower.  The element order is

    (squeezer ->) BS1 | AP1 -> internal loss t1 on both arms
        -> phase epsilon0 + epsilon_G on the signal arm
        -> BS2 | AP2 -> external loss t2 on both outputs -> homodyne

The squeezed vacuum source feeds the MZ dark port directly.  The delay line
on the reference arm is lossless and omitted; fold its loss into ``t1``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from . import gaussian as gs
from .geometry import GeometryConfig, path_times
from .sensitivity import (
    Detection,
    Method,
    SensitivityResult,
    mz_input_photons,
    mz_signal_photons,
    su11_input_photons,
    su11_signal_photons,
)

REFERENCE, SIGNAL = 0, 1

# Largest beam splitter transmittance used when a T -> 1 optimum is simulated.
MAX_SIMULATED_T = 1.0 - 1e-6
DEFAULT_STEP = 1e-7
LINEAR_REGIME = 1e-3

# The SU(1,1) amplifier maps a0 into the conjugate of b, so the reference
# output is read with the opposite local-oscillator phase in joint detection.
_JOINT_ANGLES = {
    "MZ": (gs.PHASE_QUADRATURE, gs.PHASE_QUADRATURE),
    "SU11": (-gs.PHASE_QUADRATURE, gs.PHASE_QUADRATURE),
}


class Topology(str, enum.Enum):
    MZ = "MZ"
    SU11 = "SU11"


class DerivativeUnderflowError(ArithmeticError):
    """The simulated signal slope vanished, so no sensitivity can be formed."""


@dataclass(frozen=True)
class InterferometerConfig:
    """Apparatus parameters.

    ``T`` is only used by the MZ, ``r1``/``r2`` only by SU(1,1).  ``t1`` and
    ``t2`` are amplitude transmittances applied to both arms.  ``r`` and
    ``xi`` describe the squeezed vacuum injected into the MZ dark port.
    """

    topology: Topology = Topology.MZ
    N0: float = 1e18
    T: float = 0.5
    r: float = 0.0
    xi: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    t1: float = 1.0
    t2: float = 1.0
    epsilon0: float = math.pi
    detection: Detection = Detection.SINGLE_B

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "detection", Detection(self.detection))
        if not 0.0 <= self.T <= 1.0:
            raise ValueError(f"T must lie in [0, 1], got {self.T}")
        for name in ("t1", "t2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        for name in ("r", "r1", "r2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.N0 < 0:
            raise ValueError(f"N0 must be non-negative, got {self.N0}")

    @property
    def n_sig(self) -> float:
        """Photons that travel the signal arm."""
        if self.topology is Topology.MZ:
            return mz_signal_photons(self.T, self.N0)
        return su11_signal_photons(self.r1, self.N0)

    @classmethod
    def mz(cls, n_sig: float, T: float = 1.0, **kwargs) -> "InterferometerConfig":
        """MZ holding ``n_sig`` fixed; ``T`` is capped at :data:`MAX_SIMULATED_T`."""
        T = min(T, MAX_SIMULATED_T)
        return cls(topology=Topology.MZ, T=T, N0=mz_input_photons(T, n_sig), **kwargs)

    @classmethod
    def su11(cls, n_sig: float, r1: float, r2: float, **kwargs) -> "InterferometerConfig":
        """SU(1,1) holding ``n_sig`` fixed."""
        return cls(topology=Topology.SU11, r1=r1, r2=r2, N0=su11_input_photons(r1, n_sig), **kwargs)


def _propagate(config: InterferometerConfig, epsilon: float) -> gs.GaussianState:
    state = gs.make_coherent(2, REFERENCE, math.sqrt(config.N0))
    if config.topology is Topology.MZ:
        if config.r > 0:
            state = gs.apply_single_mode_squeeze(state, SIGNAL, config.r, config.xi)
        state = gs.apply_beamsplitter(state, REFERENCE, SIGNAL, config.T)
    else:
        state = gs.apply_two_mode_squeeze(state, REFERENCE, SIGNAL, config.r1)

    for mode in (REFERENCE, SIGNAL):
        state = gs.apply_loss(state, mode, config.t1)
    state = gs.apply_phase(state, SIGNAL, epsilon)

    if config.topology is Topology.MZ:
        state = gs.apply_beamsplitter(state, REFERENCE, SIGNAL, config.T)
    else:
        state = gs.apply_two_mode_squeeze(state, REFERENCE, SIGNAL, config.r2)
    for mode in (REFERENCE, SIGNAL):
        state = gs.apply_loss(state, mode, config.t2)
    return state


def output_state(config: InterferometerConfig, epsilon_G: float = 0.0) -> gs.GaussianState:
    """Two-mode output state (reference, signal) at total phase ``epsilon0 + epsilon_G``."""
    return _propagate(config, config.epsilon0 + epsilon_G)


def run(config: InterferometerConfig, epsilon_G: float = 0.0) -> gs.HomodyneStats:
    """Statistics of the configured detection quadrature at ``epsilon0 + epsilon_G``."""
    if abs(epsilon_G) > LINEAR_REGIME:
        warnings.warn(
            f"epsilon_G={epsilon_G:g} rad is outside the linear regime (|epsilon_G| <= {LINEAR_REGIME:g})",
            stacklevel=2,
        )
    state = output_state(config, epsilon_G)
    if config.detection is Detection.SINGLE_B:
        return gs.homodyne_stats(state, SIGNAL, gs.PHASE_QUADRATURE)
    angle_a, angle_b = _JOINT_ANGLES[config.topology.value]
    return gs.joint_quadrature_stats(state, REFERENCE, SIGNAL, angle_a, angle_b)


def scheme_name(config: InterferometerConfig) -> str:
    if config.topology is Topology.MZ:
        return "mz_squeezed" if config.detection is Detection.SINGLE_B else "mz_joint"
    return "su11_single" if config.detection is Detection.SINGLE_B else "su11_joint"


def simulate_sensitivity(
    config: InterferometerConfig,
    geometry: GeometryConfig,
    epsilon_G: float = 0.0,
    step: float = DEFAULT_STEP,
) -> SensitivityResult:
    """Estimate ``Delta g / g`` from simulated homodyne statistics.

    The slope of the mean is a central finite difference with ``step``; the
    noise is the variance at ``epsilon_G``.  Since the phase is proportional
    to ``g``, ``d psi/d g * g`` equals the phase itself.
    """
    upper = run(config, epsilon_G + step)
    lower = run(config, epsilon_G - step)
    centre = run(config, epsilon_G)
    slope = (upper.mean - lower.mean) / (2.0 * step)
    if abs(slope) < 1e-300:
        raise DerivativeUnderflowError(
            f"signal slope {slope:g} vanished for {scheme_name(config)}; no photons reach the signal arm?"
        )
    psi = path_times(geometry).psi
    value = math.sqrt(centre.variance) / (abs(slope) * psi)
    return SensitivityResult(value, scheme_name(config), config.detection, Method.SIMULATED, config.n_sig)
