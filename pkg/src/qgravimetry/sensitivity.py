"""Closed-form phase and gravimetric sensitivities.

Every function takes the signal photon number ``n_sig`` (photons that travel
the elevated path and pick up the gravitational phase) rather than the laser
photon number; see the ``*_signal_photons`` helpers for the conversion per
scheme.  Relative sensitivities are ``Delta g / g`` and share the geometric
factor ``kappa = g omega (H^2 + L H) / c^3`` from :class:`GeometryConfig`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .geometry import GeometryConfig


class Detection(str, enum.Enum):
    SINGLE_B = "single_b"
    JOINT = "joint"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class PhaseSensitivity:
    value: float
    detection: Detection


@dataclass(frozen=True)
class SensitivityResult:
    """A ``Delta g / g`` value with its provenance."""

    value: float
    scheme: str
    detection: Detection
    method: Method
    n_sig: float


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _check_common(n_sig: float, t1: float = 1.0, t2: float = 1.0) -> None:
    _require(n_sig > 0, f"n_sig must be positive, got {n_sig}")
    _require(0.0 < t1 <= 1.0, f"t1 must lie in (0, 1], got {t1}")
    _require(0.0 < t2 <= 1.0, f"t2 must lie in (0, 1], got {t2}")


def _check_T(T: float) -> None:
    _require(0.0 < T <= 1.0, f"T must lie in (0, 1], got {T}")


def _check_squeeze(*rs: float) -> None:
    for r in rs:
        _require(r >= 0, f"squeezing parameter must be non-negative, got {r}")


def _loss_rate_sq(t: float) -> float:
    return 1.0 - t * t


# -- photon accounting ------------------------------------------------------

def mz_signal_photons(T: float, n0: float) -> float:
    return (1.0 - T) * n0


def mz_input_photons(T: float, n_sig: float) -> float:
    _require(T < 1.0, "no light reaches the signal arm at T = 1")
    return n_sig / (1.0 - T)


def su11_signal_photons(r1: float, n0: float) -> float:
    return math.sinh(r1) ** 2 * (n0 + 1.0)


def su11_input_photons(r1: float, n_sig: float) -> float:
    g1_sq = math.sinh(r1) ** 2
    _require(g1_sq > 0, "the first amplifier needs r1 > 0 to populate the signal arm")
    return n_sig / g1_sq - 1.0


# -- phase sensitivities ----------------------------------------------------

def mz_phase_single(T: float, n_sig: float) -> PhaseSensitivity:
    """Phase uncertainty from homodyning one MZ output: ``1 / (2 sqrt(T n_sig))``."""
    _check_T(T)
    _check_common(n_sig)
    return PhaseSensitivity(1.0 / (math.sqrt(T) * 2.0 * math.sqrt(n_sig)), Detection.SINGLE_B)


def mz_phase_joint(T: float, n_sig: float) -> PhaseSensitivity:
    """Phase uncertainty from the summed quadrature of both MZ outputs."""
    _require(0.0 <= T <= 1.0, f"T must lie in [0, 1], got {T}")
    _check_common(n_sig)
    value = math.sqrt(2.0) / ((math.sqrt(T) + math.sqrt(1.0 - T)) * 2.0 * math.sqrt(n_sig))
    return PhaseSensitivity(value, Detection.JOINT)


# -- gravimetric sensitivities ------------------------------------------------

def sql(n_sig: float, geometry: GeometryConfig) -> SensitivityResult:
    """Standard quantum limit ``1 / (2 sqrt(n_sig) kappa)`` of a coherent MZ."""
    _check_common(n_sig)
    value = 1.0 / (2.0 * math.sqrt(n_sig) * geometry.kappa)
    return SensitivityResult(value, "sql", Detection.SINGLE_B, Method.CLOSED_FORM, n_sig)


def mz_single(T: float, n_sig: float, geometry: GeometryConfig) -> SensitivityResult:
    value = mz_phase_single(T, n_sig).value / geometry.kappa
    return SensitivityResult(value, "mz_single", Detection.SINGLE_B, Method.CLOSED_FORM, n_sig)


def mz_joint(T: float, n_sig: float, geometry: GeometryConfig) -> SensitivityResult:
    value = mz_phase_joint(T, n_sig).value / geometry.kappa
    return SensitivityResult(value, "mz_joint", Detection.JOINT, Method.CLOSED_FORM, n_sig)


def mz_squeezed_lossy(
    T: float, n_sig: float, r: float, t1: float, t2: float, geometry: GeometryConfig
) -> SensitivityResult:
    """MZ with squeezed vacuum in the dark port, internal loss ``t1`` and detection loss ``t2``.

    ``t1`` and ``t2`` are amplitude transmittances applied equally to both
    arms; the squeezing angle is assumed optimal.
    """
    _check_T(T)
    _check_common(n_sig, t1, t2)
    _check_squeeze(r)
    noise = (
        (t1 * t2) ** 2 * math.exp(-2.0 * r)
        + _loss_rate_sq(t1) * t2 * t2
        + _loss_rate_sq(t2)
    )
    value = math.sqrt(noise) / (t1 * t2 * 2.0 * math.sqrt(T) * math.sqrt(n_sig) * geometry.kappa)
    return SensitivityResult(value, "mz_squeezed", Detection.SINGLE_B, Method.CLOSED_FORM, n_sig)


def effective_sql(n_sig: float, t1: float, t2: float, geometry: GeometryConfig) -> SensitivityResult:
    """Lossy coherent baseline: the squeezed MZ at ``r = 0`` in the ``T -> 1`` limit."""
    result = mz_squeezed_lossy(1.0, n_sig, 0.0, t1, t2, geometry)
    return SensitivityResult(result.value, "effective_sql", result.detection, result.method, n_sig)


def su11_single(
    n_sig: float, r1: float, r2: float, t1: float, t2: float, geometry: GeometryConfig
) -> SensitivityResult:
    """SU(1,1) interferometer read out by homodyning the signal output.

    General-gain form; the denominator counts ``n_sig - g1^2 = g1^2 N0``
    photons, i.e. only the amplified coherent part of the signal beam.
    """
    _check_common(n_sig, t1, t2)
    _check_squeeze(r1, r2)
    G1, g1 = math.cosh(r1), math.sinh(r1)
    G2, g2 = math.cosh(r2), math.sinh(r2)
    _require(n_sig > g1 * g1, f"n_sig={n_sig} must exceed the spontaneous photon number {g1 * g1}")
    G_minus = G1 * G2 - g1 * g2
    g_minus = G2 * g1 - g2 * G1
    noise = (
        (t1 * t2) ** 2 * (g_minus**2 + G_minus**2) / G2**2
        + _loss_rate_sq(t1) * t2 * t2 * (1.0 + g2**2 / G2**2)
        + _loss_rate_sq(t2) / G2**2
    )
    value = math.sqrt(noise) / (2.0 * t1 * t2 * math.sqrt(n_sig - g1 * g1) * geometry.kappa)
    return SensitivityResult(value, "su11_single", Detection.SINGLE_B, Method.CLOSED_FORM, n_sig)


def su11_single_equal_gain(
    n_sig: float, r: float, t1: float, t2: float, geometry: GeometryConfig
) -> SensitivityResult:
    """Equal-gain (``r1 = r2 = r``) simplification of :func:`su11_single`.

    Counts the full ``n_sig`` in the denominator, so it agrees with the
    general form only when ``n_sig >> sinh(r)^2``.
    """
    _check_common(n_sig, t1, t2)
    _check_squeeze(r)
    G, g = math.cosh(r), math.sinh(r)
    noise = (
        (t1 * t2) ** 2 / G**2
        + _loss_rate_sq(t1) * t2 * t2 * (1.0 + g**2 / G**2)
        + _loss_rate_sq(t2) / G**2
    )
    value = math.sqrt(noise) / (2.0 * t1 * t2 * math.sqrt(n_sig) * geometry.kappa)
    return SensitivityResult(value, "su11_single", Detection.SINGLE_B, Method.CLOSED_FORM, n_sig)


def su11_joint(
    n_sig: float, r1: float, r2: float, t1: float, t2: float, geometry: GeometryConfig
) -> SensitivityResult:
    """SU(1,1) interferometer read out by the joint quadrature of both outputs.

    At ``r1 = r2 = 0`` this gives ``sqrt(2)`` times the SQL; the joint
    vacuum noise of two ports is not removed.
    """
    _check_common(n_sig, t1, t2)
    _check_squeeze(r1, r2)
    noise = (
        2.0 * (t1 * t2) ** 2 * math.exp(-2.0 * r1)
        + 2.0 * _loss_rate_sq(t1) * t2 * t2
        + 2.0 * math.exp(-2.0 * r2) * _loss_rate_sq(t2)
    )
    value = math.sqrt(noise) / (2.0 * t1 * t2 * math.sqrt(n_sig) * geometry.kappa)
    return SensitivityResult(value, "su11_joint", Detection.JOINT, Method.CLOSED_FORM, n_sig)
