"""Light travel times and the gravitational phase in a weak Schwarzschild field.

The apparatus is an "optical fountain": a signal beam climbs a vertical arm of
proper height ``H`` from the ground radius ``R2`` to ``R1``, runs a horizontal
arm of proper length ``L`` at ``R1`` and comes back down, while the reference
beam covers the same proper length ``L + 2H`` on the ground.  Both arrive at
the recombining beam splitter with different local (ground clock) times.

Lengths are in metres and times in seconds at every public entry point.
Internally everything is done in geometric units (c = 1, times in metres).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

# Earth defaults, overridable through GeometryConfig.
EARTH_SCHWARZSCHILD_RADIUS = 8.87e-3
EARTH_RADIUS = 6.371e6
SPEED_OF_LIGHT = 2.9979e8

# Values used throughout the parameter studies (1064 nm light, g = 9.8, c = 3e8).
FIGURE_OMEGA = 2.82e14
FIGURE_G = 9.8
FIGURE_C = 3e8
FIGURE_H = 50.0
FIGURE_L = 1000.0

WEAK_FIELD_LIMIT = 1e-3

_QUAD_EPSREL = 1e-14


class GeometryError(ValueError):
    """Raised for radii or lengths outside the exterior weak-field domain."""


def _check_exterior(r_s: float, *radii: float) -> None:
    if r_s < 0:
        raise GeometryError(f"Schwarzschild radius must be non-negative, got {r_s}")
    for r in radii:
        if not r > r_s:
            raise GeometryError(f"radius {r} is not outside the Schwarzschild radius {r_s}")


def _check_ordered(R1: float, R2: float) -> None:
    if not R1 > R2:
        raise GeometryError(f"need R1 > R2, got R1={R1}, R2={R2}")


def _quad(func, length: float) -> float:
    # integrands here are smooth and nearly constant over [0, length]
    value, _ = integrate.quad(
        func, 0.0, length, epsabs=1e-15 * length, epsrel=_QUAD_EPSREL, limit=200
    )
    return value


def _height_excess(r_s: float, R2: float, dR: float) -> float:
    """Integral of 1/sqrt(1 - r_s/r) - 1 over [R2, R2 + dR], free of cancellation."""
    if r_s == 0 or dR == 0:
        return 0.0

    def excess(u):
        x = r_s / (R2 + u)
        root = math.sqrt(1.0 - x)
        return x / (root * (1.0 + root))

    return _quad(excess, dR)


def _vertical_time_excess(r_s: float, R2: float, dR: float) -> float:
    """Integral of 1/(1 - r_s/r) - 1 over [R2, R2 + dR]."""
    if r_s == 0 or dR == 0:
        return 0.0
    return _quad(lambda u: r_s / (R2 + u - r_s), dR)


def proper_height_exact(r_s: float, R1: float, R2: float) -> float:
    """Proper length of the radial segment between ``R2`` and ``R1``.

    Evaluates the un-expanded integral of ``1/sqrt(1 - r_s/r)`` by adaptive
    quadrature.  Only the small excess over the coordinate separation is
    integrated, so the result is accurate to a few ulp of ``R1 - R2``.
    """
    _check_exterior(r_s, R2)
    _check_ordered(R1, R2)
    dR = R1 - R2
    return dR + _height_excess(r_s, R2, dR)


def proper_height_approx(r_s: float, R1: float, R2: float) -> float:
    """First-order proper height ``R1 - R2 + (r_s/2) ln(R1/R2)``."""
    _check_exterior(r_s, R2)
    _check_ordered(R1, R2)
    return first_order_height(r_s, R2, R1 - R2)


def first_order_height(r_s: float, R2: float, dR: float) -> float:
    """First-order proper height as a function of the separation ``dR = R1 - R2``.

    Working with ``dR`` avoids the ~1e-9 m rounding of an absolute ``R1``.
    """
    return dR + 0.5 * r_s * math.log1p(dR / R2)


def radial_separation(r_s: float, R2: float, H: float) -> float:
    """Coordinate separation ``R1 - R2`` whose first-order proper height is ``H``.

    Newton iteration on the first-order relation; the correction to ``H`` is
    about 1e-8 m for Earth, so one step already lands within rounding.
    """
    _check_exterior(r_s, R2)
    if H < 0:
        raise GeometryError(f"height must be non-negative, got {H}")
    dR = H
    for _ in range(8):
        residual = first_order_height(r_s, R2, dR) - H
        step = residual / (1.0 + 0.5 * r_s / (R2 + dR))
        dR -= step
        if abs(step) <= 4 * math.ulp(max(H, 1.0)):
            break
    return dR


@dataclass(frozen=True)
class VerticalTime:
    """Coordinate time for one traversal of the vertical arm, in seconds."""

    exact: float
    approx: float


def coord_time_vertical(r_s: float, R1: float, R2: float, c: float = SPEED_OF_LIGHT) -> VerticalTime:
    """Coordinate (far-observer) time for light climbing from ``R2`` to ``R1``.

    ``exact`` integrates ``1/(1 - r_s/r)`` numerically; ``approx`` is
    ``R1 - R2 + r_s ln(R1/R2)``.  Both are divided by ``c``.
    """
    _check_exterior(r_s, R2)
    _check_ordered(R1, R2)
    dR = R1 - R2
    exact = dR + _vertical_time_excess(r_s, R2, dR)
    approx = dR + r_s * math.log1p(dR / R2)
    return VerticalTime(exact=exact / c, approx=approx / c)


def coord_time_horizontal(r_s: float, R1: float, L: float, c: float = SPEED_OF_LIGHT) -> float:
    """Coordinate time for the horizontal arm of proper length ``L`` at ``R1``."""
    _check_exterior(r_s, R1)
    if L < 0:
        raise GeometryError(f"arm length must be non-negative, got {L}")
    return L / (c * math.sqrt(1.0 - r_s / R1))


def local_time(r_s: float, R2: float, t_coord: float) -> float:
    """Convert a coordinate time into the proper time of a clock resting at ``R2``."""
    _check_exterior(r_s, R2)
    return math.sqrt(1.0 - r_s / R2) * t_coord


def local_g(r_s: float, R2: float, c: float = SPEED_OF_LIGHT) -> float:
    """Local gravitational acceleration ``r_s c^2 / (2 R2^2)`` in m/s^2."""
    _check_exterior(r_s, R2)
    return r_s * c * c / (2.0 * R2 * R2)


@dataclass(frozen=True)
class GeometryConfig:
    """Schwarzschild background plus the interferometer dimensions.

    Attributes
    ----------
    r_s : float
        Schwarzschild radius of the source mass [m].
    R2 : float
        Radial coordinate of the ground [m].
    H : float
        Proper height of the vertical arms [m].
    L : float
        Proper length of the upper horizontal arm [m].
    omega : float
        Optical frequency [Hz].  Used as-is in ``psi = omega * delta_tau``;
        no factor of 2*pi is inserted.
    c : float
        Speed of light [m/s].
    """

    r_s: float = EARTH_SCHWARZSCHILD_RADIUS
    R2: float = EARTH_RADIUS
    H: float = FIGURE_H
    L: float = FIGURE_L
    omega: float = FIGURE_OMEGA
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.r_s < 0:
            raise GeometryError(f"r_s must be non-negative, got {self.r_s}")
        if not self.R2 > self.r_s:
            raise GeometryError(f"R2={self.R2} must exceed r_s={self.r_s}")
        if self.r_s / self.R2 >= WEAK_FIELD_LIMIT:
            raise GeometryError(
                f"r_s/R2={self.r_s / self.R2:.3g} is outside the weak-field regime "
                f"(< {WEAK_FIELD_LIMIT})"
            )
        if self.H < 0:
            raise GeometryError(f"H must be non-negative, got {self.H}")
        if self.L < 0:
            raise GeometryError(f"L must be non-negative, got {self.L}")
        if not self.omega > 0:
            raise GeometryError(f"omega must be positive, got {self.omega}")
        if not self.c > 0:
            raise GeometryError(f"c must be positive, got {self.c}")

    @classmethod
    def from_g(
        cls,
        g: float = FIGURE_G,
        R2: float = EARTH_RADIUS,
        H: float = FIGURE_H,
        L: float = FIGURE_L,
        omega: float = FIGURE_OMEGA,
        c: float = FIGURE_C,
    ) -> "GeometryConfig":
        """Build a geometry whose local acceleration at ``R2`` equals ``g``."""
        if g < 0:
            raise GeometryError(f"g must be non-negative, got {g}")
        return cls(r_s=2.0 * g * R2 * R2 / (c * c), R2=R2, H=H, L=L, omega=omega, c=c)

    @property
    def g(self) -> float:
        return local_g(self.r_s, self.R2, self.c)

    @property
    def kappa(self) -> float:
        """Phase per unit relative change of g: ``g omega (H^2 + L H) / c^3``."""
        return gravitational_phase(self)


def gravitational_phase(config: GeometryConfig) -> float:
    """Closed-form phase ``omega g (H L + H^2) / c^3`` in radians."""
    c = config.c
    return config.omega * config.g * (config.H * config.L + config.H**2) / (c * c * c)


@dataclass(frozen=True)
class PathTimes:
    """Local travel times of the two interferometer paths, seen from the ground.

    ``delta_tau`` and ``psi`` use the first-order expression in ``r_s`` with
    the coordinate separation ``R1 - R2`` kept explicitly and ``R1 R2``
    replaced by ``R2**2``.  ``delta_tau_unsubstituted`` keeps ``R1 R2``;
    ``delta_tau_exact`` is the difference of the exact local times computed
    without cancellation.  ``psi_closed_form`` is ``omega g (HL + H^2)/c^3``.
    """

    tau_signal: float
    tau_reference: float
    delta_tau: float
    psi: float
    delta_tau_exact: float
    delta_tau_unsubstituted: float
    psi_closed_form: float
    R1: float


def path_times(config: GeometryConfig) -> PathTimes:
    """Local times of the signal and reference paths and the phase they imply."""
    r_s, R2, L, c = config.r_s, config.R2, config.L, config.c
    dR = radial_separation(r_s, R2, config.H)
    R1 = R2 + dR

    height_excess = _height_excess(r_s, R2, dR)
    time_excess = _vertical_time_excess(r_s, R2, dR)

    # geometric units from here on
    ground_rate = math.sqrt(1.0 - r_s / R2)
    t_horizontal = L / math.sqrt(1.0 - r_s / R1)
    tau_signal = ground_rate * (t_horizontal + 2.0 * (dR + time_excess))
    tau_reference = L + 2.0 * (dR + height_excess)

    # 1 - sqrt(1 - r_s/R2) and 1 - sqrt((1 - r_s/R2)/(1 - r_s/R1)) without cancellation
    rate_deficit = (r_s / R2) / (1.0 + ground_rate)
    if dR > 0 and r_s > 0:
        delta = r_s * dR / (R2 * (R1 - r_s))
        horizontal_part = L * delta / (1.0 + math.sqrt(1.0 - delta))

        def vertical_integrand(u):
            x = r_s / (R2 + u)
            root = math.sqrt(1.0 - x)
            return rate_deficit - x / ((1.0 - x) * (1.0 + root))

        vertical_part = 2.0 * (_quad(vertical_integrand, dR) + rate_deficit * time_excess)
        delta_tau_exact = horizontal_part + vertical_part
    else:
        delta_tau_exact = 0.0

    delta_tau = 0.5 * r_s * (dR * L + dR * dR) / (R2 * R2)
    delta_tau_unsubstituted = 0.5 * r_s * (dR * L / (R1 * R2) + dR * dR / (R2 * R2))

    omega = config.omega
    return PathTimes(
        tau_signal=tau_signal / c,
        tau_reference=tau_reference / c,
        delta_tau=delta_tau / c,
        psi=omega * delta_tau / c,
        delta_tau_exact=delta_tau_exact / c,
        delta_tau_unsubstituted=delta_tau_unsubstituted / c,
        psi_closed_form=gravitational_phase(config),
        R1=R1,
    )
