"""Multimode Gaussian states evolved by symplectic maps and loss channels.

Quadratures are ordered ``(x1, p1, x2, p2, ...)`` with ``x = a + a^dag`` and
``p = -i (a - a^dag)``, so the vacuum covariance is the identity and a
coherent amplitude ``alpha`` has mean ``(2 Re alpha, 2 Im alpha)``.

A homodyne angle ``theta`` selects ``x cos(theta) + p sin(theta)``.  The
"phase quadrature" ``i (a - a^dag)`` that carries the interferometric signal
is ``-p``, i.e. ``theta = -pi/2`` (see :data:`PHASE_QUADRATURE`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PHASE_QUADRATURE = -math.pi / 2
AMPLITUDE_QUADRATURE = 0.0


@dataclass(frozen=True)
class HomodyneStats:
    """Mean and variance of a measured quadrature."""

    mean: float
    variance: float


class GaussianState:
    """Mean vector and covariance matrix of ``n_modes`` bosonic modes.

    States are treated as values: every ``apply_*`` function returns a new
    state and leaves its argument untouched.
    """

    __slots__ = ("mean", "cov")

    def __init__(self, mean, cov):
        mean = np.array(mean, dtype=float)
        cov = np.array(cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2:
            raise ValueError("mean must be a vector of even length")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        self.mean = mean
        self.cov = 0.5 * (cov + cov.T)

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        if n_modes < 1:
            raise ValueError("need at least one mode")
        return cls(np.zeros(2 * n_modes), np.eye(2 * n_modes))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def mode_slice(self, mode: int) -> slice:
        _check_mode(self, mode)
        return slice(2 * mode, 2 * mode + 2)

    def photon_number(self, mode: int) -> float:
        """Mean photon number ``<a^dag a>`` of one mode."""
        s = self.mode_slice(mode)
        m = self.mean[s]
        return (np.trace(self.cov[s, s]) + m @ m) / 4.0 - 0.5

    def total_photon_number(self) -> float:
        return sum(self.photon_number(k) for k in range(self.n_modes))

    def transform(self, S: np.ndarray) -> "GaussianState":
        """Apply a linear map ``S`` to both moments (``m -> S m``, ``V -> S V S^T``)."""
        return GaussianState(S @ self.mean, S @ self.cov @ S.T)

    def is_physical(self, tol: float = 1e-10) -> bool:
        """Check ``V + i Omega >= 0`` up to ``tol``."""
        herm = self.cov + 1j * symplectic_form(self.n_modes)
        return bool(np.linalg.eigvalsh(herm).min() >= -tol)

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


def _check_mode(state: GaussianState, *modes: int) -> None:
    for mode in modes:
        if not 0 <= mode < state.n_modes:
            raise IndexError(f"mode {mode} out of range for {state.n_modes} modes")
    if len(set(modes)) != len(modes):
        raise ValueError(f"modes must be distinct, got {modes}")


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _embed(n_modes: int, blocks: dict[int, dict[int, np.ndarray]]) -> np.ndarray:
    S = np.eye(2 * n_modes)
    for i, row in blocks.items():
        for j, block in row.items():
            S[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
    return S


def rotation(theta: float) -> np.ndarray:
    """Phase shift ``a -> a e^{i theta}`` acting on ``(x, p)``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def beamsplitter_matrix(n_modes: int, mode_a: int, mode_b: int, T: float) -> np.ndarray:
    """Symplectic matrix of ``a -> sqrt(T) a + sqrt(1-T) b``, ``b -> -sqrt(1-T) a + sqrt(T) b``."""
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"beam splitter transmittance must lie in [0, 1], got {T}")
    t = math.sqrt(T) * np.eye(2)
    r = math.sqrt(1.0 - T) * np.eye(2)
    return _embed(n_modes, {mode_a: {mode_a: t, mode_b: r}, mode_b: {mode_a: -r, mode_b: t}})


def phase_matrix(n_modes: int, mode: int, theta: float) -> np.ndarray:
    return _embed(n_modes, {mode: {mode: rotation(theta)}})


def single_mode_squeeze_matrix(n_modes: int, mode: int, r: float, xi: float = 0.0) -> np.ndarray:
    """``c -> (cosh(r) c + sinh(r) c^dag) e^{i xi}``; ``xi = 0`` squeezes ``p``."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be non-negative, got {r}")
    block = rotation(xi) @ np.diag([math.exp(r), math.exp(-r)])
    return _embed(n_modes, {mode: {mode: block}})


def two_mode_squeeze_matrix(n_modes: int, mode_a: int, mode_b: int, r: float) -> np.ndarray:
    """``a -> G a + g b^dag``, ``b -> G b + g a^dag`` with ``G = cosh r``, ``g = sinh r``."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be non-negative, got {r}")
    G = math.cosh(r) * np.eye(2)
    g = math.sinh(r) * np.diag([1.0, -1.0])
    return _embed(n_modes, {mode_a: {mode_a: G, mode_b: g}, mode_b: {mode_a: g, mode_b: G}})


def make_coherent(n_modes: int, mode: int, alpha_x: float, alpha_p: float = 0.0) -> GaussianState:
    """Vacuum on all modes except a coherent amplitude ``alpha_x + i alpha_p`` on ``mode``."""
    state = GaussianState.vacuum(n_modes)
    s = state.mode_slice(mode)
    state.mean[s] = (2.0 * alpha_x, 2.0 * alpha_p)
    return state


def apply_beamsplitter(state: GaussianState, mode_a: int, mode_b: int, T: float) -> GaussianState:
    _check_mode(state, mode_a, mode_b)
    return state.transform(beamsplitter_matrix(state.n_modes, mode_a, mode_b, T))


def apply_phase(state: GaussianState, mode: int, theta: float) -> GaussianState:
    _check_mode(state, mode)
    return state.transform(phase_matrix(state.n_modes, mode, theta))


def apply_single_mode_squeeze(state: GaussianState, mode: int, r: float, xi: float = 0.0) -> GaussianState:
    _check_mode(state, mode)
    return state.transform(single_mode_squeeze_matrix(state.n_modes, mode, r, xi))


def apply_two_mode_squeeze(state: GaussianState, mode_a: int, mode_b: int, r: float) -> GaussianState:
    _check_mode(state, mode_a, mode_b)
    return state.transform(two_mode_squeeze_matrix(state.n_modes, mode_a, mode_b, r))


def apply_loss(state: GaussianState, mode: int, t: float) -> GaussianState:
    """Beam splitter loss with amplitude transmittance ``t``, mixing in vacuum.

    ``m -> t m`` and ``V -> t^2 V + (1 - t^2) I`` on the affected mode.
    """
    _check_mode(state, mode)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"amplitude transmittance must lie in [0, 1], got {t}")
    scale = np.ones(2 * state.n_modes)
    s = state.mode_slice(mode)
    scale[s] = t
    cov = state.cov * np.outer(scale, scale)
    cov[s, s] += (1.0 - t * t) * np.eye(2)
    return GaussianState(scale * state.mean, cov)


def _quadrature_vector(n_modes: int, weights: dict[int, float]) -> np.ndarray:
    u = np.zeros(2 * n_modes)
    for mode, angle in weights.items():
        u[2 * mode] += math.cos(angle)
        u[2 * mode + 1] += math.sin(angle)
    return u


def homodyne_stats(state: GaussianState, mode: int, quadrature_angle: float) -> HomodyneStats:
    """Statistics of ``x cos(angle) + p sin(angle)`` on one mode."""
    _check_mode(state, mode)
    u = _quadrature_vector(state.n_modes, {mode: quadrature_angle})
    return HomodyneStats(mean=float(u @ state.mean), variance=float(u @ state.cov @ u))


def joint_quadrature_stats(
    state: GaussianState,
    mode_a: int,
    mode_b: int,
    angle: float,
    angle_b: float | None = None,
) -> HomodyneStats:
    """Statistics of the summed quadrature ``X_a(angle) + X_b(angle_b)``.

    ``angle_b`` defaults to ``angle``.  Cross-covariances between the modes
    are included.
    """
    _check_mode(state, mode_a, mode_b)
    if angle_b is None:
        angle_b = angle
    u = _quadrature_vector(state.n_modes, {mode_a: angle, mode_b: angle_b})
    return HomodyneStats(mean=float(u @ state.mean), variance=float(u @ state.cov @ u))
