import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgravimetry import gaussian as gs
from qgravimetry.gaussian import GaussianState

from fock_oracle import TwoModes

ANGLES = [0.0, 0.4, math.pi / 2, -math.pi / 2, 2.0]


def assert_same_state(a, b, atol=1e-12):
    np.testing.assert_allclose(a.mean, b.mean, atol=atol)
    np.testing.assert_allclose(a.cov, b.cov, atol=atol)


class TestStates:
    def test_vacuum(self):
        v = GaussianState.vacuum(3)
        assert v.n_modes == 3
        np.testing.assert_array_equal(v.mean, np.zeros(6))
        np.testing.assert_array_equal(v.cov, np.eye(6))
        assert v.is_physical()

    def test_coherent_zero_is_vacuum(self):
        assert_same_state(gs.make_coherent(2, 1, 0.0, 0.0), GaussianState.vacuum(2))

    @pytest.mark.parametrize("alpha", [(1.0, 0.0), (0.3, -1.2), (1000.0, 0.0)])
    def test_coherent_photon_number(self, alpha):
        state = gs.make_coherent(2, 0, *alpha)
        mx, mp = state.mean[:2]
        assert (mx**2 + mp**2) / 4 == pytest.approx(alpha[0] ** 2 + alpha[1] ** 2)
        assert state.photon_number(0) == pytest.approx(alpha[0] ** 2 + alpha[1] ** 2)
        assert state.photon_number(1) == 0.0

    def test_coherent_million_photons(self):
        assert gs.make_coherent(1, 0, 1000.0).photon_number(0) == pytest.approx(1e6, rel=1e-15)

    def test_bad_mode(self):
        with pytest.raises(IndexError):
            gs.make_coherent(2, 2, 1.0)
        with pytest.raises(IndexError):
            gs.apply_phase(GaussianState.vacuum(1), -1, 0.1)
        with pytest.raises(ValueError):
            gs.apply_beamsplitter(GaussianState.vacuum(2), 0, 0, 0.5)


class TestElements:
    def test_beamsplitter_identity(self):
        state = gs.apply_single_mode_squeeze(gs.make_coherent(2, 0, 1.5, 0.2), 1, 0.3)
        assert_same_state(gs.apply_beamsplitter(state, 0, 1, 1.0), state)

    def test_beamsplitter_even_split(self):
        out = gs.apply_beamsplitter(gs.make_coherent(2, 0, 4.0), 0, 1, 0.5)
        assert out.photon_number(0) == pytest.approx(8.0)
        assert out.photon_number(1) == pytest.approx(8.0)

    @pytest.mark.parametrize("T", [0.0, 0.1, 0.37, 0.5, 0.99, 1.0])
    def test_beamsplitter_conserves_photons(self, T):
        state = gs.apply_single_mode_squeeze(gs.make_coherent(2, 0, 2.0, -0.5), 1, 0.4, 0.3)
        out = gs.apply_beamsplitter(state, 0, 1, T)
        assert out.total_photon_number() == pytest.approx(state.total_photon_number(), rel=1e-13)

    @pytest.mark.parametrize("T", [-0.1, 1.1])
    def test_beamsplitter_domain(self, T):
        with pytest.raises(ValueError):
            gs.apply_beamsplitter(GaussianState.vacuum(2), 0, 1, T)

    def test_phase(self):
        state = gs.make_coherent(1, 0, 1.0, 2.0)
        assert_same_state(gs.apply_phase(state, 0, 0.0), state)
        np.testing.assert_allclose(gs.apply_phase(state, 0, math.pi).mean, -state.mean, atol=1e-15)
        rotated = gs.apply_phase(state, 0, math.pi / 2).mean
        # x -> -p, p -> x
        np.testing.assert_allclose(rotated, [-state.mean[1], state.mean[0]], atol=1e-15)

    def test_single_mode_squeeze(self):
        vac = GaussianState.vacuum(1)
        assert_same_state(gs.apply_single_mode_squeeze(vac, 0, 0.0), vac)
        sq = gs.apply_single_mode_squeeze(vac, 0, 1.0, 0.0)
        assert gs.homodyne_stats(sq, 0, math.pi / 2).variance == pytest.approx(math.exp(-2), rel=1e-14)
        assert gs.homodyne_stats(sq, 0, 0.0).variance == pytest.approx(math.exp(2), rel=1e-14)
        assert np.linalg.det(sq.cov) == pytest.approx(1.0, rel=1e-12)

    def test_squeeze_phase_rotates_ellipse(self):
        sq = gs.apply_single_mode_squeeze(GaussianState.vacuum(1), 0, 0.8, 0.6)
        assert gs.homodyne_stats(sq, 0, math.pi / 2 + 0.6).variance == pytest.approx(math.exp(-1.6))

    def test_two_mode_squeeze(self):
        vac = GaussianState.vacuum(2)
        assert_same_state(gs.apply_two_mode_squeeze(vac, 0, 1, 0.0), vac)
        out = gs.apply_two_mode_squeeze(vac, 0, 1, 0.7)
        assert out.photon_number(1) == pytest.approx(math.sinh(0.7) ** 2)

    def test_two_mode_squeeze_amplifies_seed(self):
        # signal photons g^2 (N0 + 1) for a coherent seed of N0 photons
        n0, r = 250.0, 0.9
        out = gs.apply_two_mode_squeeze(gs.make_coherent(2, 0, math.sqrt(n0)), 0, 1, r)
        assert out.photon_number(1) == pytest.approx(math.sinh(r) ** 2 * (n0 + 1), rel=1e-13)

    def test_loss(self):
        state = gs.apply_single_mode_squeeze(gs.make_coherent(2, 0, 3.0), 1, 0.5)
        assert_same_state(gs.apply_loss(state, 0, 1.0), state)
        gone = gs.apply_loss(state, 1, 0.0)
        np.testing.assert_allclose(gone.cov[2:, 2:], np.eye(2), atol=1e-15)
        lossy = gs.apply_loss(state, 0, 0.6)
        assert lossy.photon_number(0) == pytest.approx(0.36 * 9.0)
        with pytest.raises(ValueError):
            gs.apply_loss(state, 0, 1.2)


class TestAgainstFockSpace:
    """Symplectic maps versus generators exponentiated in a truncated Fock space."""

    CUTOFF = 22

    def gaussian_and_fock(self, steps):
        state = GaussianState.vacuum(2)
        fock = TwoModes(self.CUTOFF)
        for name, args in steps:
            if name == "displace":
                k, alpha = args
                state = GaussianState(state.mean + gs.make_coherent(2, k, alpha.real, alpha.imag).mean, state.cov)
                fock.displace(k, alpha)
            elif name == "squeeze":
                state = gs.apply_single_mode_squeeze(state, *args)
                fock.squeeze(*args)
            elif name == "tms":
                state = gs.apply_two_mode_squeeze(state, 0, 1, *args)
                fock.two_mode_squeeze(*args)
            elif name == "bs":
                state = gs.apply_beamsplitter(state, 0, 1, *args)
                fock.beamsplitter(*args)
            elif name == "phase":
                state = gs.apply_phase(state, *args)
                fock.phase(*args)
        assert fock.norm_leak() < 1e-10
        return state, fock

    @pytest.mark.parametrize(
        "steps",
        [
            [("displace", (0, 1.1 + 0.4j)), ("bs", (0.3,))],
            [("squeeze", (1, 0.4)), ("displace", (0, 0.8)), ("bs", (0.6,)), ("phase", (1, 2.1)), ("bs", (0.6,))],
            [("tms", (0.35,))],
            [("displace", (0, 0.7)), ("tms", (0.3,)), ("phase", (1, math.pi)), ("tms", (0.3,))],
        ],
    )
    def test_moments(self, steps):
        state, fock = self.gaussian_and_fock(steps)
        for k in (0, 1):
            for angle in ANGLES:
                mean, var = fock.stats(fock.quadrature(k, angle))
                got = gs.homodyne_stats(state, k, angle)
                assert got.mean == pytest.approx(mean, abs=1e-8)
                assert got.variance == pytest.approx(var, abs=1e-8)
            assert state.photon_number(k) == pytest.approx(fock.photons(k), abs=1e-8)
        joint_op = fock.quadrature(0, 0.3) + fock.quadrature(1, -1.2)
        mean, var = fock.stats(joint_op)
        got = gs.joint_quadrature_stats(state, 0, 1, 0.3, -1.2)
        assert got.mean == pytest.approx(mean, abs=1e-8)
        assert got.variance == pytest.approx(var, abs=1e-8)


class TestHomodyne:
    def test_vacuum(self):
        stats = gs.homodyne_stats(GaussianState.vacuum(1), 0, 0.7)
        assert (stats.mean, stats.variance) == pytest.approx((0.0, 1.0))

    def test_joint_uncorrelated_vacua(self):
        stats = gs.joint_quadrature_stats(GaussianState.vacuum(2), 0, 1, 0.2)
        assert (stats.mean, stats.variance) == pytest.approx((0.0, 2.0))

    @pytest.mark.parametrize("r", [0.3, 1.0, 1.7])
    def test_joint_two_mode_squeezed(self, r):
        # p_a + p_b = (cosh r - sinh r)(p_a + p_b)_in
        out = gs.apply_two_mode_squeeze(GaussianState.vacuum(2), 0, 1, r)
        assert gs.joint_quadrature_stats(out, 0, 1, math.pi / 2).variance == pytest.approx(2 * math.exp(-2 * r))

    def test_joint_is_sum_without_correlations(self):
        state = gs.apply_single_mode_squeeze(gs.make_coherent(2, 0, 1.0, 2.0), 1, 0.5, 0.2)
        a = gs.homodyne_stats(state, 0, 0.4)
        b = gs.homodyne_stats(state, 1, 0.4)
        j = gs.joint_quadrature_stats(state, 0, 1, 0.4)
        assert j.mean == pytest.approx(a.mean + b.mean)
        assert j.variance == pytest.approx(a.variance + b.variance)

    @pytest.mark.parametrize("T", [0.2, 0.5, 0.9])
    @pytest.mark.parametrize("eps", [1e-4, -3e-5])
    def test_mz_output_linear_response(self, T, eps):
        # phase quadrature of b2 near the dark fringe: <X> = -2 sqrt(T(1-T)) eps |alpha|, var ~ 1
        alpha = 30.0
        state = gs.make_coherent(2, 0, alpha)
        state = gs.apply_beamsplitter(state, 0, 1, T)
        state = gs.apply_phase(state, 1, math.pi + eps)
        state = gs.apply_beamsplitter(state, 0, 1, T)
        stats = gs.homodyne_stats(state, 1, gs.PHASE_QUADRATURE)
        assert stats.mean == pytest.approx(-2 * math.sqrt(T * (1 - T)) * eps * alpha, rel=1e-6)
        assert stats.variance == pytest.approx(1.0, abs=1e-12)

    def test_mz_signal_arm_photons(self):
        T, n0 = 0.8, 1e6
        state = gs.apply_beamsplitter(gs.make_coherent(2, 0, math.sqrt(n0)), 0, 1, T)
        assert state.photon_number(1) == pytest.approx((1 - T) * n0)

    def test_su11_dark_fringe(self):
        # equal gains with a pi phase on the signal arm undo each other
        r = 1.1
        state = gs.apply_two_mode_squeeze(GaussianState.vacuum(2), 0, 1, r)
        state = gs.apply_phase(state, 1, math.pi)
        state = gs.apply_two_mode_squeeze(state, 0, 1, r)
        assert_same_state(state, GaussianState.vacuum(2), atol=1e-12)


# -- invariants ---------------------------------------------------------------

def _random_op(draw, n):
    kind = draw(st.sampled_from(["bs", "phase", "sq", "tms", "loss"]))
    modes = draw(st.permutations(range(n)))
    angle = draw(st.floats(-math.pi, math.pi))
    r = draw(st.floats(0.0, 1.5))
    unit = draw(st.floats(0.0, 1.0))
    if n == 1 and kind in ("bs", "tms"):
        kind = "phase"
    return kind, modes[0], modes[-1], angle, r, unit


def _matrix(kind, n, a, b, angle, r, unit):
    if kind == "bs":
        return gs.beamsplitter_matrix(n, a, b, unit)
    if kind == "phase":
        return gs.phase_matrix(n, a, angle)
    if kind == "sq":
        return gs.single_mode_squeeze_matrix(n, a, r, angle)
    if kind == "tms":
        return gs.two_mode_squeeze_matrix(n, a, b, r)
    return None


@st.composite
def op_sequences(draw, lossless=False):
    n = draw(st.integers(1, 4))
    ops = [_random_op(draw, n) for _ in range(draw(st.integers(1, 8)))]
    if lossless:
        ops = [op for op in ops if op[0] != "loss"] or [("phase",) + ops[0][1:]]
    return n, ops


def apply_ops(n, ops, state=None):
    state = state or GaussianState.vacuum(n)
    S = np.eye(2 * n)
    for kind, a, b, angle, r, unit in ops:
        if kind == "loss":
            state = gs.apply_loss(state, a, unit)
            S = None
            continue
        M = _matrix(kind, n, a, b, angle, r, unit)
        state = state.transform(M)
        if S is not None:
            S = M @ S
    return state, S


@settings(max_examples=200, deadline=None)
@given(op_sequences())
def test_covariance_stays_physical(seq):
    n, ops = seq
    state, _ = apply_ops(n, ops, gs.make_coherent(n, 0, 1.3, -0.4))
    np.testing.assert_allclose(state.cov, state.cov.T, atol=1e-12)
    assert np.linalg.eigvalsh(state.cov).min() >= -1e-10
    assert state.is_physical(tol=1e-9)


@settings(max_examples=200, deadline=None)
@given(op_sequences(lossless=True))
def test_lossless_sequences_are_symplectic(seq):
    n, ops = seq
    state, S = apply_ops(n, ops)
    omega = gs.symplectic_form(n)
    np.testing.assert_allclose(S @ omega @ S.T, omega, atol=1e-10 * max(1.0, np.abs(S).max() ** 2))
    assert np.linalg.det(state.cov) == pytest.approx(1.0, rel=1e-8)


@given(st.floats(0.0, 0.999), st.floats(0.1, 5.0))
def test_loss_contracts_mean(t, amplitude):
    state = gs.make_coherent(2, 1, amplitude, 0.5)
    out = gs.apply_loss(state, 1, t)
    assert np.linalg.norm(out.mean) == pytest.approx(t * np.linalg.norm(state.mean), abs=1e-12)
    assert np.linalg.norm(out.mean) < np.linalg.norm(state.mean)
