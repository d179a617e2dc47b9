import numpy as np
import pytest

from mtcs import hilbert, metrology
from mtcs.errors import NonPositiveFisher, PurityOverflow, SingularCovariance
from mtcs.hilbert import HilbertSpec
from mtcs.metrology import GaussianMoments, QubitProbeParams
from mtcs.model import SystemParams


def sld_qfi(rho_fn, t, h=1e-5):
    """Fock-space QFI 2 sum |<i|d rho|j>|^2 / (l_i + l_j) from a numerical derivative."""
    rho = rho_fn(t)
    drho = (rho_fn(t + h) - rho_fn(t - h)) / (2 * h)
    lam, v = np.linalg.eigh(rho)
    d = v.conj().T @ drho @ v
    denom = lam[:, None] + lam[None, :]
    mask = denom > 1e-14
    return float(2 * np.sum(np.abs(d[mask]) ** 2 / denom[mask]))


class TestGaussianMoments:
    def test_from_moments_round_trip(self):
        m = GaussianMoments.from_moments([0.3, -0.1], [[2.0, 0.1], [0.1, 1.5]])
        assert np.allclose(m.d, [0.3, -0.1])
        assert np.allclose(m.sigma, [[2.0, 0.1], [0.1, 1.5]])
        assert m.det == pytest.approx(2.99)
        assert m.det_excess == pytest.approx(1.99)

    def test_vacuum_is_pure(self):
        m = GaussianMoments.from_moments([0, 0], np.eye(2))
        assert m.mu == 1.0

    def test_mtcs_moments(self):
        sp = SystemParams(omega_q=0.4, g=0.4, t=1.0)
        mp = metrology.mtcs_params(sp)
        m = metrology.quadrature_moments(mp)
        assert m.d[0] == pytest.approx(2 * mp.theta * (1 - 2 * mp.p))
        assert m.sigma[0, 0] == pytest.approx(2 * mp.nbar + 1 + 16 * mp.theta**2 * mp.p * (1 - mp.p))
        assert m.sigma[1, 1] == pytest.approx(2 * mp.nbar + 1)


class TestQfiPipeline:
    def test_thermal_oscillator(self):
        fn = metrology.thermal_moments_fn(1.0)
        for t in (0.1, 0.5, 2.0):
            assert metrology.qfi_gaussian(fn, t) == pytest.approx(metrology.qfi_thermal_ho(1.0, t), rel=1e-8)

    def test_thermal_oscillator_against_fock_sld(self):
        spec = HilbertSpec(60)
        t = 0.7
        f = sld_qfi(lambda s: hilbert.thermal_state(1.0, s, spec).data, t)
        assert f == pytest.approx(metrology.qfi_thermal_ho(1.0, t), rel=1e-6)

    def test_displaced_thermal_against_fock_sld(self):
        # a genuinely Gaussian state whose displacement depends on T
        spec = HilbertSpec(60)
        omega, c = 1.0, 0.8

        def rho(s):
            d = hilbert.displacement(c * s, spec)
            return d @ hilbert.thermal_state(omega, s, spec).data @ d.conj().T

        def moments(s):
            nb = 1.0 / np.expm1(omega / s)
            return GaussianMoments(d_dev=[2 * c * s, 0.0], noise=2 * nb * np.eye(2))

        t = 0.8
        expected = sld_qfi(rho, t)
        assert metrology.qfi_gaussian(moments, t, include_first_moment=True) == pytest.approx(expected, rel=1e-6)

    def test_singular_covariance(self):
        with pytest.raises(SingularCovariance):
            metrology.qfi_gaussian(lambda s: GaussianMoments([0, 0], -np.eye(2)), 1.0)

    def test_purity_overflow(self):
        with pytest.raises(PurityOverflow):
            # det(sigma) = 1 exactly at T = 1 but changing with T
            metrology.qfi_gaussian(lambda s: GaussianMoments([0, 0], (1.0 - s) * np.eye(2)), 1.0)


class TestClosedForms:
    @pytest.mark.parametrize("variant", [False, True])
    @pytest.mark.parametrize("omega_q,g", [(0.04, 0.04), (1.0, 0.1), (0.4, 0.4)])
    def test_qfi_matches_pipeline(self, omega_q, g, variant):
        for t in (0.01, 0.05, 0.3, 1.0, 2.0):
            sp = SystemParams(omega_q=omega_q, g=g, t=t)
            closed = metrology.qfi_mtcs_closed(sp, include_first_moment=variant)
            pipe = metrology.qfi_gaussian(metrology.mtcs_moments_fn(sp), t, include_first_moment=variant)
            assert closed == pytest.approx(pipe, rel=1e-6)

    def test_zero_coupling_is_thermal_oscillator(self):
        for t in (0.05, 0.5, 2.0):
            sp = SystemParams(omega_q=1.0, g=0.0, t=t)
            assert metrology.qfi_mtcs_closed(sp) == pytest.approx(metrology.qfi_thermal_ho(1.0, t), rel=1e-12)

    @pytest.mark.parametrize("omega_q,g", [(0.04, 0.04), (1.0, 0.01), (1.0, 0.15)])
    def test_cfi_matches_pipeline(self, omega_q, g):
        for t in (0.01, 0.1, 0.5, 2.0):
            sp = SystemParams(omega_q=omega_q, g=g, t=t)
            pipe = metrology.cfi_gaussian_measurement(metrology.mtcs_moments_fn(sp), t, "x")
            assert metrology.cfi_position_closed(sp) == pytest.approx(pipe, rel=1e-6)

    def test_p_measurement_sees_thermal_part_only(self):
        sp = SystemParams(omega_q=0.4, g=0.4, t=0.8)
        cfi_p = metrology.cfi_gaussian_measurement(metrology.mtcs_moments_fn(sp), sp.t, "p")
        ho = metrology.cfi_gaussian_measurement(metrology.thermal_moments_fn(1.0), sp.t, "p")
        assert cfi_p == pytest.approx(ho, rel=1e-8)

    def test_bad_measurement(self):
        sp = SystemParams(omega_q=0.4, g=0.4, t=0.8)
        with pytest.raises(ValueError):
            metrology.cfi_gaussian_measurement(metrology.mtcs_moments_fn(sp), sp.t, "q")

    def test_fisher_ratio(self):
        fp = metrology.fisher_ratio(SystemParams(omega_q=1.0, g=0.01, t=1.0))
        assert fp.ratio == pytest.approx(fp.cfi_x / fp.qfi)
        assert fp.cfi_x <= fp.qfi_extended

    def test_low_temperature_floor(self):
        sp = SystemParams(omega_q=0.04, g=0.04, t=1e-9)
        assert metrology.qfi_mtcs_closed(sp) == 0.0
        assert metrology.fisher_ratio(sp).ratio == 0.0
        assert metrology.error_propagation(sp) == np.inf


class TestQubitProbe:
    def test_uncoupled_is_thermal_qubit(self):
        # QFI of a thermal qubit is Var(H)/T^4 = omega^2 sech^2(omega/2T) / (4 T^4)
        qp = QubitProbeParams(omega_p=1.0, omega_a=0.04, g=0.0)
        t = 0.3
        expected = np.cosh(1 / (2 * t)) ** -2 / (4 * t**4)
        assert metrology.qfi_qubit_probe(qp, t) == pytest.approx(expected, rel=1e-12)

    def test_theta(self):
        assert QubitProbeParams(1.0, 0.04, 0.5).theta_q == pytest.approx(np.pi / 4)

    def test_rejects_bad(self):
        with pytest.raises(ValueError):
            QubitProbeParams(0.0, 0.04, 0.1)


class TestErrorPropagation:
    @pytest.mark.parametrize("g", [0.0, 0.01, 0.1])
    def test_matches_moment_oracle(self, g):
        for t in (0.2, 0.7, 2.0):
            sp = SystemParams(omega_q=1.0, g=g, t=t)
            assert metrology.error_propagation(sp) == pytest.approx(metrology.error_propagation_moments(sp), rel=1e-8)

    def test_cramer_rao(self):
        f = metrology.qfi_thermal_ho(1.0, 0.5)
        assert f == pytest.approx(2.896246643865242, rel=1e-12)
        assert metrology.cramer_rao_bound(f, 100) == pytest.approx(0.058760059682190065, rel=1e-12)

    def test_cramer_rao_rejects(self):
        with pytest.raises(NonPositiveFisher):
            metrology.cramer_rao_bound(0.0)
        with pytest.raises(ValueError):
            metrology.cramer_rao_bound(1.0, 0)
