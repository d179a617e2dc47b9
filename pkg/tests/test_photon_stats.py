import numpy as np
import pytest

from mtcs import hilbert, model, photon_stats
from mtcs.errors import DegenerateState, GridTooSmall, ZeroMeanPhotonNumber
from mtcs.hilbert import HilbertSpec
from mtcs.model import MtcsParams, MultimodeParams, SystemParams


def params_for(omega_q, g, t):
    sp = SystemParams(omega_q=omega_q, g=g, t=t)
    return sp, model.mtcs_params(sp), model.resolve_spec(sp)


class TestG2:
    def test_coherent_limit(self):
        mp = MtcsParams(theta=0.5, p=0.0, nbar=0.0, phi=np.inf, big_phi=np.inf)
        assert photon_stats.g2_analytic(mp) == pytest.approx(1.0)

    def test_thermal_limit(self):
        mp = MtcsParams(theta=0.0, p=0.5, nbar=1.3, phi=0.0, big_phi=0.3)
        assert photon_stats.g2_analytic(mp) == pytest.approx(2.0)

    def test_degenerate(self):
        mp = MtcsParams(theta=0.0, p=0.0, nbar=0.0, phi=np.inf, big_phi=np.inf)
        with pytest.raises(DegenerateState):
            photon_stats.g2_analytic(mp)

    def test_fock_one_has_zero_g2(self):
        spec = HilbertSpec(5)
        assert photon_stats.g2_numeric(hilbert.fock_state(1, spec), spec) == 0.0

    def test_vacuum_raises(self):
        spec = HilbertSpec(5)
        with pytest.raises(ZeroMeanPhotonNumber):
            photon_stats.g2_numeric(hilbert.fock_state(0, spec), spec)

    @pytest.mark.parametrize("t", [0.1, 0.7, 2.0])
    def test_numeric_matches_analytic(self, t):
        sp, mp, spec = params_for(0.4, 0.4, t)
        rho = model.resonator_reduced_numeric(sp, spec)
        assert photon_stats.g2_numeric(rho, spec) == pytest.approx(photon_stats.g2_analytic(mp), abs=1e-8)

    def test_multimode_against_two_mode_numeric(self):
        params = MultimodeParams(modes=((0.8, 0.2), (1.1, 0.3)), omega_q=0.6, t=0.6)
        cut = 20
        rho = model.gibbs_state(model.multimode_hamiltonian(params, (cut, cut)), params.t)
        t = rho.data.reshape(2, cut, cut, 2, cut, cut)
        modes = [np.einsum("iabicb->ac", t), np.einsum("iabiac->bc", t)]
        spec = HilbertSpec(cut)
        expected = [photon_stats.g2_numeric(hilbert.DensityMatrix(m), spec) for m in modes]
        assert np.allclose(photon_stats.g2_multimode(params), expected, atol=1e-8)


class TestNumberMoments:
    def test_variance_forms_agree(self):
        mp = model.mtcs_params(SystemParams(1.0, 0.3, 1.5))
        nm = photon_stats.number_moments_analytic(mp)
        assert nm.variance == pytest.approx(photon_stats.number_variance_analytic(mp), rel=1e-12)

    def test_numeric(self):
        sp, mp, spec = params_for(0.4, 0.4, 1.0)
        rho = model.resonator_reduced_numeric(sp, spec)
        num = photon_stats.number_moments_numeric(rho, spec)
        ana = photon_stats.number_moments_analytic(mp)
        assert num.mean == pytest.approx(ana.mean, rel=1e-10)
        assert num.second == pytest.approx(ana.second, rel=1e-10)


class TestWigner:
    axis = np.linspace(-6, 6, 121)

    def test_vacuum(self):
        spec = HilbertSpec(6)
        grid = photon_stats.wigner(hilbert.fock_state(0, spec), spec, self.axis, self.axis)
        xx, pp = np.meshgrid(self.axis, self.axis, indexing="ij")
        assert np.allclose(grid.values, np.exp(-(xx**2 + pp**2)) / np.pi, atol=1e-14)

    def test_fock_one(self):
        spec = HilbertSpec(6)
        grid = photon_stats.wigner(hilbert.fock_state(1, spec), spec, self.axis, self.axis)
        xx, pp = np.meshgrid(self.axis, self.axis, indexing="ij")
        r2 = xx**2 + pp**2
        assert np.allclose(grid.values, (2 * r2 - 1) * np.exp(-r2) / np.pi, atol=1e-14)
        assert grid.values.min() == pytest.approx(-1 / np.pi, abs=1e-3)

    def test_coherent_state_is_shifted_gaussian(self):
        spec = HilbertSpec(40)
        alpha = 1.0 + 0.5j
        psi = hilbert.displacement(alpha, spec)[:, 0]
        grid = photon_stats.wigner(hilbert.pure_state(psi), spec, self.axis, self.axis)
        xx, pp = np.meshgrid(self.axis, self.axis, indexing="ij")
        x0, p0 = np.sqrt(2) * alpha.real, np.sqrt(2) * alpha.imag
        assert np.allclose(grid.values, np.exp(-((xx - x0) ** 2 + (pp - p0) ** 2)) / np.pi, atol=1e-12)

    def test_grid_too_small(self):
        spec = HilbertSpec(6)
        small = np.linspace(-1, 1, 11)
        with pytest.raises(GridTooSmall):
            photon_stats.wigner(hilbert.fock_state(0, spec), spec, small, small)

    def test_mtcs_marginal_matches_position_density(self):
        sp, mp, spec = params_for(0.01, 1.0, 0.3)
        rho = model.resonator_reduced_numeric(sp, spec)
        x, p = photon_stats.default_wigner_axes(mp, 161)
        grid = photon_stats.wigner(rho, spec, x, p)
        assert grid.norm == pytest.approx(1.0, abs=1e-6)
        assert np.allclose(grid.x_marginal(), photon_stats.position_density(rho, spec, x), atol=1e-10)

    def test_two_branches_at_low_temperature(self):
        sp, mp, spec = params_for(0.01, 1.0, 0.03)
        rho = model.resonator_reduced_numeric(sp, spec)
        grid = photon_stats.wigner(rho, spec, *photon_stats.default_wigner_axes(mp, 121))
        peaks = sorted(x for x, _ in grid.local_maxima())
        assert len(peaks) == 2
        assert peaks[0] == pytest.approx(-np.sqrt(2), abs=0.15)
        assert peaks[1] == pytest.approx(np.sqrt(2), abs=0.15)


class TestKurtosis:
    def test_zero_for_fock_vacuum(self):
        spec = HilbertSpec(10)
        assert photon_stats.excess_kurtosis(hilbert.fock_state(0, spec), spec, "x") == pytest.approx(0.0, abs=1e-12)

    def test_fock_one(self):
        # <x^4>/<x^2>^2 = 15/9 for |1> in any normalization
        spec = HilbertSpec(10)
        assert photon_stats.excess_kurtosis(hilbert.fock_state(1, spec), spec, "p") == pytest.approx(15 / 9 - 3)

    def test_p_is_gaussian_x_is_not(self):
        sp, mp, spec = params_for(0.01, 1.0, 0.3)
        rho = model.resonator_reduced_numeric(sp, spec)
        assert abs(photon_stats.excess_kurtosis(rho, spec, "p")) < 1e-9
        assert photon_stats.excess_kurtosis(rho, spec, "x") < -0.1

    def test_bad_quadrature(self):
        spec = HilbertSpec(4)
        with pytest.raises(ValueError):
            photon_stats.excess_kurtosis(hilbert.fock_state(0, spec), spec, "q")
