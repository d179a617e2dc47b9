import numpy as np
import pytest

from mtcs import hilbert, model
from mtcs.errors import TruncationError
from mtcs.hilbert import HilbertSpec
from mtcs.model import MultimodeParams, SystemParams


class TestParams:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SystemParams(omega_q=0.0, g=0.1, t=1.0)
        with pytest.raises(ValueError):
            SystemParams(omega_q=1.0, g=-0.1, t=1.0)
        with pytest.raises(ValueError):
            SystemParams(omega_q=1.0, g=0.1, t=0.0)

    def test_temperature_floor(self):
        sp = SystemParams(omega_q=1.0, g=0.1, t=1e-12)
        assert sp.t == model.T_FLOOR

    def test_mtcs_params(self):
        sp = SystemParams(omega_q=1.0, g=0.2, t=0.5, omega_r=2.0)
        mp = model.mtcs_params(sp)
        assert mp.theta == pytest.approx(0.1)
        assert mp.p == pytest.approx(1.0 / (np.exp(2.0) + 1.0))
        assert mp.nbar == pytest.approx(1.0 / np.expm1(4.0))
        assert mp.phi == pytest.approx(1.0)
        assert mp.big_phi == pytest.approx(2.0)

    def test_underflow_is_nonnegative(self):
        mp = model.mtcs_params(SystemParams(omega_q=1.0, g=0.1, t=1e-6))
        assert mp.p == 0.0 and mp.nbar == 0.0

    def test_multimode_needs_modes(self):
        with pytest.raises(ValueError):
            MultimodeParams(modes=(), omega_q=1.0, t=1.0)


class TestCutoff:
    def test_minimum(self):
        assert model.auto_cutoff(SystemParams(1.0, 0.01, 0.05)) == model.MIN_CUTOFF

    def test_tail_meets_tolerance(self):
        sp = SystemParams(omega_q=1.0, g=0.4, t=2.0)
        n = model.auto_cutoff(sp)
        mp = model.mtcs_params(sp)
        assert hilbert.displaced_thermal_tail(mp.theta, mp.nbar, n) <= model.AUTO_TAIL_TOL

    def test_takes_worst_case(self):
        cold, hot = SystemParams(1.0, 0.1, 0.1), SystemParams(1.0, 0.1, 2.0)
        assert model.auto_cutoff([cold, hot]) == model.auto_cutoff(hot)

    def test_resolve_spec(self):
        assert model.resolve_spec(SystemParams(1.0, 0.1, 1.0), 33).fock_cutoff == 33


class TestHamiltonian:
    def test_hermitian_and_shape(self):
        h = model.system_hamiltonian(SystemParams(0.4, 0.3, 1.0), HilbertSpec(10))
        assert h.shape == (20, 20)
        assert np.allclose(h, h.conj().T)

    def test_polaron_spectrum(self):
        sp = SystemParams(omega_q=0.7, g=0.5, t=1.0)
        w = np.linalg.eigvalsh(model.system_hamiltonian(sp, HilbertSpec(80)))
        assert np.allclose(w[:20], model.polaron_spectrum(sp, 20), atol=1e-8)

    def test_uncoupled_is_diagonal(self):
        h = model.system_hamiltonian(SystemParams(1.0, 0.0, 1.0), HilbertSpec(4))
        assert np.allclose(h, np.diag(np.diag(h)))


class TestStates:
    def test_gibbs_of_two_level(self):
        rho = model.gibbs_state(np.diag([0.5, -0.5]), 0.5)
        assert rho.populations()[0] == pytest.approx(1.0 / (np.e**2 + 1.0))

    def test_gibbs_survives_large_energies(self):
        rho = model.gibbs_state(np.diag([1e4, 0.0]), 1e-3)
        assert np.allclose(rho.populations(), [0.0, 1.0])

    def test_qubit_reduced_is_thermal(self):
        sp = SystemParams(omega_q=0.4, g=0.4, t=0.7)
        spec = model.resolve_spec(sp)
        red = model.qubit_reduced_numeric(sp, spec)
        assert np.allclose(red.data, model.qubit_thermal(sp).data, atol=1e-12)

    @pytest.mark.parametrize("t", [0.05, 0.5, 2.0])
    def test_analytic_matches_numeric(self, t):
        sp = SystemParams(omega_q=0.4, g=0.4, t=t)
        spec = model.resolve_spec(sp)
        a = model.mtcs_analytic(sp, spec).data
        n = model.resonator_reduced_numeric(sp, spec).data
        assert np.max(np.abs(a - n)) < 1e-12

    def test_low_temperature_branch_is_coherent(self):
        sp = SystemParams(omega_q=1.0, g=0.3, t=0.01)
        spec = HilbertSpec(20)
        rho = model.mtcs_analytic(sp, spec)
        # dominant branch is the +theta coherent state
        psi = hilbert.displacement(0.3, spec)[:, 0]
        assert hilbert.fidelity(rho, hilbert.pure_state(psi)) == pytest.approx(1.0, abs=1e-7)

    def test_analytic_rejects_small_cutoff(self):
        with pytest.raises(TruncationError):
            model.mtcs_analytic(SystemParams(1.0, 0.1, 2.0), HilbertSpec(5))

    def test_zero_coupling_is_thermal(self):
        sp = SystemParams(omega_q=1.0, g=0.0, t=0.8)
        spec = HilbertSpec(40)
        rho = model.mtcs_analytic(sp, spec)
        assert np.allclose(rho.data, hilbert.thermal_state(1.0, 0.8, spec).data)


class TestMultimode:
    def test_hamiltonian_spectrum_is_polaron_sum(self):
        params = MultimodeParams(modes=((0.6, 0.1), (0.9, 0.15)), omega_q=0.5, t=1.0)
        h = model.multimode_hamiltonian(params, (12, 12))
        w = np.linalg.eigvalsh(h)[:6]
        shift = 0.1**2 / 0.6 + 0.15**2 / 0.9
        levels = sorted(
            s * 0.25 + n1 * 0.6 + n2 * 0.9 - shift
            for s in (-1, 1)
            for n1 in range(5)
            for n2 in range(5)
        )
        assert np.allclose(w, levels[:6], atol=1e-8)

    def test_cutoffs_must_match(self):
        params = MultimodeParams(modes=((0.6, 0.1),), omega_q=0.5, t=1.0)
        with pytest.raises(ValueError):
            model.multimode_hamiltonian(params, (4, 4))
