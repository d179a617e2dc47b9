r"""Qubit-resonator model, its Gibbs steady state and the reduced resonator state.

The system Hamiltonian (units :math:`\hbar = k_B = 1`) is

.. math::
    H_S = \frac{\omega_q}{2}\sigma_z + \omega_R a^\dagger a + g\,\sigma_z (a + a^\dagger).

Tracing the qubit out of :math:`e^{-H_S/T}/Z` leaves the resonator in the
mixture of two oppositely displaced thermal states

.. math::
    \rho^{(R)} = p\,D(-\theta)\rho_{th}D(-\theta)^\dagger
               + (1-p)\,D(\theta)\rho_{th}D(\theta)^\dagger,

with :math:`\theta = g/\omega_R` and :math:`p = 1/(e^{\omega_q/T}+1)`.

Conventions: ``p`` is the weight of the qubit's *excited* level, so at low
temperature the dominant branch is the ``(1 - p)`` one, displaced by
``+theta``. The qubit basis is ordered (excited, ground).
"""

from dataclasses import dataclass
from math import ceil
from typing import Sequence

import numpy as np

from . import hilbert
from ._hyper import bose, fermi
from .errors import TruncationError
from .hilbert import DensityMatrix, HilbertSpec

T_FLOOR = 1e-6
ANALYTIC_TAIL_TOL = 1e-8
AUTO_TAIL_TOL = 1e-12
MIN_CUTOFF = 20
MAX_CUTOFF = 2000


def _positive(name, value):
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters, by default in units of the resonator frequency.

    The temperature is clamped to ``>= 1e-6 * omega_r`` so that Boltzmann
    factors stay representable.
    """

    omega_q: float
    g: float
    t: float
    omega_r: float = 1.0

    def __post_init__(self):
        _positive("omega_q", self.omega_q)
        _positive("omega_r", self.omega_r)
        _positive("t", self.t)
        if not np.isfinite(self.g) or self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g!r}")
        for name in ("omega_q", "g", "t", "omega_r"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "t", max(self.t, T_FLOOR * self.omega_r))

    @property
    def beta(self):
        return 1.0 / self.t

    def replace(self, **changes):
        fields = dict(omega_q=self.omega_q, g=self.g, t=self.t, omega_r=self.omega_r)
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class MtcsParams:
    """Scalars that parameterize every closed form.

    ``p`` and ``nbar`` underflow to exactly zero at the clamped temperature
    floor, so they are only guaranteed non-negative.
    """

    theta: float
    p: float
    nbar: float
    phi: float
    big_phi: float


@dataclass(frozen=True)
class MultimodeParams:
    modes: tuple
    omega_q: float
    t: float

    def __post_init__(self):
        modes = tuple((float(w), float(g)) for w, g in self.modes)
        if not modes:
            raise ValueError("at least one mode is required")
        for w, g in modes:
            _positive("mode frequency", w)
            if g < 0:
                raise ValueError(f"mode coupling must be >= 0, got {g}")
        _positive("omega_q", self.omega_q)
        _positive("t", self.t)
        object.__setattr__(self, "modes", modes)

    def mode_params(self, i) -> SystemParams:
        w, g = self.modes[i]
        return SystemParams(omega_q=self.omega_q, g=g, t=self.t, omega_r=w)


def mtcs_params(params: SystemParams) -> MtcsParams:
    t = params.t
    return MtcsParams(
        theta=params.g / params.omega_r,
        p=float(fermi(params.omega_q / t)),
        nbar=float(bose(params.omega_r / t)),
        phi=params.omega_q / (2.0 * t),
        big_phi=params.omega_r / (2.0 * t),
    )


def multimode_reduced_params(params: MultimodeParams) -> list:
    return [mtcs_params(params.mode_params(i)) for i in range(len(params.modes))]


def auto_cutoff(params, tail_tol=AUTO_TAIL_TOL) -> int:
    """Fock cutoff for one or more parameter sets.

    Starts from ``max(20, ceil(10 (nbar + theta^2) + 10))`` and grows until the
    displaced-thermal population above the cutoff is below ``tail_tol``.
    """
    if isinstance(params, SystemParams):
        params = [params]
    best = MIN_CUTOFF
    for sp in params:
        mp = mtcs_params(sp)
        n = max(MIN_CUTOFF, ceil(10.0 * (mp.nbar + mp.theta**2) + 10.0))
        while hilbert.displaced_thermal_tail(mp.theta, mp.nbar, n) > tail_tol:
            n = ceil(n * 1.15) + 1
            if n > MAX_CUTOFF:
                raise TruncationError(
                    f"no cutoff below {MAX_CUTOFF} reaches tail {tail_tol:g}", cutoff=n
                )
        best = max(best, n)
    return best


def resolve_spec(params, cutoff=None) -> HilbertSpec:
    if cutoff is None or cutoff == "auto":
        return HilbertSpec(auto_cutoff(params))
    return HilbertSpec(int(cutoff))


# -- operators and states -----------------------------------------------------


def system_hamiltonian(params: SystemParams, spec: HilbertSpec) -> np.ndarray:
    """``H_S`` on the ``2N``-dimensional qubit (x) resonator space."""
    a = hilbert.annihilation(spec)
    n_op = hilbert.number(spec)
    sz = hilbert.sigma_z()
    i2 = hilbert.identity(2)
    i_r = hilbert.identity(spec.fock_cutoff)
    return (
        0.5 * params.omega_q * np.kron(sz, i_r)
        + params.omega_r * np.kron(i2, n_op)
        + params.g * np.kron(sz, a + a.conj().T)
    )


def polaron_spectrum(params: SystemParams, n_levels: int) -> np.ndarray:
    """Lowest ``n_levels`` of ``{s omega_q/2 + n omega_R - g^2/omega_R}``, sorted."""
    n = np.arange(n_levels)
    shift = params.g**2 / params.omega_r
    levels = np.concatenate(
        [0.5 * params.omega_q + n * params.omega_r, -0.5 * params.omega_q + n * params.omega_r]
    )
    return np.sort(levels)[:n_levels] - shift


def gibbs_state(h, t) -> DensityMatrix:
    """``exp(-h/t) / Z`` with the ground energy subtracted before exponentiating."""
    if t <= 0:
        raise ValueError(f"temperature must be positive, got {t}")
    m = hilbert.as_operator(h)
    scale = max(1.0, float(np.max(np.abs(m))))
    if hilbert.hermiticity_error(m) > hilbert.HERMITIAN_TOL * scale:
        raise hilbert.NotHermitian("Hamiltonian is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    weights = np.exp(-(w - w[0]) / t)
    weights /= weights.sum()
    rho = (v * weights) @ v.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def qubit_thermal(params: SystemParams) -> DensityMatrix:
    """``diag(exp(-phi), exp(phi)) / Z_q`` in the (excited, ground) basis."""
    p = float(fermi(params.omega_q / params.t))
    return DensityMatrix(np.diag([p, 1.0 - p]).astype(complex))


def mtcs_analytic(params: SystemParams, spec: HilbertSpec) -> DensityMatrix:
    """The analytic mixture of two oppositely displaced thermal states.

    Raises:
        TruncationError: if a branch leaves more than 1e-8 of its population
            above the cutoff.
    """
    mp = mtcs_params(params)
    tail = hilbert.displaced_thermal_tail(mp.theta, mp.nbar, spec.fock_cutoff)
    if tail > ANALYTIC_TAIL_TOL:
        raise TruncationError(
            f"cutoff {spec.fock_cutoff} leaves population {tail:.2e} in the tail "
            f"(theta={mp.theta:.3g}, nbar={mp.nbar:.3g})",
            tail=tail,
            cutoff=spec.fock_cutoff,
        )
    rho_th = hilbert.thermal_state(params.omega_r, params.t, spec).data
    if mp.theta == 0.0:
        return DensityMatrix(rho_th)
    d_minus = hilbert.displacement(-mp.theta, spec, check=False)
    d_plus = hilbert.displacement(mp.theta, spec, check=False)
    rho = mp.p * d_minus @ rho_th @ d_minus.conj().T
    rho = rho + (1.0 - mp.p) * d_plus @ rho_th @ d_plus.conj().T
    return DensityMatrix.from_unnormalized(rho)


def full_gibbs_state(params: SystemParams, spec: HilbertSpec) -> DensityMatrix:
    return gibbs_state(system_hamiltonian(params, spec), params.t)


def resonator_reduced_numeric(params: SystemParams, spec: HilbertSpec) -> DensityMatrix:
    rho = full_gibbs_state(params, spec)
    return hilbert.partial_trace(rho, (2, spec.fock_cutoff), keep="B")


def qubit_reduced_numeric(params: SystemParams, spec: HilbertSpec) -> DensityMatrix:
    rho = full_gibbs_state(params, spec)
    return hilbert.partial_trace(rho, (2, spec.fock_cutoff), keep="A")


def multimode_hamiltonian(params: MultimodeParams, cutoffs: Sequence[int]) -> np.ndarray:
    """Qubit coupled to several modes; space ordered qubit (x) mode_1 (x) mode_2 ..."""
    if len(cutoffs) != len(params.modes):
        raise ValueError("one cutoff per mode is required")
    dims = [2] + [int(c) for c in cutoffs]

    def embed(op, slot):
        out = np.array([[1.0 + 0j]])
        for i, d in enumerate(dims):
            out = np.kron(out, op if i == slot else np.eye(d))
        return out

    h = 0.5 * params.omega_q * embed(hilbert.sigma_z(), 0)
    sz = hilbert.sigma_z()
    for i, ((w, g), c) in enumerate(zip(params.modes, cutoffs), start=1):
        spec = HilbertSpec(c)
        a = hilbert.annihilation(spec)
        h = h + w * embed(hilbert.number(spec), i)
        x_full = embed(a + a.conj().T, i)
        h = h + g * embed(sz, 0) @ x_full
    return h
