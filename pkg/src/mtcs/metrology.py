r"""Gaussian thermometry with the resonator as a probe.

Quadratures are ``x = a + a^dag`` and ``p = i(a^dag - a)`` with a plain centered
covariance, so the vacuum covariance matrix is the identity. In that
convention the resonator state has

.. math::
    d = (2\theta(1-2p),\ 0),\qquad
    \sigma = \mathrm{diag}\big(2\bar n + 1 + 16\theta^2 p(1-p),\ 2\bar n + 1\big).

The state is a two-Gaussian mixture, so every "QFI" below is the
Gaussian-equivalent QFI built from these first and second moments.

Two routes are provided for each Fisher quantity:

* a generic pipeline (:func:`qfi_gaussian`, :func:`cfi_gaussian_measurement`)
  that differentiates an arbitrary ``T -> GaussianMoments`` map by central
  differences, and
* closed forms in hyperbolic functions (:func:`qfi_mtcs_closed`,
  :func:`cfi_position_closed`) that stay finite at any clamped temperature.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _hyper as hy
from .errors import NonPositiveFisher, PurityOverflow, SingularCovariance
from .model import MtcsParams, SystemParams, mtcs_params
from .photon_stats import number_moments_analytic, number_variance_analytic

@dataclass(frozen=True)
class GaussianMoments:
    """First moments and covariance matrix of one mode.

    The moments are stored relative to fixed references: ``noise`` is
    ``sigma - I`` (the covariance above the vacuum) and ``d_dev`` is
    ``d - d_ref`` for a temperature-independent ``d_ref``. At low temperature
    both ``sigma`` and ``d`` equal their references up to exponentially small
    corrections, which are lost once the reference is added in floating point,
    but survive in the deviations that the Fisher pipelines differentiate.
    Use :meth:`from_moments` to build one from plain ``d`` and ``sigma``.
    """

    d_dev: np.ndarray
    noise: np.ndarray
    d_ref: np.ndarray = None

    def __post_init__(self):
        d_ref = np.zeros(2) if self.d_ref is None else self.d_ref
        object.__setattr__(self, "d_dev", np.asarray(self.d_dev, dtype=float).reshape(2))
        object.__setattr__(self, "noise", np.asarray(self.noise, dtype=float).reshape(2, 2))
        object.__setattr__(self, "d_ref", np.asarray(d_ref, dtype=float).reshape(2))

    @classmethod
    def from_moments(cls, d, sigma):
        return cls(d_dev=d, noise=np.asarray(sigma, dtype=float) - np.eye(2))

    @property
    def d(self):
        return self.d_ref + self.d_dev

    @property
    def sigma(self):
        return np.eye(2) + self.noise

    @property
    def det_excess(self):
        """``det(sigma) - 1`` computed from the noise matrix."""
        e = self.noise
        return float(e[0, 0] + e[1, 1] + e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0])

    @property
    def det(self):
        return 1.0 + self.det_excess

    @property
    def mu(self):
        """Purity ``1/sqrt(det sigma)``."""
        return 1.0 / np.sqrt(self.det)


@dataclass(frozen=True)
class FisherPoint:
    t: float
    qfi: float
    qfi_extended: float
    cfi_x: float
    ratio: float


@dataclass(frozen=True)
class ClosedFormTerms:
    eta: float
    alpha: float
    zeta: float
    a1: float
    a2: float
    big_a1: float
    big_b1: float


@dataclass(frozen=True)
class QubitProbeParams:
    """Qubit thermometer with an ancilla qubit."""

    omega_p: float
    omega_a: float
    g: float

    def __post_init__(self):
        if self.omega_p <= 0 or self.omega_a <= 0 or self.g < 0:
            raise ValueError("omega_p, omega_a must be positive and g non-negative")

    @property
    def theta_q(self):
        return float(np.arctan(2.0 * self.g / self.omega_p))


# -- moments ------------------------------------------------------------------


def quadrature_moments(mp: MtcsParams) -> GaussianMoments:
    th, p, nb = mp.theta, mp.p, mp.nbar
    mix = 16.0 * th**2 * p * (1.0 - p)
    # <x> = 2 theta (1 - 2p), split as 2 theta - 4 theta p
    return GaussianMoments(
        d_dev=[-4.0 * th * p, 0.0],
        noise=np.diag([2.0 * nb + mix, 2.0 * nb]),
        d_ref=[2.0 * th, 0.0],
    )


def mtcs_moments_fn(params: SystemParams) -> Callable[[float], GaussianMoments]:
    """``T -> GaussianMoments`` of the resonator state, other parameters fixed."""

    def moments(t):
        return quadrature_moments(mtcs_params(params.replace(t=t)))

    return moments


def thermal_moments_fn(omega) -> Callable[[float], GaussianMoments]:
    def moments(t):
        nb = float(hy.bose(omega / t))
        return GaussianMoments(d_dev=[0.0, 0.0], noise=2.0 * nb * np.eye(2))

    return moments


# -- derivatives --------------------------------------------------------------


def fd_step(t):
    return 1e-5 * max(t, 0.01)


def derivative(f, t, h=None):
    """Central difference of ``f`` at ``t``, Richardson-extrapolated from steps ``h`` and ``h/2``."""
    h = fd_step(t) if h is None else h

    def central(step):
        return (np.asarray(f(t + step)) - np.asarray(f(t - step))) / (2.0 * step)

    coarse = central(h)
    fine = central(0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def _moment_derivatives(moments_fn, t):
    m = moments_fn(t)
    dd = derivative(lambda s: moments_fn(s).d_dev, t)
    dnoise = derivative(lambda s: moments_fn(s).noise, t)
    ddet = float(derivative(lambda s: moments_fn(s).det_excess, t))
    return m, dd, dnoise, ddet


# -- quantum Fisher information -----------------------------------------------


def qfi_gaussian(moments_fn, t, include_first_moment=False) -> float:
    r"""Single-mode Gaussian QFI from a moments function.

    .. math::
        F = \frac{\mathrm{Tr}[(\sigma^{-1}\partial_T\sigma)^2]}{2(1+\mu^2)}
            + \frac{2(\partial_T\mu)^2}{1-\mu^4}
            \;[+\ \partial_T d^\top\sigma^{-1}\partial_T d]

    The purity term is evaluated as
    :math:`(\partial_T D)^2 / (2D(D-1)(D+1))` with ``D = det sigma`` and
    ``D - 1`` taken from the noise matrix, which is algebraically identical
    and stays accurate as ``mu -> 1`` (where ``1 - mu^4`` computed from ``mu``
    would be pure rounding noise below ~1e-9). For a pure state with a
    stationary determinant the term is taken at its limit, zero.

    Raises:
        SingularCovariance: if ``sigma`` cannot be inverted.
        PurityOverflow: if ``det sigma <= 1`` while its slope is nonzero.
    """
    m, dd, dnoise, ddet = _moment_derivatives(moments_fn, t)
    try:
        sinv = np.linalg.inv(m.sigma)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(f"covariance is singular at T={t}") from exc
    if not np.all(np.isfinite(sinv)):
        raise SingularCovariance(f"covariance is singular at T={t}")
    mu2 = 1.0 / m.det
    k = sinv @ dnoise
    value = float(np.trace(k @ k)) / (2.0 * (1.0 + mu2))
    d_exc = m.det_excess
    if d_exc > 0.0:
        value += ddet**2 / (2.0 * m.det * d_exc * (m.det + 1.0))
    elif ddet != 0.0:
        raise PurityOverflow(f"det(sigma) - 1 = {d_exc:.3g} with nonzero slope at T={t}")
    if include_first_moment:
        value += float(dd @ sinv @ dd)
    return value


def closed_form_terms(params: SystemParams) -> ClosedFormTerms:
    """Intermediates of the closed-form QFI and CFI in hyperbolic form."""
    t, wq, wr, g = params.t, params.omega_q, params.omega_r, params.g
    th = g / wr
    phi, big_phi = wq / (2.0 * t), wr / (2.0 * t)
    s2, tph = hy.sech2(phi), np.tanh(phi)
    c2 = hy.csch2(big_phi)
    tan_big = np.tanh(big_phi)
    coth_big = hy.coth(big_phi)

    eta = th**2 * s2
    zeta = 4.0 * eta + coth_big
    alpha = th**2 * wq**2 * s2**2
    a2 = tan_big / zeta
    # T^2 omega_R^2 / 2 times d(sigma_11)/dT
    slope11 = 2.0 * g**2 * wq * tph * s2 + 0.25 * wr**3 * c2
    a1 = (slope11 / zeta) ** 2 + 0.25 * wr**6 * hy.csch2(2.0 * big_phi)
    big_a1 = 4.0 * a1 / (a2 + 1.0)
    bracket = coth_big * (4.0 * g**2 * wq * tph * s2 + wr**3 * c2) + 2.0 * g**2 * wr * s2 * c2
    # zeta^3 (1 - tanh^2/zeta^2) with zeta - tanh(Phi) = 4 eta + 2 csch(2 Phi)
    denom = zeta * (4.0 * eta + 2.0 * hy.csch(2.0 * big_phi)) * (zeta + tan_big)
    big_b1 = tan_big**3 * bracket**2 / denom if denom > 0.0 else 0.0
    return ClosedFormTerms(
        eta=float(eta),
        alpha=float(alpha),
        zeta=float(zeta),
        a1=float(a1),
        a2=float(a2),
        big_a1=float(big_a1),
        big_b1=float(big_b1),
    )


def qfi_mtcs_closed(params: SystemParams, include_first_moment=False) -> float:
    """Closed-form Gaussian QFI ``(A1 + B1) / (2 T^4 omega_R^4)`` of the resonator state."""
    c = closed_form_terms(params)
    t, wr = params.t, params.omega_r
    value = (c.big_a1 + c.big_b1) / (2.0 * t**4 * wr**4)
    if include_first_moment:
        value += c.alpha / (t**4 * c.zeta)
    return float(value)


def qfi_thermal_ho(omega_osc, t) -> float:
    """``omega^2 csch^2(omega/2T) / 4T^4``."""
    return float(omega_osc**2 * hy.csch2(omega_osc / (2.0 * t)) / (4.0 * t**4))


def qfi_qubit_probe(qp: QubitProbeParams, t) -> float:
    wp, wa = qp.omega_p, qp.omega_a
    num = 2.0 * wp**2 * hy.sech2(wp / (2.0 * t)) + qp.theta_q**2 * wa**2 * hy.sech2(wa / (2.0 * t))
    return float(num / (8.0 * t**4))


# -- classical Fisher information ---------------------------------------------


def cfi_gaussian_measurement(moments_fn, t, measurement="x") -> float:
    """CFI of an ideal homodyne measurement of ``x`` or ``p``.

    The infinitely squeezed measurement covariance is taken to its limit
    analytically: only the measured diagonal entry of ``sigma`` survives.
    """
    idx = {"x": 0, "p": 1}.get(measurement)
    if idx is None:
        raise ValueError(f"measurement must be 'x' or 'p', got {measurement!r}")
    m, dd, dnoise, _ = _moment_derivatives(moments_fn, t)
    var = m.sigma[idx, idx]
    if not var > 0.0:
        raise SingularCovariance(f"sigma[{idx},{idx}] = {var} at T={t}")
    return float(dd[idx] ** 2 / var + dnoise[idx, idx] ** 2 / (2.0 * var**2))


def cfi_position_closed(params: SystemParams) -> float:
    r"""Position-measurement CFI in closed form.

    ``F_1 = alpha / (T^4 zeta)`` with ``alpha = theta^2 omega_q^2 sech^4(phi)``, and
    ``F_2 = (8 eta omega_q tanh(phi) + omega_R csch^2(Phi))^2 / (8 T^4 zeta^2)``.
    """
    c = closed_form_terms(params)
    t, wq, wr = params.t, params.omega_q, params.omega_r
    phi, big_phi = wq / (2.0 * t), wr / (2.0 * t)
    f1 = c.alpha / (t**4 * c.zeta)
    f2 = (8.0 * c.eta * wq * np.tanh(phi) + wr * hy.csch2(big_phi)) ** 2 / (8.0 * t**4 * c.zeta**2)
    return float(f1 + f2)


def fisher_ratio(params: SystemParams) -> FisherPoint:
    """QFI (both variants), position CFI and ``R = F_C / F_Q`` at one temperature.

    ``R`` is 0 where the QFI underflows to zero.
    """
    qfi = qfi_mtcs_closed(params)
    qfi_ext = qfi_mtcs_closed(params, include_first_moment=True)
    cfi = cfi_position_closed(params)
    ratio = cfi / qfi if qfi > 0.0 else 0.0
    return FisherPoint(t=params.t, qfi=qfi, qfi_extended=qfi_ext, cfi_x=cfi, ratio=ratio)


# -- error propagation and bounds ---------------------------------------------


def error_propagation(params: SystemParams) -> float:
    r"""Photon-counting estimator variance :math:`4T^4\sinh^2\Phi\,[1+2\theta^2\sinh 2\Phi]/\omega_R^2`.

    Evaluated in log space; returns ``inf`` once the result exceeds the float range.
    """
    t, wr = params.t, params.omega_r
    th = params.g / wr
    big_phi = wr / (2.0 * t)
    log_val = np.log(4.0) + 4.0 * np.log(t) + 2.0 * hy.log_sinh(big_phi) - 2.0 * np.log(wr)
    if th > 0.0:
        log_val += np.logaddexp(0.0, np.log(2.0 * th**2) + hy.log_sinh(2.0 * big_phi))
    with np.errstate(over="ignore"):
        return float(np.exp(log_val))


def error_propagation_moments(params: SystemParams) -> float:
    """``Var(n) / |d<n>/dT|^2`` from the analytic number moments and a numerical slope."""
    mp = mtcs_params(params)
    var = number_variance_analytic(mp)
    slope = float(
        derivative(lambda s: number_moments_analytic(mtcs_params(params.replace(t=s))).mean, params.t)
    )
    return var / slope**2


def cramer_rao_bound(fisher, n_measurements=1) -> float:
    """Smallest temperature uncertainty ``1 / sqrt(n F)``."""
    if not fisher > 0.0:
        raise NonPositiveFisher(f"Fisher information must be positive, got {fisher}")
    if int(n_measurements) != n_measurements or n_measurements < 1:
        raise ValueError(f"n_measurements must be a positive integer, got {n_measurements}")
    return float(1.0 / np.sqrt(n_measurements * fisher))
