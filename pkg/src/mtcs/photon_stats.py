r"""Photon statistics of the resonator state.

Phase-space functions here use the quadratures :math:`x = (a + a^\dagger)/\sqrt2`,
:math:`p = i(a^\dagger - a)/\sqrt2` (vacuum variance 1/2). A branch displaced by
``theta`` therefore sits at ``x = sqrt(2) * theta``. The metrology module uses
the unnormalized ``a + a^dagger``; the two differ by a factor ``sqrt(2)``.
"""

from dataclasses import dataclass

import numpy as np

from . import hilbert
from .errors import DegenerateState, GridTooSmall, ZeroMeanPhotonNumber
from .hilbert import HilbertSpec
from .model import MtcsParams, MultimodeParams, multimode_reduced_params

WIGNER_SCALE = 1.0 / np.sqrt(2.0)
WIGNER_POINTS = 201
BOUNDARY_TOL = 1e-6


@dataclass(frozen=True)
class NumberMoments:
    mean: float
    second: float

    @property
    def variance(self):
        return self.second - self.mean**2


# -- second-order correlation -------------------------------------------------


def g2_numeric(rho, spec: HilbertSpec) -> float:
    """``<a^dag a^dag a a> / <a^dag a>^2`` from a Fock-space density matrix."""
    pops = np.real(np.diag(rho.data))
    n = np.arange(spec.fock_cutoff)
    mean = float(pops @ n)
    if mean < 1e-12:
        raise ZeroMeanPhotonNumber(f"<n> = {mean:.3g} is too small for g2")
    # a^dag a^dag a a is diagonal with entries n(n-1)
    return float(pops @ (n * (n - 1))) / mean**2


def g2_analytic(mp: MtcsParams) -> float:
    """``(theta^4 + 2 nbar^2 + 4 theta^2 nbar) / (nbar + theta^2)^2``.

    Evaluated as ``2 - (theta^2 / (nbar + theta^2))^2``, which is the same
    expression without the cancellation near the coherent limit.
    """
    th2, nb = mp.theta**2, mp.nbar
    total = nb + th2
    if total == 0.0:
        raise DegenerateState("g2 is undefined when nbar = theta = 0")
    return 2.0 - (th2 / total) ** 2


def g2_multimode(params: MultimodeParams) -> list:
    return [g2_analytic(mp) for mp in multimode_reduced_params(params)]


# -- number moments -----------------------------------------------------------


def number_moments_analytic(mp: MtcsParams) -> NumberMoments:
    nb, th2 = mp.nbar, mp.theta**2
    return NumberMoments(
        mean=nb + th2,
        second=2.0 * nb**2 + nb * (4.0 * th2 + 1.0) + th2**2 + th2,
    )


def number_variance_analytic(mp: MtcsParams) -> float:
    """``nbar (nbar + 1) + (2 nbar + 1) theta^2``, without the cancellation of ``second - mean^2``."""
    nb = mp.nbar
    return nb * (nb + 1.0) + (2.0 * nb + 1.0) * mp.theta**2


def number_moments_numeric(rho, spec: HilbertSpec) -> NumberMoments:
    pops = np.real(np.diag(rho.data))
    n = np.arange(spec.fock_cutoff)
    return NumberMoments(mean=float(pops @ n), second=float(pops @ n**2))


# -- Wigner function ----------------------------------------------------------


@dataclass(frozen=True)
class WignerGrid:
    """``values[i, j] = W(x_values[i], p_values[j])``."""

    x_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray

    @property
    def dx(self):
        return float(self.x_values[1] - self.x_values[0])

    @property
    def dp(self):
        return float(self.p_values[1] - self.p_values[0])

    @property
    def norm(self):
        return float(self.values.sum() * self.dx * self.dp)

    def x_marginal(self):
        return self.values.sum(axis=1) * self.dp

    def p_marginal(self):
        return self.values.sum(axis=0) * self.dx

    def local_maxima(self, rel=1e-3):
        """Strict 8-neighbour interior maxima above ``rel * max(W)``."""
        w = self.values
        core = w[1:-1, 1:-1]
        is_max = core > rel * w.max()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == dj == 0:
                    continue
                nb = w[1 + di : w.shape[0] - 1 + di, 1 + dj : w.shape[1] - 1 + dj]
                is_max &= core > nb
        ii, jj = np.nonzero(is_max)
        return [(float(self.x_values[i + 1]), float(self.p_values[j + 1])) for i, j in zip(ii, jj)]


def default_wigner_extent(mp: MtcsParams) -> float:
    return 4.0 + 2.0 * mp.theta + 3.0 * np.sqrt(2.0 * mp.nbar + 1.0)


def default_wigner_axes(mp: MtcsParams, points=WIGNER_POINTS):
    ext = default_wigner_extent(mp)
    axis = np.linspace(-ext, ext, points)
    return axis, axis.copy()


def wigner(rho, spec: HilbertSpec, x_values, p_values, check_boundary=True) -> WignerGrid:
    r"""Wigner function from the Fock-basis kernel.

    Each element :math:`|m\rangle\langle n|` contributes
    :math:`\frac{(-1)^m}{\pi}\sqrt{m!/n!}\,(2\alpha)^{n-m}L_m^{(n-m)}(4|\alpha|^2)e^{-2|\alpha|^2}`
    with :math:`\alpha = (x + ip)/\sqrt2`. The Laguerre factors are generated
    by their three-term recurrence so no factorials are formed explicitly.

    Raises:
        GridTooSmall: if ``check_boundary`` and ``|W|`` on the grid boundary
            exceeds 1e-6 of its maximum.
    """
    x = np.asarray(x_values, dtype=float)
    p = np.asarray(p_values, dtype=float)
    r = rho.data
    m_dim = spec.fock_cutoff
    alpha = (x[:, None] + 1j * p[None, :]) / np.sqrt(2.0)
    wl = [None] * m_dim
    wl[0] = np.exp(-2.0 * np.abs(alpha) ** 2) / np.pi
    w = np.real(r[0, 0]) * wl[0].real
    for n in range(1, m_dim):
        wl[n] = 2.0 * alpha * wl[n - 1] / np.sqrt(n)
        w = w + 2.0 * np.real(r[0, n] * wl[n])
    for m in range(1, m_dim):
        temp = wl[m]
        wl[m] = (2.0 * np.conj(alpha) * temp - np.sqrt(m) * wl[m - 1]) / np.sqrt(m)
        w = w + np.real(r[m, m] * wl[m])
        for n in range(m + 1, m_dim):
            nxt = (2.0 * alpha * wl[n - 1] - np.sqrt(m) * temp) / np.sqrt(n)
            temp = wl[n]
            wl[n] = nxt
            w = w + 2.0 * np.real(r[m, n] * wl[n])
    grid = WignerGrid(x, p, np.real(w))
    if check_boundary:
        edge = max(
            np.abs(grid.values[0]).max(),
            np.abs(grid.values[-1]).max(),
            np.abs(grid.values[:, 0]).max(),
            np.abs(grid.values[:, -1]).max(),
        )
        peak = np.abs(grid.values).max()
        if edge > BOUNDARY_TOL * peak:
            raise GridTooSmall(f"|W| on the boundary is {edge / peak:.2e} of its maximum")
    return grid


def hermite_functions(n_max, x) -> np.ndarray:
    """Oscillator eigenfunctions ``psi_n(x)`` for ``n < n_max`` (vacuum variance 1/2)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max, x.size))
    out[0] = np.pi**-0.25 * np.exp(-(x**2) / 2.0)
    if n_max > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(2, n_max):
        out[n] = np.sqrt(2.0 / n) * x * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


def position_density(rho, spec: HilbertSpec, x_values) -> np.ndarray:
    """``<x|rho|x>`` in the phase-space convention."""
    psi = hermite_functions(spec.fock_cutoff, x_values)
    return np.real(np.einsum("mi,mn,ni->i", psi, rho.data, psi))


# -- Gaussianity --------------------------------------------------------------


def excess_kurtosis(rho, spec: HilbertSpec, quadrature="p") -> float:
    """``<q^4>/<q^2>^2 - 3`` for the centered quadrature ``q``; zero for a Gaussian marginal."""
    x, p = hilbert.quadratures(spec)
    if quadrature == "x":
        q = x
    elif quadrature == "p":
        q = p
    else:
        raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    mean = hilbert.expectation(rho, q).real
    qc = q - mean * np.eye(spec.fock_cutoff)
    q2 = qc @ qc
    m2 = hilbert.expectation(rho, q2).real
    m4 = hilbert.expectation(rho, q2 @ q2).real
    return m4 / m2**2 - 3.0
