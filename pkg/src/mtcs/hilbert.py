r"""Dense operator algebra on truncated Hilbert spaces.

Operators are plain complex ``numpy`` arrays. Density matrices are wrapped in
:class:`DensityMatrix`, which checks trace, Hermiticity and positivity on
construction.

The resonator space is truncated to the Fock levels ``0 .. N-1``. Composite
spaces are ordered ``qubit (x) resonator``, so that ``kron(sigma_z, a)`` acts
as :math:`\sigma_z \otimes a`.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammainc, gammaln, logsumexp

from .errors import DimensionMismatch, InvalidDensityMatrix, NotHermitian, TruncationError

HERMITIAN_TOL = 1e-10
DENSITY_TOL = 1e-10
DISPLACEMENT_TAIL_TOL = 1e-8
FIDELITY_CLIP = 1e-12


@dataclass(frozen=True)
class HilbertSpec:
    """Truncated resonator space with Fock levels ``0 .. fock_cutoff - 1``."""

    fock_cutoff: int

    def __post_init__(self):
        n = self.fock_cutoff
        if isinstance(n, bool) or int(n) != n or n < 2:
            raise ValueError(f"fock_cutoff must be an integer >= 2, got {n!r}")
        object.__setattr__(self, "fock_cutoff", int(n))

    @property
    def dim(self):
        return self.fock_cutoff


def as_operator(op) -> np.ndarray:
    """Validate and return ``op`` as a square, finite complex matrix."""
    m = np.asarray(op, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"operator must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    return m


def hermiticity_error(op) -> float:
    m = np.asarray(op)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


class DensityMatrix:
    """A validated density matrix.

    Args:
        data: square complex matrix.
        tol: slack allowed on the trace, Hermiticity and positivity checks.

    Raises:
        InvalidDensityMatrix: if any property is violated beyond ``tol``.
    """

    __slots__ = ("data", "tol")

    def __init__(self, data, tol=DENSITY_TOL):
        m = as_operator(data)
        tr = np.trace(m)
        if abs(tr - 1.0) > tol:
            raise InvalidDensityMatrix(f"trace is {tr}, expected 1 within {tol:g}")
        herr = hermiticity_error(m)
        if herr > tol:
            raise InvalidDensityMatrix(f"not Hermitian: max deviation {herr:.3g}")
        lmin = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
        if lmin < -tol:
            raise InvalidDensityMatrix(f"negative eigenvalue {lmin:.3g}")
        m.setflags(write=False)
        self.data = m
        self.tol = tol

    @classmethod
    def from_unnormalized(cls, m, tol=DENSITY_TOL):
        """Hermitize and normalize ``m`` before validating."""
        m = np.asarray(m, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        return cls(m / np.trace(m).real, tol=tol)

    @property
    def dim(self):
        return self.data.shape[0]

    def populations(self):
        return np.real(np.diag(self.data)).copy()

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.data)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def _data(rho):
    return rho.data if isinstance(rho, DensityMatrix) else as_operator(rho)


# -- constructors -------------------------------------------------------------


def identity(dim) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def annihilation(spec: HilbertSpec) -> np.ndarray:
    """Ladder operator with ``a[n-1, n] = sqrt(n)``."""
    n = spec.fock_cutoff
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


def creation(spec: HilbertSpec) -> np.ndarray:
    return annihilation(spec).conj().T


def number(spec: HilbertSpec) -> np.ndarray:
    return np.diag(np.arange(spec.fock_cutoff, dtype=float)).astype(complex)


def sigma_z() -> np.ndarray:
    """Pauli z in the (excited, ground) ordering."""
    return np.array([[1, 0], [0, -1]], dtype=complex)


def sigma_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def sigma_plus() -> np.ndarray:
    """Raising operator |e><g|."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def sigma_minus() -> np.ndarray:
    return sigma_plus().conj().T


def quadratures(spec: HilbertSpec, scale=1.0):
    """Return ``(x, p)`` with ``x = scale*(a + a^dag)`` and ``p = i*scale*(a^dag - a)``.

    ``scale=1`` is the metrology convention (vacuum variance 1);
    ``scale=1/sqrt(2)`` the phase-space convention (vacuum variance 1/2).
    """
    a = annihilation(spec)
    ad = a.conj().T
    return scale * (a + ad), 1j * scale * (ad - a)


def thermal_state(omega, t, spec: HilbertSpec) -> DensityMatrix:
    """Thermal state of a mode of frequency ``omega``, renormalized on the truncated space."""
    levels = np.arange(spec.fock_cutoff)
    w = np.exp(-omega * levels / t)
    return DensityMatrix(np.diag(w / w.sum()).astype(complex))


def fock_state(n, spec: HilbertSpec) -> DensityMatrix:
    rho = np.zeros((spec.fock_cutoff, spec.fock_cutoff), dtype=complex)
    rho[n, n] = 1.0
    return DensityMatrix(rho)


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


# -- tail estimates -----------------------------------------------------------


def coherent_tail(alpha, cutoff) -> float:
    """Population above level ``cutoff - 1`` of the coherent state |alpha>."""
    x = abs(alpha) ** 2
    if x == 0.0:
        return 0.0
    return float(gammainc(cutoff, x))


def displaced_thermal_populations(alpha, nbar, n_max) -> np.ndarray:
    r"""Photon-number distribution of :math:`D(\alpha)\rho_{th}D(\alpha)^\dagger`.

    Uses the Laguerre form

    .. math::
        P(n) = \frac{\bar n^n}{(1+\bar n)^{n+1}}
               e^{-|\alpha|^2/(1+\bar n)} L_n\!\left(-\frac{|\alpha|^2}{\bar n(1+\bar n)}\right)

    evaluated in log space (every term of :math:`L_n(-x)` is positive).
    Returns ``P(0) .. P(n_max - 1)`` of the untruncated state.
    """
    x = abs(alpha) ** 2
    n = np.arange(n_max)
    if nbar <= 0.0 or not np.isfinite(np.log(nbar)):
        if x == 0.0:
            return (n == 0).astype(float)
        return np.exp(n * np.log(x) - x - gammaln(n + 1))
    log_q = np.log(nbar) - np.log1p(nbar)
    log_p = n * log_q - np.log1p(nbar)
    if x == 0.0:
        return np.exp(log_p)
    log_y = np.log(x) - np.log(nbar) - np.log1p(nbar)
    k = np.arange(n_max)
    # log C(n, k) + k log y - log k!, masked to k <= n
    terms = (
        gammaln(n[:, None] + 1)
        - gammaln(k[None, :] + 1)
        - gammaln(np.maximum(n[:, None] - k[None, :], 0) + 1)
        + k[None, :] * log_y
        - gammaln(k[None, :] + 1)
    )
    terms = np.where(k[None, :] <= n[:, None], terms, -np.inf)
    log_lag = logsumexp(terms, axis=1)
    return np.exp(log_p - x / (1.0 + nbar) + log_lag)


def displaced_thermal_tail(alpha, nbar, cutoff) -> float:
    """Population above level ``cutoff - 1`` of a displaced thermal state."""
    x = abs(alpha) ** 2
    if nbar <= 0.0:
        return coherent_tail(alpha, cutoff)
    if x == 0.0:
        return float(np.exp(cutoff * (np.log(nbar) - np.log1p(nbar))))
    probs = displaced_thermal_populations(alpha, nbar, cutoff)
    return float(max(0.0, 1.0 - probs.sum()))


# -- algebra ------------------------------------------------------------------


def kron(a, b) -> np.ndarray:
    return np.kron(as_operator(a), as_operator(b))


def partial_trace(rho, dims, keep) -> DensityMatrix:
    """Reduced state of a bipartite density matrix.

    Args:
        rho: density matrix on a space of dimension ``d_A * d_B``.
        dims: ``(d_A, d_B)``.
        keep: ``"A"``/``0`` to keep the first factor, ``"B"``/``1`` for the second.
    """
    m = _data(rho)
    da, db = (int(d) for d in dims)
    if m.shape[0] != da * db:
        raise DimensionMismatch(f"state has dim {m.shape[0]}, dims give {da}*{db}")
    t = m.reshape(da, db, da, db)
    if keep in ("A", 0):
        red = np.einsum("ijkj->ik", t)
    elif keep in ("B", 1):
        red = np.einsum("ijik->jk", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    tol = rho.tol if isinstance(rho, DensityMatrix) else DENSITY_TOL
    return DensityMatrix(0.5 * (red + red.conj().T), tol=tol)


def hermitian_function(h, f: Callable[[np.ndarray], np.ndarray], tol=HERMITIAN_TOL) -> np.ndarray:
    """Apply a real scalar map ``f`` to a Hermitian matrix through its eigenbasis.

    Raises:
        NotHermitian: if ``h`` deviates from Hermitian by more than ``tol``
            (scaled by ``max(1, max|h|)``).
    """
    m = as_operator(h)
    scale = max(1.0, float(np.max(np.abs(m))))
    if hermiticity_error(m) > tol * scale:
        raise NotHermitian(f"matrix is not Hermitian within {tol:g}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    out = (v * np.asarray(f(w))) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def displacement(alpha, spec: HilbertSpec, check=True) -> np.ndarray:
    r"""Displacement operator :math:`\exp(\alpha a^\dagger - \alpha^* a)`.

    The anti-Hermitian generator ``G`` is exponentiated through the
    eigendecomposition of the Hermitian matrix ``iG``, so the truncated result
    is exactly unitary.

    Raises:
        TruncationError: if ``check`` and the coherent-state population above
            the cutoff exceeds 1e-8.
    """
    alpha = complex(alpha)
    if check:
        tail = coherent_tail(alpha, spec.fock_cutoff)
        if tail > DISPLACEMENT_TAIL_TOL:
            raise TruncationError(
                f"|alpha|={abs(alpha):.3g} leaves population {tail:.2e} above cutoff "
                f"{spec.fock_cutoff}",
                tail=tail,
                cutoff=spec.fock_cutoff,
            )
    if alpha == 0:
        return identity(spec.fock_cutoff)
    a = annihilation(spec)
    gen = alpha * a.conj().T - alpha.conjugate() * a
    w, v = np.linalg.eigh(1j * gen)
    return (v * np.exp(-1j * w)) @ v.conj().T


def expectation(rho, obs) -> complex:
    """``Tr[rho obs]``."""
    m = _data(rho)
    o = as_operator(obs)
    if m.shape != o.shape:
        raise DimensionMismatch(f"state dim {m.shape[0]} vs observable dim {o.shape[0]}")
    return complex(np.einsum("ij,ji->", m, o))


def fidelity(rho, sigma) -> float:
    r"""Uhlmann fidelity :math:`(\mathrm{Tr}\sqrt{\sqrt\rho\,\sigma\sqrt\rho})^2`, clamped to [0, 1]."""
    r = _data(rho)
    s = _data(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"dims differ: {r.shape[0]} vs {s.shape[0]}")
    sqrt_r = hermitian_function(r, lambda w: np.sqrt(np.clip(w, 0.0, None)))
    m = sqrt_r @ s @ sqrt_r
    lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    # negative noise from near-singular states
    lam = np.where((lam < 0.0) & (lam > -FIDELITY_CLIP), 0.0, lam)
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))) ** 2)
    return min(1.0, max(0.0, f))
