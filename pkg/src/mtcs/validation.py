"""Cross-check of the closed forms against the exact truncated-Fock-space state."""

from dataclasses import dataclass, field

import numpy as np

from . import hilbert, metrology, model, photon_stats
from .errors import MtcsError, ZeroMeanPhotonNumber
from .hilbert import HilbertSpec
from .model import SystemParams

FIDELITY_TOL = 1e-8
G2_TOL = 1e-8
MOMENT_TOL = 1e-8
QFI_REL_TOL = 1e-3

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TRUNCATION = 3
EXIT_ARGS = 4


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<22} {self.value:<12.4g} tol {self.tol:g}"
        return f"{text}  {self.detail}" if self.detail else text


@dataclass
class ValidationReport:
    params: SystemParams
    cutoff: int
    checks: list = field(default_factory=list)
    truncated: bool = False

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self):
        if self.truncated:
            return EXIT_TRUNCATION
        return EXIT_OK if self.passed else EXIT_VALIDATION

    def format(self):
        p = self.params
        head = (
            f"omega_q={p.omega_q:g} omega_r={p.omega_r:g} g={p.g:g} t={p.t:g} "
            f"cutoff={self.cutoff}"
        )
        return "\n".join([head] + [c.line() for c in self.checks]) + "\n"


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def _numeric_quadrature_moments(rho, spec: HilbertSpec):
    x, p = hilbert.quadratures(spec)
    mx = hilbert.expectation(rho, x).real
    mp_ = hilbert.expectation(rho, p).real
    sxx = hilbert.expectation(rho, x @ x).real - mx**2
    spp = hilbert.expectation(rho, p @ p).real - mp_**2
    return np.array([mx, mp_]), np.array([sxx, spp])


def validate(params: SystemParams, cutoff: int) -> ValidationReport:
    """Compare analytic and numeric resonator states at one parameter point.

    A cutoff too small for the analytic state is reported as a failed
    ``truncation`` check and the remaining checks are skipped.
    """
    spec = HilbertSpec(int(cutoff))
    report = ValidationReport(params=params, cutoff=spec.fock_cutoff)
    mp = model.mtcs_params(params)

    tail = hilbert.displaced_thermal_tail(mp.theta, mp.nbar, spec.fock_cutoff)
    ok = tail <= model.ANALYTIC_TAIL_TOL
    report.checks.append(Check("truncation", tail, model.ANALYTIC_TAIL_TOL, ok, "tail population"))
    if not ok:
        report.truncated = True
        return report

    try:
        analytic = model.mtcs_analytic(params, spec)
    except MtcsError as exc:
        report.truncated = True
        report.checks.append(Check("analytic_state", np.nan, 0.0, False, str(exc)))
        return report
    numeric = model.resonator_reduced_numeric(params, spec)

    fid = hilbert.fidelity(analytic, numeric)
    report.checks.append(Check("fidelity_deficit", 1.0 - fid, FIDELITY_TOL, 1.0 - fid <= FIDELITY_TOL))

    g2a = photon_stats.g2_analytic(mp) if mp.nbar + mp.theta > 0.0 else None
    try:
        g2n = photon_stats.g2_numeric(numeric, spec)
    except ZeroMeanPhotonNumber:
        g2n = None
    if g2a is None or g2n is None:
        report.checks.append(Check("g2", 0.0, G2_TOL, True, "undefined at <n> ~ 0, skipped"))
    else:
        err = abs(g2a - g2n)
        report.checks.append(Check("g2", err, G2_TOL, err <= G2_TOL))

    nm_a = photon_stats.number_moments_analytic(mp)
    nm_n = photon_stats.number_moments_numeric(numeric, spec)
    gm = metrology.quadrature_moments(mp)
    d_num, s_num = _numeric_quadrature_moments(numeric, spec)
    devs = [
        _rel(nm_n.mean, nm_a.mean),
        _rel(nm_n.second, nm_a.second),
        _rel(d_num[0], gm.d[0]),
        abs(d_num[1]),
        _rel(s_num[0], gm.sigma[0, 0]),
        _rel(s_num[1], gm.sigma[1, 1]),
    ]
    worst = max(devs)
    report.checks.append(
        Check("moments", worst, MOMENT_TOL, worst <= MOMENT_TOL, "<n>, <n^2>, <x>, <p>, sigma_xx, sigma_pp")
    )

    closed = metrology.qfi_mtcs_closed(params)
    pipeline = metrology.qfi_gaussian(metrology.mtcs_moments_fn(params), params.t)
    rel = abs(closed - pipeline) / abs(pipeline) if pipeline != 0.0 else abs(closed)
    report.checks.append(Check("qfi_closed_vs_pipeline", rel, QFI_REL_TOL, rel <= QFI_REL_TOL))
    return report
