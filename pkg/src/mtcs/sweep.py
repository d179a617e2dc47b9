"""Parameter sweeps and their flat-file output.

A :class:`SweepSpec` names a quantity, the fixed parameters and a one-dimensional
grid over ``t`` or ``g``. :func:`run_sweep` evaluates the quantity at every
grid point and returns a :class:`SweepResult` that serializes to CSV (a ``#``
header block of ``key=value`` lines, a title row, then 17-significant-digit
rows) or to an equivalent JSON object.
"""

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, hilbert, metrology, model, photon_stats
from .errors import MtcsError
from .model import MultimodeParams, SystemParams

QUANTITIES = (
    "g2",
    "wigner",
    "qfi",
    "cfi",
    "ratio",
    "kurtosis",
    "error_prop",
    "fidelity",
    "qubit_vs_resonator",
    "multimode_g2",
)
FOCK_QUANTITIES = {"g2", "wigner", "kurtosis", "fidelity"}
QFI_VARIANTS = ("printed", "extended")


def fmt(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def fmt_meta(value):
    """Shortest round-tripping form, so headers read as the parameters were given."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class GridSpec:
    variable: str = "t"
    min: float = 0.01
    max: float = 2.0
    steps: int = 100
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in ("t", "g"):
            raise ValueError(f"grid variable must be 't' or 'g', got {self.variable!r}")
        if not self.min < self.max:
            raise ValueError(f"grid needs min < max, got {self.min} and {self.max}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"grid needs at least 2 steps, got {self.steps}")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.min <= 0:
            raise ValueError("log spacing needs a positive minimum")

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, int(self.steps))
        return np.linspace(self.min, self.max, int(self.steps))


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    omega_q: float = 1.0
    omega_r: float = 1.0
    g: float = 0.01
    t: float = 1.0
    grid: GridSpec = field(default_factory=GridSpec)
    fock_cutoff: object = "auto"
    qfi_variant: str = "printed"
    baseline: bool = False
    quadrature: str = "p"
    modes: tuple = ()
    wigner_points: int = photon_stats.WIGNER_POINTS
    wigner_extent: float = None
    scale_by: str = "omega_r"
    workers: int = 1
    note: str = ""

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; choose from {QUANTITIES}")
        if self.qfi_variant not in QFI_VARIANTS:
            raise ValueError(f"qfi_variant must be one of {QFI_VARIANTS}")
        if self.quantity == "multimode_g2" and not self.modes:
            raise ValueError("multimode_g2 needs at least one mode")
        if self.quadrature not in ("x", "p"):
            raise ValueError(f"quadrature must be 'x' or 'p', got {self.quadrature!r}")
        if self.scale_by not in ("omega_r", "omega_q"):
            raise ValueError("scale_by must be 'omega_r' or 'omega_q'")
        if self.fock_cutoff != "auto" and self.fock_cutoff is not None:
            hilbert.HilbertSpec(int(self.fock_cutoff))
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")

    def params_at(self, value) -> SystemParams:
        fixed = dict(omega_q=self.omega_q, omega_r=self.omega_r, g=self.g, t=self.t)
        fixed[self.grid.variable] = float(value)
        return SystemParams(**fixed)

    def multimode_at(self, value) -> MultimodeParams:
        t = float(value) if self.grid.variable == "t" else self.t
        modes = self.modes
        if self.grid.variable == "g":
            modes = tuple((w, float(value)) for w, _ in modes)
        return MultimodeParams(modes=modes, omega_q=self.omega_q, t=t)


@dataclass
class SweepResult:
    meta: dict
    columns: list
    rows: list

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}={fmt_meta(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": {k: (float(v) if isinstance(v, np.floating) else v) for k, v in self.meta.items()},
            "columns": list(self.columns),
            "rows": [[float(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"

    def write(self, path, fmt="csv"):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = self.to_json() if fmt == "json" else self.to_csv()
        path.write_text(text)
        return path

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)

    @classmethod
    def read_csv(cls, path):
        meta, lines = {}, []
        for line in Path(path).read_text().splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            else:
                lines.append(line)
        reader = csv.reader(lines)
        columns = next(reader)
        rows = [[float(v) for v in r] for r in reader]
        return cls(meta=meta, columns=columns, rows=rows)


# -- per-point evaluators -----------------------------------------------------


def _columns(spec: SweepSpec):
    q = spec.quantity
    if q == "g2":
        return ["g2_analytic", "g2_numeric"]
    if q == "qfi":
        if spec.baseline:
            return ["qfi_thermal_ho"]
        return ["qfi", "qfi_closed", "qfi_thermal_ho"]
    if q == "cfi":
        return ["cfi_x", "cfi_x_pipeline", "cfi_p"]
    if q == "ratio":
        return ["qfi", "qfi_extended", "cfi_x", "ratio"]
    if q == "kurtosis":
        return [f"kappa_{spec.quadrature}"]
    if q == "error_prop":
        return ["delta2_t"]
    if q == "fidelity":
        return ["fidelity", "mean_n_analytic", "mean_n_numeric", "g2_analytic", "g2_numeric"]
    if q == "qubit_vs_resonator":
        return ["qfi_resonator", "qfi_qubit", "ratio"]
    if q == "multimode_g2":
        return [f"g2_mode_{i + 1}" for i in range(len(spec.modes))]
    raise ValueError(q)


def _evaluate(spec: SweepSpec, value, hspec):
    q = spec.quantity
    if q == "multimode_g2":
        return photon_stats.g2_multimode(spec.multimode_at(value))
    sp = spec.params_at(value)
    ext = spec.qfi_variant == "extended"
    if q == "g2":
        rho = model.resonator_reduced_numeric(sp, hspec)
        return [photon_stats.g2_analytic(model.mtcs_params(sp)), photon_stats.g2_numeric(rho, hspec)]
    if q == "qfi":
        ho = metrology.qfi_thermal_ho(sp.omega_r, sp.t)
        if spec.baseline:
            return [ho]
        pipeline = metrology.qfi_gaussian(metrology.mtcs_moments_fn(sp), sp.t, include_first_moment=ext)
        return [pipeline, metrology.qfi_mtcs_closed(sp, include_first_moment=ext), ho]
    if q == "cfi":
        fn = metrology.mtcs_moments_fn(sp)
        return [
            metrology.cfi_position_closed(sp),
            metrology.cfi_gaussian_measurement(fn, sp.t, "x"),
            metrology.cfi_gaussian_measurement(fn, sp.t, "p"),
        ]
    if q == "ratio":
        fp = metrology.fisher_ratio(sp)
        return [fp.qfi, fp.qfi_extended, fp.cfi_x, fp.ratio]
    if q == "kurtosis":
        rho = model.resonator_reduced_numeric(sp, hspec)
        return [photon_stats.excess_kurtosis(rho, hspec, spec.quadrature)]
    if q == "error_prop":
        return [metrology.error_propagation(sp)]
    if q == "fidelity":
        analytic = model.mtcs_analytic(sp, hspec)
        numeric = model.resonator_reduced_numeric(sp, hspec)
        mp = model.mtcs_params(sp)
        return [
            hilbert.fidelity(analytic, numeric),
            photon_stats.number_moments_analytic(mp).mean,
            photon_stats.number_moments_numeric(numeric, hspec).mean,
            photon_stats.g2_analytic(mp),
            photon_stats.g2_numeric(numeric, hspec),
        ]
    if q == "qubit_vs_resonator":
        qp = metrology.QubitProbeParams(omega_p=sp.omega_r, omega_a=sp.omega_q, g=sp.g)
        res = metrology.qfi_mtcs_closed(sp, include_first_moment=ext)
        qub = metrology.qfi_qubit_probe(qp, sp.t)
        return [res, qub, res / qub if qub > 0 else 0.0]
    raise ValueError(q)


def _resolve_cutoff(spec: SweepSpec, grid_values):
    if spec.quantity not in FOCK_QUANTITIES:
        return None
    if spec.fock_cutoff not in (None, "auto"):
        return hilbert.HilbertSpec(int(spec.fock_cutoff))
    if spec.quantity == "wigner":
        return model.resolve_spec(SystemParams(spec.omega_q, spec.g, spec.t, spec.omega_r))
    return model.resolve_spec([spec.params_at(v) for v in grid_values])


def _meta(spec: SweepSpec, hspec):
    meta = {
        "software": "mtcs",
        "version": __version__,
        "quantity": spec.quantity,
        "omega_q": spec.omega_q,
        "omega_r": spec.omega_r,
    }
    if spec.quantity == "multimode_g2":
        meta["modes"] = ";".join(f"{fmt_meta(w)}:{fmt_meta(g)}" for w, g in spec.modes)
    elif spec.grid.variable != "g" or spec.quantity == "wigner":
        meta["g"] = spec.g
    if spec.quantity == "wigner" or spec.grid.variable == "g":
        meta["t"] = spec.t
    if spec.quantity != "wigner":
        meta.update(
            grid_variable=spec.grid.variable,
            grid_min=spec.grid.min,
            grid_max=spec.grid.max,
            grid_steps=int(spec.grid.steps),
            grid_spacing=spec.grid.spacing,
        )
    meta["fock_cutoff"] = hspec.fock_cutoff if hspec is not None else "none"
    if spec.quantity in ("qfi", "qubit_vs_resonator"):
        meta["qfi_variant"] = spec.qfi_variant
    if spec.quantity == "qfi":
        meta["baseline"] = "thermal_ho" if spec.baseline else "none"
    if spec.quantity == "kurtosis":
        meta["quadrature"] = spec.quadrature
    if spec.quantity == "qubit_vs_resonator":
        meta["probe_mapping"] = "omega_p=omega_r;omega_a=omega_q"
    meta["quadrature_convention"] = (
        "x=(a+a^dag)/sqrt2" if spec.quantity == "wigner" else "x=a+a^dag"
    )
    meta["scale_by"] = spec.scale_by
    if spec.note:
        meta["note"] = spec.note
    return meta


def _run_wigner(spec: SweepSpec, hspec):
    sp = SystemParams(spec.omega_q, spec.g, spec.t, spec.omega_r)
    mp = model.mtcs_params(sp)
    rho = model.resonator_reduced_numeric(sp, hspec)
    if spec.wigner_extent is None:
        x, p = photon_stats.default_wigner_axes(mp, spec.wigner_points)
    else:
        x = np.linspace(-spec.wigner_extent, spec.wigner_extent, spec.wigner_points)
        p = x.copy()
    grid = photon_stats.wigner(rho, hspec, x, p)
    meta = _meta(spec, hspec)
    meta["wigner_points"] = int(spec.wigner_points)
    meta["wigner_norm"] = grid.norm
    rows = [[xi, pj, grid.values[i, j]] for i, xi in enumerate(x) for j, pj in enumerate(p)]
    return SweepResult(meta=meta, columns=["x", "p", "W"], rows=rows)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate ``spec.quantity`` over the grid.

    Raises:
        MtcsError: the first failing grid point aborts the sweep; the message
            names the grid variable and value.
    """
    grid_values = spec.grid.values()
    try:
        hspec = _resolve_cutoff(spec, grid_values)
    except MtcsError as exc:
        exc.args = (f"resolving cutoff: {exc}",) + exc.args[1:]
        raise
    if spec.quantity == "wigner":
        return _run_wigner(spec, hspec)

    def point(value):
        try:
            return [float(v) for v in _evaluate(spec, value, hspec)]
        except MtcsError as exc:
            exc.args = (f"at {spec.grid.variable}={value:.6g}: {exc}",) + exc.args[1:]
            raise

    workers = int(spec.workers)
    if workers == 1:
        values = [point(v) for v in grid_values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(point, grid_values))
    rows = [[float(v)] + vals for v, vals in zip(grid_values, values)]
    for row in rows:
        if not all(np.isfinite(row)):
            raise MtcsError(f"non-finite value at {spec.grid.variable}={row[0]:.6g}: {row}")
    columns = [spec.grid.variable] + _columns(spec)
    return SweepResult(meta=_meta(spec, hspec), columns=columns, rows=rows)
