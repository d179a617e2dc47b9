"""Preset sweeps for the reference figures, one per curve, with fixed parameters.

Each preset is a list of ``(curve_name, SweepSpec)``; :func:`reproduce_figure`
runs them and :func:`write_figure` writes one file per curve.
"""

from dataclasses import replace
from pathlib import Path

from .sweep import GridSpec, SweepSpec, run_sweep

FIGURE_IDS = (
    "fig2a",
    "fig2bc",
    "fig3",
    "fig4",
    "fig5",
    "fig6a",
    "fig6b",
    "fig7",
    "fig8",
    "fig9",
    "fig10",
    "figQR",
)

SCALE_NOTE = (
    "units ambiguous between omega_r and omega_q; omega_q=1 so values are "
    "given in units of omega_q"
)


def _t_grid(t_min, t_max, steps, spacing="linear"):
    return GridSpec("t", t_min, t_max, steps, spacing)


def presets(fig_id) -> list:
    if fig_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {FIGURE_IDS}")
    if fig_id == "fig2a":
        grid = _t_grid(0.03, 2.0, 100)
        return [(f"g{g}", SweepSpec("g2", omega_q=1.0, g=g, grid=grid)) for g in (0.01, 0.04)]
    if fig_id == "fig2bc":
        return [
            (f"T{t}", SweepSpec("wigner", omega_q=0.01, g=1.0, t=t)) for t in (0.03, 2.0)
        ]
    if fig_id == "fig3":
        modes = tuple((w, 0.01) for w in (0.3, 0.4, 0.5, 0.6))
        spec = SweepSpec(
            "multimode_g2",
            omega_q=1.0,
            modes=modes,
            grid=_t_grid(0.01, 2.0, 200, "log"),
            scale_by="omega_q",
            note=SCALE_NOTE,
        )
        return [("modes", spec)]
    if fig_id == "fig4":
        grid = _t_grid(0.005, 1.0, 200, "log")
        out = [(f"g{g}", SweepSpec("qfi", omega_q=0.04, g=g, grid=grid)) for g in (0.02, 0.03, 0.04)]
        out.append(("thermal_ho", SweepSpec("qfi", omega_q=0.04, g=0.0, grid=grid, baseline=True)))
        return out
    if fig_id == "fig5":
        return [("g0.01", SweepSpec("ratio", omega_q=1.0, g=0.01, grid=_t_grid(0.05, 2.0, 200)))]
    if fig_id == "fig6a":
        grid = _t_grid(0.01, 2.0, 200, "log")
        return [(f"g{g}", SweepSpec("cfi", omega_q=1.0, g=g, grid=grid)) for g in (0.001, 0.08, 0.15)]
    if fig_id == "fig6b":
        grid = _t_grid(0.005, 1.0, 200, "log")
        return [(f"g{g}", SweepSpec("cfi", omega_q=0.04, g=g, grid=grid)) for g in (0.02, 0.03, 0.04)]
    if fig_id == "fig7":
        return [("g0.4", SweepSpec("fidelity", omega_q=0.4, g=0.4, grid=_t_grid(0.05, 2.0, 40)))]
    if fig_id == "fig8":
        grid = _t_grid(0.01, 2.0, 100)
        return [
            ("a", SweepSpec("kurtosis", omega_q=0.04, g=0.06, grid=grid)),
            ("b", SweepSpec("kurtosis", omega_q=0.01, g=1.0, grid=grid)),
        ]
    if fig_id == "fig9":
        grid = _t_grid(0.2, 2.0, 100)
        return [(f"g{g}", SweepSpec("error_prop", omega_q=1.0, g=g, grid=grid)) for g in (0.01, 0.05, 0.1)]
    if fig_id == "fig10":
        grid = GridSpec("g", 0.0, 0.2, 101)
        return [("T0.02", SweepSpec("qfi", omega_q=0.04, t=0.02, grid=grid))]
    # figQR: probe frequency on omega_r, ancilla frequency on omega_q
    grid = _t_grid(0.005, 1.0, 200, "log")
    return [("g0.04", SweepSpec("qubit_vs_resonator", omega_q=0.04, omega_r=1.0, g=0.04, grid=grid))]


def reproduce_figure(fig_id, workers=1) -> list:
    """Run every curve of a preset; returns ``[(curve_name, SweepResult), ...]``."""
    out = []
    for name, spec in presets(fig_id):
        if workers != 1:
            spec = replace(spec, workers=workers)
        out.append((name, run_sweep(spec)))
    return out


def write_figure(fig_id, out_dir, fmt="csv", workers=1) -> list:
    out_dir = Path(out_dir)
    paths = []
    for name, result in reproduce_figure(fig_id, workers=workers):
        paths.append(result.write(out_dir / f"{fig_id}_{name}.{fmt}", fmt=fmt))
    return paths
