"""``mtcs`` command line: sweeps, figure presets and validation reports.

Exit codes: 0 success, 2 validation failure, 3 truncation error, 4 bad arguments.
"""

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import MtcsError, TruncationError
from .figures import FIGURE_IDS, write_figure
from .model import SystemParams
from .sweep import QFI_VARIANTS, QUANTITIES, GridSpec, SweepSpec, run_sweep
from .validation import EXIT_ARGS, EXIT_OK, EXIT_TRUNCATION, EXIT_VALIDATION, validate

# config keys accepted by ``--config``; dashes and underscores are interchangeable
SWEEP_DEFAULTS = {
    "quantity": None,
    "omega_q": 1.0,
    "omega_r": 1.0,
    "g": 0.01,
    "t": 1.0,
    "vary": "t",
    "t_min": 0.01,
    "t_max": 2.0,
    "g_min": 0.0,
    "g_max": 0.1,
    "steps": 100,
    "log": False,
    "cutoff": "auto",
    "out": None,
    "format": "csv",
    "qfi_variant": "printed",
    "workers": 1,
    "baseline": False,
    "quadrature": "p",
    "modes": "",
    "scale_by": "omega_r",
    "wigner_points": 201,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def read_config(path) -> dict:
    """``key=value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key = key.strip().replace("-", "_")
        if key not in SWEEP_DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _bool(value):
    if isinstance(value, bool):
        return value
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {value!r}")


def _cutoff(value):
    if value in (None, "auto"):
        return "auto"
    try:
        n = int(value)
    except ValueError as exc:
        raise UsageError(f"cutoff must be 'auto' or an integer, got {value!r}") from exc
    if n < 2:
        raise UsageError(f"cutoff must be >= 2, got {n}")
    return n


def _modes(text):
    """``"0.3:0.01,0.4:0.01"`` -> ``((0.3, 0.01), (0.4, 0.01))``."""
    if not text:
        return ()
    modes = []
    for item in str(text).split(","):
        w, sep, g = item.partition(":")
        if not sep:
            raise UsageError(f"mode {item!r} must be omega:g")
        modes.append((float(w), float(g)))
    return tuple(modes)


def build_parser():
    parser = _Parser(prog="mtcs", description="Thermometry with mixtures of thermal coherent states.")
    parser.add_argument("--version", action="version", version=f"mtcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="evaluate one quantity over a T or g grid")
    sw.add_argument("--config", help="key=value file; flags given on the command line win")
    sw.add_argument("--quantity", choices=QUANTITIES)
    sw.add_argument("--omega-q", type=float)
    sw.add_argument("--omega-r", type=float)
    sw.add_argument("--g", type=float)
    sw.add_argument("--t", type=float, help="fixed temperature for g sweeps and wigner")
    sw.add_argument("--vary", choices=("t", "g"))
    sw.add_argument("--t-min", type=float)
    sw.add_argument("--t-max", type=float)
    sw.add_argument("--g-min", type=float)
    sw.add_argument("--g-max", type=float)
    sw.add_argument("--steps", type=int)
    sw.add_argument("--log", action="store_const", const=True, help="logarithmic grid spacing")
    sw.add_argument("--cutoff", help="'auto' or a Fock cutoff")
    sw.add_argument("--out", help="output path; stdout when omitted")
    sw.add_argument("--format", choices=("csv", "json"))
    sw.add_argument("--qfi-variant", choices=QFI_VARIANTS)
    sw.add_argument("--workers", type=int)
    sw.add_argument("--baseline", action="store_const", const=True, help="thermal oscillator QFI only")
    sw.add_argument("--quadrature", choices=("x", "p"))
    sw.add_argument("--modes", help="multimode_g2 modes as omega:g,omega:g,...")
    sw.add_argument("--scale-by", choices=("omega_r", "omega_q"))
    sw.add_argument("--wigner-points", type=int)

    fg = sub.add_parser("figure", help="run a figure preset, one file per curve")
    fg.add_argument("id", choices=FIGURE_IDS)
    fg.add_argument("--out-dir", default=".")
    fg.add_argument("--format", choices=("csv", "json"), default="csv")
    fg.add_argument("--workers", type=int, default=1)

    va = sub.add_parser("validate", help="compare analytic and numeric states at one point")
    va.add_argument("--omega-q", type=float, required=True)
    va.add_argument("--omega-r", type=float, default=1.0)
    va.add_argument("--g", type=float, required=True)
    va.add_argument("--t", type=float, required=True)
    va.add_argument("--cutoff", type=int, required=True)
    return parser


def sweep_settings(args) -> dict:
    settings = dict(SWEEP_DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in SWEEP_DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def spec_from_settings(s) -> SweepSpec:
    if not s["quantity"]:
        raise UsageError("--quantity is required (flag or config)")
    try:
        vary = str(s["vary"]).lower()
        if vary not in ("t", "g"):
            raise UsageError(f"vary must be 't' or 'g', got {vary!r}")
        lo, hi = (s["t_min"], s["t_max"]) if vary == "t" else (s["g_min"], s["g_max"])
        grid = GridSpec(
            variable=vary,
            min=float(lo),
            max=float(hi),
            steps=int(s["steps"]),
            spacing="log" if _bool(s["log"]) else "linear",
        )
        return SweepSpec(
            quantity=s["quantity"],
            omega_q=float(s["omega_q"]),
            omega_r=float(s["omega_r"]),
            g=float(s["g"]),
            t=float(s["t"]),
            grid=grid,
            fock_cutoff=_cutoff(s["cutoff"]),
            qfi_variant=s["qfi_variant"],
            baseline=_bool(s["baseline"]),
            quadrature=s["quadrature"],
            modes=_modes(s["modes"]),
            wigner_points=int(s["wigner_points"]),
            scale_by=s["scale_by"],
            workers=int(s["workers"]),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_sweep(args):
    s = sweep_settings(args)
    if s["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {s['format']!r}")
    spec = spec_from_settings(s)
    result = run_sweep(spec)
    if s["out"]:
        path = result.write(s["out"], fmt=s["format"])
        print(f"wrote {len(result.rows)} rows to {path}", file=sys.stderr)
    else:
        sys.stdout.write(result.to_json() if s["format"] == "json" else result.to_csv())
    return EXIT_OK


def cmd_figure(args):
    if args.workers < 1:
        raise UsageError("workers must be >= 1")
    for path in write_figure(args.id, args.out_dir, fmt=args.format, workers=args.workers):
        print(path)
    return EXIT_OK


def cmd_validate(args):
    try:
        params = SystemParams(omega_q=args.omega_q, g=args.g, t=args.t, omega_r=args.omega_r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.cutoff < 2:
        raise UsageError("cutoff must be >= 2")
    report = validate(params, args.cutoff)
    sys.stdout.write(report.format())
    return report.exit_code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"sweep": cmd_sweep, "figure": cmd_figure, "validate": cmd_validate}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"mtcs: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except TruncationError as exc:
        print(f"mtcs: truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except MtcsError as exc:
        print(f"mtcs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
