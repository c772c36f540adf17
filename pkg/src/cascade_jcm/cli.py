"""Command-line front end.

    cascade-jcm semiclassical --initial middle --omega0 1 --omega 1 --omega1 0.5 --t-max 25
    cascade-jcm jcm-coherent --initial lower --g 0.1 --nbar 50 --t-max 800 --plot fig3.svg
    cascade-jcm --config configs/fig2a.cfg

Settings can come from a ``key = value`` config file (``--config``); flags
given on the command line win.  Relative output and plot paths are resolved
against ``$CASCADE_JCM_OUTPUT_DIR`` when it is set.

Exit status: 0 success, 2 configuration error, 3 domain error,
4 oracle deviation above tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import fieldstats, jcm, oracle, output, semiclassical
from .core import AtomicLevel, DomainError, JcmParams, PopulationSeries, SemiclassicalParams, TimeGrid, bare_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_TOLERANCE = 4

OUTPUT_DIR_ENV = "CASCADE_JCM_OUTPUT_DIR"

COMMANDS = ("semiclassical", "jcm-number", "jcm-coherent", "oracle-check", "dressed-info")
CHECK_MODES = ("semiclassical", "jcm-number")

# (required, optional) settings per simulation kind
_PHYSICS = {
    "semiclassical": ({"initial", "omega0", "omega", "omega1", "t_max"}, {"steps"}),
    "jcm-number": ({"initial", "g", "n", "t_max"}, {"delta", "steps"}),
    "jcm-coherent": ({"initial", "g", "nbar", "t_max"}, {"delta", "steps", "tail_tol"}),
    "dressed-info": ({"g", "n"}, {"delta"}),
}
_ALL_KEYS = {"initial", "omega0", "omega", "omega1", "g", "delta", "n", "nbar", "t_max", "steps", "tail_tol"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    initial: AtomicLevel | None = None
    omega0: float | None = None
    omega: float | None = None
    omega1: float | None = None
    g: float | None = None
    delta: float | None = None
    n: int | None = None
    nbar: float | None = None
    t_max: float | None = None
    steps: int | None = None
    tail_tol: float | None = None
    format: str = "csv"
    output: Path | None = None
    plot: Path | None = None
    title: str | None = None
    mode: str | None = None  # oracle-check target
    tolerance: float | None = None

    def physics_params(self) -> dict:
        keys = _required(self) | _optional(self)
        out = {"command": self.command}
        if self.mode:
            out["mode"] = self.mode
        for key in sorted(keys):
            val = getattr(self, key)
            if val is None:
                continue
            out[key] = val.name.lower() if isinstance(val, AtomicLevel) else val
        return out

    def grid(self) -> TimeGrid:
        return TimeGrid(0.0, self.t_max, self.steps if self.steps is not None else 2001)


def _target(cfg: RunConfig) -> str:
    return cfg.mode if cfg.command == "oracle-check" else cfg.command


def _required(cfg: RunConfig) -> set:
    return _PHYSICS[_target(cfg)][0]


def _optional(cfg: RunConfig) -> set:
    return _PHYSICS[_target(cfg)][1]


def validate(cfg: RunConfig) -> RunConfig:
    """Check which settings are present for the command before computing anything."""
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}; choose one of {', '.join(COMMANDS)}")
    if cfg.command == "oracle-check":
        if cfg.mode not in CHECK_MODES:
            raise ConfigError(f"oracle-check needs --mode {' or '.join(CHECK_MODES)}")
    else:
        if cfg.mode is not None:
            raise ConfigError("--mode only applies to oracle-check")
        if cfg.tolerance is not None:
            raise ConfigError("--tolerance only applies to oracle-check")
    required, optional = _required(cfg), _optional(cfg)
    missing = sorted(k for k in required if getattr(cfg, k) is None)
    if missing:
        raise ConfigError(f"{cfg.command} requires: {', '.join('--' + k.replace('_', '-') for k in missing)}")
    extra = sorted(k for k in _ALL_KEYS - required - optional if getattr(cfg, k) is not None)
    if extra:
        raise ConfigError(f"{cfg.command} does not accept: {', '.join('--' + k.replace('_', '-') for k in extra)}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("--format must be csv or json")
    if cfg.steps is not None and cfg.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if cfg.t_max is not None and not cfg.t_max > 0:
        raise ConfigError("--t-max must be positive")
    return cfg


# --- parsing -----------------------------------------------------------

_CONVERTERS = {
    "initial": AtomicLevel.parse,
    "omega0": float,
    "omega": float,
    "omega1": float,
    "g": float,
    "delta": float,
    "n": int,
    "nbar": float,
    "t_max": float,
    "steps": int,
    "tail_tol": float,
    "tolerance": float,
    "format": str,
    "output": Path,
    "plot": Path,
    "title": str,
    "mode": str,
    "command": str,
}


def read_config_file(path: Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys equal underscores."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-jcm",
        description="Level populations of a cascade three-level atom in classical and quantized fields (hbar = 1).",
        epilog="The quantized-field figure configs (fig2*, fig3-fig5) use g = 0.1. Frequencies are in rad per unit time, hbar = 1.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="what to run (may also come from --config)")
    parser.add_argument("--config", type=Path, help="key = value settings file; flags override it")
    parser.add_argument("--initial", help="initial atomic level: upper, middle or lower")
    parser.add_argument("--omega0", help="atomic level spacing (semiclassical)")
    parser.add_argument("--omega", help="drive frequency (semiclassical)")
    parser.add_argument("--omega1", help="classical coupling strength (semiclassical)")
    parser.add_argument("--g", help="atom-field coupling (quantized field)")
    parser.add_argument("--delta", help="detuning omega0 - omega (quantized field, default 0)")
    parser.add_argument("--n", help="photon number of the middle bare state |n,0>")
    parser.add_argument("--nbar", help="mean photon number of the coherent field")
    parser.add_argument("--t-max", dest="t_max", help="end of the time grid (grid starts at 0)")
    parser.add_argument("--steps", help="number of grid points (default 2001)")
    parser.add_argument("--tail-tol", dest="tail_tol", help="Poisson tail mass allowed to be dropped (default 1e-12)")
    parser.add_argument("--mode", help="oracle-check: which closed forms to check (semiclassical or jcm-number)")
    parser.add_argument("--tolerance", help="oracle-check: max allowed population deviation (default 1e-8)")
    parser.add_argument("--format", help="csv (default) or json")
    parser.add_argument("--output", help="data file; stdout when omitted")
    parser.add_argument("--plot", help="write an SVG plot to this path")
    parser.add_argument("--title", help="plot title")
    return parser


def config_from_args(argv: list[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    raw = read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            raw[key] = value
    if "command" not in raw:
        raise ConfigError("no command given (positional argument or 'command = ...' in the config file)")
    kwargs = {}
    for key, value in raw.items():
        try:
            kwargs[key] = _CONVERTERS[key](value) if isinstance(value, str) else value
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    known = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in kwargs.items() if k in known})
    return validate(cfg)


# --- running -----------------------------------------------------------


def _resolve(path: Path) -> Path:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _jcm_params(cfg: RunConfig, n: int | None = None) -> JcmParams:
    return JcmParams(cfg.g, cfg.delta or 0.0, cfg.n if n is None else n)


def compute_series(cfg: RunConfig) -> PopulationSeries:
    grid = cfg.grid()
    if cfg.command == "semiclassical":
        params = SemiclassicalParams(cfg.omega0, cfg.omega, cfg.omega1)
        return semiclassical.population_series(params, semiclassical.SemiclassicalCase.from_level(cfg.initial), grid)
    if cfg.command == "jcm-number":
        return jcm.population_series(_jcm_params(cfg), jcm.JcmCase.from_level(cfg.initial), grid)
    if cfg.command == "jcm-coherent":
        kwargs = {} if cfg.tail_tol is None else {"tail_tol": cfg.tail_tol}
        field = fieldstats.poisson_weights(cfg.nbar, **kwargs)
        return fieldstats.averaged_populations(field, cfg.g, jcm.JcmCase.from_level(cfg.initial), grid, cfg.delta or 0.0)
    raise ConfigError(f"{cfg.command} does not produce a series")


def oracle_deviation(cfg: RunConfig) -> float:
    """Max |closed form - oracle| over the grid and all three levels."""
    grid = cfg.grid()
    initial = bare_state(cfg.initial)
    if cfg.mode == "semiclassical":
        params = SemiclassicalParams(cfg.omega0, cfg.omega, cfg.omega1)
        closed = semiclassical.population_series(params, semiclassical.SemiclassicalCase.from_level(cfg.initial), grid)
        if grid.steps == 1:
            brute = np.abs(initial.as_vector()[None, :]) ** 2
        else:
            times, amps = oracle.semiclassical_trajectory(params, initial, grid.t_end, grid.steps - 1)
            brute = np.abs(amps) ** 2
    else:
        params = _jcm_params(cfg)
        closed = jcm.population_series(params, jcm.JcmCase.from_level(cfg.initial), grid)
        brute = np.abs(oracle.jcm_trajectory(params, initial, grid.times())) ** 2
    return float(np.abs(closed.as_array() - brute).max())


def dressed_info(cfg: RunConfig) -> dict:
    params = _jcm_params(cfg)
    spec = jcm.dressed_spectrum(params)
    psi, theta, phi = spec.t_matrix.angles
    return {
        "params": cfg.physics_params(),
        "eigenvalues": [spec.lambda_plus, spec.lambda_zero, spec.lambda_minus],
        "t_matrix": [[float(v) for v in row] for row in spec.t_matrix.entries],
        "euler_angles": {"psi": psi, "theta": theta, "phi": phi},
    }


def _format_dressed(info: dict) -> str:
    lam = info["eigenvalues"]
    lines = [
        "eigenvalues (lambda+, lambda0, lambda-): " + ", ".join(format(v, ".17g") for v in lam),
        "T (rows are dressed states in the basis |n+1,->, |n,0>, |n-1,+>):",
    ]
    for row in info["t_matrix"]:
        lines.append("  " + "  ".join(format(v, " .17f") for v in row))
    ang = info["euler_angles"]
    lines.append("euler angles (rad): " + ", ".join(f"{k}={format(ang[k], '.17g')}" for k in ("psi", "theta", "phi")))
    return "\n".join(lines) + "\n"


def _emit(text: str, path: Path | None, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        output.write_text(_resolve(path), text)


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if cfg.command == "dressed-info":
        info = dressed_info(cfg)
        text = json.dumps(info, sort_keys=True, indent=1) + "\n" if cfg.format == "json" else _format_dressed(info)
        _emit(text, cfg.output, stdout)
        return EXIT_OK
    if cfg.command == "oracle-check":
        tol = 1e-8 if cfg.tolerance is None else cfg.tolerance
        dev = oracle_deviation(cfg)
        ok = dev <= tol
        stdout.write(f"max deviation {dev:.3e} (tolerance {tol:.1e}): {'PASS' if ok else 'FAIL'}\n")
        return EXIT_OK if ok else EXIT_TOLERANCE

    series = compute_series(cfg)
    if cfg.format == "json":
        text = output.to_json(series, cfg.physics_params())
    else:
        text = output.to_csv(series)
    _emit(text, cfg.output, stdout)
    if cfg.plot is not None:
        output.write_text(_resolve(cfg.plot), output.to_svg(series, cfg.title or _default_title(cfg)))
    return EXIT_OK


def _default_title(cfg: RunConfig) -> str:
    parts = [f"{k}={v}" for k, v in cfg.physics_params().items() if k not in ("t_max", "steps", "command")]
    return f"{cfg.command}: " + ", ".join(parts)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
