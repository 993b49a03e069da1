"""Scenario runner: every computation in the package as a reproducible
command with structured config input and byte-stable tabular output.

Configuration comes from an optional JSON file (--config) overridden by
command-line flags; flags win.  Each run writes a result table (CSV or
JSON) plus a run manifest echoing the effective config, versions, and
residual diagnostics, all atomically (write to a temp name, then rename).

Exit codes: 0 success, 2 config error, 3 domain error, 1 internal failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, NCQMError
from .params import NCParams, kappa, is_singular
from .polysymbol import PolySymbol, x1, x2

DEFAULTS = {
    "theta": 0.0, "B": 1.0, "e": 1.0, "m": 1.0, "hbar": 1.0, "c": 1.0,
    "n_max": 30, "k": 5, "gauge": "symmetric", "T": 30.0, "h": 1e-3,
    "N": 1, "potential": (1.0,), "lam": 0.1, "curlyB": 1.0,
    "prescription": "antinormal", "seed": 0,
    "format": "csv", "out": ".", "xi0": (1.0, 0.0, 0.0, 0.0),
}
COMMANDS = ("spectrum", "star", "sw", "trajectory", "peierls",
            "check-algebra")
_NUMERIC_FIELDS = ("theta", "B", "e", "m", "hbar", "c", "T", "h", "lam",
                   "curlyB")


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    command: str
    theta: float
    B: float
    e: float
    m: float
    hbar: float
    c: float
    n_max: int
    k: int
    gauge: str
    T: float
    h: float
    N: int
    potential: tuple
    lam: float
    curlyB: float
    prescription: str
    seed: int
    format: str
    out: str
    xi0: tuple

    def params(self) -> NCParams:
        return NCParams(theta=self.theta, B=self.B, e=self.e, m=self.m,
                        hbar=self.hbar, c=self.c)


def validate_config(raw: dict) -> ScenarioConfig:
    """Strict schema validation of a raw config mapping.

    Unknown keys are rejected; every numeric field must be finite.
    Defaults: hbar = c = e = m = 1, n_max = 30, h = 1e-3.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = set(DEFAULTS) | {"command"}
    errors = []
    unknown = sorted(set(raw) - known)
    for key in unknown:
        errors.append(f"unknown key: {key!r}")
    command = raw.get("command")
    if command not in COMMANDS:
        errors.append(
            f"command must be one of {', '.join(COMMANDS)}; got {command!r}"
        )
    merged = dict(DEFAULTS)
    for key in set(raw) & set(DEFAULTS):
        merged[key] = raw[key]

    def as_float(key):
        try:
            value = float(merged[key])
        except (TypeError, ValueError):
            errors.append(f"{key} must be a number; got {merged[key]!r}")
            return 0.0
        if not np.isfinite(value):
            errors.append(f"{key} must be finite; got {value!r}")
        return value

    def as_int(key, minimum):
        value = merged[key]
        if not isinstance(value, int) or isinstance(value, bool):
            try:
                as_f = float(value)
            except (TypeError, ValueError):
                errors.append(f"{key} must be an integer; got {value!r}")
                return minimum
            if as_f != int(as_f):
                errors.append(f"{key} must be an integer; got {value!r}")
                return minimum
            value = int(as_f)
        if value < minimum:
            errors.append(f"{key} must be >= {minimum}; got {value}")
        return value

    numbers = {key: as_float(key) for key in _NUMERIC_FIELDS}
    n_max = as_int("n_max", 4)
    k = as_int("k", 1)
    N = as_int("N", 0)
    seed = as_int("seed", 0)
    gauge = str(merged["gauge"]).lower()
    if gauge not in ("symmetric", "landau"):
        errors.append(f"gauge must be symmetric or landau; got {gauge!r}")
    prescription = str(merged["prescription"]).lower()
    if prescription not in ("weyl", "normal", "antinormal"):
        errors.append(
            "prescription must be weyl, normal or antinormal; got "
            f"{prescription!r}"
        )
    fmt = str(merged["format"]).lower()
    if fmt not in ("csv", "json"):
        errors.append(f"format must be csv or json; got {fmt!r}")
    try:
        potential = tuple(float(v) for v in merged["potential"])
    except (TypeError, ValueError):
        errors.append(f"potential must be a list of numbers; "
                      f"got {merged['potential']!r}")
        potential = (1.0,)
    if not all(np.isfinite(v) for v in potential):
        errors.append("potential coefficients must be finite")
    try:
        xi0 = tuple(float(v) for v in merged["xi0"])
    except (TypeError, ValueError):
        errors.append(f"xi0 must be a list of numbers; got {merged['xi0']!r}")
        xi0 = (1.0, 0.0, 0.0, 0.0)
    if len(xi0) != 4:
        errors.append("xi0 must have exactly four components")
    if not all(np.isfinite(v) for v in xi0):
        errors.append("xi0 components must be finite")
    if numbers["h"] <= 0:
        errors.append("h must be positive")
    if numbers["T"] < numbers["h"]:
        errors.append("T must be at least one step h")
    if errors:
        raise ConfigError("; ".join(errors))
    return ScenarioConfig(
        command=command, n_max=n_max, k=k, N=N, seed=seed, gauge=gauge,
        prescription=prescription, format=fmt, out=str(merged["out"]),
        potential=potential, xi0=xi0, **numbers,
    )


def radial_potential(coefficients) -> PolySymbol:
    """V = sum_k c_k r^(2k) from the coefficient list (c_1, c_2, ...)."""
    r2 = x1() ** 2 + x2() ** 2
    V = PolySymbol.zero(2)
    for power, coeff in enumerate(coefficients, start=1):
        if coeff != 0.0:
            V = V + coeff * r2 ** power
    return V


def _format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise NCQMError(f"failed writing {path}: {exc}") from exc


def _jsonify(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_jsonify(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, dict):
        return {key: _jsonify(val) for key, val in value.items()}
    return value


def emit_table(columns: dict, fmt: str, path: str) -> str:
    """Write named equal-length arrays as CSV (header row, '.' decimals,
    newline-terminated) or JSON (flat object of arrays); byte-stable."""
    lengths = {len(v) for v in columns.values()}
    if len(lengths) > 1:
        raise NCQMError("table columns must have equal length")
    if fmt == "csv":
        lines = [",".join(columns)]
        for i in range(lengths.pop() if lengths else 0):
            lines.append(",".join(_format_value(col[i])
                                  for col in columns.values()))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({k: _jsonify(v) for k, v in columns.items()},
                          indent=2, sort_keys=False) + "\n"
    _atomic_write(path, text)
    return path


def _write_manifest(config: ScenarioConfig, extra: dict, path: str) -> str:
    manifest = {
        "config": _jsonify(dataclasses.asdict(config)),
        "versions": {
            "ncqmlab": __version__,
            "numpy": np.__version__,
            "python": "%d.%d" % sys.version_info[:2],
        },
    }
    manifest.update(_jsonify(extra))
    _atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# --- command implementations -------------------------------------------

def _run_spectrum(config: ScenarioConfig):
    from . import fock
    from .reps import symmetric_gauge_rep, vector_potential_rep, \
        symmetric_vector_potential

    params = config.params()
    if params.theta != 0.0:
        rep = symmetric_gauge_rep(params)
    else:
        rep = vector_potential_rep(
            symmetric_vector_potential(params.B), params)
    space = fock.FockSpace(config.n_max, scale=fock.suggested_scale(rep))
    ops = fock.realize_rep(rep, space)
    H = fock.kinetic_hamiltonian(ops, params.m)
    result = fock.spectrum(H, config.k)
    clusters = fock.dominant_clusters(result, config.k)
    columns = {
        "n": list(range(config.k)),
        "E_n": [c.mean for c in clusters],
        "multiplicity": [c.multiplicity for c in clusters],
        "spread": [c.spread for c in clusters],
    }
    extra = {
        "kappa": kappa(params),
        "rep": type(rep).__name__,
        "basis_scale": space.scale,
    }
    return columns, extra


def _run_star(config: ScenarioConfig):
    from .star import bbar_of_B, star_landau_spectrum, \
        star_commutation_table, symmetric_star_gauge

    params = config.params()
    eff = bbar_of_B(params.B, params)
    result = star_landau_spectrum(params, eff.Bbar, config.k)
    table = star_commutation_table(symmetric_star_gauge(eff.Bbar),
                                   params.theta)
    columns = {
        "n": list(range(config.k)),
        "E_n": list(result.eigenvalues),
    }
    extra = {
        "Bbar": eff.Bbar,
        "Lambda_bar": eff.Lambda_bar,
        "Lambda_bar_times_Bbar": eff.Lambda_bar * eff.Bbar,
        "m_star": eff.m_star,
        "e_star": eff.e_star,
        "field_strength_constant":
            table["field_strength"].eval((0.0, 0.0)).real,
        "jacobi_residual": table["jacobi_residual"],
    }
    return columns, extra


def _run_sw(config: ScenarioConfig):
    from .star import sw_constant_field

    params = config.params()
    eff, result = sw_constant_field(config.curlyB, params, config.k)
    columns = {
        "n": list(range(config.k)),
        "E_n": list(result.eigenvalues),
    }
    extra = {
        "B_check": eff.B_check,
        "m_check": eff.m_check,
        "Bbar": eff.Bbar,
        "B_physical": eff.B_physical,
    }
    return columns, extra


def _run_trajectory(config: ScenarioConfig):
    from .dynamics import minimal_coupling_trajectory, dominant_frequency

    params = config.params()
    if params.B != 0.0:
        raise ConfigError(
            "trajectory uses the B = 0 structure; set the field via curlyB"
        )
    traj = minimal_coupling_trajectory(params, config.gauge, config.curlyB,
                                       config.xi0, config.T, config.h)
    columns = {
        "t": list(traj.times),
        "x1": list(traj.states[:, 0]),
        "x2": list(traj.states[:, 1]),
        "p1": list(traj.states[:, 2]),
        "p2": list(traj.states[:, 3]),
        "v1": list(traj.velocities[:, 0]),
        "v2": list(traj.velocities[:, 1]),
    }
    extra = {
        "F12": traj.F12,
        "omega_predicted": traj.omega,
        "omega_fitted": dominant_frequency(traj),
        "energy_drift": traj.energy_drift,
    }
    return columns, extra


def _run_peierls(config: ScenarioConfig):
    from .peierls import peierls_spectrum

    params = config.params()
    V = radial_potential(config.potential)
    result = peierls_spectrum(V, config.lam, params, config.k,
                              n_max=config.n_max,
                              prescription=config.prescription)
    columns = {
        "n": list(range(config.k)),
        "epsilon_n": list(result.epsilon_n),
        "full_E_n": list(result.full_E_n),
        "deviation": list(result.deviations()),
    }
    extra = {
        "omega_B": result.omega_B,
        "hbar_omega_B": result.hbar_omega_B,
        "prescription": config.prescription,
        "potential": list(config.potential),
        "lam": config.lam,
    }
    return columns, extra


def _run_check_algebra(config: ScenarioConfig):
    from .reps import symmetric_gauge_rep, landau_gauge_rep, table_residual
    from .structures import symplectic_matrix, jacobi_residual, \
        StructureKind

    params = config.params()
    singular = is_singular(params)
    rng = np.random.default_rng(config.seed)
    points = rng.uniform(-1.0, 1.0, size=(10, 4))
    standard = symplectic_matrix(params, StructureKind.STANDARD)
    jac_std = max(float(np.max(np.abs(jacobi_residual(standard, pt))))
                  for pt in points)

    names = ["kappa", "jacobi_standard", "landau_rep_residual"]
    values = [kappa(params), jac_std,
              table_residual(landau_gauge_rep(params))]
    statuses = ["singular" if singular else "ok",
                "ok" if jac_std <= 1e-10 else "fail", ""]
    statuses[2] = "ok" if values[2] <= 1e-12 else "fail"
    warnings = []
    if singular:
        warnings.append(
            "kappa = 0: singular (degenerate) noncommutative phase space; "
            "exotic structure and symmetric-gauge representation undefined"
        )
    else:
        exotic = symplectic_matrix(params, StructureKind.EXOTIC)
        jac_exo = max(float(np.max(np.abs(jacobi_residual(exotic, pt))))
                      for pt in points)
        names.append("jacobi_exotic")
        values.append(jac_exo)
        statuses.append("ok" if jac_exo <= 1e-10 else "fail")
        if kappa(params) > 0 and params.theta != 0.0:
            sym_res = table_residual(symmetric_gauge_rep(params))
            names.append("symmetric_rep_residual")
            values.append(sym_res)
            statuses.append("ok" if sym_res <= 1e-12 else "fail")
    columns = {"check": names, "value": values, "status": statuses}
    extra = {"warnings": warnings, "seed": config.seed,
             "kappa": kappa(params), "singular": singular}
    return columns, extra


_RUNNERS = {
    "spectrum": _run_spectrum,
    "star": _run_star,
    "sw": _run_sw,
    "trajectory": _run_trajectory,
    "peierls": _run_peierls,
    "check-algebra": _run_check_algebra,
}


def run_scenario(config: ScenarioConfig) -> dict:
    """Execute one scenario; returns the output paths and diagnostics."""
    columns, extra = _RUNNERS[config.command](config)
    os.makedirs(config.out, exist_ok=True)
    stem = config.command.replace("-", "_")
    table_path = os.path.join(config.out, f"{stem}.{config.format}")
    manifest_path = os.path.join(config.out, f"{stem}_manifest.json")
    emit_table(columns, config.format, table_path)
    _write_manifest(config, extra, manifest_path)
    for warning in extra.get("warnings", ()):
        print(f"warning: {warning}", file=sys.stderr)
    return {"table": table_path, "manifest": manifest_path, **extra}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncqmlab",
        description="noncommutative quantum mechanics laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--theta", type=float, default=None)
        cmd.add_argument("--B", type=float, default=None)
        cmd.add_argument("--e", type=float, default=None)
        cmd.add_argument("--m", type=float, default=None)
        cmd.add_argument("--n-max", dest="n_max", type=int, default=None)
        cmd.add_argument("--k", type=int, default=None)
        cmd.add_argument("--out", type=str, default=None)
        cmd.add_argument("--format", choices=("csv", "json"), default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--config", type=str, default=None)
        cmd.add_argument("--gauge", choices=("symmetric", "landau"),
                         default=None)
        cmd.add_argument("--curlyB", type=float, default=None)
        cmd.add_argument("--T", type=float, default=None)
        cmd.add_argument("--h", type=float, default=None)
        cmd.add_argument("--N", type=int, default=None)
        cmd.add_argument("--lam", type=float, default=None)
        cmd.add_argument("--potential", type=str, default=None,
                         help="radial coefficients c1,c2,... for "
                              "V = sum c_k r^(2k)")
        cmd.add_argument("--prescription",
                         choices=("weyl", "normal", "antinormal"),
                         default=None)
        cmd.add_argument("--xi0", type=str, default=None,
                         help="initial state x1,x2,p1,p2")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") \
            from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return raw


def _parse_list(text: str, key: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{key} must be a comma-separated number list: "
                          f"{text!r}") from exc


def merge_cli(args: argparse.Namespace) -> ScenarioConfig:
    """Config file (if given) overridden by explicit flags; flags win."""
    raw = {}
    if args.config:
        raw.update(_load_config_file(args.config))
    raw["command"] = args.command
    for key in ("theta", "B", "e", "m", "n_max", "k", "out", "format",
                "seed", "gauge", "curlyB", "T", "h", "N", "lam",
                "prescription"):
        value = getattr(args, key)
        if value is not None:
            raw[key] = value
    if args.potential is not None:
        raw["potential"] = _parse_list(args.potential, "potential")
    if args.xi0 is not None:
        raw["xi0"] = _parse_list(args.xi0, "xi0")
    return validate_config(raw)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = merge_cli(args)
        result = run_scenario(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except NCQMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1
    print(f"wrote {result['table']} and {result['manifest']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
