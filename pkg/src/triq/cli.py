"""Command-line front end.

Every subcommand accepts the model flags; values can also come from a flat
``key=value`` file given with ``--config`` (flags win).  The effective
configuration is echoed to stderr as ``# key=value`` lines and embedded in
JSON and SVG output.

Exit codes: 0 ok, 2 usage error, 3 numeric failure (JSON error on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from triq import analytic
from triq.classical import classical_ground_search, classical_xy_energy
from triq.correlations import PATHS, classify_regime, correlation_report, derivative_in_j, ground_t3, magnetization, solve_ground
from triq.emit import emit_csv, emit_svg, format_csv
from triq.errors import AnalyticDomainError, ConvergenceError, InvalidConfigError, TriqError, UsageError
from triq.hamiltonian import QUBITS, CouplingConfig, build_hamiltonian, eigendecompose
from triq.sweep import QUANTITIES, Axis, SweepResult, SweepSpec, run_sweep
from triq.thermal import temperature_grid
from triq.validate import GRIDS, oracle_check

COMMANDS = ("spectrum", "ground", "correlations", "susceptibility", "thermal", "sweep", "classical", "validate")

DEFAULTS = {
    "j": 1.0,
    "h": 1.0,
    "eta": 1.0,
    "omega": 1.0,
    "central": "B",
    "temperature": None,
    "axis1": None,
    "axis2": None,
    "quantity": None,
    "format": None,
    "out": None,
    "path": "analytic-first",
    "fd_step": None,
    "threads": None,
    "t_max": 1.5,
    "t_count": 50,
    "plot": None,
    "couplings": None,
    "thetas": None,
    "resolution": 96,
    "grid": "default",
}

_FLOAT_KEYS = {"j", "h", "eta", "omega", "fd_step", "t_max"}
_INT_KEYS = {"threads", "t_count", "resolution"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _model_flags(p):
    g = p.add_argument_group("model")
    g.add_argument("--j", type=float, help="coupling J in units of h (J>0 frustrated)")
    g.add_argument("--h", type=float, help="transverse field (default 1)")
    g.add_argument("--eta", type=float, help="A-C bond anisotropy")
    g.add_argument("--omega", type=float, help="B-C bond anisotropy")
    g.add_argument("--central", choices=QUBITS, help="focus qubit of T3 (default B)")
    g.add_argument("--temperature", help="temperature, or a comma list for sweeps")
    g.add_argument("--path", choices=PATHS, help="closed forms first, or exact diagonalization only")
    g.add_argument("--fd-step", dest="fd_step", type=float, help="finite-difference step in J")
    g.add_argument("--format", choices=("csv", "json", "svg"))
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--config", help="key=value file; command-line flags override it")
    g.add_argument("--threads", type=int, help="sweep worker threads (default TRIQ_THREADS or CPU count)")


def build_parser():
    parser = _Parser(prog="triq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (
        ("spectrum", "all eight energy levels"),
        ("ground", "ground-state energy and amplitudes"),
        ("correlations", "negativities, T3 and susceptibilities of the ground state"),
        ("susceptibility", "dT3/dJ and dM/dJ with the regime they indicate"),
    ):
        _model_flags(sub.add_parser(name, help=help_text))

    p = sub.add_parser("thermal", help="T3 of the Gibbs state at one temperature or along a curve")
    _model_flags(p)
    p.add_argument("--t-max", dest="t_max", type=float, help="top of the temperature grid (default 1.5)")
    p.add_argument("--t-count", dest="t_count", type=int, help="temperature grid size (default 50)")
    p.add_argument("--axis2", help="series axis for curves, e.g. 'j=-6,-4,-2,2,4,6'")

    p = sub.add_parser("sweep", help="evaluate quantities over a parameter grid")
    _model_flags(p)
    p.add_argument("--axis1", help="name:min:max:count or name=v1,v2,...")
    p.add_argument("--axis2", help="second axis, same syntax")
    p.add_argument("--quantity", help="comma list from " + ",".join(QUANTITIES))
    p.add_argument("--plot", choices=("heatmap", "lines"), help="SVG kind (default heatmap for 2 axes)")

    p = sub.add_parser("classical", help="classical XY triangle energy / minimum")
    _model_flags(p)
    # negative lists must be attached with '=', e.g. --couplings=-1,-1,-1
    p.add_argument("--couplings", help="J_AB,J_BC,J_AC (default from --j/--eta/--omega)")
    p.add_argument("--thetas", help="three angles in radians; omit to search the minimum")
    p.add_argument("--resolution", type=int, help="angle grid points per free angle (default 96)")

    p = sub.add_parser("validate", help="closed forms versus exact diagonalization")
    _model_flags(p)
    p.add_argument("--grid", choices=tuple(GRIDS), help="grid size (default 'default')")
    return parser


def read_config_file(path):
    """Flat ``key=value`` lines; ``#`` comments and blank lines ignored."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        values[key] = _coerce(key, value)
    return values


def _coerce(key, value):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None
    return value


def effective_config(args):
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["command"] = args.command
    if cfg["central"] not in QUBITS:
        raise UsageError(f"central must be one of {QUBITS}")
    if cfg["path"] not in PATHS:
        raise UsageError(f"path must be one of {PATHS}")
    if cfg["format"] is None:
        cfg["format"] = "csv" if args.command == "sweep" else "json"
    if cfg["format"] not in ("csv", "json", "svg"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    if cfg["format"] == "svg":
        if args.command not in ("sweep", "thermal"):
            raise UsageError("svg output is only available for sweep and thermal")
        if not cfg["out"]:
            raise UsageError("svg output needs --out")
    return cfg


def _temperatures(cfg):
    raw = cfg["temperature"]
    if raw is None:
        return None
    try:
        values = [float(t) for t in str(raw).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad temperature {raw!r}") from None
    if not values:
        raise UsageError("empty temperature list")
    return values


def _model(cfg):
    return CouplingConfig(j=cfg["j"], h=cfg["h"], eta=cfg["eta"], omega=cfg["omega"])


_COMMON_KEYS = ("command", "j", "h", "eta", "omega", "central", "path", "format", "out")
_EXTRA_KEYS = {
    "correlations": ("fd_step",),
    "susceptibility": ("fd_step",),
    "thermal": ("temperature", "t_max", "t_count", "axis2", "threads"),
    "sweep": ("axis1", "axis2", "quantity", "temperature", "fd_step", "plot", "threads"),
    "classical": ("couplings", "thetas", "resolution"),
    "validate": ("grid",),
}


def _echo(cfg):
    keys = _COMMON_KEYS + _EXTRA_KEYS.get(cfg["command"], ())
    return {k: cfg[k] for k in sorted(keys) if cfg.get(k) is not None}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _write_text(text, out):
    if out:
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _records_result(header, rows):
    return SweepResult(header=list(header), rows=rows, axis_names=[], quantities=[])


def _output(cfg, payload, table=None, result=None):
    """Write ``payload`` (JSON) or a table/result (CSV/SVG) per the format."""
    fmt = cfg["format"]
    if fmt == "json":
        doc = {"config": _echo(cfg), **payload}
        _write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n", cfg["out"])
    elif fmt == "csv":
        res = result if result is not None else table
        if res is None:
            raise UsageError("csv output is not available for this command")
        if cfg["out"]:
            emit_csv(res, cfg["out"])
        else:
            sys.stdout.write(format_csv(res))
    else:
        kind = cfg["plot"] or ("heatmap" if len(result.axis_names) == 2 and cfg["command"] == "sweep" else "lines")
        emit_svg(result, kind, cfg["out"], config_echo=_echo(cfg))


# --------------------------------------------------------------------------
# subcommands; each returns the summary line


def cmd_spectrum(cfg):
    model = _model(cfg)
    used = "numeric"
    if cfg["path"] == "analytic-first" and model.h == 1.0 and model.omega == 1.0:
        try:
            energies = np.sort(analytic.analytic_spectrum_one_param(model.j, model.eta))
            used = "analytic"
        except AnalyticDomainError:
            energies = None
    if used == "numeric":
        energies = eigendecompose(build_hamiltonian(model)).energies
    table = _records_result(["index", "energy", "path"], [[k, float(e), used] for k, e in enumerate(energies)])
    _output(cfg, {"energies": energies, "gap": float(energies[1] - energies[0]), "path": used}, table=table)
    return f"spectrum: E0={energies[0]:.10g} gap={energies[1] - energies[0]:.6g} path={used}"


def cmd_ground(cfg):
    model = _model(cfg)
    state, energy, used, flags = solve_ground(model, cfg["path"])
    table = _records_result(
        ["basis", "amplitude", "path"], [[format(k, "03b"), float(a), used] for k, a in enumerate(state)]
    )
    payload = {
        "energy": energy,
        "amplitudes": state,
        "magnetization": magnetization(state),
        "path": used,
        "flags": flags,
    }
    _output(cfg, payload, table=table)
    return f"ground: E0={energy:.10g} path={used}"


def cmd_correlations(cfg):
    report = correlation_report(_model(cfg), cfg["path"], cfg["fd_step"], cfg["central"])
    d = report.to_dict()
    table = _records_result(
        ["quantity", "value", "path"],
        [[k, v, report.path] for k, v in d.items() if isinstance(v, float)],
    )
    _output(cfg, d, table=table)
    key = f"t3_central_{cfg['central'].lower()}"
    return f"correlations: {key}={d[key]:.10g} regime={report.regime} path={report.path}"


def cmd_susceptibility(cfg):
    model = _model(cfg)
    central, path, step = cfg["central"], cfg["path"], cfg["fd_step"]
    t3_value = ground_t3(model, central, path)
    chi_t3, one_sided = derivative_in_j(lambda j: ground_t3(model.replace(j=j), central, path), model.j, step)
    chi_m, _ = derivative_in_j(lambda j: magnetization(solve_ground(model.replace(j=j), path)[0]), model.j, step)
    used = solve_ground(model, path)[2]
    regime = classify_regime(t3_value, chi_t3)
    flags = ["one-sided"] if one_sided else []
    payload = {"t3": t3_value, "chi_t3": chi_t3, "chi_m": chi_m, "regime": regime, "path": used, "flags": flags}
    table = _records_result(
        ["quantity", "value", "path"], [["t3", t3_value, used], ["chi_t3", chi_t3, used], ["chi_m", chi_m, used]]
    )
    _output(cfg, payload, table=table)
    return f"susceptibility: chi_t3={chi_t3:.6g} chi_m={chi_m:.6g} regime={regime} path={used}"


def _run(spec, cfg):
    result = run_sweep(spec, threads=cfg["threads"])
    failed = [row for row in result.rows if row[result.header.index("path")] == "failed"]
    return result, failed


def cmd_thermal(cfg):
    model = _model(cfg)
    temps = _temperatures(cfg)
    fixed = {"j": model.j, "h": model.h, "eta": model.eta, "omega": model.omega}
    quantities = ("thermal_t3",)
    if temps is None:
        if cfg["t_count"] < 4:
            raise UsageError("--t-count must be at least 4")
        t_axis = Axis("T", tuple(float(t) for t in temperature_grid(cfg["t_max"], cfg["t_count"])))
    else:
        t_axis = Axis("T", tuple(temps))
        if all(t > 0 for t in temps):
            quantities = ("thermal_t3", "delta")
    axis2 = Axis.parse(cfg["axis2"]) if cfg["axis2"] else None
    if axis2 is not None:
        if axis2.name == "T":
            raise UsageError("the temperature is already the curve axis")
        fixed.pop(axis2.name, None)
    spec = SweepSpec(t_axis, axis2, fixed, quantities, None, cfg["central"], cfg["path"], cfg["fd_step"])
    result, failed = _run(spec, cfg)
    if cfg["format"] == "json":
        records = [dict(zip(result.header, row)) for row in result.rows]
        _output(cfg, {"points": records})
    else:
        _output(cfg, {}, result=result)
    _raise_failed(failed, result)
    values = [v for v in result.column("thermal_t3") if isinstance(v, float)]
    return f"thermal: {len(result.rows)} points, T3 in [{min(values):.6g}, {max(values):.6g}]"


def _raise_failed(failed, result):
    if failed:
        k = result.header.index("error") if "error" in result.header else None
        point = dict(zip(result.axis_names, failed[0]))
        raise ConvergenceError(
            f"{len(failed)} grid point(s) failed; first at {point}: " + (failed[0][k] if k is not None else "")
        )


def cmd_sweep(cfg):
    if not cfg["axis1"]:
        raise UsageError("sweep needs --axis1")
    axis1 = Axis.parse(cfg["axis1"])
    axis2 = Axis.parse(cfg["axis2"]) if cfg["axis2"] else None
    quantities = tuple(q.strip() for q in (cfg["quantity"] or "t3").split(",") if q.strip())
    temps = _temperatures(cfg)
    fixed = {"j": cfg["j"], "h": cfg["h"], "eta": cfg["eta"], "omega": cfg["omega"]}
    temperature_list = None
    if temps is not None:
        if len(temps) == 1:
            fixed["T"] = temps[0]
        else:
            temperature_list = tuple(temps)
    for axis in (axis1, axis2):
        if axis is not None:
            fixed.pop(axis.name, None)
    spec = SweepSpec(axis1, axis2, fixed, quantities, temperature_list, cfg["central"], cfg["path"], cfg["fd_step"])
    try:
        spec.validate()
    except InvalidConfigError as exc:
        raise UsageError(str(exc)) from None
    if cfg["format"] == "svg" and cfg["plot"] == "heatmap" and len(spec.axes()) != 2:
        raise UsageError("heatmap needs exactly two sweep axes")
    result, failed = _run(spec, cfg)
    if cfg["format"] == "json":
        records = [dict(zip(result.header, row)) for row in result.rows]
        _output(cfg, {"points": records})
    else:
        _output(cfg, {}, result=result)
    _raise_failed(failed, result)
    paths = sorted(set(result.column("path")))
    return f"sweep: {len(result.rows)} rows, quantities {','.join(quantities)}, paths {'/'.join(paths)}"


def _triple(text, what):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad {what}: {text!r}") from None
    if len(values) != 3 or not all(math.isfinite(v) for v in values):
        raise UsageError(f"{what} needs three finite numbers")
    return values


def cmd_classical(cfg):
    if cfg["couplings"]:
        couplings = _triple(cfg["couplings"], "couplings")
    else:
        couplings = [cfg["j"], cfg["j"] * cfg["omega"], cfg["j"] * cfg["eta"]]
    if cfg["thetas"]:
        thetas = _triple(cfg["thetas"], "thetas")
        energy = classical_xy_energy(thetas, couplings)
        mode = "energy"
    else:
        thetas, energy = classical_ground_search(couplings, cfg["resolution"])
        mode = "minimum"
    payload = {"couplings": couplings, "thetas": list(thetas), "energy": energy, "mode": mode, "path": "numeric"}
    table = _records_result(
        ["theta_a", "theta_b", "theta_c", "energy", "path"], [[*map(float, thetas), float(energy), "numeric"]]
    )
    _output(cfg, payload, table=table)
    return f"classical: {mode} E={energy:.10g}"


def cmd_validate(cfg):
    report = oracle_check(cfg["grid"])
    _output(cfg, report)
    if report["max_deviation"] >= 1e-7:
        raise ConvergenceError(f"analytic and numeric paths disagree by {report['max_deviation']:.3g} at {report['worst']}")
    return (
        f"validate: {report['points']} points, max deviation {report['max_deviation']:.3g} "
        f"(energy {report['energy_dev']:.3g}, measures {report['measure_dev']:.3g})"
    )


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _fail(category, exc, code):
    sys.stderr.write(json.dumps({"error": category, "type": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = effective_config(args)
        for key, value in _echo(cfg).items():
            sys.stderr.write(f"# {key}={value}\n")
        summary = HANDLERS[args.command](cfg)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage())
        return _fail("usage", exc, 2)
    except InvalidConfigError as exc:
        return _fail("usage", exc, 2)
    except (ConvergenceError, AnalyticDomainError, TriqError, ArithmeticError) as exc:
        return _fail("numeric", exc, 3)
    except OSError as exc:
        return _fail("io", exc, 1)
    sys.stderr.write(summary + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
