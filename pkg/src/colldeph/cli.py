"""Command-line surface: evolution dumps, figure-reproduction sweeps,
invariance scans, witness dumps, and gnuplot script emission.

Exit codes: 0 success, 2 configuration error, 3 numerical or solver failure.
CSV output is UTF-8 with '#'-prefixed metadata lines and full double
precision; JSON encodes complex numbers as [re, im] pairs and matrices as
row-major nested arrays.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bell import (ardehali_expectation_curve, genuine_nonlocality_test,
                   sudden_death_time)
from .channel import (CauchyDistribution, DephasingChannel, FieldOrientation,
                      StandardCauchy, evolve, evolve_z_fastpath)
from .errors import (ColldephError, ConfigError, GridRangeError,
                     ParamRangeError, SolverFailedError,
                     UnsupportedStateError)
from .linalg import DensityMatrix, all_bipartitions, frobenius_norm
from .measures import (genuine_negativity, negativity, random_invariance_scan,
                       verify_witness)
from .states import FamilyParams, build_family, evolved_family, state_from_json

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % float(x)


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=complex)]


def parse_params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"--params items must look like k=v, got {item!r}")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad parameter value {val!r}") from exc
    return out


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("--t-grid must be start:stop:points")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}") from exc
    if start < 0 or stop <= start or points < 2:
        raise ConfigError("grid needs start >= 0, stop > start, points >= 2")
    return np.linspace(start, stop, points)


def parse_orientation(text: str) -> FieldOrientation:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("--orientation must be x,y,z")
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad orientation {text!r}") from exc
    try:
        return FieldOrientation.normalized(x, y, z)
    except ColldephError as exc:
        raise ConfigError(str(exc)) from exc


def parse_spectrum(text: str):
    parts = text.split(":")
    if parts[0] != "cauchy":
        raise ConfigError("--spectrum supports cauchy or cauchy:x0:scale")
    if len(parts) == 1:
        return StandardCauchy()
    if len(parts) != 3:
        raise ConfigError("--spectrum supports cauchy or cauchy:x0:scale")
    try:
        return CauchyDistribution(float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ConfigError(f"bad spectrum {text!r}") from exc


def _load_state(args) -> tuple:
    """Resolve --family/--params or --state-json into (state, params-or-None)."""
    if getattr(args, "state_json", None):
        try:
            with open(args.state_json, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.state_json}: {exc}") from exc
        return state_from_json(text)
    if getattr(args, "family", None):
        params = parse_params(getattr(args, "params", "") or "")
        try:
            fp = FamilyParams(args.family, params,
                              int(getattr(args, "bell_sign", 1)))
        except ParamRangeError as exc:
            raise ConfigError(str(exc)) from exc
        return build_family(fp), fp
    raise ConfigError("provide --family/--params or --state-json")


def _state_descriptor(args, params) -> str:
    if params is not None:
        items = ",".join(f"{k}={v:g}" for k, v in sorted(params.params.items()))
        return f"family:{params.family}:{items}"
    return f"json:{args.state_json}"


def _write_out(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metadata(args, command: str, state_desc: str, extra: dict) -> list:
    lines = [
        f"# colldeph={__version__}",
        f"# command={command}",
        f"# state={state_desc}",
    ]
    for key in sorted(extra):
        lines.append(f"# {key}={extra[key]}")
    if not getattr(args, "deterministic", False):
        stamp = datetime.now(timezone.utc).isoformat()
        lines.append(f"# generated={stamp}")
    return lines


def _evolved_state(state, params, orientation, spectrum, t):
    """Closed form when available, numeric channel otherwise."""
    if params is not None and orientation.is_z_axis():
        return evolved_family(params, t, spectrum)
    if orientation.is_z_axis():
        return evolve_z_fastpath(state, t, spectrum)
    channel = DephasingChannel(state.n_qubits, orientation, spectrum)
    return evolve(channel, state, t)


# ---------------------------------------------------------------------------
# subcommands

def cmd_evolve(args) -> int:
    state, params = _load_state(args)
    orientation = parse_orientation(args.orientation)
    spectrum = parse_spectrum(args.spectrum)
    rho_t = _evolved_state(state, params, orientation, spectrum, args.t)
    doc = {
        "n_qubits": rho_t.n_qubits,
        "t": args.t,
        "orientation": [orientation.n_x, orientation.n_y, orientation.n_z],
        "spectrum": spectrum.describe(),
        "matrix": matrix_to_json(rho_t.matrix),
    }
    _write_out(args, json.dumps(doc, indent=2) + "\n")
    return 0


_QUANTITY_CHOICES = ("E", "negativity", "state-change")


def _sweep_point(state, params, orientation, spectrum, t, quantities, rho0):
    rho_t = _evolved_state(state, params, orientation, spectrum, t)
    row = [t]
    if "E" in quantities:
        row.append(genuine_negativity(rho_t).value)
    if "negativity" in quantities:
        for mask in all_bipartitions(rho_t.n_qubits):
            row.append(negativity(rho_t, mask))
    if "state-change" in quantities:
        row.append(frobenius_norm(rho_t.matrix - rho0.matrix))
    return row


_WORKER_CTX = {}


def _pool_init(state_mat, n_qubits, family, params_items, bell_sign,
               orientation_xyz, spectrum_desc, quantities):
    mat = np.array([[complex(re, im) for re, im in row] for row in state_mat])
    state = DensityMatrix(n_qubits, mat)
    params = None
    if family is not None:
        params = FamilyParams(family, dict(params_items), bell_sign)
    _WORKER_CTX["state"] = state
    _WORKER_CTX["params"] = params
    _WORKER_CTX["orientation"] = FieldOrientation.normalized(*orientation_xyz)
    _WORKER_CTX["spectrum"] = parse_spectrum(spectrum_desc)
    _WORKER_CTX["quantities"] = quantities


def _pool_point(t: float):
    ctx = _WORKER_CTX
    return _sweep_point(ctx["state"], ctx["params"], ctx["orientation"],
                        ctx["spectrum"], t, ctx["quantities"], ctx["state"])


def cmd_sweep_entanglement(args) -> int:
    state, params = _load_state(args)
    orientation = parse_orientation(args.orientation)
    spectrum = parse_spectrum(args.spectrum)
    grid = parse_grid(args.t_grid)
    quantities = tuple(q.strip() for q in args.quantities.split(","))
    for q in quantities:
        if q not in _QUANTITY_CHOICES:
            raise ConfigError(f"unknown quantity {q!r}; choose from "
                              f"{_QUANTITY_CHOICES}")
    header = ["t"]
    if "E" in quantities:
        header.append("E")
    if "negativity" in quantities:
        header += [f"N_{m.label()}" for m in all_bipartitions(state.n_qubits)]
    if "state-change" in quantities:
        header.append("state_change_norm")
    meta = _metadata(args, "sweep-entanglement", _state_descriptor(args, params), {
        "grid": args.t_grid,
        "orientation": args.orientation,
        "spectrum": args.spectrum,
        "seed": args.seed,
        "tol_invariance": args.tol_invariance,
    })
    lines = meta + [",".join(header)]
    failed = None
    try:
        if args.jobs > 1:
            init_args = (matrix_to_json(state.matrix), state.n_qubits,
                         params.family if params else None,
                         tuple(sorted(params.params.items())) if params else (),
                         params.bell_sign if params else 1,
                         (orientation.n_x, orientation.n_y, orientation.n_z),
                         args.spectrum, quantities)
            with ProcessPoolExecutor(max_workers=args.jobs,
                                     initializer=_pool_init,
                                     initargs=init_args) as pool:
                rows = list(pool.map(_pool_point, [float(t) for t in grid]))
        else:
            rows = [_sweep_point(state, params, orientation, spectrum,
                                 float(t), quantities, state) for t in grid]
    except SolverFailedError as exc:
        failed = exc
        rows = []
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    if failed is not None:
        lines.append("FAILED," + str(failed).replace(",", ";"))
        _write_out(args, "\n".join(lines) + "\n")
        print(f"error: {failed}", file=sys.stderr)
        return 3
    _write_out(args, "\n".join(lines) + "\n")
    return 0


def cmd_sweep_bell(args) -> int:
    state, params = _load_state(args)
    if params is None or params.family not in ("rho_alpha", "rho_alpha_beta"):
        raise ConfigError("sweep-bell needs the four-qubit rho_alpha or "
                          "rho_alpha_beta family")
    alpha = params.params["alpha"]
    beta = params.params.get("beta", 0.0)
    grid = parse_grid(args.t_grid)
    meta = _metadata(args, "sweep-bell", _state_descriptor(args, params), {
        "grid": args.t_grid,
        "seed": args.seed,
        "threshold": 2 ** (state.n_qubits - 1),
    })
    lines = meta + ["t,bell_expectation,is_genuinely_nonlocal"]
    for t in grid:
        val = ardehali_expectation_curve(alpha, beta, float(t))
        flag = 1 if genuine_nonlocality_test(val, state.n_qubits) else 0
        lines.append(f"{_fmt(t)},{_fmt(val)},{flag}")
    death = sudden_death_time(alpha, beta)
    if death.kind == "at":
        lines.append(f"# sudden_death=at,t={_fmt(death.time)}")
    else:
        lines.append(f"# sudden_death={death.kind}")
    _write_out(args, "\n".join(lines) + "\n")
    return 0


def cmd_invariance_scan(args) -> int:
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    if args.n_qubits not in (3, 4):
        raise ConfigError("--n-qubits must be 3 or 4")
    grid = parse_grid(args.t_grid)
    report = random_invariance_scan(
        args.n_qubits, args.samples, args.seed, grid=grid,
        tol=args.tol_invariance, dfs_bias=args.dfs_bias)
    doc = report.to_dict()
    doc["version"] = __version__
    if not args.deterministic:
        doc["generated"] = datetime.now(timezone.utc).isoformat()
    if report.n_nontrivial_hits > 0:
        print(f"NOTE: {report.n_nontrivial_hits} nontrivial invariance hit(s) "
              f"found; inspect the report", file=sys.stderr)
    _write_out(args, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_witness(args) -> int:
    state, params = _load_state(args)
    orientation = parse_orientation(args.orientation)
    spectrum = parse_spectrum(args.spectrum)
    rho_t = _evolved_state(state, params, orientation, spectrum, args.t)
    result = genuine_negativity(rho_t)
    report = verify_witness(result, rho_t)
    doc = {
        "E": result.value,
        "raw_optimum": result.raw_optimum,
        "t": args.t,
        "witness": matrix_to_json(result.witness),
        "bipartitions": [
            {
                "qubits": mask.label(),
                "P": matrix_to_json(p_m),
                "Q": matrix_to_json(q_m),
            }
            for mask, p_m, q_m in result.decomposition
        ],
        "verification": {
            "all_passed": report.all_passed,
            "entanglement_detected": report.entanglement_detected,
            "witness_expectation": report.witness_expectation,
            "checks": [
                {"name": c.name, "value": c.value, "bound": c.bound,
                 "passed": c.passed}
                for c in report.checks
            ],
        },
        "diagnostics": {
            "duality_gap": result.duality_gap,
            "max_residual": result.max_residual,
            "iterations": result.iterations,
            "status": result.status,
        },
    }
    _write_out(args, json.dumps(doc, indent=2) + "\n")
    return 0


_PLOT_TEMPLATES = {
    "entanglement": """set datafile separator ','
set datafile commentschars '#'
set xlabel 'Gamma t'
set ylabel 'genuine negativity E'
set key top right
plot '{csv}' using 1:2 with lines lw 2 title 'E(t)'
pause -1
""",
    "bell": """set datafile separator ','
set datafile commentschars '#'
set xlabel 'Gamma t'
set ylabel 'Ardehali expectation'
set key top right
plot '{csv}' using 1:2 with lines lw 2 title 'expectation', 8 with lines dt 2 title 'threshold'
pause -1
""",
}


def cmd_emit_plot_script(args) -> int:
    if args.mode not in _PLOT_TEMPLATES:
        raise ConfigError("--mode must be entanglement or bell")
    _write_out(args, _PLOT_TEMPLATES[args.mode].format(csv=args.csv))
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_state_args(p):
    p.add_argument("--family", help="state family name, e.g. rho_alpha_beta")
    p.add_argument("--params", default="",
                   help="comma list of family parameters, e.g. alpha=0.9,beta=0.85")
    p.add_argument("--bell-sign", type=int, default=1, choices=(1, -1),
                   help="Psi sign for rho_ab")
    p.add_argument("--state-json", help="path to a JSON state config")


def _add_common(p, grid_default):
    p.add_argument("--t-grid", default=grid_default,
                   help="time grid start:stop:points")
    p.add_argument("--seed", type=int, default=0, help="recorded RNG seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--deterministic", action="store_true",
                   help="suppress timestamps for byte-identical output")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colldeph",
        description="Collective-dephasing dynamics, genuine negativity via a "
                    "PPT-mixture SDP, and Ardehali nonlocality analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="dump the evolved density matrix as JSON")
    _add_state_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--orientation", default="0,0,1")
    p.add_argument("--spectrum", default="cauchy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep-entanglement",
                       help="CSV sweep of E and bipartite negativities over time")
    _add_state_args(p)
    _add_common(p, "0:5:101")
    p.add_argument("--orientation", default="0,0,1")
    p.add_argument("--spectrum", default="cauchy")
    p.add_argument("--quantities", default="E,negativity,state-change")
    p.add_argument("--tol-invariance", type=float, default=1e-5)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep_entanglement)

    p = sub.add_parser("sweep-bell",
                       help="CSV sweep of the Ardehali expectation curve")
    _add_state_args(p)
    _add_common(p, "0:3:101")
    p.set_defaults(func=cmd_sweep_bell)

    p = sub.add_parser("invariance-scan",
                       help="random search for time-invariant genuine entanglement")
    p.add_argument("--n-qubits", type=int, default=3)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--dfs-bias", action="store_true",
                   help="bias mixtures toward the decoherence-free component")
    _add_common(p, "0:5:6")
    p.add_argument("--tol-invariance", type=float, default=1e-5)
    p.set_defaults(func=cmd_invariance_scan)

    p = sub.add_parser("witness", help="JSON dump of the optimal witness")
    _add_state_args(p)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--orientation", default="0,0,1")
    p.add_argument("--spectrum", default="cauchy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("emit-plot-script",
                       help="write a gnuplot script for a sweep CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--mode", default="entanglement")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_plot_script)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, ParamRangeError, UnsupportedStateError,
            GridRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ColldephError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
