"""Command-line front end.

Subcommands: mass | pfc | simulate | field | validate.  Every run resolves
its parameters (config file first, flags win), can echo them to a manifest
JSON sufficient to reproduce the run bit-for-bit via --config, and emits
CSV or JSON tables.  Exit codes: 0 success, 2 usage error, 3 capability
error, 4 validation/convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, connmass, mc_sim, pfc_analytic, validation
from .errors import (
    CapabilityError,
    ConvergenceError,
    DomainError,
    InvalidPrismError,
)
from .geometry import RightPrism, load_prism, preset_prism, sample_uniform_rng
from .linkmodels import Mimo, PathLossParams, SimoMiso, Siso, UnitDisk

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPABILITY = 3
EXIT_VALIDATION = 4


def _parse_int_spec(spec) -> list[int]:
    if isinstance(spec, (list, tuple)):
        return [int(v) for v in spec]
    if isinstance(spec, int):
        return [spec]
    text = str(spec).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise DomainError(f"empty integer range {text!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(tok) for tok in text.split(",") if tok]


def _parse_float_spec(spec) -> list[float]:
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    return [float(tok) for tok in str(spec).split(",") if tok]


def _parse_grid(spec) -> list[float]:
    """A density grid: either start:stop:step, a comma list, or one value."""
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    text = str(spec).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid spec must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0 or stop < start:
            raise DomainError(f"grid spec {text!r} does not define a forward range")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-9 * step:
                break
            values.append(round(v, 12))
            k += 1
        return values
    return [float(tok) for tok in text.split(",") if tok]


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _render(fmt: str, header: list[str], rows: list[list], extra: dict | None = None) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    payload = {"rows": [dict(zip(header, row)) for row in rows]}
    if extra:
        payload.update(extra)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_output(args, header: list[str], rows: list[list], extra: dict | None = None) -> None:
    text = _render(args.format, header, rows, extra)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_manifest(args, command: str, params: dict) -> None:
    manifest_path = args.manifest
    if manifest_path is None and args.output:
        manifest_path = str(args.output) + ".manifest.json"
    if manifest_path is None:
        return
    payload = {"command": command, "package_version": __version__, "parameters": params}
    Path(manifest_path).write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _resolve(args, defaults: dict, required: tuple[str, ...] = ()) -> dict:
    """Merge defaults, config file, and explicit flags (flags win)."""
    params = dict(defaults)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if "parameters" in loaded and isinstance(loaded["parameters"], dict):
            loaded = loaded["parameters"]
        for key in defaults:
            if key in loaded:
                params[key] = loaded[key]
    for key in defaults:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            params[key] = flag_value
    missing = [k for k in required if params.get(k) is None]
    if missing:
        raise DomainError(f"missing required parameters: {', '.join(sorted(missing))}")
    return params


def _build_prism(params: dict) -> RightPrism:
    name = str(params["prism"])
    if name in ("house", "cube"):
        return preset_prism(name, float(params["length"]))
    return load_prism(name)


def cmd_mass(args) -> int:
    defaults = {"model": None, "k": "2..8", "d": 3, "eta": "2", "beta": 1.0}
    params = _resolve(args, defaults, required=("model",))
    kind = str(params["model"])
    if kind not in ("siso", "simo", "mimo"):
        raise DomainError(f"mass supports models siso|simo|mimo, got {kind!r}")
    ks = [1] if kind == "siso" else _parse_int_spec(params["k"])
    etas = _parse_float_spec(params["eta"])
    beta = float(params["beta"])
    d = int(params["d"])
    header = [
        "model", "k", "d", "eta", "beta",
        "closed_form", "quadrature", "quad_abs_err", "leading_order", "rel_gap",
    ]
    rows = []
    for eta in etas:
        pl = PathLossParams(beta, eta, d)
        for k in ks:
            if kind == "mimo":
                closed = connmass.mass_mimo_closed(k, pl)
                model = Mimo(2, k, pl)
            else:
                closed = connmass.mass_simo_closed(k, pl)
                model = SimoMiso(k, pl)
            quad = connmass.mass_quadrature(model)
            leading = connmass.mass_scaling_leading(model)
            rows.append(
                [kind, k, d, eta, beta, closed.value, quad.value,
                 quad.est_abs_error, leading, closed.value / leading - 1.0]
            )
    _write_output(args, header, rows)
    _write_manifest(args, "mass", {**params, "k": ks, "eta": etas})
    return EXIT_OK


_PFC_DEFAULTS = {
    "prism": "house",
    "length": 7.0,
    "beta": 1.0,
    "eta": 2.0,
    "d": 3,
    "rho": None,
}


def _pfc_rows(prism: RightPrism, pl: PathLossParams, rhos: list[float]):
    breakdowns = pfc_analytic.assemble(prism, pl, rhos)
    header = [
        "rho", "p_fc", "p_out", "in_regime",
        "p_fc_bulk", "p_fc_bulk_faces", "p_fc_bulk_faces_edges",
        "term_corners", "term_edges", "term_faces", "term_bulk",
    ]
    rows = []
    for b in breakdowns:
        sums = pfc_analytic.class_term_sums(b)
        cumulative = pfc_analytic.cumulative_pfc(b)
        rows.append(
            [b.rho, b.p_fc, b.p_out, b.in_regime,
             cumulative["bulk_only"], cumulative["bulk_faces"],
             cumulative["bulk_faces_edges"],
             sums["corners"], sums["edges"], sums["faces"], sums["bulk"]]
        )
    return header, rows, breakdowns


def cmd_pfc(args) -> int:
    params = _resolve(args, dict(_PFC_DEFAULTS), required=("rho",))
    prism = _build_prism(params)
    pl = PathLossParams(float(params["beta"]), float(params["eta"]), int(params["d"]))
    rhos = _parse_grid(params["rho"])
    header, rows, _ = _pfc_rows(prism, pl, rhos)
    _write_output(
        args, header, rows,
        extra={"feature_table": pfc_analytic.feature_table(prism, pl)},
    )
    _write_manifest(args, "pfc", {**params, "rho": rhos})
    return EXIT_OK


def cmd_simulate(args) -> int:
    defaults = {**_PFC_DEFAULTS, "trials": 1000, "seed": None, "poisson": False}
    params = _resolve(args, defaults, required=("rho", "seed"))
    prism = _build_prism(params)
    pl = PathLossParams(float(params["beta"]), float(params["eta"]), int(params["d"]))
    model = Mimo(2, 2, pl)
    rhos = _parse_grid(params["rho"])
    _, _, breakdowns = _pfc_rows(prism, pl, rhos)
    header = [
        "rho", "n_nodes", "trials", "p_fc_hat", "ci_low", "ci_high",
        "mean_isolated", "p_fc_analytic",
    ]
    rows = []
    for rho, breakdown in zip(rhos, breakdowns):
        config = mc_sim.McConfig.from_density(
            prism, model, rho, int(params["trials"]), int(params["seed"]),
            poisson=bool(params["poisson"]),
        )
        est = mc_sim.run_trials(config)
        rows.append(
            [rho, config.node_count, est.trials, est.p_fc_hat,
             est.ci_low, est.ci_high, est.mean_isolated, breakdown.p_fc]
        )
    _write_output(args, header, rows)
    _write_manifest(args, "simulate", {**params, "rho": rhos})
    return EXIT_OK


def _field_model(params: dict, dim: int):
    pl = PathLossParams(float(params["beta"]), float(params["eta"]), dim)
    kind = str(params["model"])
    if kind == "siso":
        return Siso(pl)
    if kind == "simo":
        return SimoMiso(int(params["k"]), pl)
    if kind == "mimo":
        return Mimo(2, int(params["k"]), pl)
    if kind == "unitdisk":
        return UnitDisk(float(params["radius"]), pl)
    raise DomainError(f"field supports models siso|simo|mimo|unitdisk, got {kind!r}")


def cmd_field(args) -> int:
    defaults = {
        "square": None, "prism": None, "length": None, "model": "siso",
        "k": 2, "radius": 1.0, "beta": 1.0, "eta": 2.0, "rho": None,
        "grid": 200, "seed": None,
    }
    params = _resolve(args, defaults, required=("rho", "seed"))
    if params["square"] is None and params["prism"] is None:
        raise DomainError("field requires either --square or --prism")

    rho = float(_parse_grid(params["rho"])[0])
    grid_n = int(params["grid"])
    if grid_n < 2:
        raise DomainError(f"grid must have at least 2 points per axis, got {grid_n}")
    rng = np.random.default_rng(int(params["seed"]))

    if params["square"] is not None:
        side = float(params["square"])
        if side <= 0.0:
            raise DomainError(f"square side must be positive, got {side}")
        model = _field_model(params, 2)
        count = round(rho * side * side)
        points = rng.random((count, 2)) * side if count else np.empty((0, 2))
        axis = np.linspace(0.0, side, grid_n)
        gx, gy = np.meshgrid(axis, axis, indexing="ij")
        grid_pts = np.column_stack([gx.ravel(), gy.ravel()])
        values = mc_sim.connection_field(points, model, grid_pts)
        header = ["x", "y", "value"]
        rows = [[float(x), float(y), float(v)] for (x, y), v in zip(grid_pts, values)]
    else:
        prism = _build_prism(params)
        model = _field_model(params, 3)
        count = round(rho * prism.volume)
        points = (
            sample_uniform_rng(prism, count, rng) if count else np.empty((0, 3))
        )
        (x0, y0, z0), (x1, y1, z1) = prism.bounding_box
        ax = np.linspace(x0, x1, grid_n)
        ay = np.linspace(y0, y1, grid_n)
        az = np.linspace(z0, z1, grid_n)
        gx, gy, gz = np.meshgrid(ax, ay, az, indexing="ij")
        grid_pts = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
        inside = np.array([prism.contains(p) for p in grid_pts])
        grid_pts = grid_pts[inside]
        values = mc_sim.connection_field(points, model, grid_pts)
        header = ["x", "y", "z", "value"]
        rows = [
            [float(x), float(y), float(z), float(v)]
            for (x, y, z), v in zip(grid_pts, values)
        ]
    _write_output(args, header, rows)
    _write_manifest(args, "field", {**params, "rho": rho})
    return EXIT_OK


def cmd_validate(args) -> int:
    defaults = {"check": None, "perturb": False}
    params = _resolve(args, defaults)
    names = None
    if params["check"]:
        names = [tok for tok in str(params["check"]).split(",") if tok]
    results = validation.run_checks(names, perturb=bool(params["perturb"]))
    header = ["check", "status", "detail"]
    rows = [[r.name, "PASS" if r.passed else "FAIL", r.detail] for r in results]
    _write_output(args, header, rows)
    _write_manifest(args, "validate", params)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def _add_common(sub) -> None:
    sub.add_argument("--output", help="output file (defaults to stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--manifest", help="write a reproduction manifest to this path")
    sub.add_argument("--config", help="JSON file of parameters; flags win on conflict")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prismconn",
        description="Full-connectivity probability of dense networks in right prisms",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mass", help="homogeneous connectivity mass sweeps")
    p.add_argument("--model", choices=("siso", "simo", "mimo"))
    p.add_argument("--m", "--n", dest="k", help="diversity orders, e.g. 1..64 or 2,4,8")
    p.add_argument("--d", type=int, help="spatial dimension (1, 2, or 3)")
    p.add_argument("--eta", help="path-loss exponents, comma separated")
    p.add_argument("--beta", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("pfc", help="analytic connectivity probability curves")
    p.add_argument("--prism", help="house | cube | path to a prism JSON file")
    p.add_argument("--L", dest="length", type=float, help="preset scale length")
    p.add_argument("--beta", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--rho", help="density grid start:stop:step or comma list")
    _add_common(p)
    p.set_defaults(func=cmd_pfc)

    p = sub.add_parser("simulate", help="Monte Carlo estimates across a density grid")
    p.add_argument("--prism")
    p.add_argument("--L", dest="length", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--rho")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--poisson", action="store_true", default=None,
                   help="draw the node count from a Poisson distribution per trial")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("field", help="connection-probability field of one realization")
    p.add_argument("--square", type=float, help="side of a 2D square domain")
    p.add_argument("--prism", help="3D prism preset or file (with --L)")
    p.add_argument("--L", dest="length", type=float)
    p.add_argument("--model", choices=("siso", "simo", "mimo", "unitdisk"))
    p.add_argument("--m", "--n", dest="k", type=int, help="diversity order for simo/mimo")
    p.add_argument("--radius", type=float, help="unit-disk connection radius")
    p.add_argument("--beta", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--rho", help="node density of the sampled realization")
    p.add_argument("--grid", type=int, help="grid points per axis")
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("validate", help="run the numerical self-check suite")
    p.add_argument("--check", help="comma-separated subset of checks to run")
    p.add_argument("--perturb", action="store_true", default=None,
                   help="inject a wrong constant (negative control; must fail)")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (DomainError, InvalidPrismError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
