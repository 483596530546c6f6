"""
Command-line entry point: ``ncdirac {solve,correct,validate,scan}``.

Tables are written as CSV with a fixed header and 17 significant digits;
every run also writes a JSON sidecar holding the resolved configuration.
Nothing time-dependent enters either file.

Exit codes: 0 ok, 1 validation failure, 2 config error, 3 solver failure.
"""

import argparse
import csv
import io
import json
import os
import sys
from importlib import metadata

import numpy as np

from . import potential as pot
from .config import defaults, load_config
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateDenominator,
    NCDiracError,
    NonFiniteResult,
    QuadratureFailure,
)
from .oracle import RadialGrid, richardson_energy
from .perturbation import correction_report, delta_e_theta_quad, unit_integrals
from .validate import run_validation, solve_states

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3
SCAN_AXES = ("theta", "V0", "alpha", "q", "r_c")

SOLVE_HEADER = ["n", "l", "status_paper", "E_paper", "status_nu", "E_nu",
                "status_oracle", "E_oracle", "abs_diff_nu_oracle", "norm_quad"]
CORRECT_HEADER = ["n", "l", "m_l", "status", "E0", "dE_theta_quad", "dE_field_quad",
                  "d_eps_field_quad", "dE_closed_re", "dE_closed_im", "discrepancy",
                  "closed_error", "E_split"]
SCAN_HEADER = ["axis", "value", "n", "l", "m_l", "status", "E0", "dE_theta", "dE_field",
               "E_split"]

# numerical breakdowns are solver failures; everything else (no root, no bound
# state, non-normalizable) is a physical status recorded in the row
_FATAL = (ConvergenceFailure, QuadratureFailure, NonFiniteResult, DegenerateDenominator)


class SolverFailure(Exception):
    pass


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % (x + 0.0)
    return str(x)


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row.get(k)) for k in header])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")


def _version():
    try:
        return metadata.version("ncdirac")
    except metadata.PackageNotFoundError:
        return "unknown"


def write_sidecar(out_dir, stem, command, cfg, seed, outputs, extra=None):
    meta = {
        "schema": "ncdirac.sidecar/1",
        "command": command,
        "package_version": _version(),
        "seed": seed,
        "outputs": outputs,
        "config": cfg.to_dict(),
        "config_ini": cfg.to_ini(),
    }
    if extra:
        meta.update(extra)
    write_json(os.path.join(out_dir, f"{stem}.meta.json"), _jsonable(meta))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def _status(exc):
    if isinstance(exc, _FATAL):
        raise SolverFailure(f"{type(exc).__name__}: {exc}") from exc
    return type(exc).__name__


# -- subcommands ---------------------------------------------------------------

def cmd_solve(cfg):
    """One row per distinct (n, l): both conditions, the oracle and the norm check."""
    from .spectrum import solve_energy

    p = cfg.potential
    solved = solve_states(cfg)
    grid = RadialGrid.for_params(p, cfg.oracle.n_points, cfg.oracle.span)
    kw = {"centrifugal": cfg.oracle.centrifugal, "potential_form": cfg.oracle.potential_form,
          "pekeris_variant": cfg.oracle.pekeris_variant}
    rows = []
    for (n, l), bs in solved.items():
        row = {"n": n, "l": l}
        try:
            row["E_paper"] = solve_energy(n, l, p, condition="paper_printed",
                                          bracket=cfg.solver.bracket,
                                          panels=cfg.solver.scan_panels, tol=cfg.solver.tol)
            row["status_paper"] = "ok"
        except NCDiracError as exc:
            row["status_paper"] = _status(exc)
        if isinstance(bs, str):
            name = bs.split(":")[0]
            if name in {c.__name__ for c in _FATAL}:
                raise SolverFailure(bs)
            row["status_nu"] = name
        else:
            row.update(status_nu="ok", E_nu=bs.energy, norm_quad=bs.norm_quad)
        try:
            row["E_oracle"] = richardson_energy(n, l, p, grid, **kw)[0]
            row["status_oracle"] = "ok"
        except NCDiracError as exc:
            row["status_oracle"] = _status(exc)
        if row.get("E_nu") is not None and row.get("E_oracle") is not None:
            row["abs_diff_nu_oracle"] = abs(row["E_nu"] - row["E_oracle"])
        rows.append(row)
    return rows


def _correction_rows(cfg, solved, theta, field):
    p = cfg.potential
    rows = []
    failed = False
    units_cache = {}
    for n, l, m in cfg.states:
        bs = solved[(n, l)]
        row = {"n": n, "l": l, "m_l": m}
        if isinstance(bs, str):
            row["status"] = bs.split(":")[0]
            failed = True
            rows.append(row)
            continue
        if (n, l) not in units_cache:
            units_cache[(n, l)] = unit_integrals(bs, p, cfg.oracle.pekeris_variant)
        units = units_cache[(n, l)]
        nc = pot.NCParams(theta, m)
        rep = correction_report(bs, p, nc, field, cfg.oracle.pekeris_variant, units=units)
        th = delta_e_theta_quad(bs, p, nc, units=units)
        closed = rep.dE_closed
        row.update(
            status="ok", E0=bs.energy, dE_theta_quad=th.dE, dE_field_quad=rep.dE_quad,
            d_eps_field_quad=rep.d_eps_quad,
            dE_closed_re=None if closed is None else closed.real,
            dE_closed_im=None if closed is None else closed.imag,
            discrepancy=None if closed is None else rep.discrepancy,
            closed_error=rep.closed_error, E_split=bs.energy + rep.dE_quad,
        )
        rows.append(row)
    return rows, failed


def cmd_correct(cfg):
    """Per (n, l, m_l) correction rows; ``failed`` flags states with no solution."""
    solved = solve_states(cfg)
    for bs in solved.values():
        if isinstance(bs, str) and bs.split(":")[0] in {c.__name__ for c in _FATAL}:
            raise SolverFailure(bs)
    return _correction_rows(cfg, solved, cfg.theta, cfg.field)


def _scan_config(cfg, axis, value):
    if axis == "theta":
        return cfg, value, cfg.field
    if axis == "q":
        f = cfg.field
        return cfg, cfg.theta, pot.FieldParams(f.e_charge, f.k_const, value)
    return cfg.replace_potential(**{axis: value}), cfg.theta, cfg.field


def cmd_scan(cfg, axis, values):
    """Rows of E and dE against one parameter, plus the linearity checks."""
    if axis not in SCAN_AXES:
        raise ConfigError(f"axis must be one of {', '.join(SCAN_AXES)}")
    if len(values) == 0:
        raise ConfigError("empty scan range")
    rows = []
    base_solved = None
    for v in values:
        try:
            sub, theta, field = _scan_config(cfg, axis, float(v))
        except NCDiracError as exc:
            raise ConfigError(f"{axis} = {v!r}: {exc}") from exc
        if axis in ("theta", "q"):
            base_solved = base_solved or solve_states(cfg)
            solved = base_solved
        else:
            solved = solve_states(sub)
        for bs in solved.values():
            if isinstance(bs, str) and bs.split(":")[0] in {c.__name__ for c in _FATAL}:
                raise SolverFailure(bs)
        corr, _ = _correction_rows(sub, solved, theta, field)
        for c in corr:
            rows.append({"axis": axis, "value": float(v), "n": c["n"], "l": c["l"],
                         "m_l": c["m_l"], "status": c["status"], "E0": c.get("E0"),
                         "dE_theta": c.get("dE_theta_quad"), "dE_field": c.get("dE_field_quad"),
                         "E_split": c.get("E_split")})
    return rows, scan_checks(axis, rows)


def scan_checks(axis, rows):
    """theta: dE_theta proportional to theta; q: dE_field affine in q."""
    out = []
    if axis not in ("theta", "q"):
        return out
    col = "dE_theta" if axis == "theta" else "dE_field"
    keys = sorted({(r["n"], r["l"], r["m_l"]) for r in rows if r["status"] == "ok"})
    for key in keys:
        pts = [(r["value"], r[col]) for r in rows
               if (r["n"], r["l"], r["m_l"]) == key and r["status"] == "ok"]
        x = np.array([a for a, _ in pts])
        y = np.array([b for _, b in pts])
        scale = np.max(np.abs(y))
        if axis == "theta":
            denom = np.dot(x, x)
            c = np.dot(x, y) / denom if denom > 0 else 0.0
            fit = c * x
        elif len(x) >= 2:
            A = np.vstack([x, np.ones_like(x)]).T
            fit = A @ np.linalg.lstsq(A, y, rcond=None)[0]
        else:
            fit = y
        resid = float(np.max(np.abs(y - fit)) / scale) if scale > 0 else 0.0
        out.append({"n": key[0], "l": key[1], "m_l": key[2], "column": col,
                    "model": "proportional" if axis == "theta" else "affine",
                    "relative_residual": resid, "passed": resid <= 1e-12})
    return out


# -- argument handling -----------------------------------------------------------

def _parser():
    ap = argparse.ArgumentParser(prog="ncdirac", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (("solve", "bound-state energies and oracle comparison"),
                       ("correct", "first-order theta and field corrections"),
                       ("validate", "invariant suites and diagnostic report"),
                       ("scan", "parameter sweep")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", help="configuration file (defaults when omitted)")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seedless", action=argparse.BooleanOptionalAction, default=True,
                        help="fixed seed for randomized checks (default on)")
        if name == "scan":
            sp.add_argument("--axis", required=True, help=f"one of {', '.join(SCAN_AXES)}")
            sp.add_argument("--start", type=float)
            sp.add_argument("--stop", type=float)
            sp.add_argument("--steps", type=int)
            sp.add_argument("--values", help="comma-separated explicit values")
    return ap


def _scan_values(args):
    if args.values is not None:
        parts = [x for x in args.values.split(",") if x.strip()]
        try:
            return [float(x) for x in parts]
        except ValueError as exc:
            raise ConfigError(f"bad --values: {exc}") from exc
    if args.start is None or args.stop is None or args.steps is None:
        raise ConfigError("scan needs --values or all of --start, --stop, --steps")
    if args.steps < 1:
        raise ConfigError("empty scan range")
    return [float(v) for v in np.linspace(args.start, args.stop, args.steps)]


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else defaults()
        os.makedirs(args.out, exist_ok=True)
        seed = 0 if args.seedless else int(np.random.SeedSequence().entropy % 2**63)
        if args.command == "solve":
            rows = cmd_solve(cfg)
            write_csv(os.path.join(args.out, "spectrum.csv"), SOLVE_HEADER, rows)
            write_sidecar(args.out, "spectrum", "solve", cfg, seed, ["spectrum.csv"])
            return EXIT_OK
        if args.command == "correct":
            rows, failed = cmd_correct(cfg)
            write_csv(os.path.join(args.out, "corrections.csv"), CORRECT_HEADER, rows)
            write_sidecar(args.out, "corrections", "correct", cfg, seed, ["corrections.csv"],
                          {"upstream_failure": failed})
            if failed:
                print("some states have no closed-form solution", file=sys.stderr)
                return EXIT_SOLVER
            return EXIT_OK
        if args.command == "scan":
            values = _scan_values(args)
            rows, checks = cmd_scan(cfg, args.axis, values)
            write_csv(os.path.join(args.out, "scan.csv"), SCAN_HEADER, rows)
            write_sidecar(args.out, "scan", "scan", cfg, seed, ["scan.csv"],
                          {"axis": args.axis, "values": values, "checks": checks})
            return EXIT_OK if all(c["passed"] for c in checks) else EXIT_VALIDATION
        report = run_validation(cfg, np.random.default_rng(seed))
        write_json(os.path.join(args.out, "validation.json"), report)
        write_sidecar(args.out, "validation", "validate", cfg, seed, ["validation.json"])
        for c in report["checks"]:
            print(f"{c['status']:>7}  {c['module']}.{c['name']}")
        return EXIT_OK if report["passed"] else EXIT_VALIDATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConvergenceFailure, QuadratureFailure, NonFiniteResult) as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
