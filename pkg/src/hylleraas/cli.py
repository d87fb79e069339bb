"""Command-line front end: deltas, hydrogen, solve, table, verify, compare."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .constants_deltas import Z_MAX, Z_MIN, basis_exponents, deltas, lambdas
from .errors import ConvergenceError, DomainError, SingularMatrixError
from .functionals import ModelKind
from .hydrogenic import Orbital, dirac_correction, solve_orbital
from .optimizer import OptimizerConfig, SeedStrategy, VariationalResult, solve_full

SCHEMA_VERSION = 1
THREADS_ENV = "HYLLERAAS_THREADS"
EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_VERIFY = 0, 2, 3, 4

TABLE_COLUMNS = ("Z", "lambda1", "lambda2", "xi1", "xi2", "E_S", "E_Z", "diff", "status")
CONFIG_KEYS = {
    "outer_tol": float,
    "max_outer_iters": int,
    "simplex_scale": float,
    "x_tol": float,
    "xi_init_strategy": str,
    "model": str,
    "order": str,
    "format": str,
    "threads": int,
}


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Shortest round-trip text for floats; plain str otherwise."""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _z_arg(text: str) -> int:
    try:
        Z = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not Z_MIN <= Z <= Z_MAX:
        raise argparse.ArgumentTypeError(f"Z must lie in [{Z_MIN}, {Z_MAX}], got {Z}")
    return Z


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def read_config(path: str | Path) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


# -- output ---------------------------------------------------------------------


def emit(records: list[dict], columns, fmt_name: str, out: str | None) -> None:
    if fmt_name == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, "records": records}, indent=2) + "\n"
    elif fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([fmt(r.get(c, "")) for c in columns])
        text = buf.getvalue()
    else:
        text = ""
        for r in records:
            width = max(len(c) for c in columns)
            text += "\n".join(f"{c:<{width}}  {_pretty(r.get(c, ''))}" for c in columns) + "\n\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pretty(v) -> str:
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_pretty(x) for x in v) + "]"
    return fmt(v)


# -- commands -----------------------------------------------------------------------


def cmd_deltas(args) -> int:
    lam, dl, ex = lambdas(args.z), deltas(args.z), basis_exponents(args.z)
    rec = dict(
        Z=args.z, L1=lam.L1, L2=lam.L2, L3=lam.L3, d1=dl.d1, d2=dl.d2, d3=dl.d3, A0=ex.A0, A1=ex.A1, B0=ex.B0, B1=ex.B1, C=ex.C
    )
    emit([rec], list(rec), args.format, args.out)
    return EXIT_OK


def cmd_hydrogen(args) -> int:
    orb = Orbital(args.n, args.l, args.m, args.J, args.P)
    sol = solve_orbital(orb, args.z)
    rec = dict(
        Z=args.z,
        n=orb.n,
        l=orb.l,
        m=orb.m,
        J=orb.J,
        P=orb.P,
        energy=sol.energy,
        xi=sol.xi,
        T=sol.T,
        L=sol.L,
        radial_exponent=sol.radial_exponent,
        sine_exponent=sol.sine_exponent,
        angular_coeffs=list(sol.angular_coeffs),
        radial_coeffs=list(sol.radial_coeffs),
        dirac_correction=dirac_correction(args.z),
    )
    if args.format == "csv":
        rec["angular_coeffs"] = " ".join(fmt(c) for c in sol.angular_coeffs)
        rec["radial_coeffs"] = " ".join(fmt(c) for c in sol.radial_coeffs)
    emit([rec], list(rec), args.format, args.out)
    return EXIT_OK


def _models(name: str) -> list[ModelKind]:
    return list(ModelKind) if name == "both" else [ModelKind.parse(name)]


def _result_record(r: VariationalResult) -> dict:
    x0, x1 = r.state.role_exponents()
    return dict(
        Z=r.Z,
        model=r.model.value,
        energy=r.energy,
        xi1=r.state.xi1,
        xi2=r.state.xi2,
        xi_role0=x0,
        xi_role1=x1,
        order=r.state.order,
        coeffs=list(r.state.coeffs),
        outer_iters=r.outer_iters,
        converged=r.converged,
    )


SOLVE_COLUMNS = ("Z", "model", "energy", "xi1", "xi2", "xi_role0", "xi_role1", "order", "coeffs", "outer_iters", "converged")


def cmd_solve(args) -> int:
    cfg = args.optimizer
    records = []
    for model in _models(args.model):
        rec = _result_record(solve_full(args.z, model, cfg))
        if args.format == "csv":
            rec["coeffs"] = " ".join(fmt(c) for c in rec["coeffs"])
        records.append(rec)
    emit(records, SOLVE_COLUMNS, args.format, args.out)
    return EXIT_OK if all(r["converged"] for r in records) else EXIT_NONCONVERGED


def _table_row(job) -> dict:
    Z, cfg, models = job
    row = {"Z": Z}
    status = []
    for model in models:
        try:
            r = solve_full(Z, model, cfg)
        except (DomainError, SingularMatrixError, ConvergenceError, FloatingPointError) as exc:
            status.append(f"{model.value}:error:{type(exc).__name__}")
            continue
        if model is ModelKind.SCHRODINGER:
            row.update(lambda1=r.state.xi1, lambda2=r.state.xi2, E_S=r.energy)
        else:
            x0, x1 = r.state.role_exponents()
            row.update(xi1=x0, xi2=x1, E_Z=r.energy)
        if not r.converged:
            status.append(f"{model.value}:not_converged")
    if "E_S" in row and "E_Z" in row:
        row["diff"] = row["E_S"] - row["E_Z"]
    row["status"] = ";".join(status) or "ok"
    return row


def cmd_table(args) -> int:
    lo, hi = args.z_from, args.z_to
    if lo > hi:
        raise UsageError(f"--from {lo} exceeds --to {hi}")
    jobs = [(Z, args.optimizer, _models(args.model)) for Z in range(lo, hi + 1)]
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_table_row, jobs))
    else:
        rows = [_table_row(j) for j in jobs]
    emit(rows, TABLE_COLUMNS, args.format if args.format != "pretty" else "csv", args.out)
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_NONCONVERGED


def cmd_verify(args) -> int:
    from .acceptance import all_passed, run_acceptance

    try:
        results = run_acceptance(args.only, args.data_dir)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    for r in results:
        print(r.line(), flush=True)
    ok = all_passed(results)
    print("verify:", "all non-flagged checks passed" if ok else "failures present")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_compare(args) -> int:
    """Functionals at the tabulated parameters versus the tabulated energies."""
    from .acceptance import table_state
    from .functionals import energy
    from .reference_data import epsilon_metric, eta_metric, reference_row

    lo, hi = (args.z, args.z) if args.z is not None else (args.z_from, args.z_to)
    if lo > hi:
        raise UsageError(f"--from {lo} exceeds --to {hi}")
    records = []
    for Z in range(lo, hi + 1):
        row = reference_row(Z)
        es = energy(table_state(Z, ModelKind.SCHRODINGER), Z, ModelKind.SCHRODINGER)
        ez = energy(table_state(Z, ModelKind.IMPROVED), Z, ModelKind.IMPROVED)
        rec = dict(Z=Z, E_S=es, E_S_table=row.E_S, dE_S=es - row.E_S, E_Z=ez, E_Z_table=row.E_Z, dE_Z=ez - row.E_Z)
        rec["eta"] = eta_metric(es, ez, row.E0, row.E_corr) if row.E0 is not None else ""
        rec["eta_table"] = row.eta if row.eta is not None else ""
        rec["epsilon"] = epsilon_metric(ez, row.E_exp) if row.E_exp is not None else ""
        records.append(rec)
    cols = ("Z", "E_S", "E_S_table", "dE_S", "E_Z", "E_Z_table", "dE_Z", "eta", "eta_table", "epsilon")
    emit(records, cols, args.format, args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "pretty"), default=None)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--config", metavar="FILE", help="key = value defaults; flags override")

    opt = argparse.ArgumentParser(add_help=False)
    opt.add_argument("--model", choices=("schrodinger", "improved", "both"), default=None)
    opt.add_argument("--order", choices=("2", "3", "auto"), default=None)
    opt.add_argument("--seed-from-table", action="store_true", help="start exponents from the embedded table")
    opt.add_argument("--outer-tol", type=float)
    opt.add_argument("--max-outer-iters", type=_positive_int)

    p = argparse.ArgumentParser(prog="hylleraas", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("deltas", parents=[common], help="coupling constants and basis exponents for one Z")
    d.add_argument("--z", type=_z_arg, required=True)

    h = sub.add_parser("hydrogen", parents=[common], help="one hydrogen-like orbital")
    h.add_argument("--z", type=_z_arg, required=True)
    h.add_argument("--n", type=int, default=1)
    h.add_argument("--l", type=int, default=0)
    h.add_argument("--m", type=int, default=0)
    h.add_argument("--J", type=int, default=0, choices=(0, 1))
    h.add_argument("--P", type=int, default=0, choices=(0, 1))

    s = sub.add_parser("solve", parents=[common, opt], help="variational ground state for one Z")
    s.add_argument("--z", type=_z_arg, required=True)

    t = sub.add_parser("table", parents=[common, opt], help="computed table over a Z range")
    t.add_argument("--from", dest="z_from", type=_z_arg, default=Z_MIN)
    t.add_argument("--to", dest="z_to", type=_z_arg, default=Z_MAX)
    t.add_argument("--threads", type=_positive_int)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--only", metavar="NAME")
    v.add_argument("--data-dir", metavar="DIR", help="check table files in DIR instead of the packaged ones")

    c = sub.add_parser("compare", parents=[common], help="functionals at tabulated parameters vs the table")
    c.add_argument("--z", type=_z_arg)
    c.add_argument("--from", dest="z_from", type=_z_arg, default=1)
    c.add_argument("--to", dest="z_to", type=_z_arg, default=8)
    return p


def _resolve(args) -> None:
    """Merge config file, environment and flags (flags win)."""
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    if args.format is None:
        args.format = conf.get("format", "csv" if args.command == "table" else "pretty")
    if args.format not in ("csv", "json", "pretty"):
        raise UsageError(f"bad format {args.format!r}")
    if args.command in ("solve", "table"):
        if args.model is None:
            args.model = conf.get("model", "both")
        if args.model not in ("schrodinger", "improved", "both"):
            raise UsageError(f"bad model {args.model!r}")
        order = args.order or conf.get("order", "auto")
        if order not in ("2", "3", "auto"):
            raise UsageError(f"bad order {order!r}")
        cfg = OptimizerConfig(
            xi_init_strategy=SeedStrategy(conf.get("xi_init_strategy", "heuristic")),
            outer_tol=conf.get("outer_tol", 1e-9),
            max_outer_iters=conf.get("max_outer_iters", 500),
            simplex_scale=conf.get("simplex_scale", 0.05),
            x_tol=conf.get("x_tol", 1e-7),
        )
        if args.seed_from_table:
            cfg = replace(cfg, xi_init_strategy=SeedStrategy.TABLE_SEED)
        if args.outer_tol is not None:
            cfg = replace(cfg, outer_tol=args.outer_tol)
        if args.max_outer_iters is not None:
            cfg = replace(cfg, max_outer_iters=args.max_outer_iters)
        args.optimizer = replace(cfg, order=None if order == "auto" else int(order))
    if args.command == "table":
        if args.threads is None:
            env = os.environ.get(THREADS_ENV)
            args.threads = int(env) if env else conf.get("threads", 1)
        if args.threads < 1:
            raise UsageError("thread count must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _resolve(args)
        handler = {
            "deltas": cmd_deltas,
            "hydrogen": cmd_hydrogen,
            "solve": cmd_solve,
            "table": cmd_table,
            "verify": cmd_verify,
            "compare": cmd_compare,
        }[args.command]
        return handler(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
