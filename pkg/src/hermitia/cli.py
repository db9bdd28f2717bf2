"""Command-line reports for Lie-Hermitian curvature computations.

Exit codes: 0 success, 1 domain or analysis failure, 2 input error.
Reports are JSON with sorted keys and floats written as ``%.12g``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from hermitia import __version__
from hermitia.analysis import ScanRow, constancy_test, sample_hsc, scan_parameters
from hermitia.connections import connection_params
from hermitia.curvature import curvature_D, curvature_from_structure, symmetrize
from hermitia.errors import AlgebraFileError, InvalidStructure, OutsideDomain
from hermitia.lie_hermitian import (
    DEFAULT_TOL,
    check_balanced,
    check_kahler,
    check_nilpotent_J,
    load_structure,
    validate,
)
from hermitia.models import BTP3_CASES, HopfPoint, btp3_constancy_analysis, hopf_curvature_D, hopf_flat_params, hopf_hsc_report

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILURE, EXIT_INPUT = 0, 1, 2
HSC_SAMPLES = 64


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return "%.12g" % (x + 0.0)


def to_json(obj, indent: int = 0) -> str:
    """JSON text with sorted keys, complex as {"im", "re"} and floats as %.12g."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, complex, np.complexfloating)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return _fmt_float(float(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return to_json({"re": z.real, "im": z.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def seed_from_env() -> int:
    raw = os.environ.get("HERMITIA_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"HERMITIA_SEED must be an integer, got {raw!r}") from exc


def make_report(command: str, inputs: dict, results, seed: int | None = None) -> dict:
    report = {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs,
              "results": results, "tool_version": __version__}
    if seed is not None:
        report["seed"] = seed
    return report


# ---------------------------------------------------------------------------
# commands

def _load(path: str):
    try:
        return load_structure(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _verdict_dict(v) -> dict:
    return {"constant": v.constant, "c": v.c, "max_residual": v.max_residual,
            "witness": list(v.witness) if v.witness else None}


def cmd_validate(args) -> tuple[int, str]:
    S = _load(args.file)
    rep = validate(S, args.tol)
    results = {"ok": rep.ok, "antisymmetry_ok": rep.antisymmetry_ok,
               "jacobi_residuals": {f"J{m + 1}": r for m, r in enumerate(rep.jacobi_residuals)},
               "worst": list(rep.worst) if rep.worst else None, "n": S.n}
    if rep.ok:
        results["nilpotent_J"] = check_nilpotent_J(S)
        results["kahler"] = check_kahler(S, args.tol)
        results["balanced"] = check_balanced(S, args.tol)
    text = to_json(make_report("validate", {"file": os.path.basename(args.file), "tol": args.tol}, results))
    return (EXIT_OK if rep.ok else EXIT_FAILURE), text


_CONNECTIONS = {"chern": (1, 0), "bismut": (-1, 0), "lc": (0, 1)}


def _component_rows(R: np.ndarray, Rh: np.ndarray) -> list[dict]:
    n = R.shape[0]
    return [{"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1, "R": complex(R[i, j, k, l]),
             "Rhat": complex(Rh[i, j, k, l])} for i, j, k, l in np.ndindex(n, n, n, n)]


def cmd_curvature(args) -> tuple[int, str]:
    S = _load(args.file)
    if args.connection == "general":
        if args.r is None or args.s is None:
            raise InputError("--connection general needs --r and --s")
        params = connection_params(args.r, args.s)
    else:
        params = connection_params(*_CONNECTIONS[args.connection])
    if args.connection in ("chern", "bismut"):
        Rt = curvature_from_structure(S, args.connection, args.tol)
    else:
        Rt = curvature_D(S, params, tol=args.tol)
    Rh = symmetrize(Rt).R
    seed = seed_from_env()
    samples = sample_hsc(Rt, HSC_SAMPLES, seed)
    inputs = {"file": os.path.basename(args.file), "connection": args.connection,
              "r": params.r, "s": params.s, "tol": args.tol}
    if args.format == "csv":
        rows = [[d["i"], d["j"], d["k"], d["l"], d["R"].real, d["R"].imag, d["Rhat"].real, d["Rhat"].imag]
                for d in _component_rows(Rt.R, Rh)]
        return EXIT_OK, to_csv(["i", "j", "k", "l", "re", "im", "rhat_re", "rhat_im"], rows)
    results = {"n": S.n, "t": params.t, "components": _component_rows(Rt.R, Rh),
               "hsc": _verdict_dict(constancy_test(Rt, args.tol)),
               "hsc_samples": {"count": HSC_SAMPLES, "min": float(samples.min()), "max": float(samples.max())}}
    return EXIT_OK, to_json(make_report("curvature", inputs, results, seed))


def _scan_row(row: ScanRow) -> dict:
    return {"r": row.r, "s": row.s, "t": row.t, "on_chen_nie": row.on_chen_nie, "flat": row.flat,
            "constant": row.hsc.constant, "c": row.hsc.c, "max_residual": row.hsc.max_residual}


def cmd_scan(args) -> tuple[int, str]:
    S = _load(args.file)
    if args.step <= 0:
        raise InputError("--step must be positive")
    rows = scan_parameters(S, (args.r_min, args.r_max), (args.s_min, args.s_max), args.step, args.tol)
    if args.format == "csv":
        keys = ["r", "s", "t", "on_chen_nie", "flat", "constant", "c", "max_residual"]
        return EXIT_OK, to_csv(keys, [[_scan_row(r)[k] for k in keys] for r in rows])
    inputs = {"file": os.path.basename(args.file), "r_min": args.r_min, "r_max": args.r_max,
              "s_min": args.s_min, "s_max": args.s_max, "step": args.step, "tol": args.tol}
    results = {"rows": [_scan_row(r) for r in rows],
               "constant_rows": [[r.r, r.s, r.hsc.c] for r in rows if r.hsc.constant]}
    return EXIT_OK, to_json(make_report("scan", inputs, results))


def parse_z(text: str, n: int) -> np.ndarray:
    try:
        z = np.array([complex(part.strip().replace("i", "j")) for part in text.split(",")])
    except ValueError as exc:
        raise InputError(f"cannot parse --z {text!r}: use comma-separated complex numbers like 1,0.5+2j") from exc
    if z.size != n:
        raise InputError(f"--z has {z.size} entries but --n is {n}")
    if not np.any(z):
        raise InputError("--z must be nonzero")
    return z


def cmd_hopf(args) -> tuple[int, str]:
    if args.n < 2:
        raise InputError("--n must be at least 2")
    inputs = {"n": args.n}
    if args.flat_params:
        sols = sorted(hopf_flat_params(args.n))
        results = {"flat_params": [[r, s] for r, s in sols],
                   "exact": [[str(r), str(s)] for r, s in sols]}
        return EXIT_OK, to_json(make_report("hopf", {**inputs, "mode": "flat-params"}, results))
    z = parse_z(args.z, args.n) if args.z else np.eye(args.n)[0].astype(complex)
    params = connection_params(args.r, args.s)
    pt = HopfPoint(args.n, z)
    inputs.update({"z": [complex(v) for v in z], "r": params.r, "s": params.s})
    if args.report:
        rep = hopf_hsc_report(pt, params, args.tol)
        results = {"hsc": _verdict_dict(rep.verdict), "on_chen_nie": rep.on_chen_nie,
                   "kappa": rep.kappa, "witness_value": rep.witness_value}
        return EXIT_OK, to_json(make_report("hopf", {**inputs, "mode": "report"}, results))
    Rt = hopf_curvature_D(pt, params)
    results = {"t": params.t, "components": _component_rows(Rt.R, symmetrize(Rt).R)}
    return EXIT_OK, to_json(make_report("hopf", {**inputs, "mode": "curvature"}, results))


def cmd_btp3(args) -> tuple[int, str]:
    if args.lam <= 0:
        raise InputError("--lambda must be positive")
    v = btp3_constancy_analysis(args.case, (args.r, args.s), args.lam, args.tol)
    results = {"status": v.status, "consistent": v.consistent, "c": v.c, "t": v.t,
               "unknowns": v.unknowns, "lsq_residual": v.lsq_residual,
               "check": {"equation": v.equation, "component": list(v.component),
                         "pattern_value": v.pattern_value, "predicted_value": v.predicted_value,
                         "value": v.value}}
    inputs = {"case": args.case, "r": args.r, "s": args.s, "lambda": args.lam}
    return EXIT_OK, to_json(make_report("btp3", inputs, results))


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermitia", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hermitia {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def tol(sp):
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    v = sub.add_parser("validate", help="check antisymmetry and the Jacobi identity of an algebra file")
    v.add_argument("file")
    tol(v)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("curvature", help="curvature component table and its symmetrization")
    c.add_argument("file")
    c.add_argument("--connection", choices=["chern", "bismut", "lc", "general"], default="chern")
    c.add_argument("--r", type=float)
    c.add_argument("--s", type=float)
    c.add_argument("--format", choices=["json", "csv"], default="json")
    tol(c)
    c.set_defaults(func=cmd_curvature)

    s = sub.add_parser("scan", help="constancy of holomorphic sectional curvature over the (r, s) plane")
    s.add_argument("file")
    s.add_argument("--r-min", type=float, default=-4.0)
    s.add_argument("--r-max", type=float, default=4.0)
    s.add_argument("--s-min", type=float, default=-3.0)
    s.add_argument("--s-max", type=float, default=3.0)
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    tol(s)
    s.set_defaults(func=cmd_scan)

    h = sub.add_parser("hopf", help="closed forms on the standard Hopf manifold")
    h.add_argument("--n", type=int, default=2)
    h.add_argument("--z", help="comma-separated complex coordinates, default e_1")
    h.add_argument("--r", type=float, default=1.0)
    h.add_argument("--s", type=float, default=0.0)
    mode = h.add_mutually_exclusive_group()
    mode.add_argument("--flat-params", action="store_true", help="list all flat (r, s)")
    mode.add_argument("--report", action="store_true", help="constancy report at z")
    tol(h)
    h.set_defaults(func=cmd_hopf)

    b = sub.add_parser("btp3", help="constancy analysis on balanced BTP threefold patterns")
    b.add_argument("--case", choices=list(BTP3_CASES), required=True)
    b.add_argument("--r", type=float, default=1.0)
    b.add_argument("--s", type=float, default=0.0)
    b.add_argument("--lambda", dest="lam", type=float, default=1.0)
    tol(b)
    b.set_defaults(func=cmd_btp3)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = args.func(args)
    except (InputError, AlgebraFileError) as exc:
        print(f"hermitia: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OutsideDomain, InvalidStructure) as exc:
        print(f"hermitia: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
