"""Command-line surface: construct family members, verify their
properties, probe blow-up and decay, export plot-ready grids.

Exit codes: 0 all checks pass, 1 a verification or probe failed,
2 invalid input (arguments or malformed files).  Reports go to stdout;
data files only to explicitly named paths.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings

import numpy as np

from . import kernels, storage
from .analysis import (
    DEFAULT_SEED,
    GridSpec,
    lemma2_probe,
    marty_probe,
    max_modulus_check,
    verify_inequality,
    verify_node_jets,
)
from .cpoly import to_monomial
from .errors import (
    CenterOffCircle,
    InvariantViolation,
    NormfamError,
    PointTooCloseToCircle,
)
from .forge import EPS_NODE, ConstructionConfig, construct

OK, FAIL, USAGE = 0, 1, 2

# one canonical complex syntax: a+bi with no spaces (bare reals allowed)
_COMPLEX_RE = re.compile(
    r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$"
)


def parse_complex(text):
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse {text!r} as a complex number; use a+bi")
    return complex(float(m.group("re")), float(m.group("im") or 0.0))


def parse_region(text):
    parts = text.split(":")
    try:
        name, radii = parts[0], tuple(float(r) for r in parts[1:])
    except ValueError as exc:
        raise ValueError(f"cannot parse region {text!r}") from exc
    if not radii:
        raise ValueError(f"region {text!r} needs at least one radius, e.g. disk:2")
    return name, radii


def parse_n_range(text):
    m = re.match(r"^(\d+)\.\.(\d+)$", text)
    if not m:
        raise ValueError(f"cannot parse range {text!r}; use A..B")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo < 1:
        raise ValueError("range must start at 1 or above")
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _load(path):
    """(F, grid_m, exit_code): parse problems are usage errors, invariant
    violations are verification failures."""
    try:
        F, grid_m = storage.load_function(path)
        return F, grid_m, OK
    except InvariantViolation as exc:
        _err(f"{path}: stored function fails its invariants: {exc}")
        return None, None, FAIL
    except (OSError, ValueError) as exc:
        _err(f"{path}: {exc}")
        return None, None, USAGE


def cmd_construct(args):
    if args.n < 1:
        _err("n must be >= 1")
        return USAGE
    try:
        cfg = ConstructionConfig(precision=args.precision, grid_m=args.grid)
    except ValueError as exc:
        _err(str(exc))
        return USAGE
    try:
        F = construct(args.n, cfg)
    except NormfamError as exc:
        _err(f"construction failed: {exc}")
        return FAIL
    storage.save_function(F, args.grid, args.output)
    return OK


def cmd_verify(args):
    F, _, code = _load(args.file)
    if code != OK:
        return code
    ineq = verify_inequality(F, args.samples, args.tol, seed=args.seed)
    nodes = verify_node_jets(F)
    maxmod = max_modulus_check(F)
    report = storage.report_file(
        "verify",
        [args.file],
        {
            "inequality": storage.verification_to_dict(ineq),
            "node_jets": storage.verification_to_dict(nodes),
            "max_modulus": storage.verification_to_dict(maxmod),
        },
    )
    print(json.dumps(report, indent=2))
    return OK if (ineq.passed and nodes.passed and maxmod.passed) else FAIL


def cmd_probe(args):
    Fs = []
    for path in args.files:
        F, _, code = _load(path)
        if code != OK:
            return code
        Fs.append(F)
    try:
        if args.kind == "marty":
            pr = marty_probe(Fs, parse_complex(args.center), args.radius, seed=args.seed)
        else:
            points = [parse_complex(s) for s in args.points.split(",")]
            orders = [int(s) for s in args.orders.split(",")]
            pr = lemma2_probe(Fs, points, orders)
    except (CenterOffCircle, PointTooCloseToCircle, ValueError) as exc:
        _err(str(exc))
        return USAGE
    print(json.dumps(storage.probe_to_dict(pr), indent=2))
    return OK if pr.verdict in ("blowup", "decay") else FAIL


def cmd_grid(args):
    F, _, code = _load(args.file)
    if code != OK:
        return code
    try:
        name, radii = parse_region(args.region)
        spec = GridSpec(name, radii, args.resolution, seed=args.seed)
    except ValueError as exc:
        _err(str(exc))
        return USAGE
    zs = spec.points()
    cen, cof = F.arrays
    if args.what == "ratio":
        zs = zs[np.abs(zs**F.n - 1.0) > EPS_NODE]  # poles-adjacent zone excluded
        vals = kernels.ratio_log(F.n, cen, cof, zs)
    elif args.what == "fk":
        vals = kernels.fk(F.n, cen, cof, F.log_a, zs)
    else:
        vals = kernels.sphder_log(F.n, cen, cof, F.log_a, zs)
    keep = np.isfinite(vals)
    zs, vals = zs[keep], vals[keep]
    with open(args.export, "w", encoding="utf-8", newline="") as fh:
        fh.write("re,im,value\n")
        for z, v in zip(zs, vals):
            fh.write(f"{z.real:.17g},{z.imag:.17g},{v:.17g}\n")
    return OK


def cmd_sweep(args):
    try:
        lo, hi = parse_n_range(args.n_range)
    except ValueError as exc:
        _err(str(exc))
        return USAGE
    rows, all_ok = [], True
    for n in range(lo, hi + 1):
        try:
            F = construct(n)
            ineq = verify_inequality(F)
            nodes = verify_node_jets(F)
            maxmod = max_modulus_check(F)
            pm = marty_probe([F], 1 + 0j, 0.1)
            ok = ineq.passed and nodes.passed and maxmod.passed and pm.verdict == "blowup"
            rows.append(
                {
                    "n": n,
                    "degree_p": len(to_monomial(F.p)) - 1,
                    "c_hat": storage.summary_str(F.c_hat),
                    "a": storage.summary_str(F.a),
                    "max_inequality": float(ineq.max_inequality),
                    "marty": storage.summary_str(pm.measurements[0]),
                    "passed": ok,
                }
            )
        except (NormfamError, ValueError) as exc:
            rows.append({"n": n, "error": str(exc), "passed": False})
            ok = False
        all_ok = all_ok and ok
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        json.dump({"command": "sweep", "rows": rows}, fh, indent=2)
        fh.write("\n")
    for row in rows:
        if "error" in row:
            print(f"n={row['n']:<3d} ERROR {row['error']}")
        else:
            print(
                f"n={row['n']:<3d} deg(p)={row['degree_p']:<3d}"
                f" c_hat={row['c_hat']:<24s} a={row['a']:<24s}"
                f" max_ineq={row['max_inequality']:.3e}"
                f" marty={row['marty']:<24s}"
                f" {'pass' if row['passed'] else 'FAIL'}"
            )
    return OK if all_ok else FAIL


def _parser():
    top = argparse.ArgumentParser(
        prog="normfam",
        description="construct and verify the counterexample family "
        "f_n = a_n (z^n - 1) exp(p_n)",
    )
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build one family member and save it")
    c.add_argument("-n", type=int, required=True, help="family order (>= 1)")
    c.add_argument("--precision", type=int, default=53, help="working bits (>= 53)")
    c.add_argument("--grid", type=int, default=1024, help="magnitude scan grid size")
    c.add_argument("-o", "--output", required=True, help="function file to write")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="run all verification sweeps on a saved function")
    v.add_argument("file")
    v.add_argument("--samples", type=int, default=10000)
    v.add_argument("--tol", type=float, default=1e-12)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", help="measure blow-up (marty) or decay (lemma2)")
    p.add_argument("kind", choices=["marty", "lemma2"])
    p.add_argument("files", nargs="+")
    p.add_argument("--center", default="1+0i", help="marty: center on the unit circle")
    p.add_argument("--radius", type=float, default=0.1, help="marty: disk radius")
    p.add_argument("--points", default="0", help="lemma2: comma-separated points")
    p.add_argument("--orders", default="2", help="lemma2: comma-separated orders from {1,2}")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_probe)

    g = sub.add_parser("grid", help="export grid values as CSV (re,im,value)")
    g.add_argument("file")
    g.add_argument("--what", choices=["ratio", "fk", "sphder"], required=True,
                   help="ratio and sphder emit log-scale values")
    g.add_argument("--region", required=True, help="disk:R | circle:R | annulus:R1:R2")
    g.add_argument("--resolution", type=int, required=True)
    g.add_argument("--export", required=True, help="CSV path to write")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.set_defaults(func=cmd_grid)

    s = sub.add_parser("sweep", help="construct and verify a whole range of orders")
    s.add_argument("--n-range", required=True, help="A..B inclusive")
    s.add_argument("-o", "--output", required=True, help="summary JSON to write")
    s.set_defaults(func=cmd_sweep)
    return top


def main(argv=None):
    # numba's notice about an outdated TBB install; it falls back to a
    # working threading layer, so keep the CLI's stderr for real errors
    warnings.filterwarnings("ignore", message="The TBB threading layer requires TBB")
    args = _parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
