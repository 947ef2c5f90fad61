"""``sepkit`` command line.

Exit codes: 0 success or inconclusive, 2 entanglement detected, 1 error.
"""

import argparse
import json
import sys

import numpy as np

from sepkit.bases import basis_by_name
from sepkit.bloch import Convention
from sepkit.criteria import PRESETS, Criterion, TensorParams, preset
from sepkit.errors import NotHermitianError
from sepkit.reproduce import TARGETS
from sepkit.search import FamilySpec, NoThresholdError, find_thresholds, grid_sweep, min_detected_p, sweep_csv
from sepkit.states import (
    DensityMatrix,
    isotropic,
    maximally_entangled,
    random_density,
    random_separable,
    tiles_family,
    werner,
)
from sepkit.witness import expectation, optimal_witness

EXIT_OK, EXIT_ERROR, EXIT_ENTANGLED = 0, 1, 2
MAX_N = 10_000
MAX_XY = 1e6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def _add_criterion_flags(p):
    p.add_argument("--preset", choices=PRESETS, help="named criterion")
    p.add_argument("--basis", choices=("gm", "hw"), help="local operator basis (explicit mode)")
    p.add_argument("--kappa", type=float, help="rescale the basis to this orthogonality constant")
    p.add_argument("--convention", choices=("plain", "hatted"), help="coefficient convention (explicit mode)")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--n", type=int)


def _criterion(args, d_a, d_b):
    for name in ("x", "y"):
        v = getattr(args, name)
        if v is not None and not 0 <= v <= MAX_XY:
            raise UsageError(f"--{name} must lie in [0, {MAX_XY:g}]")
    if args.n is not None and not 1 <= args.n <= MAX_N:
        raise UsageError(f"--n must lie in [1, {MAX_N}]")
    explicit = any(v is not None for v in (args.basis, args.kappa, args.convention))
    if args.preset:
        if explicit:
            raise UsageError("--preset cannot be combined with --basis/--kappa/--convention")
        try:
            return preset(args.preset, d_a, d_b, x=args.x, y=args.y, n=args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not args.basis:
        raise UsageError("give either --preset or --basis (with optional --kappa/--convention)")
    conv = Convention(args.convention or "plain")
    if args.kappa is not None and not args.kappa > 0:
        raise UsageError("--kappa must be positive")
    params = TensorParams(args.x or 0.0, args.y or 0.0, args.n or 1, conv)
    ba = basis_by_name(args.basis, d_a, args.kappa)
    bb = basis_by_name(args.basis, d_b, args.kappa)
    name = "thm1" if conv is Convention.PLAIN else "prop1"
    return Criterion(f"{name}-{args.basis}", ba, bb, params)


def _load_state(path):
    if path is None:
        raise UsageError("--state is required")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read state file {path}: {exc}") from None
    return DensityMatrix.from_dict(data)


def _emit(payload):
    print(json.dumps(payload, indent=2))


def cmd_detect(args):
    rho = _load_state(args.state)
    report = _criterion(args, rho.d_a, rho.d_b).evaluate(rho)
    _emit(report.to_dict())
    return EXIT_ENTANGLED if report.entangled else EXIT_OK


def cmd_threshold(args):
    p_range = None
    if args.p_min is not None or args.p_max is not None:
        full = FamilySpec(args.family, args.d).p_range
        p_range = (full[0] if args.p_min is None else args.p_min, full[1] if args.p_max is None else args.p_max)
    spec = FamilySpec(args.family, args.d, p_range)
    found = find_thresholds(spec, _criterion(args, spec.d, spec.d), tol=args.tol)
    if not found:
        raise NoThresholdError(f"verdict does not change on {spec.p_range}")
    results = [r.to_dict() for r in found]
    _emit({"family": spec.family.value, "d": spec.d, "p_star": results[0]["p_star"], "thresholds": results})
    return EXIT_OK


def _grid(lo, hi, steps):
    return np.linspace(lo, hi, steps)


def cmd_sweep(args):
    spec = FamilySpec(args.family, args.d)
    basis = args.basis or "hw"
    ba = basis_by_name(basis, spec.d, args.kappa)
    rows = grid_sweep(
        spec,
        args.n_set,
        (args.x_slope, args.x_intercept),
        _grid(args.y_min, args.y_max, args.y_steps),
        _grid(args.p_min, args.p_max, args.p_steps),
        basis_a=ba,
        basis_b=ba,
        convention=Convention(args.convention or "plain"),
    )
    text = sweep_csv(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(json.dumps({"rows": len(rows), "min_detected_p": min_detected_p(rows)}), file=sys.stderr)
    return EXIT_OK


def cmd_witness(args):
    rho = _load_state(args.state)
    crit = _criterion(args, rho.d_a, rho.d_b)
    try:
        w = optimal_witness(crit, rho)
    except NotHermitianError as exc:
        raise UsageError(f"refusing to build a witness: {exc}") from None
    value = expectation(w, rho)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(w.to_dict(), fh, indent=2)
    if args.text:
        with open(args.text, "w") as fh:
            fh.write(w.to_text())
    _emit({"expectation": float(f"{value:.15g}"), "bound": float(f"{w.bound:.15g}"), "out": args.out})
    return EXIT_ENTANGLED if value < -1e-9 else EXIT_OK


def cmd_reproduce(args):
    checks = TARGETS[args.target](args.out_dir)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_ERROR


def cmd_state(args):
    fam = args.family
    if fam == "tiles":
        rho = tiles_family(1.0 if args.p is None else args.p)
    elif fam == "isotropic":
        rho = isotropic(args.d, args.p if args.p is not None else 1.0)
    elif fam == "werner":
        rho = werner(args.d, args.p if args.p is not None else 1.0)
    elif fam == "max-entangled":
        rho = maximally_entangled(args.d)
    elif fam == "mixed":
        db = args.d_b or args.d
        rho = DensityMatrix(args.d, db, np.eye(args.d * db) / (args.d * db))
    elif fam == "random":
        rho = random_density(args.d, args.d_b or args.d, seed=args.seed)
    else:
        rho = random_separable(args.d, args.d_b or args.d, args.k, seed=args.seed)
    text = json.dumps(rho.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="sepkit", description="Extended-correlation-tensor separability criteria.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="evaluate a criterion on a state file")
    p.add_argument("--state")
    _add_criterion_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("threshold", help="bisection threshold on a state family")
    p.add_argument("--family", choices=("tiles", "isotropic", "werner"), required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--p-min", type=float)
    p.add_argument("--p-max", type=float)
    _add_criterion_flags(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="grid sweep over (n, y, p) with x affine in y, CSV output")
    p.add_argument("--family", choices=("tiles", "isotropic", "werner"), default="tiles")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--basis", choices=("gm", "hw"))
    p.add_argument("--kappa", type=float)
    p.add_argument("--convention", choices=("plain", "hatted"))
    p.add_argument("--n-set", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--x-slope", type=float, default=1 / 9)
    p.add_argument("--x-intercept", type=float, default=0.0)
    p.add_argument("--y-min", type=float, default=0.0)
    p.add_argument("--y-max", type=float, default=2.0)
    p.add_argument("--y-steps", type=int, default=41)
    p.add_argument("--p-min", type=float, default=0.8)
    p.add_argument("--p-max", type=float, default=1.0)
    p.add_argument("--p-steps", type=int, default=201)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("witness", help="optimal witness for a state, written as JSON")
    p.add_argument("--state")
    p.add_argument("--out")
    p.add_argument("--text", help="also write the operator as a flat text matrix")
    _add_criterion_flags(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("reproduce", help="recompute a published result and compare")
    p.add_argument("target", choices=sorted(TARGETS))
    p.add_argument("--out-dir", default="sepkit-out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("state", help="write a state file")
    p.add_argument(
        "--family",
        choices=("tiles", "isotropic", "werner", "max-entangled", "mixed", "random", "separable"),
        required=True,
    )
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--d-b", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"sepkit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
