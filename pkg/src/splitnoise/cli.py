"""Command-line front door for seeded, reproducible experiment runs.

Every run is a pure function of its configuration: the JSON payload
echoes the full configuration and carries no wall-clock data, so a
repeated run with the same flags is byte-identical.

Exit codes: 0 success, 1 theorem check failed at tolerance, 2 usage
error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .coupled import argmin_coincidence, discrete_phi, m_lambda_functional
from .errors import DomainError, PreconditionError, ResourceLimitError
from .sampling import derive_seed
from .theorem import rhs_integral, sensitivity_curve, verify_theorem
from .timesets import TimeSet
from .walsh import sgn_functional_table, walsh_transform


def _payload(command: str, params: dict, results: dict) -> str:
    doc = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "results": results,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_region(text: str) -> TimeSet:
    return TimeSet.parse(text)


def _add_common(p: argparse.ArgumentParser, rho: bool = True):
    p.add_argument("--A", default="", help='perturbation region, e.g. "1/4..1/2,5/8..3/4"; empty = none')
    if rho:
        p.add_argument("--rho", type=float, default=None, help="perturbed-step correlation")
    p.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    p.add_argument("--out", default=None, help="write the JSON payload here instead of stdout")


# flags that must be present after the config merge
_REQUIRED = {
    "discrete-phi": ("rho", "n"),
    "walsh-spectrum": ("n",),
    "mc-phi": ("rho",),
    "theorem-check": ("rho",),
    "sensitivity-curve": ("rho", "n_list"),
    "consistency-check": ("rho",),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="splitnoise",
        description="Noise-sensitivity experiments for the discrete Tanaka model.",
    )
    ap.add_argument("--config", default=None,
                    help="JSON file of flag values (long names without dashes); explicit flags win")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discrete-phi", help="walk-pair sign correlation by Monte Carlo")
    _add_common(p)
    p.add_argument("--n", type=int, default=None, help="walk length")
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("walsh-spectrum", help="exact spectrum of the sign functional as CSV")
    p.add_argument("--n", type=int, default=None, help="number of steps")
    p.add_argument("--top", type=int, default=None, help="keep only the K heaviest subsets")
    p.add_argument("--out", default=None)

    p = sub.add_parser("mc-phi", help="argmin-coincidence probability of the coupled Brownian pair")
    _add_common(p)
    p.add_argument("--n-grid", type=int, default=1 << 13)
    p.add_argument("--n-grid-list", default=None,
                   help="comma-separated grids; emits a CSV convergence table instead of JSON")
    p.add_argument("--samples", type=int, default=20_000)

    p = sub.add_parser("theorem-check", help="compare the direct and arc-sine-integral routes")
    _add_common(p)
    p.add_argument("--n-grid", type=int, default=1 << 13)
    p.add_argument("--samples", type=int, default=20_000, help="direct-route sample count")
    p.add_argument("--nodes", type=int, default=24, help="quadrature nodes per gap")
    p.add_argument("--node-samples", type=int, default=20_000)
    p.add_argument("--node-steps", type=int, default=1024)
    p.add_argument("--check-stability", action="store_true",
                   help="repeat the direct route on the doubled grid")
    p.add_argument("--factors-csv", default=None, help="write per-node factors here")

    p = sub.add_parser("sensitivity-curve", help="full-interval correlation along walk lengths, CSV")
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--n-list", default=None, help="comma-separated ascending walk lengths")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("consistency-check", help="entrance-start invariance of the mixture functional")
    _add_common(p)
    p.add_argument("--t0", default="1/32,1/8", help="comma-separated pair of start times (fractions ok)")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--steps", type=int, default=1024)
    return ap


def _merge_config(argv: list[str], ap: argparse.ArgumentParser) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            stored = json.load(fh)
        defaults = {k.replace("-", "_"): v for k, v in stored.items() if k not in ("command",)}
        explicit = {k for k in vars(args) if _flag_given(argv, k)}
        for key, value in defaults.items():
            if key not in explicit and hasattr(args, key):
                setattr(args, key, value)
    for dest in _REQUIRED.get(args.command, ()):
        if getattr(args, dest, None) is None:
            ap.error(f"{args.command} requires --{dest.replace('_', '-')}")
    return args


def _flag_given(argv: list[str], dest: str) -> bool:
    flag = "--" + dest.replace("_", "-")
    return any(tok == flag or tok.startswith(flag + "=") for tok in argv)


def _parse_fraction(text: str) -> float:
    from fractions import Fraction
    return float(Fraction(text.strip()))


# -- command bodies --------------------------------------------------------

def _run_discrete_phi(args) -> int:
    region = _parse_region(args.A)
    est = discrete_phi(region, args.rho, args.n, args.samples, args.seed)
    params = {"A": str(region), "rho": args.rho, "n": args.n,
              "samples": args.samples, "seed": args.seed}
    _emit(_payload("discrete-phi", params, est.as_dict()), args.out)
    return 0


def _run_mc_phi(args) -> int:
    region = _parse_region(args.A)
    if args.n_grid_list:
        grids = [int(tok) for tok in args.n_grid_list.split(",")]
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["n_grid", "estimate", "stderr", "n_samples", "tie_fraction"])
        for i, g in enumerate(grids):
            est = argmin_coincidence(region, args.rho, g, args.samples,
                                     derive_seed(args.seed, i))
            writer.writerow([g, repr(est.mean), repr(est.stderr), est.n_samples,
                             repr(est.extra["tie_fraction"])])
        _emit(buf.getvalue(), args.out)
        return 0
    est = argmin_coincidence(region, args.rho, args.n_grid, args.samples, args.seed)
    params = {"A": str(region), "rho": args.rho, "n_grid": args.n_grid,
              "samples": args.samples, "seed": args.seed}
    _emit(_payload("mc-phi", params, est.as_dict()), args.out)
    return 0


def _run_walsh_spectrum(args) -> int:
    spectrum = walsh_transform(sgn_functional_table(args.n))
    mass = spectrum.coefficients**2
    order = np.argsort(-mass, kind="stable")
    if args.top is not None:
        order = order[: args.top]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["subset_bitmask", "coefficient", "squared_mass"])
    for idx in order:
        writer.writerow([int(idx), repr(float(spectrum.coefficients[idx])),
                         repr(float(mass[idx]))])
    _emit(buf.getvalue(), args.out)
    return 0


def _run_theorem_check(args) -> int:
    region = _parse_region(args.A)
    report = verify_theorem(
        region, args.rho, seed=args.seed,
        lhs_n_grid=args.n_grid, lhs_samples=args.samples,
        n_nodes=args.nodes, node_samples=args.node_samples,
        node_steps=args.node_steps, check_stability=args.check_stability,
    )
    if args.factors_csv and report.rhs.extra:
        with open(args.factors_csv, "w", newline="") as fh:
            rows = report.rhs.extra["nodes"]
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else
                                    ["component", "t", "weight", "left",
                                     "left_stderr", "right", "right_stderr"])
            writer.writeheader()
            writer.writerows(rows)
    params = {"A": str(region), "rho": args.rho, "n_grid": args.n_grid,
              "samples": args.samples, "nodes": args.nodes,
              "node_samples": args.node_samples, "node_steps": args.node_steps,
              "seed": args.seed}
    _emit(_payload("theorem-check", params, report.as_dict()), args.out)
    return 0 if report.passed else 1


def _run_sensitivity_curve(args) -> int:
    n_list = [int(tok) for tok in args.n_list.split(",")]
    rows = sensitivity_curve(args.rho, n_list, args.samples, args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "estimate", "stderr", "n_samples"])
    for n, est in rows:
        writer.writerow([n, repr(est.mean), repr(est.stderr), est.n_samples])
    _emit(buf.getvalue(), args.out)
    return 0


def _run_consistency_check(args) -> int:
    region = _parse_region(args.A)
    starts = [_parse_fraction(tok) for tok in args.t0.split(",")]
    if len(starts) != 2:
        raise DomainError("--t0 takes exactly two comma-separated start times")
    runs = [
        m_lambda_functional(region, args.rho, t0, args.samples,
                            derive_seed(args.seed, i), n_steps=args.steps)
        for i, t0 in enumerate(starts)
    ]
    gap = abs(runs[0].mean - runs[1].mean)
    tol = 4.0 * (runs[0].stderr**2 + runs[1].stderr**2) ** 0.5
    params = {"A": str(region), "rho": args.rho, "t0": starts,
              "samples": args.samples, "steps": args.steps, "seed": args.seed}
    results = {
        "runs": [est.as_dict() for est in runs],
        "difference": gap,
        "tolerance_4sigma": tol,
        "consistent": gap <= tol,
    }
    _emit(_payload("consistency-check", params, results), args.out)
    return 0 if gap <= tol else 1


_COMMANDS = {
    "discrete-phi": _run_discrete_phi,
    "walsh-spectrum": _run_walsh_spectrum,
    "mc-phi": _run_mc_phi,
    "theorem-check": _run_theorem_check,
    "sensitivity-curve": _run_sensitivity_curve,
    "consistency-check": _run_consistency_check,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = _merge_config(argv, ap)
    try:
        return _COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"error kind=resource message={exc}", file=sys.stderr)
        print(f"The requested size exceeds the desk-scale cap: {exc}", file=sys.stderr)
        return 3
    except (DomainError, PreconditionError) as exc:
        print(f"error kind=domain message={exc}", file=sys.stderr)
        print(f"Invalid arguments: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
