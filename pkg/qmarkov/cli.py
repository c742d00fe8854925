"""Command-line front end

Subcommands ``verify``, ``scan``, ``divisibility``, ``sweep`` and ``bounds``
share the parameter flags. Parameters are read from ``--config`` first and
explicit flags override the file. Exit codes: 0 on success, 1 if a check
fails, 2 on usage errors.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from .checks import ContractivityCheck, DynamicalMapCheck, default_checks
from .constants import DEFAULT_SEED, TOL_DERIV
from .contractivity.closed_form import (
    bound_chain_check,
    lambda_monotonicity_check,
    lambda_reflection_check,
    polynomial_majorant_roots,
    theta_window_sweep,
)
from .contractivity.scan import EXPLORATORY, norm_derivative_scan, scan_grid
from .counterexample.maps import QutritCounterexample
from .counterexample.params import RATE_KINDS, MapParams, load_params
from .divisibility import cp_divisibility_scan, positive_forcing_witness
from .operators import PROBE_KINDS, RANDOM_HERMITIAN, random_probes
from .reports import write_csv, write_json
from .superop import image_inclusion_residuals
from .verifier import Verifier

logger = logging.getLogger(__name__)

DEFAULT_THETAS = "1.0,1.1,1.2,1.3,1.4,1.5,1.6,1.7"


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text} is not a comma-separated list of numbers")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} should be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="key = value parameter file")
    common.add_argument("--theta", type=float, default=None, help="rotation angle theta")
    common.add_argument("--delta", type=float, default=None, help="exponent of tau, >= 1")
    common.add_argument("--rate", choices=RATE_KINDS, default=None, help="rate functions")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed of the probes")
    common.add_argument("--grid", type=_positive_int, default=200, help="number of grid points")
    common.add_argument("--probes", type=_positive_int, default=500, help="number of probes")
    common.add_argument("--k", type=_positive_int, default=1, help="ancilla dimension")
    common.add_argument("--slack", type=float, default=TOL_DERIV, help="derivative slack")
    common.add_argument("--workers", type=_positive_int, default=1, help="scanning threads")
    common.add_argument("--out", type=Path, default=Path("qmarkov-out"), help="output directory")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="qmarkov",
        description="Verification of a contractive but not P-divisible qutrit dynamical map",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("verify", parents=[common], help="run the verification suite")
    scan = commands.add_parser("scan", parents=[common], help="right-derivative scan")
    scan.add_argument("--kind", choices=PROBE_KINDS, default=RANDOM_HERMITIAN)
    commands.add_parser("divisibility", parents=[common], help="intermediate-map verdicts")
    sweep = commands.add_parser("sweep", parents=[common], help="theta window sweep")
    sweep.add_argument("--thetas", type=_float_list, default=_float_list(DEFAULT_THETAS))
    commands.add_parser("bounds", parents=[common], help="bound chain at theta")
    return parser


def params_from_args(args: argparse.Namespace) -> MapParams:
    """Parameters from the configuration file overridden by explicit flags"""
    overrides = {
        key: getattr(args, key)
        for key in ("theta", "delta", "rate")
        if getattr(args, key) is not None
    }  # type: Dict[str, Any]
    if args.config is not None:
        return load_params(args.config, overrides)
    return MapParams.from_dict(overrides)


def _report(args: argparse.Namespace, name: str, summary: Dict[str, Any]) -> None:
    write_json(summary, args.out / f"{name}_summary.json")


def cmd_verify(args: argparse.Namespace, params: MapParams) -> int:
    family = QutritCounterexample(params)
    checks = default_checks(family)
    for check in checks:
        if isinstance(check, (ContractivityCheck, DynamicalMapCheck)):
            check.grid_size = args.grid
            check.seed = args.seed
        if isinstance(check, ContractivityCheck):
            check.probes = args.probes
            check.slack = args.slack
            check.workers = args.workers
    verifier = Verifier(family, checks)
    results = verifier.verify()
    for result in results:
        write_csv(result.details, args.out / "verify" / f"{result.tag}.csv")
    write_csv(verifier.table(), args.out / "verify.csv")
    summary = verifier.summary()
    summary["params"] = params.to_dict()
    summary["seed"] = args.seed
    _report(args, "verify", summary)
    for result in results:
        print(f"{result.tag}: {result.status}")
    if verifier.passed:
        print("all checks passed")
        return 0
    print(f"failing checks: {', '.join(verifier.failing_tags)}")
    return 1


def cmd_scan(args: argparse.Namespace, params: MapParams) -> int:
    family = QutritCounterexample(params)
    probes = random_probes(family.dim * args.k, args.probes, args.seed, args.kind)
    report = norm_derivative_scan(
        family,
        probes,
        scan_grid(family, args.grid),
        k=args.k,
        slack=args.slack,
        workers=args.workers,
    )
    write_csv(report.rows, args.out / "scan.csv")
    summary = dict(report.summary)
    summary.update(report.metadata)
    _report(args, "scan", summary)
    if args.k > 1:
        print(f"scan with k = {args.k}: {EXPLORATORY}")
        return 0
    print(f"max right derivative {report.max_rderiv:.3e}")
    return 0 if report.passed else 1


def cmd_divisibility(args: argparse.Namespace, params: MapParams) -> int:
    family = QutritCounterexample(params)
    grid = np.linspace(0, params.t4, max(args.grid, 2))
    verdicts = cp_divisibility_scan(family, grid)
    write_csv(verdicts, args.out / "divisibility.csv")
    residuals = image_inclusion_residuals(family, grid)
    write_csv(residuals, args.out / "image_inclusion.csv")
    witness = positive_forcing_witness(family, params.t3, params.t4)
    summary = {
        "verdicts": verdicts["verdict"].value_counts().to_dict(),
        "max_inclusion_residual": float(residuals["residual"].max()),
        "witness": None,
    }  # type: Dict[str, Any]
    if witness is not None:
        summary["witness"] = {
            "origins": list(witness.origins),
            "discrepancy": witness.discrepancy,
            "certifies": witness.certifies(),
        }
    _report(args, "divisibility", summary)
    if witness is not None and witness.certifies():
        print(f"not P-divisible on [t3, t4], discrepancy {witness.discrepancy:.6f}")
        return 0
    print("no forcing witness on [t3, t4]")
    return 1


def cmd_sweep(args: argparse.Namespace, params: MapParams) -> int:
    table = theta_window_sweep(
        args.thetas, np.linspace(0, 1, 101), np.linspace(0, 10, 101), params.delta
    )
    write_csv(table, args.out / "sweep.csv")
    contractive = table.loc[~table["positive"], "theta"].tolist()
    _report(args, "sweep", {"delta": params.delta, "contractive_thetas": contractive})
    print(table.to_string(index=False))
    return 0


def cmd_bounds(args: argparse.Namespace, params: MapParams) -> int:
    theta = params.theta
    ledger = bound_chain_check(theta, np.arange(1, 201) / 200)
    write_csv(ledger, args.out / "bounds.csv")
    rng = np.random.default_rng(args.seed)
    angles = np.linspace(0, theta, 50)
    monotone = bool(lambda_monotonicity_check(angles, np.arange(1.0, 11.0))["ok"].all())
    reflection = lambda_reflection_check(
        rng.uniform(0.01, 0.99, 1000), rng.uniform(0, 1, 1000), theta
    )
    summary = {
        "theta": theta,
        "chain_holds": bool(ledger["ok"].all()),
        "monotonicity_holds": monotone,
        "reflection_holds": reflection,
        "majorant_roots": polynomial_majorant_roots(theta),
    }
    _report(args, "bounds", summary)
    ok = summary["chain_holds"] and monotone and reflection
    print(f"bound chain at theta = {theta}: {'holds' if ok else 'fails'}")
    return 0 if ok else 1


COMMANDS = {
    "verify": cmd_verify,
    "scan": cmd_scan,
    "divisibility": cmd_divisibility,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
}


def main(argv: Sequence[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        params = params_from_args(args)
    except (ValueError, OSError) as error:
        parser.error(str(error))
    try:
        return COMMANDS[args.command](args, params)
    except ValueError as error:
        print(f"qmarkov {args.command}: error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
