# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

import argparse
import logging
import sys
import time

from gt_multinomial import __version__, settings
from gt_multinomial.asymptotics.bias import first_order_bias
from gt_multinomial.asymptotics.covariance import DeltaMethod, covariance_matrix
from gt_multinomial.cli import tables
from gt_multinomial.cli.output import OutputRecord
from gt_multinomial.cli.reproduce import reproduce
from gt_multinomial.estimators.config import EmConfig, EstimatorKind
from gt_multinomial.estimators.em import estimate
from gt_multinomial.model.types import PoolCounts, PoolDesign, ReducedPrevalence, TraitPrevalence
from gt_multinomial.risk.engine import RiskEngine
from gt_multinomial.risk.monte_carlo import MonteCarloRisk
from gt_multinomial.risk.summary import COMPONENTS
from gt_multinomial.utils import GroupTestingError, ValidationError, get_logger

logger = get_logger("cli")

ESTIMATOR_CHOICES = [kind.value for kind in EstimatorKind] + ["all"]


def _converter(parse, label):
    def convert(value):
        try:
            return parse(value)
        except ValidationError as exc:
            raise argparse.ArgumentTypeError(f"Invalid {label} {value!r}: {exc}") from exc

    return convert


def _positive_int(value):
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {value!r}") from exc
    if number < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {value!r}")
    return number


def _non_negative_int(value):
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected a non-negative integer, got {value!r}") from exc
    if number < 0:
        raise argparse.ArgumentTypeError(f"Expected a non-negative integer, got {value!r}")
    return number


def _seed(value):
    """Philox takes an unsigned 64-bit seed"""
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected an integer seed, got {value!r}") from exc
    if not 0 <= number < 2 ** 64:
        raise argparse.ArgumentTypeError(f"Seed must lie in [0, 2**64 - 1], got {value!r}")
    return number


def _estimators(name):
    if name == "all":
        return list(EstimatorKind)
    return [EstimatorKind.parse(name)]


def cmd_estimate(args):
    """
    Estimate p from one set of pool counts
    """
    design = PoolDesign(k=args.k, n=args.n)
    args.counts.validate_design(design)
    config = EmConfig(epsilon=args.epsilon, max_iterations=args.max_iter)
    if args.start is not None:
        config = config.with_start(args.start)

    record = OutputRecord("estimate", metadata={"n": design.n, "k": design.k, "counts": ",".join(map(str, args.counts.as_tuple()))})
    for estimator in _estimators(args.estimator):
        result = estimate(args.counts, design, estimator, config).as_dict()
        if not args.full_loglik:
            result.pop("full_log_likelihood")
        record.add(result)
    return record


def cmd_risk(args):
    """
    Bias, relative bias and MSE of estimators at a true p
    """
    design = PoolDesign(k=args.k, n=args.n)
    args.p.validate(strict=True)
    record = OutputRecord("risk", metadata={"method": args.method, "seed": args.seed, "samples": args.samples, "rng_algorithm": settings.rng_algorithm})
    for estimator in _estimators(args.estimator):
        if args.method == "exact":
            summary = RiskEngine.exact_risk(args.p, design, estimator, threads=args.threads, budget=args.budget)
        elif args.method == "mc":
            summary = MonteCarloRisk.monte_carlo_risk(args.p, design, estimator, samples=args.samples, seed=args.seed)
        else:
            summary = RiskEngine.auto(args.p, design, estimator, threads=args.threads, budget=args.budget, samples=args.samples, seed=args.seed)
        row = summary.as_row()
        row["total_mass"] = summary.total_mass
        row["pruned_mass_bound"] = summary.pruned_mass_bound
        record.add(row)
    return record


def cmd_cov(args):
    """
    Asymptotic covariance entries at an interior p
    """
    covariance = covariance_matrix(args.p, args.k)
    row = {"k": args.k, **covariance.entries()}
    if args.check:
        oracle = DeltaMethod.covariance(args.p, args.k)
        for name, (i, j) in (("sigma11", (0, 0)), ("sigma22", (1, 1)), ("sigma33", (2, 2)), ("sigma21", (1, 0)), ("sigma31", (2, 0)), ("sigma32", (2, 1))):
            row[f"delta_{name}"] = float(oracle[i, j])
    row["min_eigenvalue"] = float(covariance.eigenvalues().min())
    if args.n is not None:
        scaled = covariance.scaled(args.n)
        row["n"] = args.n
        for i, first in enumerate(COMPONENTS):
            for j, second in enumerate(COMPONENTS):
                row[f"cov{first}_{second}"] = float(scaled[i, j])
    return OutputRecord("cov").add(row)


def cmd_bias(args):
    """
    First-order bias coefficients, and the approximate bias at --n
    """
    record = OutputRecord("bias")
    for estimator in _estimators(args.estimator):
        bias = first_order_bias(args.p, args.k, estimator)
        row = {"estimator": estimator.value, "k": args.k, "c10": bias.bias10, "c01": bias.bias01, "c11": bias.bias11}
        if args.n is not None:
            approximate = bias.at(args.n)
            row.update({"n": args.n, "bias10": approximate[0], "bias01": approximate[1], "bias11": approximate[2]})
        record.add(row)
    return record


def cmd_reproduce(args):
    """
    Write reproduction targets under --out
    """
    written = reproduce(
        args.target,
        args.out,
        fmt=args.format,
        precision=args.precision,
        budget=args.budget,
        seed=args.seed,
        samples=args.samples,
        threads=args.threads,
    )
    record = OutputRecord("reproduce", metadata={"target": args.target, "out": str(args.out)})
    for path in written:
        record.add({"target": path.stem, "path": str(path)})
    return record


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gt-multinomial",
        description="Estimation and finite-sample risk for two-trait group testing",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    parser.add_argument("--threads", type=_positive_int, default=None, help="Worker threads for exact enumeration (default: all cores)")
    parser.add_argument("--precision", type=_non_negative_int, default=None, help=f"CSV decimal places (default: {settings.csv_precision}, or the printed precision per reproduce target)")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    prevalence = _converter(TraitPrevalence.parse, "prevalence")

    sub = commands.add_parser("estimate", help="Estimate p from pool counts", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument("--n", type=_positive_int, required=True, help="Number of pools")
    sub.add_argument("--k", type=_positive_int, required=True, help="Units per pool")
    sub.add_argument("--counts", type=_converter(PoolCounts.parse, "counts"), required=True, help="x00,x10,x01,x11")
    sub.add_argument("--estimator", choices=ESTIMATOR_CHOICES, default="mle", help="Estimator")
    sub.add_argument("--epsilon", type=float, default=settings.em_epsilon, help="EM stopping tolerance")
    sub.add_argument("--max-iter", type=_positive_int, default=settings.em_max_iterations, help="EM iteration cap")
    sub.add_argument("--start", type=_converter(ReducedPrevalence.parse, "start"), default=None, help="EM start p10,p01 (default: 0.25,0.25)")
    sub.add_argument("--full-loglik", action="store_true", help="Also report the log-likelihood with the multinomial coefficient")
    sub.set_defaults(handler=cmd_estimate)

    sub = commands.add_parser("risk", help="Exact or Monte Carlo risk at a true p", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument("--p", type=prevalence, required=True, help="p10,p01,p11")
    sub.add_argument("--n", type=_positive_int, required=True, help="Number of pools")
    sub.add_argument("--k", type=_positive_int, required=True, help="Units per pool")
    sub.add_argument("--estimator", choices=ESTIMATOR_CHOICES, default="mle", help="Estimator")
    sub.add_argument("--method", choices=["exact", "mc", "auto"], default="auto", help="Exact enumeration, Monte Carlo, or exact within budget")
    sub.add_argument("--samples", type=_positive_int, default=settings.monte_carlo_samples, help="Monte Carlo draws")
    sub.add_argument("--seed", type=_seed, default=settings.monte_carlo_seed, help="Monte Carlo seed")
    sub.add_argument("--budget", type=_positive_int, default=settings.enumeration_budget, help="Largest sample space enumerated exactly")
    sub.set_defaults(handler=cmd_risk)

    sub = commands.add_parser("cov", help="Asymptotic covariance matrix", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument("--p", type=prevalence, required=True, help="p10,p01,p11")
    sub.add_argument("--k", type=_positive_int, required=True, help="Units per pool")
    sub.add_argument("--n", type=_positive_int, default=None, help="Also emit Sigma / (n k^2)")
    sub.add_argument("--check", action="store_true", help="Add the numerical delta-method entries")
    sub.set_defaults(handler=cmd_cov)

    sub = commands.add_parser("bias", help="First-order bias coefficients", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument("--p", type=prevalence, required=True, help="p10,p01,p11")
    sub.add_argument("--k", type=_positive_int, required=True, help="Units per pool")
    sub.add_argument("--n", type=_positive_int, default=None, help="Also emit the approximate bias at n pools")
    sub.add_argument("--estimator", choices=ESTIMATOR_CHOICES, default="mle", help="Estimator")
    sub.set_defaults(handler=cmd_bias)

    sub = commands.add_parser("reproduce", help="Write the reproduction tables as files", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument("--target", choices=tables.TARGETS + ["all"], required=True, help="Table or figure series")
    sub.add_argument("--out", required=True, help="Output directory")
    sub.add_argument("--budget", type=_positive_int, default=settings.enumeration_budget, help="Largest sample space enumerated exactly")
    sub.add_argument("--seed", type=_seed, default=settings.monte_carlo_seed, help="Monte Carlo seed")
    sub.add_argument("--samples", type=_positive_int, default=settings.monte_carlo_samples, help="Monte Carlo draws beyond the budget")
    sub.set_defaults(handler=cmd_reproduce)
    return parser


def _configure_logging(level):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    package = get_logger()
    package.handlers = [handler]
    package.setLevel(level)
    package.propagate = False


def main(argv=None):
    """
    Console entry point; returns the exit status
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    started = time.perf_counter()
    try:
        record = args.handler(args)
    except ValidationError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return 2
    except GroupTestingError as exc:
        logger.error("%s failed: %s", args.command, exc)
        sys.stderr.write(f"{parser.prog}: {exc}\n")
        return 1

    record.metadata["seconds"] = round(time.perf_counter() - started, 3)
    sys.stdout.write(record.render(args.format, args.precision))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
