"""Command-line front end: solve, estimate, bench, parse-check."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SipmError
from .geometry import Bounds
from .harness import (ExperimentSpec, ProblemSpec, estimate_constants,
                      initial_point, report_to_csv, report_to_json,
                      resolve_maxiter, run_experiment)
from .libsvm import align_feature_space, parse_libsvm_file

MODES = {"det": "deterministic", "stoch": "stochastic"}


def _add_common(parser, multi_solver):
    parser.add_argument("--model", choices=("quadratic", "logistic", "nn"),
                        default="quadratic")
    if multi_solver:
        parser.add_argument("--solver", default="sipm,psgm",
                            help="comma-separated subset of sipm,psgm,proj-ipm")
    else:
        parser.add_argument("--solver", choices=("sipm", "psgm", "proj-ipm"),
                            default="sipm")
    parser.add_argument("--mode", choices=("det", "stoch"), default="det")
    parser.add_argument("--train", metavar="PATH", default=None)
    parser.add_argument("--test", metavar="PATH", default=None)
    parser.add_argument("--maxiter", type=int, default=100)
    parser.add_argument("--epochs", type=float, default=None)
    parser.add_argument("--batch-frac", type=float, default=0.01)
    parser.add_argument("--seeds", default="0", help="comma-separated integers")
    parser.add_argument("--bounds", nargs=2, type=float, default=(-1.0, 1.0),
                        metavar=("LO", "HI"))
    parser.add_argument("--t-mu", type=float, default=-1.0)
    parser.add_argument("--t-theta", type=float, default=-1.0)
    parser.add_argument("--t-alpha", type=float, default=0.0)
    parser.add_argument("--schedule", choices=("power", "staircase"),
                        default="staircase")
    parser.add_argument("--param-mode", choices=("theory", "practical"),
                        default="practical")
    parser.add_argument("--audit", choices=("off", "invariants", "full"),
                        default="off")
    parser.add_argument("--out", default="-")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--dim", type=int, default=5,
                        help="dimension (quadratic) or feature count (synthetic data)")
    parser.add_argument("--samples", type=int, default=50,
                        help="sample count for synthetic datasets")
    parser.add_argument("--data-seed", type=int, default=0)
    parser.add_argument("--init-seed", type=int, default=0)
    parser.add_argument("--hidden", type=int, default=None)
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--trace", action="store_true")


def _spec_from_args(args, solvers):
    problem = ProblemSpec(name=args.model, model=args.model,
                          train_path=args.train, test_path=args.test,
                          dim=args.dim, data_seed=args.data_seed,
                          samples=args.samples, hidden=args.hidden)
    seeds = tuple(int(s) for s in args.seeds.split(","))
    return ExperimentSpec(problems=(problem,), solvers=solvers,
                          mode=MODES[args.mode], schedule=args.schedule,
                          param_mode=args.param_mode,
                          exponents=(args.t_mu, args.t_theta, args.t_alpha),
                          maxiter=args.maxiter, epochs=args.epochs,
                          batch_fraction=args.batch_frac, seeds=seeds,
                          bounds=tuple(args.bounds), audit=args.audit,
                          init_seed=args.init_seed, cache_dir=args.cache_dir,
                          trace=args.trace)


def _emit(text, out_path):
    if out_path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out_path, "w", encoding="ascii") as handle:
            handle.write(text)


def _write_report(report, args):
    text = report_to_json(report) if args.format == "json" else report_to_csv(report)
    _emit(text, args.out)


def _cmd_solve(args):
    spec = _spec_from_args(args, (args.solver,))
    _write_report(run_experiment(spec), args)
    return 0


def _cmd_bench(args):
    solvers = tuple(s.strip() for s in args.solver.split(",") if s.strip())
    spec = _spec_from_args(args, solvers)
    _write_report(run_experiment(spec), args)
    return 0


def _cmd_estimate(args):
    from .harness import _build_problem  # spec-driven problem construction

    spec = _spec_from_args(args, ())
    objective, _ = _build_problem(spec.problems[0], spec)
    bounds = Bounds.cube(objective.n, *spec.bounds)
    x1 = initial_point(objective.n, spec.init_seed)
    constants = estimate_constants(objective, x1, bounds, mode=spec.mode,
                                   batch_fraction=spec.batch_fraction,
                                   seed=spec.init_seed)
    payload = {"problem": spec.problems[0].name,
               "mode": spec.mode,
               "resolved_maxiter": resolve_maxiter(spec),
               "constants": {"ell_f_bar": constants.ell_f_bar,
                             "kappa_inf_bar": constants.kappa_inf_bar,
                             "sigma_inf_bar": constants.sigma_inf_bar}}
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    return 0


def _cmd_parse_check(args):
    try:
        train = parse_libsvm_file(args.train)
        summary = {"train": {"m": train.m, "n_f": train.n_features,
                             "nnz": sum(len(r) for r in train.rows),
                             "labels": list(train.label_values())}}
        if args.test is not None:
            test = parse_libsvm_file(args.test)
            train, test = align_feature_space(train, test)
            summary["test"] = {"m": test.m, "n_f": test.n_features,
                               "nnz": sum(len(r) for r in test.rows),
                               "labels": list(test.label_values())}
            summary["aligned_n_f"] = train.n_features
    except SipmError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    _emit(json.dumps(summary, sort_keys=True, indent=2), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sipm",
        description="Interior-point and projection solvers for box-constrained "
                    "smooth minimization, with a benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver on one problem")
    _add_common(p_solve, multi_solver=False)
    p_solve.set_defaults(handler=_cmd_solve)

    p_estimate = sub.add_parser("estimate", help="estimate problem constants")
    _add_common(p_estimate, multi_solver=False)
    p_estimate.set_defaults(handler=_cmd_estimate)

    p_bench = sub.add_parser("bench", help="compare solvers over seeds")
    _add_common(p_bench, multi_solver=True)
    p_bench.set_defaults(handler=_cmd_bench)

    p_check = sub.add_parser("parse-check", help="validate LIBSVM data files")
    p_check.add_argument("--train", metavar="PATH", required=True)
    p_check.add_argument("--test", metavar="PATH", default=None)
    p_check.add_argument("--out", default="-")
    p_check.set_defaults(handler=_cmd_parse_check)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
