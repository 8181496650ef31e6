"""Command-line interface.

``betaland run`` solves one instance and writes a per-iteration trace;
``betaland sweep`` solves the same instance for several β values and writes
a comparison table. Exit codes: 0 converged, 1 usage error, 2 iteration cap
reached, 3 rank breakdown or step failure.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .landing import CONVERGED, MAX_ITERS, LandingConfig, solve
from .problems import initial_point, load_matrix, procrustes, random_instance, rayleigh

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MAX_ITERS = 2
EXIT_BREAKDOWN = 3

TRACE_HEADER = ["iter", "f", "grad_norm", "h_norm", "N", "eta", "sigma_min_ratio"]
SWEEP_HEADER = ["beta", "status", "iterations", "final_f", "final_h_norm"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    """17 significant digits: round-trips every double."""
    return format(float(x), ".17g")


def _add_common(parser):
    parser.add_argument("--problem", choices=("rayleigh", "procrustes"), default="rayleigh")
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--omega", type=float, default=1.0)
    parser.add_argument("--eta", type=float, default=None)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--max-iters", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--delta", type=float, default=0.0,
                        help="off-manifold distance ‖XᵀX − I‖ of the start")
    parser.add_argument("--step-policy", choices=("fixed", "backtracking"), default="fixed")
    parser.add_argument("--matrix-a", metavar="FILE")
    parser.add_argument("--matrix-b", metavar="FILE")
    parser.add_argument("--out", metavar="FILE")


def build_parser():
    parser = _Parser(prog="betaland", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="solve one instance")
    _add_common(run)
    run.add_argument("--beta", type=float, default=0.5)
    sweep = sub.add_parser("sweep", help="compare several beta values")
    _add_common(sweep)
    sweep.add_argument("--betas", required=True,
                       help="comma-separated beta values, e.g. 0.25,0.5,1,2")
    return parser


def _instance(args):
    """Objective and starting point from the parsed flags."""
    if args.p < 1 or args.n < 1:
        raise UsageError("n and p must be positive")
    if args.problem == "rayleigh" and args.matrix_a is None and args.matrix_b is None:
        if args.p > args.n:
            raise UsageError("p must satisfy p <= n")
        inst = random_instance("rayleigh", args.n, args.p, args.seed, args.delta)
        return inst.objective, inst.X0
    if args.problem == "procrustes" and args.matrix_a is None and args.matrix_b is None:
        if args.p > args.n:
            raise UsageError("p must satisfy p <= n")
        inst = random_instance("procrustes", args.n, args.p, args.seed, args.delta)
        return inst.objective, inst.X0

    if args.matrix_a is None:
        raise UsageError("--matrix-a is required when matrix files are given")
    A = load_matrix(args.matrix_a)
    if args.problem == "rayleigh":
        if args.matrix_b is not None:
            raise UsageError("--matrix-b is only used by the procrustes problem")
        if args.p > A.shape[0]:
            raise UsageError("p must satisfy p <= n")
        objective = rayleigh(A, args.p)
    else:
        if args.matrix_b is None:
            raise UsageError("procrustes needs --matrix-b")
        B = load_matrix(args.matrix_b)
        if B.shape[1] > A.shape[1]:
            raise UsageError("p must satisfy p <= n")
        objective = procrustes(A, B)
    rng = np.random.default_rng(args.seed)
    return objective, initial_point(rng, objective.n, objective.p, args.delta)


def _config(args, beta):
    return LandingConfig(beta=beta, omega=args.omega, eta=args.eta, epsilon=args.tol,
                         max_iters=args.max_iters, step_policy=args.step_policy)


def exit_code(status):
    if status == CONVERGED:
        return EXIT_OK
    if status == MAX_ITERS:
        return EXIT_MAX_ITERS
    return EXIT_BREAKDOWN


def _json_number(x):
    return x if np.isfinite(x) else None


def summary(result, beta):
    last = result.trace[-1]
    return {
        "status": result.status,
        "iterations": result.n_iter,
        "final_f": _json_number(last.f_value),
        "final_h_norm": _json_number(last.h_norm),
        "final_grad_norm": _json_number(last.grad_norm),
        "beta": beta,
    }


def write_trace(path, trace):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for rec in trace:
            writer.writerow([rec.k, fmt(rec.f_value), fmt(rec.grad_norm), fmt(rec.h_norm),
                             fmt(rec.N_value), fmt(rec.eta), fmt(rec.sigma_min_ratio)])


def cmd_run(args, stdout):
    objective, X0 = _instance(args)
    result = solve(objective, X0, _config(args, args.beta))
    if args.out:
        write_trace(args.out, result.trace)
    stdout.write(json.dumps(summary(result, args.beta)) + "\n")
    return exit_code(result.status)


def parse_betas(text):
    try:
        betas = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"invalid --betas value {text!r}") from exc
    if not betas:
        raise UsageError("--betas must list at least one value")
    if any(not b > 0 for b in betas):
        raise UsageError("every beta must be positive")
    return betas


def cmd_sweep(args, stdout):
    betas = parse_betas(args.betas)
    objective, X0 = _instance(args)
    rows = []
    codes = []
    for beta in betas:
        result = solve(objective, X0, _config(args, beta))
        s = summary(result, beta)
        rows.append([fmt(beta), s["status"], s["iterations"], fmt(s["final_f"]),
                     fmt(s["final_h_norm"])])
        codes.append(exit_code(result.status))

    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        writer.writerows(rows)

    if args.out:
        with open(args.out, "w", newline="") as fh:
            emit(fh)
    else:
        emit(stdout)
    return max(codes)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "run":
            return cmd_run(args, stdout)
        return cmd_sweep(args, stdout)
    except UsageError as exc:
        stderr.write(f"betaland: error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        # invalid matrices or parameters rejected by the library
        stderr.write(f"betaland: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
