"""Command-line interface: the only module that touches files or streams.

Output is machine-first: every subcommand emits JSON (or a matrix/CSV
file for gen/simulate) with a fixed key order, so identical configs and
seeds produce byte-identical output except for elapsed timings. Human
summaries go to stderr, and only under --verbose.

Exit codes: 0 success; 2 configuration error; 3 numeric or matrix
validation error; 4 enumeration cap exceeded; 5 property-check failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .checks import run_all_checks
from .covariances import (
    DEFAULT_CONDITION_CAP,
    diagonal_covariance,
    format_covariance,
    gmrf_covariance,
    load_covariance,
    load_graph,
    random_spd,
    save_covariance,
)
from .errors import (
    DimensionMismatchError,
    InstanceTooSmallError,
    KTooLargeError,
    NotPositiveDefiniteError,
    NotSquareError,
    NotSymmetricError,
    SingularBlockError,
    TooManySubsetsError,
)
from .linalg import CovarianceMatrix
from .objective import (
    ObservationModel,
    SensorSet,
    evaluate,
    sample_observations,
    sample_states,
)
from .optimizers import exhaustive, greedy, lazy_greedy, random_placement

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ENUMERATION = 4
EXIT_CHECK_FAILED = 5

# Sub-seed offsets from the single --seed flag. Fixed so that adding a
# consumer never shifts the streams existing consumers see.
_PLACEMENT_SEED_OFFSET = 1
_STATES_SEED_OFFSET = 1
_NOISE_SEED_OFFSET = 2

_NUMERIC_ERRORS = (
    NotSquareError,
    NotSymmetricError,
    NotPositiveDefiniteError,
    SingularBlockError,
    DimensionMismatchError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miplace",
        description="Sensor placement maximizing Gaussian mutual information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source(p: argparse.ArgumentParser):
        p.add_argument("--cov", metavar="FILE", help="dense covariance matrix file")
        p.add_argument("--graph", metavar="FILE", help="edge-list file (GMRF source)")
        p.add_argument("--epsilon", type=float, help="GMRF precision regularizer")
        p.add_argument(
            "--random-spd", type=int, metavar="N", help="seeded random SPD instance"
        )
        p.add_argument(
            "--diag", metavar="V0,V1,...", help="diagonal covariance from variances"
        )
        p.add_argument(
            "--condition-cap",
            type=float,
            default=DEFAULT_CONDITION_CAP,
            help="condition number cap for --random-spd",
        )

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--sigma2", type=float, default=1.0, help="sensor noise variance")
        p.add_argument("--seed", type=int, default=0, help="master random seed")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
        p.add_argument("--verbose", action="store_true", help="human summary on stderr")

    p_place = sub.add_parser("place", help="choose k sensors")
    add_source(p_place)
    add_common(p_place)
    p_place.add_argument("--k", type=int, required=True, help="number of sensors")
    p_place.add_argument(
        "--method",
        choices=["greedy", "lazy", "exhaustive", "random"],
        default="lazy",
        help="solver",
    )
    p_place.add_argument(
        "--clamp-k", action="store_true", help="cap k at n instead of failing"
    )
    p_place.add_argument(
        "--threads",
        type=int,
        default=1,
        help="parallel candidate scanning (never changes values)",
    )

    p_eval = sub.add_parser("eval", help="score an explicit selection")
    add_source(p_eval)
    add_common(p_eval)
    p_eval.add_argument(
        "--select",
        required=True,
        metavar="I0,I1,...",
        help="sensor indices (empty string for the empty set)",
    )

    p_check = sub.add_parser("check", help="run the property suite")
    add_source(p_check)
    add_common(p_check)
    p_check.add_argument("--trials", type=int, default=100, help="trials per check")
    p_check.add_argument("--k", type=int, default=3, help="k for the ratio check")
    p_check.add_argument(
        "--tolerance",
        type=float,
        default=None,
        metavar="R",
        help="override the absolute slack tolerance of the log-domain checks",
    )
    p_check.add_argument(
        "--det-tolerance",
        type=float,
        default=None,
        metavar="R",
        help="override the determinant check's relative tolerance",
    )

    p_gen = sub.add_parser("gen", help="generate a covariance file")
    p_gen.add_argument("--random-spd", type=int, metavar="N")
    p_gen.add_argument("--diag", metavar="V0,V1,...")
    p_gen.add_argument("--gmrf", metavar="FILE", help="edge-list file")
    p_gen.add_argument("--epsilon", type=float)
    p_gen.add_argument("--condition-cap", type=float, default=DEFAULT_CONDITION_CAP)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", metavar="FILE")
    p_gen.add_argument("--verbose", action="store_true")

    p_sim = sub.add_parser("simulate", help="draw noisy observation samples")
    add_source(p_sim)
    add_common(p_sim)
    p_sim.add_argument("--select", required=True, metavar="I0,I1,...")
    p_sim.add_argument("--count", type=int, required=True, help="number of samples")

    return parser


def _parse_indices(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    return tuple(int(p) for p in parts if p)


def _parse_variances(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    values = [float(p) for p in parts if p]
    if not values:
        raise ValueError("--diag needs at least one variance")
    return values


def _covariance_from_args(args, default_spd_n: int | None = None) -> CovarianceMatrix:
    chosen = [
        name
        for name, given in [
            ("--cov", args.cov is not None),
            ("--graph", args.graph is not None),
            ("--random-spd", args.random_spd is not None),
            ("--diag", args.diag is not None),
        ]
        if given
    ]
    if len(chosen) > 1:
        raise ValueError(f"exactly one input source allowed, got {', '.join(chosen)}")
    if not chosen:
        if default_spd_n is None:
            raise ValueError(
                "an input source is required: --cov, --graph, --random-spd, or --diag"
            )
        return random_spd(default_spd_n, seed=args.seed, condition_cap=args.condition_cap)
    if args.cov is not None:
        return load_covariance(args.cov)
    if args.graph is not None:
        if args.epsilon is None:
            raise ValueError("--graph requires --epsilon")
        return gmrf_covariance(load_graph(args.graph), args.epsilon)
    if args.random_spd is not None:
        return random_spd(args.random_spd, seed=args.seed, condition_cap=args.condition_cap)
    return diagonal_covariance(_parse_variances(args.diag))


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _placement_json(result, model: ObservationModel, seed: int) -> str:
    doc = {
        "method": result.method,
        "n": model.n,
        "k": len(result.selected),
        "sigma2": model.noise_variance,
        "selected": result.selected,
        "gains": result.gains,
        "objective_nats": result.objective,
        "objective_bits": result.objective / math.log(2.0),
        "evaluations": result.evaluations,
        "elapsed_seconds": result.elapsed,
        "seed": seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def _run_place(args) -> int:
    cov = _covariance_from_args(args)
    model = ObservationModel(cov, args.sigma2)
    if args.threads < 1:
        raise ValueError(f"--threads must be at least 1, got {args.threads}")
    if args.method == "greedy":
        result = greedy(model, args.k, clamp_k=args.clamp_k, threads=args.threads)
    elif args.method == "lazy":
        result = lazy_greedy(model, args.k, clamp_k=args.clamp_k, threads=args.threads)
    elif args.method == "exhaustive":
        result = exhaustive(model, args.k)
    else:
        result = random_placement(
            model, args.k, seed=args.seed + _PLACEMENT_SEED_OFFSET, clamp_k=args.clamp_k
        )
    _emit(_placement_json(result, model, args.seed), args.out)
    if args.verbose:
        print(
            f"{result.method}: selected {result.selected} of n={model.n}, "
            f"objective {result.objective:.9f} nats "
            f"({result.objective / math.log(2.0):.9f} bits), "
            f"{result.evaluations} gain evaluations in {result.elapsed:.3f}s",
            file=sys.stderr,
        )
    return EXIT_OK


def _run_eval(args) -> int:
    cov = _covariance_from_args(args)
    model = ObservationModel(cov, args.sigma2)
    indices = _parse_indices(args.select)
    value = evaluate(model, SensorSet(indices))
    doc = {
        "n": model.n,
        "sigma2": model.noise_variance,
        "selected": list(indices),
        "objective_nats": value,
        "objective_bits": value / math.log(2.0),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    if args.verbose:
        print(
            f"z({list(indices)}) = {value:.9f} nats = "
            f"{value / math.log(2.0):.9f} bits",
            file=sys.stderr,
        )
    return EXIT_OK


def _run_check(args) -> int:
    if args.trials < 1:
        raise ValueError(f"--trials must be at least 1, got {args.trials}")
    if args.k < 1:
        raise ValueError(f"--k must be at least 1, got {args.k}")
    for name in ("tolerance", "det_tolerance"):
        value = getattr(args, name)
        if value is not None and value < 0:
            raise ValueError(f"--{name.replace('_', '-')} must be >= 0, got {value}")
    cov = _covariance_from_args(args, default_spd_n=10)
    model = ObservationModel(cov, args.sigma2)
    overrides = {}
    if args.tolerance is not None:
        overrides["log_tolerance"] = args.tolerance
    if args.det_tolerance is not None:
        overrides["det_tolerance"] = args.det_tolerance
    reports = run_all_checks(
        model, trials=args.trials, seed=args.seed, k=args.k, **overrides
    )
    _emit(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.out)
    if args.verbose:
        for r in reports:
            print(
                f"{r.check_name}: {r.trials} trials, {r.failures} failures, "
                f"worst slack {r.worst_violation:.3e} (tolerance {r.tolerance:.1e})",
                file=sys.stderr,
            )
    total_failures = sum(r.failures for r in reports)
    return EXIT_CHECK_FAILED if total_failures else EXIT_OK


def _run_gen(args) -> int:
    chosen = [
        name
        for name, given in [
            ("--random-spd", args.random_spd is not None),
            ("--diag", args.diag is not None),
            ("--gmrf", args.gmrf is not None),
        ]
        if given
    ]
    if len(chosen) != 1:
        raise ValueError(
            "exactly one generator required: --random-spd, --diag, or --gmrf"
        )
    if args.random_spd is not None:
        cov = random_spd(args.random_spd, seed=args.seed, condition_cap=args.condition_cap)
    elif args.diag is not None:
        cov = diagonal_covariance(_parse_variances(args.diag))
    else:
        if args.epsilon is None:
            raise ValueError("--gmrf requires --epsilon")
        cov = gmrf_covariance(load_graph(args.gmrf), args.epsilon)
    if args.out:
        save_covariance(cov, args.out)
    else:
        sys.stdout.write(format_covariance(cov))
    if args.verbose:
        print(f"wrote {cov.n}x{cov.n} covariance", file=sys.stderr)
    return EXIT_OK


def _run_simulate(args) -> int:
    cov = _covariance_from_args(args)
    model = ObservationModel(cov, args.sigma2)
    if args.count < 1:
        raise ValueError(f"--count must be at least 1, got {args.count}")
    selection = SensorSet(_parse_indices(args.select))
    states = sample_states(model, seed=args.seed + _STATES_SEED_OFFSET, count=args.count)
    obs = sample_observations(
        model, selection, states, seed=args.seed + _NOISE_SEED_OFFSET
    )
    lines = [",".join(f"y{j}" for j in selection)]
    if len(selection):
        for row in obs:
            lines.append(",".join(repr(float(x)) for x in row))
    _emit("\n".join(lines) + "\n", args.out)
    if args.verbose:
        print(
            f"simulated {obs.shape[0]} samples from {len(selection)} sensors",
            file=sys.stderr,
        )
    return EXIT_OK


_RUNNERS = {
    "place": _run_place,
    "eval": _run_eval,
    "check": _run_check,
    "gen": _run_gen,
    "simulate": _run_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return _RUNNERS[args.command](args)
    except TooManySubsetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENUMERATION
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except KTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstanceTooSmallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
