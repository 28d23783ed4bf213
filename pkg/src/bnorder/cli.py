"""Command line entry point: ``bnorder {generate,learn,eval,bench}``.

Exit codes: 0 success, 2 usage, 3 data error, 4 capacity.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import io
from .bench import run_benchmarks, write_bench_csv
from .errors import CapacityError, ConfigurationError, DataError, ValidationError
from .evalgen import inject_noise
from .model import RunConfig
from .protocol import METRIC_COLUMNS, SyntheticSetup, metrics_row, roc_sweep, synthetic_problem
from .sampler import run_mcmc, write_trace_csv
from .scoring import Hyperparams, ScoreCache, build_score_cache

EXIT_USAGE, EXIT_DATA, EXIT_CAPACITY = 2, 3, 4

GENERATED_FILES = {
    "truth": "truth.edges",
    "network": "network.json",
    "data": "data.csv",
    "noisy": "data_noisy.csv",
}


class UsageError(Exception):
    pass


@dataclass
class RunSummary:
    config: dict
    best_score: float
    best_edges: list
    iterations: int
    acceptance_rate: float
    timings: dict
    seed: int


def _byte_size(text: str) -> int:
    units = {"k": 2**10, "m": 2**20, "g": 2**30, "t": 2**40}
    t = text.strip().lower().removesuffix("ib").removesuffix("b")
    try:
        if t and t[-1] in units:
            return int(float(t[:-1]) * units[t[-1]])
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size {text!r}") from None


def _add_learning_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-parents", type=int, default=4, dest="max_parents")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--ess", type=float, default=1.0)
    p.add_argument("--k2", action="store_true", help="constant Dirichlet hyperparameter 1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tasks-per-node", type=int, default=None)
    p.add_argument("--track-top", type=int, default=10)
    p.add_argument("--strict-paper-tracker", action="store_true",
                   help="offer only accepted orders' graphs to the tracker")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pst", dest="strategy", action="store_const", const="pst")
    g.add_argument("--unrank", dest="strategy", action="store_const", const="unrank")
    p.set_defaults(strategy="pst")
    p.add_argument("--memory-cap", type=_byte_size, default=4 * 2**30)
    p.add_argument("--debug", action="store_true")


def _config(args) -> RunConfig:
    try:
        return RunConfig(s=args.max_parents, gamma=args.gamma, ess=args.ess,
                         scheme="k2" if args.k2 else "bdeu", iterations=args.iterations,
                         seed=args.seed, workers=args.workers,
                         tasks_per_node=args.tasks_per_node, track_top=args.track_top,
                         strict_paper_tracker=args.strict_paper_tracker,
                         strategy=args.strategy, memory_cap=args.memory_cap, debug=args.debug)
    except ConfigurationError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bnorder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthesize a ground-truth network and data")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--samples", type=int, default=1000)
    g.add_argument("--states", type=int, default=2)
    g.add_argument("--max-parents", type=int, default=3, dest="max_parents")
    g.add_argument("--edge-prob", type=float, default=0.5)
    g.add_argument("--concentration", type=float, default=1.0)
    g.add_argument("--noise", type=float, default=None, help="also write a noisy copy")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, default=Path("."))

    l = sub.add_parser("learn", help="learn a structure with order MCMC")
    l.add_argument("--data", type=Path, required=True)
    l.add_argument("--priors", type=Path, default=None)
    l.add_argument("--load-cache", type=Path, default=None)
    l.add_argument("--save-cache", type=Path, default=None)
    l.add_argument("--out", type=Path, default=Path("."))
    _add_learning_flags(l)

    e = sub.add_parser("eval", help="compare a learned graph with the truth")
    e.add_argument("--truth", type=Path, required=True)
    e.add_argument("--learned", type=Path, default=None)
    e.add_argument("--sweep", action="store_true",
                   help="run the five-point prior-strength sweep on --data")
    e.add_argument("--data", type=Path, default=None)
    e.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    _add_learning_flags(e)

    b = sub.add_parser("bench", help="time order scoring and parent-set enumeration")
    b.add_argument("--nodes", type=int, nargs="+", default=[10, 20])
    b.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    b.add_argument("--iterations", type=int, default=20)
    b.add_argument("--max-parents", type=int, default=4, dest="max_parents")
    b.add_argument("--enum-candidates", type=int, nargs="*", default=[15, 20])
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", type=Path, default=None)
    return parser


def cmd_generate(args) -> int:
    if args.nodes < 1 or args.nodes > 64:
        raise UsageError("--nodes must be in [1, 64]")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.states < 2:
        raise UsageError("--states must be >= 2")
    if args.noise is not None and not 0 <= args.noise <= 1:
        raise UsageError("--noise must be in [0, 1]")
    setup = SyntheticSetup(args.nodes, args.samples, args.states, args.max_parents,
                           args.edge_prob, args.concentration)
    bn, data = synthetic_problem(setup, args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    io.write_edge_list(out / GENERATED_FILES["truth"], bn.dag)
    io.write_network_json(out / GENERATED_FILES["network"], bn)
    io.write_dataset_csv(out / GENERATED_FILES["data"], data)
    if args.noise is not None:
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, 2]))
        io.write_dataset_csv(out / GENERATED_FILES["noisy"], inject_noise(data, args.noise, rng))
    return 0


def cmd_learn(args) -> int:
    config = _config(args)
    data = io.read_dataset_csv(args.data)
    priors = io.read_prior_csv(args.priors, data.n) if args.priors else None
    cache = None
    if args.load_cache:
        cache = ScoreCache.load(args.load_cache, Hyperparams.from_config(config).digest())
        if cache.n != data.n or cache.s != config.s:
            raise DataError("cached scores do not match the dataset / parent limit")
    elif args.save_cache:
        cache = build_score_cache(data, config)
    if args.save_cache:
        cache.save(args.save_cache)
    res = run_mcmc(data, config, priors, cache=cache)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(out / "trace.csv", res.trace)
    io.write_edge_list(out / "best.edges", res.best.dag)
    summary = RunSummary(config=config.to_dict(), best_score=res.best.total,
                         best_edges=[list(e) for e in sorted(res.best.dag.edges())],
                         iterations=config.iterations, acceptance_rate=res.acceptance_rate,
                         timings=res.timings, seed=config.seed)
    (out / "summary.json").write_text(json.dumps(asdict(summary), indent=1))
    return 0


def _write_rows(path, rows) -> None:
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=METRIC_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if path:
            fh.close()


def cmd_eval(args) -> int:
    if args.sweep and args.data is None:
        raise UsageError("--sweep needs --data")
    if not args.sweep and args.learned is None:
        raise UsageError("need --learned or --sweep")
    truth = io.read_edge_list(args.truth)
    if args.sweep:
        data = io.read_dataset_csv(args.data)
        if data.n != truth.n:
            raise DataError(f"dataset has {data.n} nodes, truth has {truth.n}")
        rows = roc_sweep(data, truth, _config(args))
    else:
        learned = io.read_edge_list(args.learned)
        if learned.n != truth.n:
            raise DataError(f"learned graph has {learned.n} nodes, truth has {truth.n}")
        rows = [metrics_row("learned", learned, truth, float("nan"), 0.0)]
    _write_rows(args.out, rows)
    return 0


def cmd_bench(args) -> int:
    if any(w < 1 for w in args.workers) or any(n < 2 for n in args.nodes):
        raise UsageError("--workers must be >= 1 and --nodes >= 2")
    rows = run_benchmarks(args.nodes, args.workers, args.iterations, args.max_parents,
                          args.enum_candidates, args.seed)
    write_bench_csv(args.out if args.out else sys.stdout, rows)
    return 0


COMMANDS = {"generate": cmd_generate, "learn": cmd_learn, "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except CapacityError as exc:
        print(f"bnorder: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DataError, ValidationError, OSError) as exc:
        print(f"bnorder: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
