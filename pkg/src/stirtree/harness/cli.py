"""Command-line interface.

Exit status: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from fractions import Fraction

from .. import oracles, urnsim
from ..generators import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    enumerate_stirling,
    enumerate_trapezoidal,
    fresh_seed,
    make_rng,
    random_stirling,
    random_trapezoidal,
    random_tree,
)
from ..statistics import (
    adp_counts,
    ascent_vertex_count,
    descent_vertex_count,
    leaves,
    occurrence_distance,
    outdegree_profile,
    root_degree,
    subtree_size,
    top_block_count,
)
from ..structures import InvalidStructureError, StirlingPermutation, code_to_tree
from .experiments import EXPERIMENTS, MODES, ConfigError, ExperimentConfig, run_experiment
from .output import write_records
from .verify import SUITES, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = fresh_seed()
    print(f"# seed={seed}", file=sys.stderr)
    return seed


def _common(p: argparse.ArgumentParser, *, seed: bool = True, replicates: bool = False) -> None:
    p.add_argument("--n", type=int, required=True, help="object size (number of pairs / edges)")
    if replicates:
        p.add_argument("--replicates", "-R", type=int, default=1000)
        p.add_argument("--workers", type=int, default=1)
    if seed:
        p.add_argument("--seed", type=int, default=None, help="64-bit seed; drawn from system entropy if omitted")
    p.add_argument("--format", choices=("csv", "json"), default="json", dest="fmt")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stirtree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample random objects, one per line")
    p.add_argument("--kind", choices=("stirling", "tree", "trapezoidal"), default="stirling")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--render", action="store_true", help="render trees as nested parentheses")
    _common(p)

    p = sub.add_parser("enumerate", help="list every object of a given size")
    p.add_argument("--kind", choices=("stirling", "tree", "trapezoidal"), default="stirling")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--render", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("stats", help="statistics of one Stirling permutation")
    p.add_argument("perm", help='whitespace-separated permutation, e.g. "1 2 2 1"')
    p.add_argument("--format", choices=("csv", "json"), default="json", dest="fmt")
    p.add_argument("--out", default=None)

    p = sub.add_parser("eulerian", help="second-order Eulerian table rows 1..n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("pmf", help="exact distribution of the plateau count (or the joint law)")
    p.add_argument("--joint", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    p.add_argument("--out", default=None)

    p = sub.add_parser("urn", help="simulate Urn A or the two-colour urn; CSV trajectory")
    p.add_argument("--which", choices=("a", "two"), default="a")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--every", type=int, default=1, help="record every k-th step (final step always kept)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("experiment", help="seeded Monte Carlo experiment against exact oracles")
    p.add_argument("name", choices=EXPERIMENTS)
    p.add_argument("--mode", choices=MODES, default="urn",
                   help="urn: vectorized growth kernels; perm: explicit objects")
    p.add_argument("--k", type=int, default=1, help="vertex label for the subtree experiment")
    p.add_argument("--histogram", type=int, default=None, metavar="BINS")
    p.add_argument("--exhaustive", action="store_true", help="trapezoidal: enumerate all words")
    _common(p, replicates=True)

    p = sub.add_parser("verify", help="run a deterministic invariant suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--format", choices=("csv", "json"), default="json", dest="fmt")
    p.add_argument("--out", default=None)
    return parser


def _cmd_generate(args) -> int:
    if args.n < 0 or args.count < 0:
        raise UsageError("n and count must be >= 0")
    rng = make_rng(_seed(args))
    with _open_out(args.out) as out:
        for _ in range(args.count):
            if args.kind == "stirling":
                obj = random_stirling(args.n, rng)[0]
            elif args.kind == "tree":
                obj = random_tree(args.n, rng)
                if args.render:
                    out.write(obj.render() + "\n")
                    continue
            else:
                obj = random_trapezoidal(args.n, rng)
            out.write(str(obj) + "\n")
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    with _open_out(args.out) as out:
        if args.kind == "trapezoidal":
            items = enumerate_trapezoidal(args.n, args.cap)
        else:
            items = enumerate_stirling(args.n, args.cap)
        for obj in items:
            if args.kind == "tree" and args.render:
                out.write(code_to_tree(obj).render() + "\n")
            else:
                out.write(str(obj) + "\n")
    return EXIT_OK


def _cmd_stats(args) -> int:
    q = StirlingPermutation.parse(args.perm)
    t = code_to_tree(q)
    x, y, z = adp_counts(q)
    rec = {
        "perm": str(q),
        "n": q.n,
        "tree": t.render(),
        "ascents": x,
        "descents": y,
        "plateaux": z,
        "leaves": leaves(t),
        "root_degree": root_degree(t),
        "top_blocks": top_block_count(q),
        "ascent_vertices": ascent_vertex_count(t) if q.n else 0,
        "descent_vertices": descent_vertex_count(t) if q.n else 0,
        "outdegree_profile": " ".join(f"{d}:{c}" for d, c in outdegree_profile(t).items()),
        "subtree_sizes": " ".join(str(subtree_size(t, k)) for k in range(1, q.n + 1)),
        "distances": " ".join(str(occurrence_distance(q, k)) for k in range(1, q.n + 1)),
    }
    with _open_out(args.out) as out:
        write_records([rec], args.fmt, out)
    return EXIT_OK


def _cmd_eulerian(args) -> int:
    if args.n < 1:
        raise UsageError("n must be >= 1")
    with _open_out(args.out) as out:
        for line in oracles.eulerian_table_lines(args.n):
            out.write(line + "\n")
    return EXIT_OK


def _prob_fields(p: Fraction) -> dict:
    return {"prob": str(p), "prob_float": float(p)}


def _cmd_pmf(args) -> int:
    if args.joint:
        dist = oracles.joint_pmf(args.n)
        recs = [{"n": args.n, "ascents": x, "descents": y, "plateaux": z, **_prob_fields(p)}
                for (x, y, z), p in sorted(dist.probs.items())]
    else:
        dist = oracles.pmf_L(args.n)
        recs = [{"n": args.n, "k": k, "count": oracles.eulerian_row(args.n)[k], **_prob_fields(p)}
                for k, p in sorted(dist.probs.items())]
    with _open_out(args.out) as out:
        write_records(recs, args.fmt, out)
    return EXIT_OK


def _cmd_urn(args) -> int:
    if args.steps < 0 or args.every < 1:
        raise UsageError("steps must be >= 0 and every >= 1")
    spec = urnsim.urn_a() if args.which == "a" else urnsim.two_color_urn()
    marks = set(range(args.every, args.steps + 1, args.every)) | {args.steps}
    states = urnsim.run(spec, args.steps, make_rng(_seed(args)), checkpoints=marks)
    with _open_out(args.out) as out:
        out.write(urnsim.trajectory_csv(states))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    try:
        cfg = ExperimentConfig(
            experiment=args.name, n=args.n, replicates=args.replicates, seed=args.seed,
            workers=args.workers, fmt=args.fmt, mode=args.mode, k=args.k,
            histogram_bins=args.histogram, exhaustive=args.exhaustive,
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.seed is None and not cfg.exhaustive:
        cfg = cfg.resolved()
        print(f"# seed={cfg.seed}", file=sys.stderr)
    report = run_experiment(cfg)
    with _open_out(args.out) as out:
        write_records(report.records(), cfg.fmt, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_verify(args) -> int:
    results = verify(args.suite)
    with _open_out(args.out) as out:
        write_records([r.record() for r in results], args.fmt, out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


_COMMANDS = {
    "generate": _cmd_generate,
    "enumerate": _cmd_enumerate,
    "stats": _cmd_stats,
    "eulerian": _cmd_eulerian,
    "pmf": _cmd_pmf,
    "urn": _cmd_urn,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ConfigError, InvalidStructureError, EnumerationCapError,
            oracles.OracleCapError, ValueError, IndexError) as exc:
        print(f"stirtree {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
