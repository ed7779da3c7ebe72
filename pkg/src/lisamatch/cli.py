"""Command-line entry point: ``lisamatch gen | match | bench``.

Exit codes: 0 success, 1 runtime or domain error, 2 usage or parse error.
Progress and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import graphio
from .bench import BenchPlan, accuracy, run_plan, write_csv
from .core import GraphKind, GraphMatchingError, ParseError
from .graphgen import GENERATORS, NoiseSpec, gen_points, perturb, permute_instance
from .matchers import ALGORITHMS, SM_DEFAULT_CAP, run_matcher
from .spectral import PowerConfig

log = logging.getLogger("lisamatch")

KIND_FLAGS = {"dense": GraphKind.DENSE_WEIGHTED,
              "sparse-weighted": GraphKind.SPARSE_WEIGHTED,
              "sparse-binary": GraphKind.SPARSE_BINARY}


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("GM_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"GM_THREADS must be an integer, got {raw!r}") from None


def _sibling(path: Path, tag: str, suffix: Optional[str] = None) -> Path:
    return path.with_name(f"{path.stem}_{tag}{suffix if suffix is not None else path.suffix}")


def cmd_gen(args) -> int:
    kind = KIND_FLAGS[args.kind]
    points = gen_points(args.n, args.seed)
    a = GENERATORS[kind](points)
    out = Path(args.out)
    graphio.save_matrix(a, out)
    if args.points_out:
        graphio.save_points(points, args.points_out)
    if not args.permute and args.noise_level is None:
        return 0
    b = a
    if args.permute:
        b, truth = permute_instance(a, args.seed)
        graphio.save_matching(truth, args.truth_out or _sibling(out, "truth", ".json"),
                              algorithm="ground_truth")
    if args.noise_level is not None:
        noise_seed = args.seed if args.noise_seed is None else args.noise_seed
        b = perturb(b, NoiseSpec(args.noise_level), noise_seed)
    graphio.save_matrix(b, args.twin_out or _sibling(out, "b"))
    return 0


def cmd_match(args) -> int:
    a = graphio.load_matrix(args.a)
    b = graphio.load_matrix(args.b)
    cfg = PowerConfig(tolerance=args.tol, max_iterations=args.max_iter)
    opts = {}
    if args.algo == "sm":
        opts["cap"] = args.sm_cap
    elif args.algo == "lisa" and _threads() > 1:
        opts["parallel"] = True
    res = run_matcher(args.algo, a, b, cfg, **opts)
    graphio.save_matching(res.matching, args.out, algorithm=res.algorithm,
                          seconds=res.wall_seconds)
    log.info("%s: %d iterations, converged=%s, %.4fs", res.algorithm, res.iterations,
             res.converged, res.wall_seconds)
    if args.truth:
        truth = graphio.load_matching(args.truth)
        print(f"accuracy {accuracy(res.matching, truth)!r}")
    return 0


def _plan_from_args(args) -> BenchPlan:
    if args.plan:
        try:
            text = Path(args.plan).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read plan {args.plan}: {exc}") from None
        try:
            return BenchPlan.from_json(text)
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise UsageError(f"bad plan {args.plan}: {exc}") from None
    if not args.sizes:
        raise UsageError("bench needs --plan or --sizes")
    try:
        return BenchPlan(
            algorithms=tuple(args.algos.split(",")),
            graph_kinds=tuple(KIND_FLAGS.get(k, k) for k in args.kind.split(",")),
            sizes=tuple(int(x) for x in args.sizes.split(",")),
            noise_levels=tuple(float(x) for x in args.noise.split(",")),
            trials=args.trials, seed_base=args.seed_base,
            power=PowerConfig(tolerance=args.tol, max_iterations=args.max_iter),
            sm_cap=args.sm_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bench(args) -> int:
    plan = _plan_from_args(args)
    workers = args.threads if args.threads is not None else _threads()
    records = run_plan(plan, workers=workers, progress=True)
    if args.csv:
        write_csv(records, args.csv)
    else:
        write_csv(records, sys.stdout)
    failed = sum(1 for r in records if r.error)
    if failed:
        log.warning("%d of %d records are error rows", failed, len(records))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lisamatch", description="Spectral graph matching toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random graph (and a relabelled twin)")
    g.add_argument("--kind", choices=sorted(KIND_FLAGS), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--points-out")
    g.add_argument("--permute", action="store_true")
    g.add_argument("--twin-out", help="default: <out stem>_b<suffix>")
    g.add_argument("--truth-out", help="default: <out stem>_truth.json")
    g.add_argument("--noise-level", type=float)
    g.add_argument("--noise-seed", type=int)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("match", help="match two graph files")
    m.add_argument("--algo", choices=ALGORITHMS, required=True)
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--truth")
    m.add_argument("--tol", type=float, default=1e-4)
    m.add_argument("--max-iter", type=int, default=1000)
    m.add_argument("--sm-cap", type=int, default=SM_DEFAULT_CAP)
    m.set_defaults(func=cmd_match)

    b = sub.add_parser("bench", help="run a benchmark plan and write CSV")
    b.add_argument("--plan", help="JSON plan file")
    b.add_argument("--algos", default="lisa")
    b.add_argument("--kind", default="dense")
    b.add_argument("--sizes")
    b.add_argument("--noise", default="0")
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--seed-base", type=int, default=0)
    b.add_argument("--tol", type=float, default=1e-4)
    b.add_argument("--max-iter", type=int, default=1000)
    b.add_argument("--sm-cap", type=int, default=SM_DEFAULT_CAP)
    b.add_argument("--threads", type=int, help="default: GM_THREADS or the CPU count")
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"lisamatch: error: {exc}", file=sys.stderr)
        return 2
    except (GraphMatchingError, ValueError, OSError) as exc:
        print(f"lisamatch: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
