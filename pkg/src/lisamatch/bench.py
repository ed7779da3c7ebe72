"""Benchmark harness: generate instances, run matchers, collect and emit CSV.

Each trial's instance seed is ``hash64(seed_base, kind, n, level, trial)``
(BLAKE2b-64, see :func:`lisamatch.rng.hash64`). Algorithms never draw random
numbers, so adding one to a plan leaves every instance unchanged.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import rng
from .core import GraphKind, Matching
from .graphgen import NoiseSpec, make_instance
from .matchers import ALGORITHMS, SM_DEFAULT_CAP, run_matcher
from .spectral import PowerConfig

log = logging.getLogger(__name__)

CSV_HEADER = ["algo", "kind", "n", "noise_level", "trial", "seed", "accuracy", "seconds",
              "iterations", "converged"]


@dataclass(frozen=True)
class BenchPlan:
    algorithms: tuple[str, ...]
    graph_kinds: tuple[GraphKind, ...]
    sizes: tuple[int, ...]
    noise_levels: tuple[float, ...] = (0.0,)
    trials: int = 20
    seed_base: int = 0
    power: PowerConfig = field(default_factory=PowerConfig)
    sm_cap: int = SM_DEFAULT_CAP

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "algorithms", tuple(self.algorithms))
        set_(self, "graph_kinds", tuple(GraphKind.parse(k) for k in self.graph_kinds))
        set_(self, "sizes", tuple(int(n) for n in self.sizes))
        set_(self, "noise_levels", tuple(float(x) for x in self.noise_levels))
        if not self.algorithms or not self.sizes or not self.graph_kinds or not self.noise_levels:
            raise ValueError("plan needs at least one algorithm, kind, size and noise level")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ValueError(f"unknown algorithm(s) {bad}; choose from {list(ALGORITHMS)}")
        if GraphKind.EXTERNAL in self.graph_kinds:
            raise ValueError("benchmarks generate their graphs; kind 'external' is not allowed")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(n < 2 for n in self.sizes):
            raise ValueError("sizes must be at least 2")
        if any(x < 0 for x in self.noise_levels):
            raise ValueError("noise levels must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "BenchPlan":
        d = dict(d)
        kinds = d.pop("graph_kind", d.pop("graph_kinds", None))
        if kinds is None:
            raise ValueError("plan lacks 'graph_kind'")
        if isinstance(kinds, str):
            kinds = [kinds]
        power = PowerConfig(tolerance=float(d.pop("tolerance", 1e-4)),
                            max_iterations=int(d.pop("max_iterations", 1000)))
        known = {"algorithms", "sizes", "noise_levels", "trials", "seed_base", "sm_cap"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown plan field(s): {sorted(extra)}")
        if "algorithms" not in d or "sizes" not in d:
            raise ValueError("plan needs 'algorithms' and 'sizes'")
        return cls(graph_kinds=tuple(kinds), power=power, **d)

    @classmethod
    def from_json(cls, text: str) -> "BenchPlan":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class BenchRecord:
    algo: str
    kind: str
    n: int
    noise_level: float
    trial: int
    seed: int
    accuracy: float
    seconds: float
    iterations: int
    converged: bool
    error: Optional[str] = None

    def row(self) -> list[str]:
        conv = "error" if self.error else ("true" if self.converged else "false")
        return [self.algo, self.kind, str(self.n), repr(self.noise_level), str(self.trial),
                str(self.seed), repr(self.accuracy), repr(self.seconds), str(self.iterations),
                conv]


def accuracy(result: Matching, truth: Matching) -> float:
    """Fraction of source nodes mapped to their ground-truth target."""
    if result.source_size != truth.source_size:
        raise ValueError(f"matchings have {result.source_size} and {truth.source_size} sources")
    if truth.source_size == 0:
        return 1.0
    hits = sum(1 for x, y in zip(result.assignment, truth.assignment) if x == y)
    return hits / truth.source_size


def trial_seed(seed_base: int, kind: GraphKind, n: int, level: float, trial: int) -> int:
    return rng.hash64(int(seed_base), kind.value, int(n), float(level), int(trial))


def _run_scenario(plan: BenchPlan, kind: GraphKind, n: int, level: float,
                  trial: int) -> list[BenchRecord]:
    seed = trial_seed(plan.seed_base, kind, n, level, trial)
    base = dict(kind=kind.value, n=n, noise_level=level, trial=trial, seed=seed)
    try:
        noise = NoiseSpec(level) if level > 0 else None
        inst = make_instance(kind, n, seed, noise)
    except Exception as exc:  # noqa: BLE001 - a failed trial becomes error rows
        log.warning("instance %s n=%d level=%s trial=%d failed: %s", kind.value, n, level, trial, exc)
        return [BenchRecord(algo=a, accuracy=math.nan, seconds=math.nan, iterations=0,
                            converged=False, error=str(exc), **base) for a in plan.algorithms]
    out = []
    for algo in plan.algorithms:
        opts = {"cap": plan.sm_cap} if algo == "sm" else {}
        try:
            res = run_matcher(algo, inst.a, inst.b, plan.power, **opts)
        except Exception as exc:  # noqa: BLE001
            log.warning("%s on %s n=%d trial=%d failed: %s", algo, kind.value, n, trial, exc)
            out.append(BenchRecord(algo=algo, accuracy=math.nan, seconds=math.nan, iterations=0,
                                   converged=False, error=str(exc), **base))
            continue
        out.append(BenchRecord(algo=algo, accuracy=accuracy(res.matching, inst.ground_truth),
                               seconds=res.wall_seconds, iterations=res.iterations,
                               converged=res.converged, **base))
    return out


def scenarios(plan: BenchPlan) -> list[tuple[GraphKind, int, float, int]]:
    return [(k, n, lv, t) for k in plan.graph_kinds for n in plan.sizes
            for lv in plan.noise_levels for t in range(plan.trials)]


def run_plan(plan: BenchPlan, workers: int = 1, progress: bool = False) -> list[BenchRecord]:
    """Run every (kind, n, level, trial) scenario and every algorithm on it.

    Records come back in scenario order, algorithms in plan order, whatever
    the number of worker threads.
    """
    todo = scenarios(plan)

    def job(sc):
        recs = _run_scenario(plan, *sc)
        if progress:
            log.info("done %s n=%d level=%s trial=%d", sc[0].value, sc[1], sc[2], sc[3])
        return recs

    if workers <= 1:
        results = [job(sc) for sc in todo]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, todo))
    return [r for recs in results for r in recs]


def write_csv(records: Sequence[BenchRecord], path_or_file) -> None:
    if hasattr(path_or_file, "write"):
        _write_rows(records, path_or_file)
        return
    with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
        _write_rows(records, fh)


def _write_rows(records, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())


def read_csv(path) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
