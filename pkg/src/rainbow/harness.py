"""Batch experiments: theorem verification over corpora and counterexample search."""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from rainbow.constructive import find_rainbow
from rainbow.core import (
    Instance,
    RainbowError,
    is_rainbow_matching,
    matching_to_json,
    serialize_instance,
    theorem_bound,
)
from rainbow.exact import SolverConfig, has_rainbow_of_size, max_rainbow
from rainbow.generators import RandomModel, random_instance
from rainbow.rng import PortableRng

log = logging.getLogger(__name__)


class Mode(str, enum.Enum):
    CONSTRUCTIVE_ONLY = "constructive"
    CROSS_CHECK_EXACT = "cross-check"


class Strategy(str, enum.Enum):
    RANDOM = "random"
    MUTATE = "mutate"


class TheoremViolation(RainbowError):
    """A run contradicted the guarantee; ``bundle`` holds everything needed to replay it."""

    def __init__(self, message: str, bundle: dict[str, Any]):
        super().__init__(message)
        self.bundle = bundle


class SearchInfeasible(RainbowError):
    """The exact solver could not settle an instance within its budget."""


@dataclass(frozen=True)
class VerifyJob:
    k: int
    corpus: Sequence[Instance] | None = None
    model: RandomModel | None = None
    trials: int = 1
    mode: Mode = Mode.CONSTRUCTIVE_ONLY

    def __post_init__(self) -> None:
        if (self.corpus is None) == (self.model is None):
            raise ValueError("give exactly one of corpus or model")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        ns = [inst.n for inst in self.corpus] if self.corpus is not None else [self.model.n]
        for n in ns:
            if not 0 <= self.k < n:
                raise ValueError(f"need 0 <= k < n, got k={self.k}, n={n}")

    def instances(self) -> list[tuple[str, Instance]]:
        if self.corpus is not None:
            return [(f"corpus[{i}]", inst) for i, inst in enumerate(self.corpus)]
        base = PortableRng(self.model.seed)
        return [(f"seed={self.model.seed}/trial={i}", random_instance(self.model, base.spawn(i)))
                for i in range(self.trials)]


@dataclass(frozen=True)
class SearchJob:
    n: int
    k: int
    N: int
    strategy: Strategy = Strategy.RANDOM
    trials: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.N < 1 or self.trials < 1:
            raise ValueError("N and trials must be positive")
        if not 0 <= self.k < self.n:
            raise ValueError(f"need 0 <= k < n, got k={self.k}, n={self.n}")


@dataclass
class ReportRow:
    instance_id: str
    n: int
    N: int
    k: int
    hypothesis_met: bool
    constructive_size: int
    guarantee_met: bool
    steps: int
    wall_ms: float
    exact_size: int | None = None


@dataclass
class Report:
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(r.hypothesis_met and not r.guarantee_met for r in self.rows)

    def summary(self) -> dict[str, Any]:
        sizes = [r.constructive_size for r in self.rows]
        return {
            "instances": len(self.rows),
            "hypothesis_met": sum(r.hypothesis_met for r in self.rows),
            "hypothesis_not_met": sum(not r.hypothesis_met for r in self.rows),
            "violations": self.violations,
            "min_constructive_size": min(sizes) if sizes else None,
            "total_steps": sum(r.steps for r in self.rows),
            "total_wall_ms": round(sum(r.wall_ms for r in self.rows), 3),
        }

    def to_json(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows], "summary": self.summary()},
                          indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        names = list(ReportRow.__dataclass_fields__)
        writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow(asdict(r))
        return buf.getvalue()


def worker_count() -> int:
    raw = os.environ.get("RAINBOW_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer RAINBOW_THREADS=%r", raw)
        return 1


def _repro_bundle(inst: Instance, k: int, reason: str) -> dict[str, Any]:
    traced = find_rainbow(inst, inst.n - k, trace=True)
    return {
        "reason": reason,
        "k": k,
        "instance": json.loads(serialize_instance(inst)),
        "matching": matching_to_json(traced.matching),
        "trace": traced.trace,
    }


def _run_one(args: tuple[str, Instance, int, Mode]) -> tuple[ReportRow, str | None]:
    instance_id, inst, k, mode = args
    if not inst.is_bipartite:
        raise RainbowError(f"{instance_id}: verification needs bipartite instances")
    target = inst.n - k
    began = time.perf_counter()
    res = find_rainbow(inst, target)
    wall = (time.perf_counter() - began) * 1000.0
    problem = None
    if not is_rainbow_matching(inst, res.matching):
        problem = "constructive output is not a rainbow matching"
    exact_size = None
    if mode is Mode.CROSS_CHECK_EXACT:
        exact = max_rainbow(inst)
        exact_size = exact.size
        if res.size > exact.size:
            problem = f"constructive size {res.size} exceeds exact maximum {exact.size}"
    row = ReportRow(
        instance_id=instance_id,
        n=inst.n,
        N=inst.N,
        k=k,
        hypothesis_met=inst.N >= theorem_bound(inst.n, k),
        constructive_size=res.size,
        guarantee_met=res.size >= target,
        steps=res.steps,
        wall_ms=round(wall, 3),
        exact_size=exact_size,
    )
    if problem is None and row.hypothesis_met and not row.guarantee_met:
        problem = f"N={inst.N} >= bound but only {res.size} < {target} edges found"
    return row, problem


def verify_theorem(job: VerifyJob, workers: int | None = None) -> Report:
    """Run the constructive search on every instance of *job* and collect a report.

    Instances with fewer classes than the bound are still run and reported
    with ``hypothesis_met = False``; they never count as violations.

    Raises:
        TheoremViolation: on the first (in corpus order) instance where the
            guarantee fails or the output is unsound.
    """
    tasks = [(iid, inst, job.k, job.mode) for iid, inst in job.instances()]
    workers = workers or worker_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_run_one(t) for t in tasks]

    report = Report()
    for (iid, inst, _, _), (row, problem) in zip(tasks, results):
        report.rows.append(row)
        if problem is not None:
            bundle = _repro_bundle(inst, job.k, problem)
            bundle["instance_id"] = iid
            raise TheoremViolation(f"{iid}: {problem}", bundle)
    return report


@dataclass(frozen=True)
class Counterexample:
    instance: Instance
    exact_size: int
    trial: int


def mutate(inst: Instance, rng: PortableRng) -> Instance:
    """Swap the B-endpoints of two edges in one class; the class stays a matching."""
    ci = rng.below(inst.N)
    cls = list(inst.matchings[ci])
    if len(cls) < 2:
        return inst
    i, j = sorted(rng.sample(len(cls), 2))
    (a1, b1), (a2, b2) = cls[i], cls[j]
    cls[i], cls[j] = (a1, b2), (a2, b1)
    classes = list(inst.matchings)
    classes[ci] = tuple(cls)
    return inst.with_matchings(classes)


def _exact_size(inst: Instance, cfg: SolverConfig) -> int:
    res = max_rainbow(inst, cfg)
    if not res.optimal:
        raise SearchInfeasible(
            f"exact solver hit its budget after {res.nodes_explored} nodes (n={inst.n}, N={inst.N})"
        )
    return res.size


def search_counterexample(job: SearchJob, cfg: SolverConfig | None = None,
                          initial: Instance | None = None) -> Counterexample | None:
    """Look for an instance with ``N`` classes and no rainbow matching of size ``n - k``.

    The random strategy draws a fresh instance per trial. The mutate
    strategy hill-climbs from one instance, keeping a mutant whenever its
    exact maximum does not increase.
    """
    cfg = cfg or SolverConfig(node_budget=2_000_000)
    goal = job.n - job.k
    model = RandomModel.square(job.n, job.N, job.seed)
    rng = PortableRng(job.seed)

    if job.strategy is Strategy.RANDOM:
        for trial in range(job.trials):
            inst = random_instance(model, rng.spawn(trial))
            try:
                found = not has_rainbow_of_size(inst, goal, cfg)
            except RainbowError as exc:
                raise SearchInfeasible(str(exc)) from exc
            if found:
                return Counterexample(inst, _exact_size(inst, cfg), trial)
        return None

    current = initial if initial is not None else random_instance(model, rng.spawn(0))
    best = _exact_size(current, cfg)
    steps = rng.spawn(1)
    for trial in range(job.trials):
        if best < goal:
            return Counterexample(current, best, trial)
        candidate = mutate(current, steps)
        size = _exact_size(candidate, cfg)
        if size <= best:
            current, best = candidate, size
    if best < goal:
        return Counterexample(current, best, job.trials)
    return None
