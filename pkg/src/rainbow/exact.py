"""Exact maximum rainbow matching by branch and bound, plus a brute-force reference.

Vertices are packed into bitmasks, so a partial matching is one integer and
an edge is usable when its mask does not meet it.

Classes are visited in ascending size. Each node branches on the usable
edges of the current class in input order and finally on skipping the
class. Two bounds prune a node: the number of remaining classes that still
have a usable edge, and (optionally) the maximum ordinary matching in the
union of those usable edges. For general instances the ordinary matching is
bounded through the bipartite double cover, whose maximum matching is at
least twice the maximum matching of the graph.

Identical classes are interchangeable, so within a run of identical classes
only assignments with strictly increasing edge positions, and skips only at
the tail of the run, are explored.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

from rainbow.core import (
    Edge,
    Instance,
    RainbowError,
    RainbowMatching,
    validate_instance,
)


class TooLarge(RainbowError):
    """The brute-force enumeration guard was exceeded."""


class Undetermined(RainbowError):
    """A budget ran out before a decision question could be settled."""


class InvalidInstance(RainbowError, ValueError):
    pass


BRUTE_FORCE_LIMIT = 10**7


@dataclass(frozen=True)
class SolverConfig:
    node_budget: int | None = None
    use_matching_bound: bool = True
    time_budget_ms: int | None = None
    bound_stride: int = 1

    def __post_init__(self) -> None:
        for name in ("node_budget", "time_budget_ms"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive when given")
        if self.bound_stride < 1:
            raise ValueError("bound_stride must be at least 1")


@dataclass(frozen=True)
class SolveResult:
    size: int
    witness: RainbowMatching
    optimal: bool
    nodes_explored: int


def max_matching_size(adj: Sequence[Sequence[int]], n_right: int) -> int:
    """Maximum bipartite matching by repeated augmenting-path search (Kuhn)."""
    match_right = [-1] * n_right

    def try_augment(u: int, seen: list[bool]) -> bool:
        for w in adj[u]:
            if seen[w]:
                continue
            seen[w] = True
            if match_right[w] < 0 or try_augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    size = 0
    for u in range(len(adj)):
        if adj[u] and try_augment(u, [False] * n_right):
            size += 1
    return size


class _Search:
    def __init__(self, inst: Instance, cfg: SolverConfig, stop_at: int | None):
        self.inst = inst
        self.cfg = cfg
        self.bipartite = inst.is_bipartite
        self.split = (inst.side_a or 0) if self.bipartite else inst.num_vertices
        self.n_vertices = inst.num_vertices

        first_of: dict[frozenset[Edge], int] = {}
        order = []
        for ci, cls in enumerate(inst.matchings):
            key = frozenset(cls)
            first_of.setdefault(key, ci)
            order.append((len(cls), first_of[key], ci))
        order.sort()
        # (color, group id, [(edge, mask, x, y)])
        self.classes: list[tuple[int, int, list[tuple[Edge, int, int, int]]]] = []
        for _, group, ci in order:
            edges = []
            for e in inst.matchings[group]:
                x, y = inst.endpoints(e)
                edges.append((e, (1 << x) | (1 << y), x, y))
            self.classes.append((ci, group, edges))

        self.best: list[tuple[int, Edge]] = []
        self.chosen: list[tuple[int, Edge]] = []
        self.nodes = 0
        self.aborted = False
        self.deadline = (time.perf_counter() + cfg.time_budget_ms / 1000.0
                         if cfg.time_budget_ms else None)
        root = self._upper_bound(0, 0)
        self.stop_at = root if stop_at is None else min(stop_at, root)

    def _upper_bound(self, pos: int, used: int) -> int:
        live = 0
        union: set[tuple[int, int]] = set()
        for _, _, edges in self.classes[pos:]:
            hit = False
            for _, mask, x, y in edges:
                if not mask & used:
                    hit = True
                    union.add((x, y))
            live += hit
        if not self.cfg.use_matching_bound or pos % self.cfg.bound_stride or live == 0:
            return live
        return min(live, self._matching_bound(union))

    def _matching_bound(self, union: set[tuple[int, int]]) -> int:
        if self.bipartite:
            adj: list[list[int]] = [[] for _ in range(self.split)]
            for x, y in union:
                adj[x].append(y - self.split)
            return max_matching_size(adj, self.n_vertices - self.split)
        adj = [[] for _ in range(self.n_vertices)]
        for x, y in union:
            adj[x].append(y)
            adj[y].append(x)
        return max_matching_size(adj, self.n_vertices) // 2

    def _out_of_budget(self) -> bool:
        if self.cfg.node_budget is not None and self.nodes > self.cfg.node_budget:
            return True
        if self.deadline is not None and self.nodes % 256 == 0:
            return time.perf_counter() > self.deadline
        return False

    def run(self) -> None:
        if self.stop_at > 0:
            self._dfs(0, 0, -1, -1)

    def _dfs(self, pos: int, used: int, prev_group: int, prev_pick: int) -> None:
        if self.aborted:
            return
        self.nodes += 1
        if self._out_of_budget():
            self.aborted = True
            return
        size = len(self.chosen)
        if size > len(self.best):
            self.best = list(self.chosen)
        if pos == len(self.classes) or len(self.best) >= self.stop_at:
            return
        incumbent = len(self.best)
        if size + (len(self.classes) - pos) <= incumbent:
            return
        if size + self._upper_bound(pos, used) <= incumbent:
            return

        color, group, edges = self.classes[pos]
        same_run = group == prev_group
        if not (same_run and prev_pick < 0):
            start = prev_pick + 1 if same_run else 0
            for idx in range(start, len(edges)):
                edge, mask, _, _ = edges[idx]
                if mask & used:
                    continue
                self.chosen.append((color, edge))
                self._dfs(pos + 1, used | mask, group, idx)
                self.chosen.pop()
                if self.aborted or len(self.best) >= self.stop_at:
                    return
        self._dfs(pos + 1, used, group, -1)


def _check(inst: Instance) -> None:
    report = validate_instance(inst, strict=False)
    if not report.ok:
        raise InvalidInstance("; ".join(v.description for v in report.violations))


def _solve(inst: Instance, cfg: SolverConfig, stop_at: int | None) -> SolveResult:
    _check(inst)
    search = _Search(inst, cfg, stop_at)
    search.run()
    return SolveResult(
        size=len(search.best),
        witness=RainbowMatching(frozenset(search.best)),
        optimal=not search.aborted,
        nodes_explored=search.nodes,
    )


def max_rainbow(inst: Instance, cfg: SolverConfig | None = None) -> SolveResult:
    """Largest rainbow matching of *inst*.

    ``optimal`` is False only when a node or time budget stopped the search;
    the witness is then the best matching seen so far.
    """
    return _solve(inst, cfg or SolverConfig(), None)


def has_rainbow_of_size(inst: Instance, s: int, cfg: SolverConfig | None = None) -> bool:
    """Decide whether *inst* has a rainbow matching with at least *s* edges.

    Raises:
        Undetermined: a budget ran out with no witness of size *s* found.
    """
    if s <= 0:
        return True
    res = _solve(inst, cfg or SolverConfig(), s)
    if res.size >= s:
        return True
    if not res.optimal:
        raise Undetermined(f"budget exhausted after {res.nodes_explored} nodes")
    return False


def brute_force_max_rainbow(inst: Instance) -> int:
    """Enumerate every choice of at most one edge per class and return the best count.

    Raises:
        TooLarge: the product of ``|class| + 1`` over all classes exceeds 10**7.
    """
    _check(inst)
    space = math.prod(len(cls) + 1 for cls in inst.matchings)
    if space > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{space} selections exceed the limit of {BRUTE_FORCE_LIMIT}")
    masks = [[(1 << x) | (1 << y) for x, y in map(inst.endpoints, cls)]
             for cls in inst.matchings]

    def walk(i: int, used: int) -> int:
        if i == len(masks):
            return 0
        best = walk(i + 1, used)
        for m in masks[i]:
            if not m & used:
                best = max(best, 1 + walk(i + 1, used | m))
        return best

    return walk(0, 0)
