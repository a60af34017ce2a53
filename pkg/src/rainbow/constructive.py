"""Layered augmenting-path search for rainbow matchings in bipartite instances.

Given a rainbow matching ``R`` of size ``t``, the unused color classes are
taken in ascending index order and assigned layer labels ``1, 2, ...``.
Layer ``i`` selects ``i * (n - t)`` edges of its class whose A-endpoint is
no longer covered by the reduced matching, i.e. lies in ``A_0`` or in one of
the earlier sets ``A_1 .. A_{i-1}``. A selected edge that lands in the free
B-set ``B_0`` yields an alternating path back to ``A_0`` through strictly
earlier layers, and swapping along it grows ``R`` by one edge. If no layer
ever touches ``B_0`` the classes run out, and the last layer certifies
``(N - t) * (n - t) <= t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from rainbow.core import (
    Edge,
    Instance,
    RainbowError,
    RainbowMatching,
    Side,
    VertexRef,
    greedy_rainbow,
    guaranteed_k,
    is_rainbow_matching,
    matching_to_json,
    theorem_bound,
)


class NotBipartite(RainbowError):
    """The constructive procedure only handles bipartite instances."""


class InvalidState(RainbowError):
    """The supplied matching is not a rainbow matching of the instance."""


class InternalContradiction(RainbowError):
    """The search reached a state the counting argument rules out.

    Seeing this means a bug, not a counterexample.
    """


class TargetOutOfRange(RainbowError, ValueError):
    pass


@dataclass(frozen=True)
class Layer:
    label: int
    color: int
    F: tuple[Edge, ...]
    B: frozenset[int]
    A: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "F", tuple(Edge(*e) for e in self.F))
        object.__setattr__(self, "B", frozenset(self.B))
        object.__setattr__(self, "A", frozenset(self.A))

    def edge_at_b(self, b: int) -> Edge | None:
        for e in self.F:
            if e.v == b:
                return e
        return None


@dataclass
class LayerState:
    """Bookkeeping for one call of :func:`augment_once`.

    ``partner`` maps each B-vertex covered by the starting matching to its
    A-partner. ``reduced_cover`` is the set of A-vertices still covered once
    the edges between ``B_j`` and ``A_j`` are dropped for every built layer.
    """

    n: int
    t: int
    partner: dict[int, int]
    free_a: frozenset[int]
    free_b: frozenset[int]
    unused: tuple[int, ...]
    layers: list[Layer] = field(default_factory=list)
    reduced_cover: set[int] = field(default_factory=set)
    scans: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "t": self.t,
            "partner": sorted([b, a] for b, a in self.partner.items()),
            "free_a": sorted(self.free_a),
            "free_b": sorted(self.free_b),
            "unused": list(self.unused),
            "layers": [
                {
                    "label": L.label,
                    "color": L.color,
                    "F": [[e.u, e.v] for e in L.F],
                    "B": sorted(L.B),
                    "A": sorted(L.A),
                }
                for L in self.layers
            ],
            "reduced_cover": sorted(self.reduced_cover),
        }


@dataclass(frozen=True)
class AugmentingPath:
    """Alternating path from ``B_0`` to ``A_0``.

    ``labels[i]`` is the layer label of ``add[i]``. ``walk`` lists the
    visited vertices in order, ``b_0, a_0, b_1, a_1, ...``.
    """

    add: tuple[tuple[int, Edge], ...]
    remove: tuple[tuple[int, Edge], ...]
    labels: tuple[int, ...]
    walk: tuple[VertexRef, ...]

    def apply(self, rm: RainbowMatching) -> RainbowMatching:
        return RainbowMatching((rm.entries - frozenset(self.remove)) | frozenset(self.add))

    def to_json(self) -> dict[str, Any]:
        return {
            "add": [{"color": c, "edge": [e.u, e.v], "layer": lab}
                    for (c, e), lab in zip(self.add, self.labels)],
            "remove": [{"color": c, "edge": [e.u, e.v]} for c, e in self.remove],
            "walk": [str(v) for v in self.walk],
        }


@dataclass(frozen=True)
class Augmented:
    matching: RainbowMatching
    path: AugmentingPath
    state: LayerState


@dataclass(frozen=True)
class Exhausted:
    state: LayerState


AugmentOutcome = Union[Augmented, Exhausted]


def augment_once(inst: Instance, rm: RainbowMatching) -> AugmentOutcome:
    """Grow *rm* by one edge, or show that the unused classes are exhausted.

    Raises:
        NotBipartite: *inst* is a general instance.
        InvalidState: *rm* is not a rainbow matching of *inst*, or already
            has ``n`` edges.
        InternalContradiction: a layer could not be filled, or the classes
            were exhausted although the instance has enough of them to
            force a larger rainbow matching.
    """
    if not inst.is_bipartite:
        raise NotBipartite("constructive search needs a bipartite instance")
    if not is_rainbow_matching(inst, rm):
        raise InvalidState("input is not a rainbow matching of the instance")
    n, t = inst.n, len(rm)
    if t >= n:
        raise InvalidState(f"matching already has {t} >= n = {n} edges")

    partner: dict[int, int] = {}
    owner: dict[int, tuple[int, Edge]] = {}
    for color, e in rm.entries:
        partner[e.v] = e.u
        owner[e.u] = (color, e)
    used_colors = rm.colors
    state = LayerState(
        n=n,
        t=t,
        partner=partner,
        free_a=frozenset(range(inst.side_a or 0)) - owner.keys(),
        free_b=frozenset(range(inst.side_b or 0)) - partner.keys(),
        unused=tuple(c for c in range(inst.N) if c not in used_colors),
        reduced_cover=set(owner),
    )
    gap = n - t
    layer_of_a: dict[int, Layer] = {}
    claimed_b: set[int] = set()

    for label, color in enumerate(state.unused, start=1):
        state.scans += 1
        quota = label * gap
        cover = state.reduced_cover
        candidates = sorted((e for e in inst.matchings[color] if e.u not in cover),
                            key=lambda e: (e.u, e.v))
        if len(candidates) < quota:
            raise InternalContradiction(
                f"class {color} has only {len(candidates)} edges off the reduced cover, "
                f"layer {label} needs {quota}"
            )
        F = tuple(candidates[:quota])
        for e in F:
            if e.v in state.free_b:
                path = _trace_path(color, label, e, state, owner, layer_of_a)
                return Augmented(path.apply(rm), path, state)

        fresh = sorted(e.v for e in F if e.v not in claimed_b)
        B = frozenset(fresh[:gap])
        A = frozenset(partner[b] for b in B)
        layer = Layer(label, color, F, B, A)
        state.layers.append(layer)
        claimed_b |= B
        for a in A:
            layer_of_a[a] = layer
        state.reduced_cover -= A

    N = inst.N
    if (N - t) * gap > t or N >= theorem_bound(n, n - 1 - t):
        raise InternalContradiction(
            f"classes exhausted at t={t} with N={N}, n={n}; the counting bound forbids this"
        )
    return Exhausted(state)


def _trace_path(color: int, label: int, first: Edge, state: LayerState,
                owner: dict[int, tuple[int, Edge]],
                layer_of_a: dict[int, Layer]) -> AugmentingPath:
    add = [(color, first)]
    labels = [label]
    remove = []
    walk = [VertexRef(Side.B, first.v), VertexRef(Side.A, first.u)]
    a = first.u
    while a not in state.free_a:
        layer = layer_of_a.get(a)
        if layer is None or layer.label >= labels[-1]:
            raise InternalContradiction(f"A-vertex {a} is not in an earlier layer")
        r_color, r_edge = owner[a]
        remove.append((r_color, r_edge))
        b = r_edge.v
        nxt = layer.edge_at_b(b)
        if nxt is None:
            raise InternalContradiction(f"B-vertex {b} has no edge in layer {layer.label}")
        add.append((layer.color, nxt))
        labels.append(layer.label)
        walk += [VertexRef(Side.B, b), VertexRef(Side.A, nxt.u)]
        a = nxt.u
    return AugmentingPath(tuple(add), tuple(remove), tuple(labels), tuple(walk))


def check_counting_certificate(inst: Instance, state: LayerState, t: int) -> bool:
    """Verify an exhausted layer state.

    Checks disjointness of the A- and B-sets, layer sizes, ``A_i = f(B_i)``,
    that no ``F_i`` touches ``B_0``, that every unused class became a layer,
    and finally ``(N - t) * (n - t) <= t``.
    """
    n, N = inst.n, inst.N
    gap = n - t
    if state.t != t or gap <= 0:
        return False
    if len(state.layers) != N - t or len(state.unused) != N - t:
        return False
    seen_a, seen_b = set(state.free_a), set(state.free_b)
    for i, layer in enumerate(state.layers, start=1):
        if layer.label != i or layer.color != state.unused[i - 1]:
            return False
        if len(layer.F) != i * gap or len(layer.A) != gap or len(layer.B) != gap:
            return False
        if seen_a & layer.A or seen_b & layer.B:
            return False
        seen_a |= layer.A
        seen_b |= layer.B
        if any(b not in state.partner for b in layer.B):
            return False
        if {state.partner[b] for b in layer.B} != set(layer.A):
            return False
        cls = set(inst.matchings[layer.color])
        if any(e not in cls for e in layer.F):
            return False
        if len({e.u for e in layer.F}) != len(layer.F) or len({e.v for e in layer.F}) != len(layer.F):
            return False
        if any(e.v in state.free_b for e in layer.F):
            return False
        if not layer.B <= {e.v for e in layer.F}:
            return False
    return (N - t) * gap <= t


@dataclass
class SearchResult:
    matching: RainbowMatching
    met_target: bool
    steps: int
    target: int
    exhausted: Exhausted | None = None
    trace: list[dict[str, Any]] | None = None

    @property
    def size(self) -> int:
        return len(self.matching)


def find_rainbow(inst: Instance, target: int | None = None, *, trace: bool = False,
                 start: RainbowMatching | None = None) -> SearchResult:
    """Greedy start followed by augmentations until *target* edges or exhaustion.

    The default target is ``n - guaranteed_k(n, N)``, which the procedure
    always reaches.
    """
    if not inst.is_bipartite:
        raise NotBipartite("constructive search needs a bipartite instance")
    n = inst.n
    if target is None:
        k = guaranteed_k(n, inst.N)
        target = n - (k if k is not None else n)
    if not 1 <= target <= n:
        raise TargetOutOfRange(f"target must lie in [1, {n}], got {target}")

    rm = greedy_rainbow(inst) if start is None else start
    log: list[dict[str, Any]] | None = [] if trace else None
    steps = 0
    exhausted = None
    while len(rm) < target:
        t = len(rm)
        out = augment_once(inst, rm)
        if out.state.scans > inst.N - t:
            raise InternalContradiction("an unused class was scanned twice")
        if log is not None:
            log.append(_trace_entry(t, out))
        if isinstance(out, Exhausted):
            exhausted = out
            break
        rm = out.matching
        steps += 1
        if steps > n:
            raise InternalContradiction("more augmentations than n")
    return SearchResult(rm, len(rm) >= target, steps, target, exhausted, log)


def _trace_entry(t: int, out: AugmentOutcome) -> dict[str, Any]:
    entry: dict[str, Any] = {"t": t, "state": out.state.to_json()}
    if isinstance(out, Augmented):
        entry["outcome"] = "augmented"
        entry["path"] = out.path.to_json()
        entry["matching"] = matching_to_json(out.matching)
    else:
        entry["outcome"] = "exhausted"
    return entry


def path_is_well_formed(path: AugmentingPath, before: RainbowMatching,
                        after: RainbowMatching, inst: Instance) -> bool:
    """Structural checks on a single augmentation, used by tests and the harness."""
    if len(path.add) != len(path.remove) + 1:
        return False
    if any(x <= y for x, y in zip(path.labels, path.labels[1:])):
        return False
    add_colors = [c for c, _ in path.add]
    if len(set(add_colors)) != len(add_colors) or set(add_colors) & before.colors:
        return False
    if len(set(path.walk)) != len(path.walk):
        return False
    if not frozenset(path.remove) <= before.entries:
        return False
    return is_rainbow_matching(inst, after) and len(after) == len(before) + 1

