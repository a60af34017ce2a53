"""Instances, rainbow matchings, validation, serialization and bound arithmetic.

Vertices are dense 0-based integers. In a bipartite instance an edge is the
pair ``(a, b)`` of an A-side index and a B-side index; in a general instance
it is ``(u, v)`` with ``u < v``. Labels and other vertex metadata are not
modelled.
"""

from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any, NamedTuple


class RainbowError(Exception):
    """Base class for errors raised by this package."""


class ParseError(RainbowError, ValueError):
    """Malformed instance or matching document."""

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class Kind(str, enum.Enum):
    BIPARTITE = "bipartite"
    GENERAL = "general"


class Side(str, enum.Enum):
    A = "A"
    B = "B"


class VertexRef(NamedTuple):
    side: Side | None
    index: int

    def __str__(self) -> str:
        if self.side is None:
            return str(self.index)
        return f"{self.side.value.lower()}{self.index}"


class Edge(NamedTuple):
    u: int
    v: int


@dataclass(frozen=True)
class Instance:
    """An edge-colored multigraph given as an ordered list of color classes.

    Each color class is meant to be a matching; that (and the size
    requirement) is checked by :func:`validate_instance`, not here, so that
    broken inputs can still be loaded and reported on.
    """

    kind: Kind
    n: int
    matchings: tuple[tuple[Edge, ...], ...]
    side_a: int | None = None
    side_b: int | None = None
    vertex_count: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(
            self,
            "matchings",
            tuple(tuple(Edge(int(u), int(v)) for u, v in cls) for cls in self.matchings),
        )

    @classmethod
    def bipartite(cls, n: int, side_a: int, side_b: int,
                  matchings: Iterable[Iterable[tuple[int, int]]]) -> Instance:
        return cls(Kind.BIPARTITE, n, tuple(tuple(m) for m in matchings),
                   side_a=side_a, side_b=side_b)

    @classmethod
    def general(cls, n: int, vertex_count: int,
                matchings: Iterable[Iterable[tuple[int, int]]]) -> Instance:
        return cls(Kind.GENERAL, n, tuple(tuple(m) for m in matchings),
                   vertex_count=vertex_count)

    @property
    def N(self) -> int:
        return len(self.matchings)

    @property
    def is_bipartite(self) -> bool:
        return self.kind is Kind.BIPARTITE

    @property
    def num_vertices(self) -> int:
        if self.is_bipartite:
            return (self.side_a or 0) + (self.side_b or 0)
        return self.vertex_count or 0

    def endpoints(self, edge: Edge) -> tuple[int, int]:
        """Map an edge to a pair of keys in one shared vertex index space."""
        if self.is_bipartite:
            return edge.u, (self.side_a or 0) + edge.v
        return edge.u, edge.v

    def vertex_refs(self, edge: Edge) -> tuple[VertexRef, VertexRef]:
        if self.is_bipartite:
            return VertexRef(Side.A, edge.u), VertexRef(Side.B, edge.v)
        return VertexRef(None, edge.u), VertexRef(None, edge.v)

    def with_matchings(self, matchings: Iterable[Iterable[tuple[int, int]]]) -> Instance:
        return Instance(self.kind, self.n, tuple(tuple(m) for m in matchings),
                        side_a=self.side_a, side_b=self.side_b,
                        vertex_count=self.vertex_count)


@dataclass(frozen=True)
class RainbowMatching:
    """A set of ``(color, edge)`` entries."""

    entries: frozenset[tuple[int, Edge]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", frozenset((int(c), Edge(*e)) for c, e in self.entries)
        )

    @classmethod
    def of(cls, entries: Iterable[tuple[int, tuple[int, int]]]) -> RainbowMatching:
        return cls(frozenset((c, Edge(*e)) for c, e in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, Edge]]:
        return iter(sorted(self.entries))

    @property
    def colors(self) -> frozenset[int]:
        return frozenset(c for c, _ in self.entries)


@dataclass(frozen=True)
class Violation:
    code: str
    description: str
    class_index: int | None = None
    offending: Any = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_instance(inst: Instance, strict: bool = True) -> ValidationReport:
    """Check every structural requirement of *inst* and report all failures.

    In strict mode each class must have exactly ``n`` edges, in lenient mode
    at least ``n``.
    """
    out: list[Violation] = []
    if inst.n < 1:
        out.append(Violation("BadN", f"n must be positive, got {inst.n}"))
    if inst.N < 1:
        out.append(Violation("NoClasses", "instance has no color classes"))
    if inst.is_bipartite:
        for name, size in (("side_a", inst.side_a), ("side_b", inst.side_b)):
            if size is None or size < 1:
                out.append(Violation("BadSides", f"{name} must be a positive integer, got {size}"))
    elif inst.vertex_count is None or inst.vertex_count < 1:
        out.append(Violation("BadSides", f"vertex count must be positive, got {inst.vertex_count}"))

    for ci, cls in enumerate(inst.matchings):
        if strict and len(cls) != inst.n:
            out.append(Violation("SizeMismatch",
                                 f"class {ci} has {len(cls)} edges, expected exactly {inst.n}", ci))
        elif not strict and len(cls) < inst.n:
            out.append(Violation("SizeMismatch",
                                 f"class {ci} has {len(cls)} edges, expected at least {inst.n}", ci))
        seen: set[VertexRef] = set()
        for edge in cls:
            bad = _edge_problem(inst, edge)
            if bad is not None:
                out.append(Violation(bad[0], f"edge {tuple(edge)} in class {ci}: {bad[1]}", ci, edge))
                continue
            for ref in inst.vertex_refs(edge):
                if ref in seen:
                    out.append(Violation("RepeatedVertex",
                                         f"vertex {ref} repeated in class {ci}", ci, ref))
                seen.add(ref)
    return ValidationReport(tuple(out))


def _edge_problem(inst: Instance, edge: Edge) -> tuple[str, str] | None:
    u, v = edge
    if u < 0 or v < 0:
        return "OutOfRange", "negative vertex index"
    if inst.is_bipartite:
        if inst.side_a is not None and u >= inst.side_a:
            return "OutOfRange", f"A-index {u} >= side size {inst.side_a}"
        if inst.side_b is not None and v >= inst.side_b:
            return "OutOfRange", f"B-index {v} >= side size {inst.side_b}"
        return None
    if u == v:
        return "Loop", "loop edge"
    if u > v:
        return "NonCanonical", "general edges must be listed with u < v"
    if inst.vertex_count is not None and v >= inst.vertex_count:
        return "OutOfRange", f"vertex {v} >= vertex count {inst.vertex_count}"
    return None


def is_rainbow_matching(inst: Instance, rm: RainbowMatching) -> bool:
    colors: set[int] = set()
    used: set[int] = set()
    class_sets: dict[int, frozenset[Edge]] = {}
    for color, edge in rm.entries:
        if color in colors or not 0 <= color < inst.N:
            return False
        colors.add(color)
        if color not in class_sets:
            class_sets[color] = frozenset(inst.matchings[color])
        if edge not in class_sets[color]:
            return False
        for key in inst.endpoints(edge):
            if key in used:
                return False
            used.add(key)
    return True


def greedy_rainbow(inst: Instance) -> RainbowMatching:
    """Scan classes in index order and take each class's first free edge."""
    used: set[int] = set()
    chosen = []
    for color, cls in enumerate(inst.matchings):
        for edge in cls:
            x, y = inst.endpoints(edge)
            if x not in used and y not in used:
                used.update((x, y))
                chosen.append((color, edge))
                break
    return RainbowMatching(frozenset(chosen))


def theorem_bound(n: int, k: int) -> int:
    """Number of size-``n`` matchings that forces a rainbow matching of size ``n - k``.

    ``floor((k + 2) * n / (k + 1)) - (k + 1)``, computed as
    ``n + n // (k + 1) - (k + 1)``.
    """
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    return n + n // (k + 1) - (k + 1)


def guaranteed_k(n: int, N: int) -> int | None:
    """Smallest ``k`` with ``theorem_bound(n, k) <= N``, or None if there is none."""
    for k in range(n):
        if theorem_bound(n, k) <= N:
            return k
    return None


# -- serialization ----------------------------------------------------------

def serialize_instance(inst: Instance) -> bytes:
    doc: dict[str, Any] = {"kind": inst.kind.value, "n": inst.n}
    if inst.is_bipartite:
        doc["side_a"] = inst.side_a
        doc["side_b"] = inst.side_b
    else:
        doc["vertices"] = inst.vertex_count
    doc["matchings"] = [[[e.u, e.v] for e in cls] for cls in inst.matchings]
    return json.dumps(doc).encode("utf-8")


def _load_json(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from exc


def _int_field(doc: dict, name: str) -> int:
    if name not in doc:
        raise ParseError("missing required field", field=name)
    value = doc[name]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", field=name)
    return value


def _edge(raw: Any, where: str, general: bool) -> Edge:
    if (not isinstance(raw, list) or len(raw) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in raw)):
        raise ParseError(f"edge must be a pair of integers, got {raw!r}", field=where)
    if general and raw[0] == raw[1]:
        raise ParseError(f"loop edge {raw!r}", field=where)
    return Edge(raw[0], raw[1])


def parse_instance(data: bytes | str) -> Instance:
    """Parse an instance document. Structural validation is left to the caller."""
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if "kind" not in doc:
        raise ParseError("missing required field", field="kind")
    try:
        kind = Kind(doc["kind"])
    except ValueError:
        raise ParseError(f"unknown kind {doc['kind']!r}", field="kind") from None
    n = _int_field(doc, "n")
    if kind is Kind.BIPARTITE:
        side_a, side_b, vertices = _int_field(doc, "side_a"), _int_field(doc, "side_b"), None
    else:
        side_a, side_b, vertices = None, None, _int_field(doc, "vertices")
    if "matchings" not in doc:
        raise ParseError("missing required field", field="matchings")
    raw = doc["matchings"]
    if not isinstance(raw, list):
        raise ParseError("expected a list of classes", field="matchings")
    classes = []
    for ci, cls in enumerate(raw):
        if not isinstance(cls, list):
            raise ParseError("class must be a list of edges", field=f"matchings[{ci}]")
        classes.append(tuple(_edge(e, f"matchings[{ci}][{j}]", kind is Kind.GENERAL)
                             for j, e in enumerate(cls)))
    return Instance(kind, n, tuple(classes), side_a=side_a, side_b=side_b, vertex_count=vertices)


def serialize_matching(rm: RainbowMatching) -> bytes:
    doc = {"entries": [{"color": c, "edge": [e.u, e.v]} for c, e in rm]}
    return json.dumps(doc).encode("utf-8")


def matching_to_json(rm: RainbowMatching) -> list[dict[str, Any]]:
    return [{"color": c, "edge": [e.u, e.v]} for c, e in rm]


def parse_matching(data: bytes | str) -> RainbowMatching:
    doc = _load_json(data)
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError("missing required field", field="entries")
    out = []
    for i, entry in enumerate(doc["entries"]):
        if not isinstance(entry, dict):
            raise ParseError("entry must be an object", field=f"entries[{i}]")
        color = _int_field(entry, "color")
        if "edge" not in entry:
            raise ParseError("missing required field", field=f"entries[{i}].edge")
        out.append((color, _edge(entry["edge"], f"entries[{i}].edge", False)))
    return RainbowMatching(frozenset(out))


