"""Weighted graphs (X, b, mu): explicit finite tables and lazy families.

A weighted graph is a countable vertex set X, a symmetric edge weight
b : X x X -> [0, oo) that vanishes on the diagonal and is summable around
every vertex, and a vertex measure mu : X -> (0, oo).  The weighted degree

    Deg(x) = (1/mu(x)) * sum_y b(x, y)

is the quantity most of the package revolves around.

Vertices are opaque hashable labels: plain strings for graphs loaded from
JSON tables, (row, index) integer pairs for row-structured families.  All
graph objects are immutable after construction; accessors are safe for
concurrent readers (the degree memo is a plain dict filled monotonically).
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .certificates import (
    Certificate,
    Witness,
    PASS,
    FAIL,
    INCONCLUSIVE,
    conjunction,
    vertex_label,
)

VertexId = Any  # str, or tuple[int, ...] for row-structured families

DEFAULT_BALL_BUDGET = 200_000


class UnknownVertexError(KeyError):
    """A vertex id was queried that the graph does not contain."""


class InconclusiveError(Exception):
    """A quantity cannot be evaluated exactly from the declared graph data,
    e.g. a full neighbor sum at a non-locally-finite vertex without a
    declared tail bound."""


def vertex_key(v: VertexId):
    """Total order on vertex ids, usable across label styles.

    Tuples sort before strings; within a style the natural order applies.
    Deterministic orderings (neighbor lists, heap tie-breaks, report rows)
    all go through this key.
    """
    if isinstance(v, tuple):
        return (0, v)
    return (1, str(v))


def sorted_vertices(vs: Iterable[VertexId]) -> list:
    return sorted(vs, key=vertex_key)


class WeightedGraph:
    """Read-only weighted graph interface.

    Subclasses implement `mu`, `neighbors`, `has_vertex` and `vertices`.
    `neighbors(x)` lists every (y, b(x,y)) with b > 0, sorted by vertex_key;
    for locally finite graphs the list is complete and `tail_bound` is 0.
    """

    name: str = "graph"
    locally_finite: bool = True

    def __init__(self):
        self._degree_sums: dict[VertexId, float] = {}

    # --- required interface -------------------------------------------------

    def mu(self, x: VertexId) -> float:
        raise NotImplementedError

    def neighbors(self, x: VertexId) -> list[tuple[VertexId, float]]:
        raise NotImplementedError

    def has_vertex(self, x: VertexId) -> bool:
        raise NotImplementedError

    def vertices(self) -> Iterator[VertexId]:
        """Deterministic enumeration of the vertex set (may be infinite)."""
        raise NotImplementedError

    # --- optional hooks -----------------------------------------------------

    def is_finite(self) -> bool:
        return False

    def vertex_count(self) -> int | None:
        return None

    def tail_bound(self, x: VertexId) -> float | None:
        """Upper bound on sum of b(x, y) over neighbors *not* enumerated by
        `neighbors(x)`.  0 for locally finite graphs, None when unknown."""
        return 0.0 if self.locally_finite else None

    def fc_tail_bound(self, x: VertexId) -> float | None:
        """Like `tail_bound`, but for sum of b(x, y)^2 / mu(y)."""
        return 0.0 if self.locally_finite else None

    def degree_sum(self, x: VertexId) -> float:
        """sum_y b(x, y), tail bound included.  Exact summation by default."""
        if not self.has_vertex(x):
            raise UnknownVertexError(x)
        tail = self.tail_bound(x)
        if tail is None:
            raise InconclusiveError(
                f"vertex {vertex_label(x)} is not locally finite and declares no tail bound"
            )
        return math.fsum(b for _, b in self.neighbors(x)) + tail

    def weighted_degree(self, x: VertexId) -> float:
        """Deg(x) = (1/mu(x)) sum_y b(x, y), memoized."""
        d = self._degree_sums.get(x)
        if d is None:
            d = self.degree_sum(x)
            self._degree_sums[x] = d
        return d / self.mu(x)

    def orbit_reduction(self, vertices: Sequence[VertexId]) -> "OrbitReduction | None":
        """Optional symmetry data: a partition of `vertices` into classes of
        vertices equivalent under weight-preserving graph automorphisms.
        None means no reduction is available and callers must enumerate."""
        return None


@dataclass(frozen=True)
class OrbitReduction:
    """Partition of a scope under weight-preserving automorphisms.

    `classes` lists (representative, multiplicity): any per-vertex quantity
    built from b, mu and functions constant on the `constancy_groups` takes
    the same value on all vertices of a class, so checking the
    representative checks them all.  `constancy_groups` covers the classes
    *and* their neighbor orbits, so that neighbor sums are included.
    """

    classes: list[tuple[VertexId, int]]
    constancy_groups: list[list[VertexId]]


def reduced_checklist(
    g: WeightedGraph,
    vertices: Sequence[VertexId],
    constant_fns: Sequence[Callable[[VertexId], float]] = (),
) -> tuple[list[tuple[VertexId, int]], dict]:
    """Vertices to check with multiplicities, using orbit symmetry if valid.

    Each function in `constant_fns` is evaluated on every member of every
    constancy group; any deviation from the group representative disables
    the reduction (falling back to full enumeration is always sound).
    """
    red = g.orbit_reduction(vertices)
    if red is None:
        return [(v, 1) for v in vertices], {"orbit_reduced": False}
    for fn in constant_fns:
        for group in red.constancy_groups:
            ref = fn(group[0])
            for v in group[1:]:
                if fn(v) != ref:
                    return [(v, 1) for v in vertices], {
                        "orbit_reduced": False,
                        "fallback": f"function not constant on orbit of {vertex_label(group[0])}",
                    }
    return red.classes, {
        "orbit_reduced": True,
        "classes": len(red.classes),
        "vertices_covered": sum(m for _, m in red.classes),
    }


# --------------------------------------------------------------------------
# explicit finite graphs


class FiniteGraph(WeightedGraph):
    """Finite graph from explicit tables.

    Edges are stored once under the canonical (min, max) vertex_key order,
    so b is symmetric by construction; the constructor rejects self-loops,
    nonpositive weights, duplicate listings and unknown endpoints.
    """

    def __init__(
        self,
        mu: dict[VertexId, float],
        edges: Iterable[tuple[VertexId, VertexId, float]],
        name: str = "finite graph",
    ):
        super().__init__()
        self.name = name
        if not mu:
            raise ValueError("graph needs at least one vertex")
        self._mu = dict(mu)
        for v, m in self._mu.items():
            if not (isinstance(m, (int, float)) and math.isfinite(m) and m > 0):
                raise ValueError(f"mu({vertex_label(v)}) = {m!r} is not a positive number")
        self._edges: dict[tuple[VertexId, VertexId], float] = {}
        adj: dict[VertexId, list[tuple[VertexId, float]]] = {v: [] for v in self._mu}
        for u, v, b in edges:
            if u not in self._mu or v not in self._mu:
                raise ValueError(f"edge ({vertex_label(u)}, {vertex_label(v)}) has unknown endpoint")
            if u == v:
                raise ValueError(f"self-loop at {vertex_label(u)}")
            if not (isinstance(b, (int, float)) and math.isfinite(b) and b > 0):
                raise ValueError(
                    f"b({vertex_label(u)}, {vertex_label(v)}) = {b!r} is not a positive number"
                )
            key = (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)
            if key in self._edges:
                raise ValueError(f"edge ({vertex_label(u)}, {vertex_label(v)}) listed more than once")
            self._edges[key] = float(b)
            adj[u].append((v, float(b)))
            adj[v].append((u, float(b)))
        self._adj = {v: sorted(ns, key=lambda e: vertex_key(e[0])) for v, ns in adj.items()}
        self._order = sorted_vertices(self._mu)

    # -- interface --

    def mu(self, x):
        try:
            return self._mu[x]
        except KeyError:
            raise UnknownVertexError(x) from None

    def neighbors(self, x):
        try:
            return self._adj[x]
        except KeyError:
            raise UnknownVertexError(x) from None

    def has_vertex(self, x):
        return x in self._mu

    def vertices(self):
        return iter(self._order)

    def is_finite(self):
        return True

    def vertex_count(self):
        return len(self._mu)

    def edge_count(self):
        return len(self._edges)

    def edges(self) -> Iterator[tuple[VertexId, VertexId, float]]:
        for (u, v), b in sorted(self._edges.items(), key=lambda kv: (vertex_key(kv[0][0]), vertex_key(kv[0][1]))):
            yield u, v, b

    def b(self, x, y) -> float:
        key = (x, y) if vertex_key(x) <= vertex_key(y) else (y, x)
        return self._edges.get(key, 0.0)

    # -- JSON table format --

    @classmethod
    def from_json(cls, text_or_obj, name: str = "finite graph") -> "FiniteGraph":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
        try:
            vertices = obj["vertices"]
            edges = obj["edges"]
        except (TypeError, KeyError) as e:
            raise ValueError(f"graph JSON needs 'vertices' and 'edges' arrays: {e}") from None
        mu = {}
        for row in vertices:
            vid = row["id"]
            if not isinstance(vid, str):
                raise ValueError(f"vertex id {vid!r} must be a string")
            if vid in mu:
                raise ValueError(f"vertex {vid!r} listed more than once")
            mu[vid] = row["mu"]
        edge_list = [(row["u"], row["v"], row["b"]) for row in edges]
        return cls(mu, edge_list, name=name)

    def to_json_obj(self) -> dict:
        return {
            "vertices": [{"id": vertex_label(v), "mu": self._mu[v]} for v in self._order],
            "edges": [
                {"u": vertex_label(u), "v": vertex_label(v), "b": b}
                for u, v, b in self.edges()
            ],
        }


# --------------------------------------------------------------------------
# axioms


def weighted_degree(g: WeightedGraph, x: VertexId) -> float:
    """Deg(x) = (1/mu(x)) * sum_y b(x, y)."""
    return g.weighted_degree(x)


def check_edge_axioms(g: WeightedGraph, scope: Sequence[VertexId], scope_label: str = "") -> Certificate:
    """Verify on `scope`: zero diagonal, symmetry of b, summability around
    each vertex.  Symmetry is checked pairwise through both adjacency lists,
    so it catches graphs whose `neighbors` is inconsistent, not just bad
    input tables (those are rejected at load time)."""
    label = scope_label or f"{len(scope)} vertices of {g.name}"
    witnesses: list[Witness] = []
    unsummable: list[Witness] = []
    checked = 0
    for x in scope:
        checked += 1
        for y, bxy in g.neighbors(x):
            if y == x:
                witnesses.append(Witness((x, y), bxy, "nonzero diagonal b(x,x)"))
                continue
            if bxy <= 0:
                witnesses.append(Witness((x, y), bxy, "nonpositive edge weight"))
            byx = 0.0
            for z, bzx in g.neighbors(y):
                if z == x:
                    byx = bzx
                    break
            if byx != bxy:
                witnesses.append(
                    Witness((x, y), bxy - byx, f"b(x,y)={bxy!r} but b(y,x)={byx!r}")
                )
        try:
            g.degree_sum(x)
        except InconclusiveError as e:
            unsummable.append(Witness(x, None, str(e)))
    if witnesses:
        verdict, reason = FAIL, None
    elif unsummable:
        verdict, reason = INCONCLUSIVE, "neighbor sums not certifiable: " + ", ".join(
            vertex_label(w.where) for w in unsummable[:5]
        )
    else:
        verdict, reason = PASS, None
    return Certificate(
        condition="edge axioms (symmetry, zero diagonal, summability)",
        scope=label,
        verdict=verdict,
        witnesses=witnesses or unsummable,
        reason=reason,
        details={"checked": checked},
    )


# --------------------------------------------------------------------------
# shortest paths and balls


@dataclass
class DijkstraRun:
    """Result of a budgeted single-source Dijkstra search.

    Every entry of `dist` is settled and therefore exact (edge lengths are
    nonnegative).  `tentative` additionally holds best-known labels of
    unsettled vertices at stop time.  `frontier_min` is the smallest
    unsettled label when the search stopped (+inf if the component was
    exhausted); together with `budget_exhausted` it is the closure proof:
    if `budget_exhausted` is False, every vertex not in `dist` has true
    distance >= `frontier_min`.
    """

    source: VertexId
    dist: dict[VertexId, float]
    tentative: dict[VertexId, float]
    frontier_min: float
    expanded: int
    budget_exhausted: bool

    def closed_within(self, r: float) -> bool:
        if self.budget_exhausted:
            return False
        # frontier_min == +inf means the whole component was settled, which
        # closes the ball for every radius, including an infinite one.
        return math.isinf(self.frontier_min) or self.frontier_min > r


def dijkstra(
    g: WeightedGraph,
    source: VertexId,
    edge_length: Callable[[VertexId, VertexId], float],
    *,
    radius: float | None = None,
    targets: Iterable[VertexId] | None = None,
    budget: int | None = DEFAULT_BALL_BUDGET,
) -> DijkstraRun:
    """Budgeted Dijkstra with deterministic vertex_key tie-breaking.

    Stops when all `targets` are settled, or the smallest tentative label
    exceeds `radius`, or the heap empties, or `budget` vertices have been
    settled (in which case `budget_exhausted` is set).
    """
    if not g.has_vertex(source):
        raise UnknownVertexError(source)
    dist: dict[VertexId, float] = {}
    tentative: dict[VertexId, float] = {source: 0.0}
    heap: list[tuple[float, Any, VertexId]] = [(0.0, vertex_key(source), source)]
    target_set = set(targets) if targets is not None else None
    remaining = len(target_set) if target_set is not None else -1
    expanded = 0
    frontier_min = math.inf
    budget_exhausted = False
    while heap:
        d, _, x = heapq.heappop(heap)
        if x in dist:
            continue
        if radius is not None and d > radius:
            frontier_min = d
            break
        if budget is not None and len(dist) >= budget:
            frontier_min = d
            budget_exhausted = True
            break
        dist[x] = d
        expanded += 1
        if target_set is not None and x in target_set:
            remaining -= 1
            if remaining == 0:
                frontier_min = _heap_min_unsettled(heap, dist)
                break
        for y, _b in g.neighbors(x):
            if y in dist:
                continue
            nd = d + edge_length(x, y)
            if nd < tentative.get(y, math.inf):
                tentative[y] = nd
                heapq.heappush(heap, (nd, vertex_key(y), y))
    return DijkstraRun(
        source=source,
        dist=dist,
        tentative=tentative,
        frontier_min=frontier_min,
        expanded=expanded,
        budget_exhausted=budget_exhausted,
    )


def _heap_min_unsettled(heap, dist):
    while heap:
        d, _, x = heap[0]
        if x in dist:
            heapq.heappop(heap)
        else:
            return d
    return math.inf


@dataclass
class Ball:
    """Metric ball B(center, radius) = {y : rho(center, y) <= radius}.

    `members` is sorted by (distance, vertex_key).  `exhausted` is True only
    when the enumeration provably closed: the search either emptied the
    component or proved every remaining vertex lies strictly beyond the
    radius, without hitting the vertex budget.
    """

    center: VertexId
    radius: float
    members: list[tuple[VertexId, float]]
    exhausted: bool
    metric_name: str = ""

    def __len__(self):
        return len(self.members)

    def vertices(self) -> list[VertexId]:
        return [v for v, _ in self.members]

    def to_dict(self) -> dict:
        return {
            "center": vertex_label(self.center),
            "radius": self.radius,
            "size": len(self.members),
            "exhausted": self.exhausted,
            "metric": self.metric_name,
        }


def ball_enumerate(
    g: WeightedGraph,
    center: VertexId,
    radius: float,
    metric,
    budget: int | None = DEFAULT_BALL_BUDGET,
) -> Ball:
    """Enumerate the closed metric ball around `center` by budgeted Dijkstra.

    `metric` is either a callable edge length or an object exposing
    `edge_length(x, y)` (see metrics.PathMetric).
    """
    if radius < 0:
        raise ValueError("ball radius must be nonnegative")
    edge_length = metric if callable(metric) else metric.edge_length
    run = dijkstra(g, center, edge_length, radius=radius, budget=budget)
    members = sorted(run.dist.items(), key=lambda vd: (vd[1], vertex_key(vd[0])))
    return Ball(
        center=center,
        radius=radius,
        members=[(v, d) for v, d in members],
        exhausted=run.closed_within(radius),
        metric_name=getattr(metric, "name", "edge length"),
    )


def is_connected(g: WeightedGraph, scope: Sequence[VertexId]) -> bool:
    """Connectivity of the subgraph induced on `scope` (edges with both
    endpoints in scope).  Vacuously true for empty or singleton scopes."""
    scope_set = set(scope)
    if len(scope_set) <= 1:
        return True
    start = sorted_vertices(scope_set)[0]
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y, _b in g.neighbors(x):
            if y in scope_set and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(scope_set)
