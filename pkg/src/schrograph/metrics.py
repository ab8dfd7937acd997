"""Pseudo metrics adapted to a weighted graph.

A path (pseudo) metric assigns each edge a length sigma(x, y) > 0 and sets
rho(x, y) = inf over paths of the summed edge lengths.  The degree path
length

    sigma(x, y) = min(Deg(x), Deg(y)) ** (-1/2)

always produces an intrinsic metric: sum_y b(x,y) rho(x,y)^2 <= mu(x) at
every vertex.  This module computes rho by budgeted Dijkstra, certifies the
intrinsic inequality, bounds jump sizes, and checks boundedness of Deg on
metric balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .certificates import Certificate, Witness, PASS, FAIL, INCONCLUSIVE, vertex_label
from .graph_core import (
    Ball,
    DijkstraRun,
    InconclusiveError,
    VertexId,
    WeightedGraph,
    ball_enumerate,
    dijkstra,
    reduced_checklist,
    vertex_key,
)

DEFAULT_RHO_BUDGET = 500_000


def degree_path_sigma(g: WeightedGraph, x: VertexId, y: VertexId) -> float:
    """Edge length min(Deg(x)^(-1/2), Deg(y)^(-1/2)).  Degenerate degrees
    (an isolated endpoint) make the length undefined."""
    dx = g.weighted_degree(x)
    dy = g.weighted_degree(y)
    if min(dx, dy) <= 0:
        raise ValueError(
            f"degree path length undefined: Deg({vertex_label(x if dx <= dy else y)}) = {min(dx, dy)}"
        )
    return max(dx, dy) ** -0.5


@dataclass(frozen=True)
class RhoResult:
    """A distance value plus exactness: `exact` means the search settled the
    target (or provably exhausted its component); otherwise `value` is only
    a best-known upper bound, or +inf if the target was never reached."""

    value: float
    exact: bool


@dataclass(frozen=True)
class RootDistance:
    """rho(root, .) as a function, with provenance.

    `exact` distinguishes fully settled searches and closed forms from
    budget-truncated upper bounds.  `fn` raises KeyError outside the covered
    set (callers surface that as an inconclusive certificate).
    """

    root: VertexId
    fn: Callable[[VertexId], float]
    exact: bool
    provenance: str

    def __call__(self, x: VertexId) -> float:
        return self.fn(x)


class PathMetric:
    """Path pseudo metric on a weighted graph, computed by Dijkstra.

    `orbit_invariant` declares that sigma is preserved by the graph's
    automorphisms (true for the degree path length, since Deg is); only then
    may scope checks use orbit reduction.
    """

    def __init__(
        self,
        graph: WeightedGraph,
        sigma: Callable[[VertexId, VertexId], float],
        name: str = "path metric",
        orbit_invariant: bool = False,
    ):
        self.graph = graph
        self._sigma = sigma
        self.name = name
        self.orbit_invariant = orbit_invariant
        self._run_cache: dict[VertexId, DijkstraRun] = {}

    def edge_length(self, x: VertexId, y: VertexId) -> float:
        s = self._sigma(x, y)
        if s < 0 or not math.isfinite(s):
            raise ValueError(f"edge length sigma({vertex_label(x)}, {vertex_label(y)}) = {s}")
        return s

    def distances_from(
        self,
        o: VertexId,
        *,
        radius: float | None = None,
        targets: Iterable[VertexId] | None = None,
        budget: int | None = DEFAULT_RHO_BUDGET,
    ) -> DijkstraRun:
        return dijkstra(self.graph, o, self.edge_length, radius=radius, targets=targets, budget=budget)

    def rho(self, x: VertexId, y: VertexId, budget: int | None = DEFAULT_RHO_BUDGET) -> RhoResult:
        """Infimum of path lengths from x to y within a vertex budget."""
        if x == y:
            if not self.graph.has_vertex(x):
                raise KeyError(x)
            return RhoResult(0.0, True)
        cached = self._run_cache.get(x)
        if cached is not None and y in cached.dist:
            return RhoResult(cached.dist[y], True)
        run = self.distances_from(x, targets=[y], budget=budget)
        self._run_cache[x] = run
        if y in run.dist:
            return RhoResult(run.dist[y], True)
        if not run.budget_exhausted:
            # component exhausted: no path exists within the graph
            return RhoResult(math.inf, False)
        return RhoResult(run.tentative.get(y, math.inf), False)

    def root_distances(
        self,
        o: VertexId,
        needed: Sequence[VertexId],
        budget: int | None = DEFAULT_RHO_BUDGET,
    ) -> RootDistance:
        """Distances from o to all of `needed`, as a RootDistance."""
        run = self.distances_from(o, targets=needed, budget=budget)
        covered = all(v in run.dist for v in needed)
        table = run.dist

        def fn(x, _table=table):
            return _table[x]

        return RootDistance(
            root=o,
            fn=fn,
            exact=covered,
            provenance=f"dijkstra over {self.name}"
            + ("" if covered else " (budget truncated)"),
        )


def degree_path_metric(g: WeightedGraph) -> PathMetric:
    """The degree path metric, with Deg^(-1/2) memoized per vertex."""
    cache: dict[VertexId, float] = {}

    def sigma(x, y):
        sx = cache.get(x)
        if sx is None:
            sx = cache[x] = g.weighted_degree(x) ** -0.5
        sy = cache.get(y)
        if sy is None:
            sy = cache[y] = g.weighted_degree(y) ** -0.5
        return sx if sx <= sy else sy

    return PathMetric(g, sigma, name="degree path metric", orbit_invariant=True)


def shortest_rho(metric: PathMetric, x: VertexId, y: VertexId, budget: int | None = DEFAULT_RHO_BUDGET) -> RhoResult:
    return metric.rho(x, y, budget=budget)


# --------------------------------------------------------------------------
# jump size


@dataclass(frozen=True)
class JumpSize:
    """s = sup over edges of rho(x, y).

    `value` dominates rho on every enumerated edge; `certified` is True only
    when an analytic bound covering *all* edges (not just the enumerated
    ones) was supplied and is consistent with the enumeration.
    """

    value: float
    scope: str
    certified: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "scope": self.scope,
            "certified": self.certified,
            "note": self.note,
        }


def jump_size_over(
    metric: PathMetric,
    edges: Iterable[tuple[VertexId, VertexId]],
    scope_label: str = "enumerated edges",
    analytic_bound: float | None = None,
    exact_rho: bool = False,
    budget: int | None = 20_000,
    complete: bool = False,
) -> JumpSize:
    """Supremum of rho over an edge enumeration.

    By default each edge contributes its length sigma(x, y) >= rho(x, y),
    which upper-bounds the true jump size; `exact_rho` recomputes each edge
    distance by Dijkstra (slower, can only shrink the result).  Set
    `complete` when the enumeration covers every edge of the graph, which
    certifies the supremum without an analytic bound.
    """
    sup = 0.0
    arg = None
    count = 0
    for x, y in edges:
        count += 1
        if exact_rho:
            r = metric.rho(x, y, budget=budget)
            val = r.value if r.exact else metric.edge_length(x, y)
        else:
            val = metric.edge_length(x, y)
        if val > sup:
            sup, arg = val, (x, y)
    note = f"sup over {count} edges" + (f", attained near {vertex_label(arg)}" if arg else "")
    if analytic_bound is not None:
        if analytic_bound < sup * (1 - 1e-12):
            return JumpSize(
                value=sup,
                scope=scope_label,
                certified=False,
                note=note + f"; claimed analytic bound {analytic_bound} contradicted by enumeration",
            )
        return JumpSize(
            value=float(analytic_bound),
            scope=scope_label,
            certified=True,
            note=note + "; analytic bound covers all edges",
        )
    if complete:
        return JumpSize(
            value=sup,
            scope=scope_label,
            certified=True,
            note=note + "; every edge of the graph enumerated",
        )
    return JumpSize(value=sup, scope=scope_label, certified=False, note=note)


# --------------------------------------------------------------------------
# intrinsic condition


def check_intrinsic(
    g: WeightedGraph,
    metric: PathMetric,
    scope: Sequence[VertexId],
    scope_label: str = "",
    rel_tol: float = 1e-12,
    refine_with_exact_rho: bool = True,
) -> Certificate:
    """Certify sum_y b(x,y) rho(x,y)^2 <= mu(x) on the scope.

    Each edge contributes sigma(x,y)^2 >= rho(x,y)^2, so a pass here is a
    certificate for the intrinsic inequality itself.  A sigma-level
    violation is re-examined with exact per-edge rho before declaring
    failure (in trees and in the families here rho = sigma on edges, but in
    general rho can be strictly smaller).
    """
    label = scope_label or f"{len(scope)} vertices of {g.name}"
    checks, reduction = (
        reduced_checklist(g, scope)
        if metric.orbit_invariant
        else ([(v, 1) for v in scope], {"orbit_reduced": False, "fallback": "metric not orbit invariant"})
    )
    witnesses: list[Witness] = []
    min_slack, argmin = math.inf, None
    checked = 0
    inconclusive_reason = None
    for x, mult in checks:
        checked += mult
        try:
            mu_x = g.mu(x)
            total = math.fsum(b * metric.edge_length(x, y) ** 2 for y, b in g.neighbors(x))
        except InconclusiveError as e:
            inconclusive_reason = str(e)
            continue
        slack = mu_x - total
        if slack < min_slack:
            min_slack, argmin = slack, x
        if slack < -rel_tol * mu_x:
            if refine_with_exact_rho:
                total = math.fsum(
                    b * min(metric.edge_length(x, y), metric.rho(x, y).value) ** 2
                    for y, b in g.neighbors(x)
                )
                slack = mu_x - total
                if slack < min_slack:
                    min_slack, argmin = slack, x
                if slack >= -rel_tol * mu_x:
                    continue
            witnesses.append(
                Witness(x, slack, f"sum b*rho^2 = {total!r} exceeds mu = {mu_x!r}")
            )
    if witnesses:
        verdict, reason = FAIL, None
    elif inconclusive_reason:
        verdict, reason = INCONCLUSIVE, inconclusive_reason
    else:
        verdict, reason = PASS, None
    return Certificate(
        condition="intrinsic metric inequality",
        scope=label,
        verdict=verdict,
        witnesses=witnesses,
        slack={
            "checked": checked,
            "min_slack": None if math.isinf(min_slack) else min_slack,
            "argmin": vertex_label(argmin) if argmin is not None else None,
            **reduction,
        },
        reason=reason,
        details={"metric": metric.name, "rel_tol": rel_tol},
    )


# --------------------------------------------------------------------------
# bounded degree on balls


def check_b_star_ball(g: WeightedGraph, ball: Ball) -> Certificate:
    """Deg bounded on an already-enumerated ball.

    A non-exhausted enumeration cannot certify anything about the full ball
    and comes back inconclusive with the partial supremum recorded.
    """
    scope = f"ball(center={vertex_label(ball.center)}, r={ball.radius}) [{len(ball)} vertices]"
    members = ball.vertices()
    checks, reduction = reduced_checklist(g, members)
    sup, arg = -math.inf, None
    try:
        for x, _mult in checks:
            d = g.weighted_degree(x)
            if d > sup:
                sup, arg = d, x
    except InconclusiveError as e:
        return Certificate(
            condition="Deg bounded on ball",
            scope=scope,
            verdict=INCONCLUSIVE,
            reason=str(e),
        )
    details = {
        "sup_deg": sup,
        "argmax": vertex_label(arg) if arg is not None else None,
        **reduction,
    }
    if not ball.exhausted:
        return Certificate(
            condition="Deg bounded on ball",
            scope=scope,
            verdict=INCONCLUSIVE,
            reason="ball enumeration hit its budget before closing; supremum is partial",
            details=details,
        )
    return Certificate(
        condition="Deg bounded on ball",
        scope=scope,
        verdict=PASS,
        details=details,
    )


def check_b_star(
    g: WeightedGraph,
    metric: PathMetric,
    center: VertexId,
    radius: float,
    budget: int | None = None,
) -> Certificate:
    ball = ball_enumerate(g, center, radius, metric, budget=budget or 200_000)
    return check_b_star_ball(g, ball)
