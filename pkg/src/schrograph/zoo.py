"""Graph families, above all the triangular antitree.

The triangular family stacks rows k = 1, 2, 3, ... of k vertices each,
labelled (k, j) with 1 <= j <= k, and joins consecutive rows completely
(every row-k vertex is adjacent to every row-(k+1) vertex), with b = 1 on
every edge and vertex measure mu(k, j) = 2 sqrt(k).  Consequences used all
over the test-suite, each available here in closed form *and* recomputable
through the generic numeric machinery:

    combinatorial degree:  deg(k, j) = (k-1) + (k+1) = 2k   (also for k = 1)
    weighted degree:       Deg(k, j) = 2k / (2 sqrt(k))     = sqrt(k)
    degree path length:    sigma(row k <-> row k+1)         = (k+1)^(-1/4)
    radial distance:       rho(o, row k) = sum_{j=1}^{k-1} (j+1)^(-1/4)
    potential:             V(k, j) = -sqrt(k)

With V the operator is not semibounded from below: the normalized energy of
the indicator of two consecutive rows k, k+1 is

    -2 k (k+1) / (2 k^(3/2) + 2 (k+1)^(3/2))  ->  -oo.

Stock finite families (path, star, complete, birth-death chains) are
provided for cross-checks on graphs small enough to enumerate exhaustively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .graph_core import (
    Ball,
    FiniteGraph,
    OrbitReduction,
    UnknownVertexError,
    VertexId,
    WeightedGraph,
)
from .metrics import JumpSize, PathMetric, RootDistance, degree_path_metric, jump_size_over
from .operators import CcFunction, Potential, l2_norm_sq, quadratic_form


class TriangularGraph(WeightedGraph):
    """The triangular antitree, unbounded (rows=None) or truncated at a row.

    Truncation is Dirichlet-style: row `rows` simply has no forward
    neighbors.  Most certificates are run on the unbounded family over a
    finite scope of rows instead, which keeps boundary rows looking like
    they do in the full graph.
    """

    def __init__(self, rows: int | None = None):
        super().__init__()
        if rows is not None and rows < 1:
            raise ValueError("row truncation must be >= 1")
        self.rows = rows
        self.name = "triangular" if rows is None else f"triangular(rows<={rows})"

    def _check(self, x) -> tuple[int, int]:
        if (
            not isinstance(x, tuple)
            or len(x) != 2
            or not all(isinstance(c, int) for c in x)
        ):
            raise UnknownVertexError(x)
        k, j = x
        if k < 1 or not (1 <= j <= k) or (self.rows is not None and k > self.rows):
            raise UnknownVertexError(x)
        return k, j

    def has_vertex(self, x) -> bool:
        try:
            self._check(x)
            return True
        except UnknownVertexError:
            return False

    def mu(self, x) -> float:
        k, _ = self._check(x)
        return 2.0 * math.sqrt(k)

    def neighbors(self, x):
        k, _ = self._check(x)
        ns = [((k - 1, i), 1.0) for i in range(1, k)]
        if self.rows is None or k < self.rows:
            ns.extend(((k + 1, i), 1.0) for i in range(1, k + 2))
        return ns

    def combinatorial_degree(self, x) -> int:
        k, _ = self._check(x)
        forward = (k + 1) if (self.rows is None or k < self.rows) else 0
        return (k - 1) + forward

    def degree_sum(self, x) -> float:
        # b is identically 1; sum the ones at C speed rather than through
        # materialized neighbor tuples (rows can be large)
        n = self.combinatorial_degree(x)
        return float(np.ones(n).sum())

    def vertices(self) -> Iterator[tuple[int, int]]:
        k = 1
        while self.rows is None or k <= self.rows:
            for j in range(1, k + 1):
                yield (k, j)
            k += 1

    def is_finite(self) -> bool:
        return self.rows is not None

    def vertex_count(self):
        if self.rows is None:
            return None
        return self.rows * (self.rows + 1) // 2

    def row_vertices(self, k: int) -> list[tuple[int, int]]:
        if k < 1 or (self.rows is not None and k > self.rows):
            return []
        return [(k, j) for j in range(1, k + 1)]

    def rows_scope(self, upto: int) -> list[tuple[int, int]]:
        """All vertices of rows 1..upto (a metric ball of the degree path
        metric, since the radial distance is strictly increasing in k)."""
        last = upto if self.rows is None else min(upto, self.rows)
        return [v for k in range(1, last + 1) for v in self.row_vertices(k)]

    def orbit_reduction(self, vertices) -> OrbitReduction:
        """Permutations within each row extend to automorphisms (consecutive
        rows are completely joined), preserve b = 1 and the row-constant mu,
        and fix the root row.  Classes therefore group by row; constancy
        groups cover the touched rows and their neighbor rows in full."""
        by_row: dict[int, list] = {}
        for v in vertices:
            by_row.setdefault(v[0], []).append(v)
        classes = []
        group_rows: set[int] = set()
        for k in sorted(by_row):
            members = by_row[k]
            classes.append((min(members), len(members)))
            group_rows.add(k)
            if k > 1:
                group_rows.add(k - 1)
            if self.rows is None or k < self.rows:
                group_rows.add(k + 1)
        groups = [self.row_vertices(k) for k in sorted(group_rows)]
        return OrbitReduction(classes=classes, constancy_groups=groups)


# --------------------------------------------------------------------------
# closed forms for the triangular family

_RHO_CACHE: list[float] = [math.nan, 0.0]  # index k -> rho(o, row k); compensated sum
_RHO_COMP = [0.0]  # Kahan compensation carried alongside the cache


def triangular_rho_closed_form(k: int) -> float:
    """rho(o, x_{k,j}) = sum_{j=1}^{k-1} (j+1)^(-1/4), compensated summation."""
    if k < 1:
        raise ValueError("rows are numbered from 1")
    while len(_RHO_CACHE) <= k:
        m = len(_RHO_CACHE)  # appending rho(row m) = rho(row m-1) + m^(-1/4)
        term = float(m) ** -0.25 - _RHO_COMP[0]
        s = _RHO_CACHE[-1] + term
        _RHO_COMP[0] = (s - _RHO_CACHE[-1]) - term
        _RHO_CACHE.append(s)
    return _RHO_CACHE[k]


def triangular_sigma_closed_form(k: int) -> float:
    """Degree path length of any edge between rows k and k+1."""
    if k < 1:
        raise ValueError("rows are numbered from 1")
    return float(k + 1) ** -0.25


def triangular_deg_closed_form(k: int) -> float:
    return math.sqrt(k)


def triangular_potential() -> Potential:
    """V(x_{k,j}) = -sqrt(k); unbounded below, decaying slower than the
    squared radial distance grows."""
    return Potential(lambda x: -math.sqrt(x[0]), name="V(k,j) = -sqrt(k)")


def triangular_root_distance(g: TriangularGraph) -> RootDistance:
    """Analytic route for rho(o, .) with o = (1, 1): row sums in closed
    form.  The generic route (Dijkstra over the degree path metric) must
    agree wherever both are evaluated; tests enforce this."""

    def fn(x):
        if not g.has_vertex(x):
            raise KeyError(x)
        return triangular_rho_closed_form(x[0])

    return RootDistance(root=(1, 1), fn=fn, exact=True, provenance="closed-form radial row sums")


def triangular_edges(upto_row: int) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
    """Every edge with both endpoints in rows <= upto_row."""
    for k in range(1, upto_row):
        for j in range(1, k + 1):
            for i in range(1, k + 2):
                yield (k, j), (k + 1, i)


def triangular_jump_size(
    g: TriangularGraph, metric: PathMetric | None = None, enumerate_rows: int = 40
) -> JumpSize:
    """Jump size of the degree path metric on the triangular family.

    sigma between rows k and k+1 is (k+1)^(-1/4), strictly decreasing in k,
    so the supremum over all edges is attained on the first row pair:
    s = 2^(-1/4).  The analytic bound is cross-checked against an honest
    enumeration of the first rows.
    """
    metric = metric or degree_path_metric(g)
    last = enumerate_rows if g.rows is None else min(enumerate_rows, g.rows)
    return jump_size_over(
        metric,
        triangular_edges(last),
        scope_label=f"all edges (enumerated through row {last})",
        analytic_bound=2.0 ** -0.25,
    )


def triangular_ball(g: TriangularGraph, upto_row: int) -> Ball:
    """Rows 1..upto_row as a ball of the degree path metric around o=(1,1),
    with closed-form distances.  Exhausted: the radial distance is strictly
    increasing in the row, so everything outside lies strictly beyond the
    radius."""
    if g.rows is not None:
        upto_row = min(upto_row, g.rows)
    members = [
        ((k, j), triangular_rho_closed_form(k))
        for k in range(1, upto_row + 1)
        for j in range(1, k + 1)
    ]
    return Ball(
        center=(1, 1),
        radius=triangular_rho_closed_form(upto_row),
        members=members,
        exhausted=True,
        metric_name="degree path metric (closed-form radial distances)",
    )


def triangular_spine(n: int, column: int = 1) -> list[tuple[int, int]]:
    """A ray climbing one vertex per row: (1,1), (2,c), (3,c), ... with
    c clipped to the row width.  Consecutive rows are completely joined, so
    this is a path in the graph."""
    if n < 1:
        raise ValueError("spine length must be >= 1")
    if column < 1:
        raise ValueError("column must be >= 1")
    return [(k, min(column, k)) for k in range(1, n + 1)]


def two_row_rayleigh(g: TriangularGraph, V, k: int) -> float:
    """Normalized energy (L_V u, u)/||u||^2 of the indicator u of rows k and
    k+1, brute-forced through the quadratic form (no closed forms on this
    route)."""
    if g.rows is not None and g.rows < k + 2:
        raise ValueError(
            f"need rows >= {k + 2} so the two-row indicator sees its full neighbor shell"
        )
    u = CcFunction.indicator(g.row_vertices(k) + g.row_vertices(k + 1))
    energy = quadratic_form(g, V, u, u)
    return energy.real / l2_norm_sq(g, u)


def two_row_rayleigh_closed_form(k: int) -> float:
    return -2.0 * k * (k + 1) / (2.0 * k**1.5 + 2.0 * (k + 1) ** 1.5)


# --------------------------------------------------------------------------
# stock finite families


def path_graph(n: int, b: float = 1.0, mu: float = 1.0) -> FiniteGraph:
    if n < 1:
        raise ValueError("need n >= 1")
    ids = [str(i) for i in range(n)]
    edges = [(ids[i], ids[i + 1], b) for i in range(n - 1)]
    return FiniteGraph({v: mu for v in ids}, edges, name=f"path({n})")


def star_graph(n: int, b: float = 1.0, mu: float = 1.0) -> FiniteGraph:
    """Hub '0' joined to n-1 leaves."""
    if n < 2:
        raise ValueError("need n >= 2")
    ids = [str(i) for i in range(n)]
    edges = [(ids[0], ids[i], b) for i in range(1, n)]
    return FiniteGraph({v: mu for v in ids}, edges, name=f"star({n})")


def complete_graph(n: int, b: float = 1.0, mu: float = 1.0) -> FiniteGraph:
    if n < 2:
        raise ValueError("need n >= 2")
    ids = [str(i) for i in range(n)]
    edges = [
        (ids[i], ids[j], b) for i in range(n) for j in range(i + 1, n)
    ]
    return FiniteGraph({v: mu for v in ids}, edges, name=f"complete({n})")


def birth_death_chain(
    n: int,
    b: Iterable[float] | float = 1.0,
    mu: Iterable[float] | float = 1.0,
) -> FiniteGraph:
    """Chain 0 - 1 - ... - (n-1) with edge weights b_i on (i, i+1) and
    vertex measures mu_i; scalar arguments broadcast."""
    if n < 1:
        raise ValueError("need n >= 1")
    bs = [float(b)] * (n - 1) if isinstance(b, (int, float)) else [float(v) for v in b]
    mus = [float(mu)] * n if isinstance(mu, (int, float)) else [float(v) for v in mu]
    if len(bs) != max(n - 1, 0) or len(mus) != n:
        raise ValueError(f"need {n - 1} edge weights and {n} measures")
    ids = [str(i) for i in range(n)]
    edges = [(ids[i], ids[i + 1], bs[i]) for i in range(n - 1)]
    return FiniteGraph(dict(zip(ids, mus)), edges, name=f"birth-death({n})")


# --------------------------------------------------------------------------
# family specs (the generator JSON format)

FAMILIES = ("triangular", "path", "star", "complete", "birth-death")


@dataclass(frozen=True)
class FamilySpec:
    """Named family plus parameters, e.g. {"family": "triangular", "rows": 100}."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")

    @classmethod
    def from_json(cls, text_or_obj) -> "FamilySpec":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
        if not isinstance(obj, dict) or "family" not in obj:
            raise ValueError("generator spec JSON needs a 'family' key")
        params = {k: v for k, v in obj.items() if k != "family"}
        return cls(family=obj["family"], params=params)

    def to_json_obj(self) -> dict:
        return {"family": self.family, **self.params}


def build_family(spec: FamilySpec) -> WeightedGraph:
    p = dict(spec.params)
    try:
        if spec.family == "triangular":
            return TriangularGraph(rows=p.pop("rows", None))
        if spec.family == "path":
            return path_graph(p.pop("n"), b=p.pop("b", 1.0), mu=p.pop("mu", 1.0))
        if spec.family == "star":
            return star_graph(p.pop("n"), b=p.pop("b", 1.0), mu=p.pop("mu", 1.0))
        if spec.family == "complete":
            return complete_graph(p.pop("n"), b=p.pop("b", 1.0), mu=p.pop("mu", 1.0))
        if spec.family == "birth-death":
            return birth_death_chain(p.pop("n"), b=p.pop("b", 1.0), mu=p.pop("mu", 1.0))
    except KeyError as e:
        raise ValueError(f"family {spec.family!r} is missing parameter {e}") from None
    raise ValueError(f"unknown family {spec.family!r}")


def materialize(g: WeightedGraph, vertices=None) -> FiniteGraph:
    """Explicit FiniteGraph copy (string vertex ids) of a finite graph or a
    finite vertex selection of a family graph.  Edges with one endpoint
    outside the selection are dropped: the result is the induced subgraph.
    """
    from .certificates import vertex_label
    from .graph_core import vertex_key

    if vertices is None:
        if not g.is_finite():
            raise ValueError("cannot materialize an infinite graph without a vertex selection")
        vertices = list(g.vertices())
    vset = set(vertices)
    mu = {vertex_label(v): g.mu(v) for v in vertices}
    edges = []
    for v in vertices:
        for w, b in g.neighbors(v):
            if w in vset and vertex_key(v) < vertex_key(w):
                edges.append((vertex_label(v), vertex_label(w), b))
    return FiniteGraph(mu, edges, name=f"{g.name} (materialized)")
