"""Comparison-criterion evaluator along vertex rays.

The criterion examines, along a ray y_1 ~ y_2 ~ ... and for parameters
delta > 0 and real lambda, the products

    a_1 = 1,
    a_n = prod_{j=1}^{n-1} [ (delta / Deg(y_j))^2
                             + (1 + (lambda + V(y_j)) / Deg(y_j))^2 ],

and asks whether sum_n a_n mu(y_n) diverges for every ray.  Divergence for
every ray gives essential self-adjointness; a single convergent ray makes
the criterion inconclusive (it proves nothing either way).  On the
triangular family's first-column spine with delta = lambda = 1 every
factor collapses to 2/j, so a_n = 2^(n-1)/(n-1)! and the series converges
under an explicit factorial bound; this module exists to reproduce that
computation and verify the bound term by term.

Numerically the products are accumulated in the log domain (a_n spans
hundreds of orders of magnitude on less friendly inputs) with compensated
summation, and the float a_n values are recovered by exponentiation.
Divergence itself is never decided numerically: the run's verdict is a
trend label over the tail of the term ratios, explicitly heuristic, with
the exact partial-sum data attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .certificates import Certificate, Witness, PASS, FAIL, INCONCLUSIVE, vertex_label
from .graph_core import VertexId, WeightedGraph
from .operators import as_potential

ADMISSIBILITY_TOL = 1e-12
STABILIZE_REL = 1e-12
STABILIZE_FROM = 60
TREND_CONVERGENT = 0.95
TREND_DIVERGENT = 1.05
TREND_WINDOW = 20

HEURISTIC_NOTE = (
    "heuristic trend label from finitely many terms; not a convergence proof"
)


@dataclass(frozen=True)
class RayPath:
    """A finite prefix of a vertex ray, with adjacency already verified."""

    vertices: tuple
    provenance: str = "user list"

    def __len__(self) -> int:
        return len(self.vertices)


def ray_path(g: WeightedGraph, vertices: Sequence[VertexId], provenance: str = "user list") -> RayPath:
    """Validate a vertex list as a ray prefix: every vertex exists and
    consecutive vertices are joined by an edge with positive weight."""
    vs = tuple(vertices)
    if not vs:
        raise ValueError("ray path must contain at least one vertex")
    for v in vs:
        if not g.has_vertex(v):
            raise ValueError(f"ray vertex {vertex_label(v)} is not in the graph")
    for a, b in zip(vs, vs[1:]):
        if not any(y == b for y, _w in g.neighbors(a)):
            raise ValueError(
                f"ray vertices {vertex_label(a)} and {vertex_label(b)} are not adjacent"
            )
    return RayPath(vs, provenance)


def lambda_admissible(g: WeightedGraph, V, lam: float, scope: Sequence[VertexId], scope_label: str = "scope") -> Certificate:
    """The criterion's spectral-parameter condition: lambda + Deg(x) + V(x)
    stays away from zero (beyond 1e-12) on the scope.

    Any single run only checks a finite scope; emptiness over the whole
    graph is an analytic fact the caller must supply separately.
    """
    V = as_potential(V)
    witnesses = []
    closest, arg = math.inf, None
    for x in scope:
        v = lam + g.weighted_degree(x) + V(x)
        if abs(v) < closest:
            closest, arg = abs(v), x
        if abs(v) <= ADMISSIBILITY_TOL and len(witnesses) < 50:
            witnesses.append(Witness(x, v, "lambda + Deg + V vanishes"))
    return Certificate(
        condition="spectral parameter admissible (lambda + Deg + V != 0)",
        scope=scope_label,
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        slack={
            "checked": len(list(scope)),
            "min_abs_value": None if math.isinf(closest) else closest,
            "argmin": vertex_label(arg) if arg is not None else None,
        },
        details={"lambda": lam, "tolerance": ADMISSIBILITY_TOL},
    )


@dataclass
class GoleniaRun:
    """One evaluation of the criterion along a ray prefix.

    `a[n-1]` is a_n (index shift: lists are 0-based, the products are
    1-based), `log_a[n-1]` its exact log-domain value, `terms[n-1]` is
    a_n mu(y_n), and `partial_sums[N-1]` is S_N.  `ratios[n-1]` is the
    term ratio a_{n+1} mu(y_{n+1}) / (a_n mu(y_n)), computed in the log
    domain so underflowing terms still yield finite ratios.
    """

    path: RayPath
    delta: float
    lam: float
    factors: tuple  # f_j for j = 1..N-1
    log_a: tuple
    a: tuple
    mu: tuple  # mu(y_n) along the path
    terms: tuple
    partial_sums: tuple
    ratios: tuple
    verdict: str
    note: str = HEURISTIC_NOTE
    admissibility: Certificate | None = None
    details: dict = field(default_factory=dict)

    @property
    def n_terms(self) -> int:
        return len(self.a)

    def to_dict(self) -> dict:
        return {
            "path": [vertex_label(v) for v in self.path.vertices[: self.n_terms]],
            "provenance": self.path.provenance,
            "delta": self.delta,
            "lambda": self.lam,
            "a": list(self.a),
            "log_a": list(self.log_a),
            "terms": list(self.terms),
            "partial_sums": list(self.partial_sums),
            "ratios": list(self.ratios),
            "verdict": self.verdict,
            "note": self.note,
            "admissibility": None if self.admissibility is None else self.admissibility.to_dict(),
            "details": self.details,
        }


def _kahan_push(total: float, comp: float, x: float) -> tuple[float, float]:
    y = x - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def run_criterion(g: WeightedGraph, V, path: RayPath, delta: float, lam: float, N: int) -> GoleniaRun:
    """Evaluate a_n, the terms a_n mu(y_n), and the partial sums S_N along
    the first N ray vertices.

    The verdict is a tail-ratio trend label (convergent-looking if the
    last ratios sit below 0.95, divergent-looking above 1.05, otherwise
    inconclusive) and is heuristic by construction.  A vanishing factor
    (possible only when delta = 0 at an inadmissible vertex) makes every
    later a_n zero and the ratios undefined; the run is then inconclusive.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if N < 1:
        raise ValueError("N must be at least 1")
    if N > len(path):
        raise ValueError(f"path has {len(path)} vertices, cannot take N = {N}")
    V = as_potential(V)
    vs = path.vertices[:N]
    adm = lambda_admissible(
        g, V, lam, vs[: max(1, N - 1)], f"ray prefix ({path.provenance})"
    )

    factors: list[float] = []
    log_a: list[float] = [0.0]  # a_1 = 1
    zero_at = None
    total, comp = 0.0, 0.0
    for j in range(1, N):
        y = vs[j - 1]
        deg = g.weighted_degree(y)
        if deg <= 0:
            raise ValueError(f"Deg({vertex_label(y)}) must be positive along the ray")
        f = (delta / deg) ** 2 + (1.0 + (lam + V(y)) / deg) ** 2
        factors.append(f)
        if f == 0.0:
            zero_at = j
            break
        total, comp = _kahan_push(total, comp, math.log(f))
        log_a.append(total)

    mu = tuple(g.mu(v) for v in vs[: len(log_a)])
    a = tuple(math.exp(la) for la in log_a)
    log_terms = [la + math.log(m) for la, m in zip(log_a, mu)]
    terms = tuple(math.exp(lt) for lt in log_terms)

    sums: list[float] = []
    s_tot, s_comp = 0.0, 0.0
    for t in terms:
        s_tot, s_comp = _kahan_push(s_tot, s_comp, t)
        sums.append(s_tot)

    ratios = tuple(
        math.exp(log_terms[i + 1] - log_terms[i]) for i in range(len(log_terms) - 1)
    )

    if zero_at is not None:
        verdict = "inconclusive"
        note = (
            f"factor at step {zero_at} is zero (delta = 0 at an inadmissible vertex); "
            "term ratios undefined beyond it"
        )
    elif len(ratios) == 0:
        verdict = "inconclusive"
        note = HEURISTIC_NOTE
    else:
        tail = ratios[-min(TREND_WINDOW, len(ratios)):]
        if max(tail) < TREND_CONVERGENT:
            verdict = "series appears convergent"
        elif min(tail) > TREND_DIVERGENT:
            verdict = "series appears divergent"
        else:
            verdict = "inconclusive"
        note = HEURISTIC_NOTE

    return GoleniaRun(
        path=RayPath(vs, path.provenance),
        delta=delta,
        lam=lam,
        factors=tuple(factors[: len(log_a) - 1 if zero_at is None else len(factors)]),
        log_a=tuple(log_a),
        a=a,
        mu=mu,
        terms=terms,
        partial_sums=tuple(sums),
        ratios=ratios,
        verdict=verdict,
        note=note,
        admissibility=adm,
        details={"requested_N": N, "computed_N": len(a), "truncated_by_zero_factor": zero_at},
    )


def spine_term_bound_log(n: int, delta: float, lam: float) -> float:
    """log of the factorial majorant 2 sqrt(n) (delta+|lambda|)^(2n-2) / (n-1)!
    for the n-th term on the triangular first-column spine, n >= 2."""
    base = delta + abs(lam)
    if base <= 0:
        raise ValueError("delta + |lambda| must be positive for the bound")
    return math.log(2.0) + 0.5 * math.log(n) + (2 * n - 2) * math.log(base) - math.lgamma(n)


def check_paper_bound(run: GoleniaRun, delta: float, lam: float, mu_path: Sequence[float]) -> Certificate:
    """Term-by-term factorial majorant plus partial-sum stabilization.

    For n >= 2 every term a_n mu(y_n) must sit under
    2 sqrt(n) (delta + |lambda|)^(2n-2) / (n-1)!, compared in the log
    domain so deep-underflow terms are still decided exactly.  The partial
    sums must stabilize in relative terms, |S_N - S_{N-1}| / S_N < 1e-12,
    for every N >= 60 that the run reaches.  A length-1 run passes
    vacuously.
    """
    n_terms = run.n_terms
    if len(mu_path) < n_terms:
        raise ValueError("mu_path shorter than the run")
    witnesses = []
    min_log_slack, arg = math.inf, None
    for n in range(2, n_terms + 1):
        log_term = run.log_a[n - 1] + math.log(mu_path[n - 1])
        log_bound = spine_term_bound_log(n, delta, lam)
        slack = log_bound - log_term
        if slack < min_log_slack:
            min_log_slack, arg = slack, n
        if slack < -1e-9 and len(witnesses) < 50:
            witnesses.append(
                Witness(f"n = {n}", slack, "term exceeds the factorial majorant (log-domain slack)")
            )

    stab_checked = 0
    worst_rel, worst_N = 0.0, None
    for N in range(max(2, STABILIZE_FROM), n_terms + 1):
        rel = abs(run.partial_sums[N - 1] - run.partial_sums[N - 2]) / run.partial_sums[N - 1]
        stab_checked += 1
        if rel > worst_rel:
            worst_rel, worst_N = rel, N
        if rel >= STABILIZE_REL and len(witnesses) < 50:
            witnesses.append(Witness(f"N = {N}", rel, "partial sums not stabilized"))

    return Certificate(
        condition="factorial majorant and partial-sum stabilization",
        scope=f"{n_terms} terms along {run.path.provenance}",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        slack={
            "min_log_slack": None if math.isinf(min_log_slack) else min_log_slack,
            "argmin_n": arg,
            "stabilization_checked": stab_checked,
            "worst_relative_step": worst_rel,
            "worst_N": worst_N,
        },
        details={
            "delta": delta,
            "lambda": lam,
            "stabilize_from": STABILIZE_FROM,
            "stabilize_rel": STABILIZE_REL,
            "final_S": run.partial_sums[-1] if run.partial_sums else None,
        },
    )
