"""Degree path metric, intrinsic certification, jump size, bounded-degree balls."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schrograph.certificates import FAIL, INCONCLUSIVE, PASS
from schrograph.graph_core import FiniteGraph, ball_enumerate
from schrograph.metrics import (
    PathMetric,
    check_b_star,
    check_b_star_ball,
    check_intrinsic,
    degree_path_metric,
    degree_path_sigma,
    jump_size_over,
)
from schrograph.zoo import (
    TriangularGraph,
    complete_graph,
    path_graph,
    star_graph,
    triangular_edges,
    triangular_jump_size,
    triangular_rho_closed_form,
    triangular_sigma_closed_form,
)


def random_graph(rng, n):
    mu = {str(i): float(rng.uniform(0.2, 5.0)) for i in range(n)}
    edges = [(str(i - 1), str(i), float(rng.uniform(0.1, 2.0))) for i in range(1, n)]
    for _ in range(n // 2):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        if j > i + 1:
            edges.append((str(i), str(j), float(rng.uniform(0.1, 2.0))))
    try:
        return FiniteGraph(mu, edges)
    except ValueError:  # duplicate extra edge
        return FiniteGraph(mu, edges[: n - 1])


# --------------------------------------------------------------------------
# sigma


def test_sigma_formula_explicit():
    # 0 - 1 - 2, b = 1, mu = 2: Deg(0) = 1/2, Deg(1) = 1, so the edge
    # length is the smaller reciprocal root, min(sqrt(2), 1) = 1
    g = FiniteGraph({"0": 2.0, "1": 2.0, "2": 2.0}, [("0", "1", 1.0), ("1", "2", 1.0)])
    assert degree_path_sigma(g, "0", "1") == 1.0


def test_sigma_path_end_edge():
    # b = 1, mu = 1: Deg = 1 at the end, 2 inside; min(1, 2^-1/2) = 2^-1/2
    g = path_graph(4)
    assert degree_path_sigma(g, "0", "1") == pytest.approx(2.0 ** -0.5, rel=1e-15)


def test_sigma_regular_degree_four():
    # complete graph on 5 vertices, b = mu = 1: Deg = 4 everywhere -> 0.5
    g = complete_graph(5)
    assert degree_path_sigma(g, "0", "1") == 0.5


def test_sigma_matches_metric_closure(rng):
    g = random_graph(rng, 15)
    m = degree_path_metric(g)
    for u, v, _b in g.edges():
        assert m.edge_length(u, v) == degree_path_sigma(g, u, v)


def test_sigma_symmetric(rng):
    g = random_graph(rng, 12)
    vs = list(g.vertices())
    for _ in range(30):
        x, y = rng.choice(len(vs), size=2, replace=False)
        assert degree_path_sigma(g, vs[x], vs[y]) == degree_path_sigma(g, vs[y], vs[x])


def test_sigma_isolated_vertex_rejected():
    g = FiniteGraph({"a": 1.0, "b": 1.0, "c": 1.0}, [("a", "b", 1.0)])
    with pytest.raises(ValueError, match="undefined"):
        degree_path_sigma(g, "a", "c")


def test_triangular_sigma_closed_form():
    g = TriangularGraph()
    for k in range(1, 30):
        direct = degree_path_sigma(g, (k, 1), (k + 1, 1))
        assert direct == pytest.approx((k + 1) ** -0.25, rel=1e-14)
        assert triangular_sigma_closed_form(k) == pytest.approx(direct, rel=1e-14)


# --------------------------------------------------------------------------
# rho


def test_rho_identity_and_symmetry(rng):
    g = random_graph(rng, 15)
    m = degree_path_metric(g)
    vs = list(g.vertices())
    assert m.rho(vs[0], vs[0]).value == 0.0
    for _ in range(10):
        i, j = rng.choice(len(vs), size=2, replace=False)
        # fresh metrics so per-source caches cannot share state
        f = degree_path_metric(g).rho(vs[i], vs[j])
        b = degree_path_metric(g).rho(vs[j], vs[i])
        assert f.exact and b.exact
        assert f.value == pytest.approx(b.value, rel=1e-12)


def test_rho_triangle_inequality(rng):
    g = random_graph(rng, 15)
    m = degree_path_metric(g)
    vs = list(g.vertices())
    for _ in range(20):
        i, j, k = rng.choice(len(vs), size=3, replace=False)
        dij = m.rho(vs[i], vs[j]).value
        djk = m.rho(vs[j], vs[k]).value
        dik = m.rho(vs[i], vs[k]).value
        assert dik <= dij + djk + 1e-12 * (dij + djk + 1.0)


def test_rho_edge_bound(rng):
    g = random_graph(rng, 15)
    m = degree_path_metric(g)
    for u, v, _b in g.edges():
        assert m.rho(u, v).value <= m.edge_length(u, v) + 1e-15


def test_rho_disconnected_is_inconclusive_infinity():
    g = FiniteGraph({"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0}, [("a", "b", 1.0), ("c", "d", 1.0)])
    m = degree_path_metric(g)
    r = m.rho("a", "c")
    assert math.isinf(r.value)
    assert not r.exact


def test_rho_budget_truncation_gives_inexact_bound():
    g = path_graph(200)
    m = degree_path_metric(g)
    r = m.rho("0", "199", budget=10)
    assert not r.exact


def test_root_distances_closed_form_triangular():
    g = TriangularGraph()
    m = degree_path_metric(g)
    scope = g.rows_scope(40)
    rd = m.root_distances((1, 1), scope)
    assert rd.exact
    for k in range(1, 41):
        expect = triangular_rho_closed_form(k)
        for j in range(1, k + 1):
            assert rd((k, j)) == pytest.approx(expect, rel=1e-10)


def test_root_distances_raises_outside_coverage():
    g = path_graph(5)
    m = degree_path_metric(g)
    rd = m.root_distances("0", ["0", "1"])
    with pytest.raises(KeyError):
        rd("4")


def test_rho_rejects_unknown_vertex():
    g = path_graph(3)
    m = degree_path_metric(g)
    with pytest.raises(KeyError):
        m.rho("zzz", "zzz")


# --------------------------------------------------------------------------
# jump size


def test_jump_size_uncertified_without_bound():
    g = TriangularGraph()
    m = degree_path_metric(g)
    js = jump_size_over(m, triangular_edges(10))
    assert not js.certified
    assert js.value == pytest.approx(2.0 ** -0.25, rel=1e-14)


def test_jump_size_certified_with_analytic_bound():
    g = TriangularGraph()
    m = degree_path_metric(g)
    js = jump_size_over(m, triangular_edges(10), analytic_bound=2.0 ** -0.25)
    assert js.certified
    assert js.value == pytest.approx(2.0 ** -0.25, rel=1e-14)


def test_jump_size_contradicted_bound_not_certified():
    g = TriangularGraph()
    m = degree_path_metric(g)
    js = jump_size_over(m, triangular_edges(10), analytic_bound=0.1)
    assert not js.certified
    assert "contradicted" in js.note


def test_jump_size_complete_enumeration_certifies():
    g = path_graph(6)
    m = degree_path_metric(g)
    js = jump_size_over(m, [(u, v) for u, v, _ in g.edges()], complete=True)
    assert js.certified
    assert "every edge" in js.note


def test_triangular_jump_size_analytic():
    js = triangular_jump_size(TriangularGraph())
    assert js.certified
    assert js.value == pytest.approx(2.0 ** -0.25, rel=1e-15)


def test_jump_size_exact_rho_never_larger(rng):
    g = random_graph(rng, 20)
    m = degree_path_metric(g)
    edges = [(u, v) for u, v, _ in g.edges()]
    loose = jump_size_over(m, edges)
    tight = jump_size_over(degree_path_metric(g), edges, exact_rho=True)
    assert tight.value <= loose.value + 1e-15


# --------------------------------------------------------------------------
# intrinsic certification


def test_degree_path_metric_always_intrinsic_on_random_graphs(rng):
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(3, 25)))
        m = degree_path_metric(g)
        cert = check_intrinsic(g, m, list(g.vertices()))
        assert cert.verdict == PASS, cert.to_dict()
        # exact equality cases can land an ulp below zero in floats
        assert cert.slack["min_slack"] >= -1e-11


@given(st.integers(0, 2**32 - 1))
def test_intrinsic_property_over_random_graphs(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(3, 20)))
    cert = check_intrinsic(g, degree_path_metric(g), list(g.vertices()))
    assert cert.verdict == PASS


def test_intrinsic_stock_families():
    for g in (path_graph(30), star_graph(12), complete_graph(8)):
        cert = check_intrinsic(g, degree_path_metric(g), list(g.vertices()))
        assert cert.verdict == PASS, g.name


def test_inflated_sigma_fails_with_witness():
    g = star_graph(6)
    base = degree_path_metric(g)
    inflated = PathMetric(g, lambda x, y: 10.0 * base.edge_length(x, y), name="inflated")
    cert = check_intrinsic(g, inflated, list(g.vertices()), refine_with_exact_rho=False)
    assert cert.verdict == FAIL
    assert cert.witnesses
    assert cert.witnesses[0].value < 0  # negative slack at the witness


def test_intrinsic_orbit_reduction_on_triangular():
    g = TriangularGraph()
    m = degree_path_metric(g)
    scope = g.rows_scope(50)
    cert = check_intrinsic(g, m, scope, scope_label="rows <= 50")
    assert cert.verdict == PASS
    assert cert.slack["orbit_reduced"]
    assert cert.slack["checked"] == len(scope)


# --------------------------------------------------------------------------
# bounded degree on balls


def test_b_star_pass_on_exhausted_ball():
    g = path_graph(10)
    m = degree_path_metric(g)
    cert = check_b_star(g, m, "0", 100.0)
    assert cert.verdict == PASS
    assert cert.details["sup_deg"] > 0


def test_b_star_inconclusive_on_budget_truncated_ball():
    g = TriangularGraph()
    m = degree_path_metric(g)
    ball = ball_enumerate(g, (1, 1), 50.0, m, budget=30)
    assert not ball.exhausted
    cert = check_b_star_ball(g, ball)
    assert cert.verdict == INCONCLUSIVE
    assert "budget" in cert.reason


def test_b_star_triangular_ball_sup_is_boundary_degree():
    g = TriangularGraph()
    m = degree_path_metric(g)
    r = triangular_rho_closed_form(6)
    ball = ball_enumerate(g, (1, 1), r, m)
    assert ball.exhausted
    cert = check_b_star_ball(g, ball)
    assert cert.verdict == PASS
    assert cert.details["sup_deg"] == pytest.approx(math.sqrt(6.0), abs=1e-12)
