"""Graph families: the triangular antitree closed forms, stock graphs,
generator specs, and the two-row Rayleigh quotient."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schrograph.certificates import PASS
from schrograph.graph_core import (
    UnknownVertexError,
    ball_enumerate,
    check_edge_axioms,
    reduced_checklist,
)
from schrograph.metrics import check_intrinsic, degree_path_metric
from schrograph.zoo import (
    FAMILIES,
    FamilySpec,
    TriangularGraph,
    birth_death_chain,
    build_family,
    complete_graph,
    materialize,
    path_graph,
    star_graph,
    triangular_ball,
    triangular_deg_closed_form,
    triangular_edges,
    triangular_jump_size,
    triangular_potential,
    triangular_rho_closed_form,
    triangular_root_distance,
    triangular_sigma_closed_form,
    triangular_spine,
    two_row_rayleigh,
    two_row_rayleigh_closed_form,
)


# --------------------------------------------------------------------------
# triangular structure


def test_vertex_validation():
    g = TriangularGraph()
    assert g.has_vertex((1, 1))
    assert g.has_vertex((5, 5))
    for bad in [(0, 1), (3, 4), (3, 0), "x", (1,), (1.0, 1)]:
        assert not g.has_vertex(bad)
    with pytest.raises(UnknownVertexError):
        g.mu((2, 3))


def test_truncated_vertex_set():
    g = TriangularGraph(rows=3)
    assert g.vertex_count() == 6
    assert not g.has_vertex((4, 1))
    assert list(g.vertices()) == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    with pytest.raises(ValueError):
        TriangularGraph(rows=0)


def test_neighbors_root():
    g = TriangularGraph()
    assert [y for y, _ in g.neighbors((1, 1))] == [(2, 1), (2, 2)]


def test_neighbors_row_three():
    g = TriangularGraph()
    ns = [y for y, _ in g.neighbors((3, 2))]
    assert ns == [(2, 1), (2, 2), (4, 1), (4, 2), (4, 3), (4, 4)]
    assert g.combinatorial_degree((3, 2)) == 6
    assert all(b == 1.0 for _, b in g.neighbors((3, 2)))


def test_truncation_removes_forward_neighbors():
    g = TriangularGraph(rows=3)
    ns = [y for y, _ in g.neighbors((3, 2))]
    assert ns == [(2, 1), (2, 2)]
    assert g.combinatorial_degree((3, 2)) == 2


def test_mu_and_degree_closed_forms():
    g = TriangularGraph()
    for k in (1, 2, 7, 50, 1000):
        x = (k, 1)
        assert g.mu(x) == 2.0 * math.sqrt(k)
        assert g.combinatorial_degree(x) == 2 * k
        assert g.weighted_degree(x) == pytest.approx(math.sqrt(k), rel=1e-14)
        assert triangular_deg_closed_form(k) == pytest.approx(math.sqrt(k), rel=1e-15)


def test_edge_axioms_on_triangular_scope():
    g = TriangularGraph()
    cert = check_edge_axioms(g, g.rows_scope(8))
    assert cert.verdict == PASS


def test_potential_cancels_degree():
    g = TriangularGraph()
    V = triangular_potential()
    for k in (1, 3, 10, 250):
        assert g.weighted_degree((k, 1)) + V((k, 1)) == pytest.approx(0.0, abs=1e-12)


# --------------------------------------------------------------------------
# closed forms


def test_rho_closed_form_first_values():
    assert triangular_rho_closed_form(1) == 0.0
    assert triangular_rho_closed_form(2) == pytest.approx(2.0 ** -0.25, rel=1e-15)
    expect3 = 2.0 ** -0.25 + 3.0 ** -0.25
    assert triangular_rho_closed_form(3) == pytest.approx(expect3, rel=1e-15)


def test_rho_closed_form_matches_direct_sum():
    direct = math.fsum((j + 1) ** -0.25 for j in range(1, 200))
    assert triangular_rho_closed_form(200) == pytest.approx(direct, rel=1e-14)


def test_rho_closed_form_cache_consistency():
    # query out of order; the memo must not depend on call order
    a = triangular_rho_closed_form(50)
    b = triangular_rho_closed_form(10)
    c = triangular_rho_closed_form(50)
    assert a == c
    assert b < a


def test_sigma_closed_form():
    for k in (1, 2, 10, 99):
        assert triangular_sigma_closed_form(k) == pytest.approx((k + 1) ** -0.25, rel=1e-15)


def test_rho_closed_form_matches_dijkstra():
    g = TriangularGraph()
    m = degree_path_metric(g)
    for k in (2, 5, 12, 30):
        run = m.rho((1, 1), (k, max(1, k // 2)))
        assert run.exact
        assert run.value == pytest.approx(triangular_rho_closed_form(k), rel=1e-12)


def test_root_distance_closed_form_object():
    g = TriangularGraph()
    rd = triangular_root_distance(g)
    assert rd.exact
    assert rd((7, 3)) == triangular_rho_closed_form(7)
    with pytest.raises(KeyError):
        rd((0, 0))


# --------------------------------------------------------------------------
# orbit reduction


def test_orbit_reduction_groups_by_row():
    g = TriangularGraph()
    scope = g.rows_scope(6)
    checks, info = reduced_checklist(g, scope)
    assert info["orbit_reduced"]
    assert len(checks) == 6  # one representative per row
    assert sum(m for _, m in checks) == len(scope)


def test_orbit_reduction_disabled_by_nonconstant_function():
    g = TriangularGraph()
    scope = g.rows_scope(5)
    lopsided = lambda x: float(x[1])  # depends on the in-row index
    checks, info = reduced_checklist(g, scope, constant_fns=(lopsided,))
    assert not info["orbit_reduced"]
    assert len(checks) == len(scope)


def test_orbit_reduction_allows_row_constant_function():
    g = TriangularGraph()
    scope = g.rows_scope(5)
    radial = lambda x: float(x[0]) ** 2
    checks, info = reduced_checklist(g, scope, constant_fns=(radial,))
    assert info["orbit_reduced"]


# --------------------------------------------------------------------------
# balls, edges, spine


def test_triangular_ball_matches_dijkstra_ball():
    g = TriangularGraph()
    m = degree_path_metric(g)
    fast = triangular_ball(g, 7)
    slow = ball_enumerate(g, (1, 1), fast.radius + 1e-12, m)
    assert fast.exhausted and slow.exhausted
    assert set(fast.vertices()) == set(slow.vertices())
    fast_d = dict(fast.members)
    for v, d in slow.members:
        assert d == pytest.approx(fast_d[v], rel=1e-12, abs=1e-12)


def test_triangular_edges_count():
    # rows 1..K: row k joins completely to row k+1, k(k+1) edges each
    edges = list(triangular_edges(5))
    assert len(edges) == sum(k * (k + 1) for k in range(1, 5))
    assert all(y[0] == x[0] + 1 for x, y in edges)


def test_spine_shape_and_clipping():
    assert triangular_spine(4) == [(1, 1), (2, 1), (3, 1), (4, 1)]
    assert triangular_spine(4, column=3) == [(1, 1), (2, 2), (3, 3), (4, 3)]
    with pytest.raises(ValueError):
        triangular_spine(0)


def test_jump_size_certified():
    js = triangular_jump_size(TriangularGraph())
    assert js.certified and js.value == pytest.approx(2.0 ** -0.25, rel=1e-15)


def test_intrinsic_on_triangular_scope():
    g = TriangularGraph()
    cert = check_intrinsic(g, degree_path_metric(g), g.rows_scope(60))
    assert cert.verdict == PASS


# --------------------------------------------------------------------------
# two-row Rayleigh quotient


def test_two_row_rayleigh_matches_closed_form():
    g = TriangularGraph()
    V = triangular_potential()
    for k in (1, 2, 5, 10, 29):
        brute = two_row_rayleigh(g, V, k)
        assert brute == pytest.approx(two_row_rayleigh_closed_form(k), rel=1e-12)


def test_two_row_rayleigh_reference_values():
    assert two_row_rayleigh_closed_form(100) == pytest.approx(-5.0123, abs=5e-4)
    assert two_row_rayleigh_closed_form(29) == pytest.approx(-2.715, abs=5e-3)


def test_two_row_rayleigh_strictly_decreasing():
    vals = [two_row_rayleigh_closed_form(k) for k in range(1, 200)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_two_row_rayleigh_needs_room_on_truncated_graph():
    g = TriangularGraph(rows=5)
    V = triangular_potential()
    with pytest.raises(ValueError, match="rows >="):
        two_row_rayleigh(g, V, 4)
    assert two_row_rayleigh(g, V, 3) == pytest.approx(
        two_row_rayleigh_closed_form(3), rel=1e-12
    )


# --------------------------------------------------------------------------
# stock families and generator specs


def test_stock_family_shapes():
    p = path_graph(5)
    assert p.vertex_count() == 5 and p.edge_count() == 4
    s = star_graph(5)
    assert s.edge_count() == 4
    assert len(s.neighbors("0")) == 4
    c = complete_graph(5)
    assert c.edge_count() == 10
    bd = birth_death_chain(4, b=[1.0, 2.0, 3.0], mu=[1.0, 2.0, 3.0, 4.0])
    assert bd.b("1", "2") == 2.0
    assert bd.mu("3") == 4.0
    with pytest.raises(ValueError, match="edge weights"):
        birth_death_chain(4, b=[1.0])


def test_family_spec_round_trip():
    spec = FamilySpec("triangular", {"rows": 12})
    clone = FamilySpec.from_json(json.dumps(spec.to_json_obj()))
    assert clone == spec
    g = build_family(clone)
    assert isinstance(g, TriangularGraph) and g.rows == 12


def test_family_spec_rejects_unknown():
    with pytest.raises(ValueError, match="unknown family"):
        FamilySpec("moebius")
    with pytest.raises(ValueError, match="'family'"):
        FamilySpec.from_json("{}")


def test_build_family_missing_parameter():
    with pytest.raises(ValueError, match="missing parameter"):
        build_family(FamilySpec("path"))


def test_all_families_buildable():
    params = {"triangular": {"rows": 4}, "path": {"n": 4}, "star": {"n": 4}, "complete": {"n": 4}, "birth-death": {"n": 4}}
    for fam in FAMILIES:
        g = build_family(FamilySpec(fam, params[fam]))
        assert g.vertex_count() >= 4 or fam == "triangular"


def test_materialize_matches_family():
    g = TriangularGraph()
    fg = materialize(g, g.rows_scope(4))
    assert fg.vertex_count() == 10
    # weights and measures carried over exactly, edges induced
    assert fg.mu("2,1") == g.mu((2, 1))
    assert fg.b("2,1", "3,3") == 1.0
    assert fg.b("1,1", "3,1") == 0.0
    cert = check_edge_axioms(fg, list(fg.vertices()))
    assert cert.verdict == PASS


def test_materialize_finite_graph_identity():
    g = star_graph(4)
    fg = materialize(g)
    assert fg.vertex_count() == g.vertex_count()
    assert fg.edge_count() == g.edge_count()
