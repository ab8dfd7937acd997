"""Potentials, finitely supported functions, the operator, and its identities."""

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schrograph.certificates import FAIL, INCONCLUSIVE, PASS
from schrograph.graph_core import FiniteGraph, InconclusiveError, WeightedGraph
from schrograph.operators import (
    CcFunction,
    Potential,
    apply_operator,
    apply_operator_cc,
    as_potential,
    cc_add,
    cc_mul_fn,
    cc_scale,
    check_fc,
    check_green,
    check_leibniz,
    grad_squared,
    grad_squared_real,
    green_check_suite,
    inner_product,
    l2_norm,
    l2_norm_sq,
    quadratic_form,
    support_with_shell,
)
from schrograph.zoo import TriangularGraph, path_graph, star_graph, triangular_potential


def small_path():
    # 0 - 1 - 2 with b = 1 and mu = 2 everywhere
    return FiniteGraph({"0": 2.0, "1": 2.0, "2": 2.0}, [("0", "1", 1.0), ("1", "2", 1.0)])


def random_graph_fn(rng, n=None):
    n = n or int(rng.integers(2, 20))
    mu = {str(i): float(rng.uniform(0.3, 3.0)) for i in range(n)}
    edges = [(str(int(rng.integers(0, i))), str(i), float(rng.uniform(0.2, 2.0))) for i in range(1, n)]
    return FiniteGraph(mu, edges)


# --------------------------------------------------------------------------
# potentials


def test_potential_from_table_and_default():
    V = Potential.from_table({"a": 1.5}, default=0.0)
    assert V("a") == 1.5
    assert V("anything") == 0.0
    V2 = Potential.from_table({"a": 1.5})
    with pytest.raises(KeyError, match="no value"):
        V2("b")


def test_potential_split_checked_lazily():
    V = Potential(lambda x: -1.0, split=(lambda x: 0.0, lambda x: 1.0))
    V.check_split_at("anywhere")  # U - W = 0 - 1 = -1 = V, both parts >= 0

    bad_sign = Potential(lambda x: 1.0, split=(lambda x: 2.0, lambda x: -1.0))
    with pytest.raises(ValueError, match="nonnegative"):
        bad_sign.check_split_at("x")

    mismatch = Potential(lambda x: 5.0, split=(lambda x: 1.0, lambda x: 1.0))
    with pytest.raises(ValueError, match="U - W = V"):
        mismatch.check_split_at("x")

    no_split = Potential.zero()
    with pytest.raises(ValueError, match="declares no split"):
        no_split.check_split_at("x")


def test_as_potential_accepts_callables_rejects_rest():
    p = as_potential(lambda x: 2.0)
    assert p("v") == 2.0
    assert as_potential(p) is p
    with pytest.raises(TypeError):
        as_potential(3.0)


def test_triangular_potential_closed_form():
    V = triangular_potential()
    for k in (1, 4, 9, 100):
        assert V((k, 1)) == -math.sqrt(k)


# --------------------------------------------------------------------------
# finitely supported functions


def test_cc_function_prunes_zeros():
    f = CcFunction({"a": 0.0, "b": 1 + 2j, "c": 0j})
    assert f.support == ("b",)
    assert len(f) == 1
    assert f("a") == 0j
    assert f("b") == 1 + 2j


def test_cc_delta_indicator():
    d = CcFunction.delta("x", 3.0)
    assert d("x") == 3.0 and len(d) == 1
    ind = CcFunction.indicator(["a", "b"])
    assert ind("a") == 1.0 and ind("b") == 1.0 and len(ind) == 2


def test_cc_json_round_trip():
    f = CcFunction({"a": 1.5 - 0.5j, "b": 2.0})
    text = json.dumps(f.to_json_obj())
    g = CcFunction.from_json(text)
    assert g.support == f.support
    for x, v in f.items():
        assert g(x) == v


def test_cc_from_json_rejects_bad_shapes():
    with pytest.raises(ValueError, match="values"):
        CcFunction.from_json("{}")
    with pytest.raises(ValueError, match="pair"):
        CcFunction.from_json({"values": {"a": [1.0]}})


def test_cc_algebra():
    f = CcFunction({"a": 1.0, "b": 2.0})
    h = CcFunction({"b": -2.0, "c": 1j})
    s = cc_add(f, h)
    assert s("a") == 1.0 and s("b") == 0j and s("c") == 1j
    assert "b" not in s.support  # cancellation pruned
    assert cc_scale(2j, f)("a") == 2j
    assert cc_mul_fn(lambda x: 3.0, f)("b") == 6.0


def test_support_with_shell():
    g = path_graph(5)
    f = CcFunction.delta("2")
    assert support_with_shell(g, f) == ["1", "2", "3"]


# --------------------------------------------------------------------------
# operator application


def test_apply_operator_explicit_values():
    g = small_path()
    f = CcFunction.delta("1")
    # (L f)(1) = (1/2)((1-0) + (1-0)) = 1;  (L f)(0) = (1/2)(0-1) = -1/2
    assert apply_operator(g, Potential.zero(), f, "1") == 1.0
    assert apply_operator(g, Potential.zero(), f, "0") == -0.5
    V = Potential.from_table({"1": 7.0}, default=0.0)
    assert apply_operator(g, V, f, "1") == 8.0


def test_apply_bulk_matches_pointwise(rng):
    for _ in range(20):
        g = random_graph_fn(rng)
        vs = list(g.vertices())
        sup = rng.choice(len(vs), size=min(5, len(vs)), replace=False)
        f = CcFunction({vs[int(i)]: complex(rng.normal(), rng.normal()) for i in sup})
        V = Potential.from_table({v: float(rng.normal()) for v in vs})
        bulk = apply_operator_cc(g, V, f)
        for x in support_with_shell(g, f):
            pt = apply_operator(g, V, f, x)
            assert abs(bulk(x) - pt) <= 1e-12 * max(abs(pt), 1.0)


def test_apply_inconclusive_without_tail_bound():
    class NoTail(WeightedGraph):
        name = "no tail"
        locally_finite = False

        def mu(self, x):
            return 1.0

        def neighbors(self, x):
            return []

        def has_vertex(self, x):
            return True

        def vertices(self):
            return iter(["x"])

    g = NoTail()
    f = CcFunction.delta("x")
    with pytest.raises(InconclusiveError):
        apply_operator(g, Potential.zero(), f, "x")
    with pytest.raises(InconclusiveError):
        apply_operator_cc(g, Potential.zero(), f)
    with pytest.raises(InconclusiveError):
        grad_squared_real(g, lambda v: 1.0, "x")


def test_grad_squared_explicit():
    g = small_path()
    f = CcFunction.delta("1")
    # |grad f|^2(1) = (1/2)(|1|^2 + |1|^2) = 1
    assert grad_squared(g, f, "1") == 1.0
    assert grad_squared(g, f, "0") == 0.5
    assert grad_squared_real(g, lambda x: float(x == "1"), "1") == 1.0


def test_inner_product_and_norms():
    g = small_path()
    d = CcFunction.delta("1", 2.0)
    assert inner_product(g, d, d) == 8.0  # mu = 2 times |2|^2
    assert l2_norm_sq(g, d) == 8.0
    assert l2_norm(g, d) == pytest.approx(math.sqrt(8.0), rel=1e-15)
    e = CcFunction.delta("0")
    assert inner_product(g, d, e) == 0j


# --------------------------------------------------------------------------
# identities


def test_green_identity_explicit_pass():
    g = star_graph(6)
    f = CcFunction({"0": 1.0, "1": -1j})
    u = CcFunction({"0": 0.5, "2": 2.0})
    cert = check_green(g, Potential.zero(), f, u)
    assert cert.verdict == PASS


def test_green_identity_random(rng):
    for _ in range(25):
        g = random_graph_fn(rng)
        vs = list(g.vertices())
        f = CcFunction({vs[0]: complex(rng.normal(), rng.normal())})
        u = CcFunction({vs[-1]: complex(rng.normal(), rng.normal()), vs[0]: 1.0})
        W = Potential.from_table({v: float(rng.uniform(0, 2)) for v in vs})
        cert = check_green(g, W, f, u)
        assert cert.verdict == PASS, cert.to_dict()


@given(st.integers(0, 2**32 - 1))
def test_green_suite_property(seed):
    cert = green_check_suite(trials=5, seed=seed, max_vertices=25)
    assert cert.verdict == PASS


def test_leibniz_rule_exact(rng):
    f = CcFunction({"a": 1.25, "b": -0.5j})
    h = CcFunction({"a": 3.0, "b": 2.0 + 1j})
    cert = check_leibniz(f, h, "a", "b")
    assert cert.verdict == PASS
    assert cert.details["deviation"] <= 1e-14


def test_quadratic_form_hermitian_and_nonnegative(rng):
    for _ in range(10):
        g = random_graph_fn(rng)
        vs = list(g.vertices())
        f = CcFunction({v: complex(rng.normal(), rng.normal()) for v in vs[:4]})
        u = CcFunction({v: complex(rng.normal(), rng.normal()) for v in vs[-4:]})
        W = Potential.from_table({v: float(rng.uniform(0, 2)) for v in vs})
        q_fu = quadratic_form(g, W, f, u)
        q_uf = quadratic_form(g, W, u, f)
        assert q_fu == pytest.approx(q_uf.conjugate(), rel=1e-10, abs=1e-12)
        q_ff = quadratic_form(g, W, f, f)
        assert abs(q_ff.imag) <= 1e-12 * max(abs(q_ff), 1.0)
        assert q_ff.real >= -1e-12


def test_quadratic_form_matches_pairing_on_delta():
    g = small_path()
    f = CcFunction.delta("1")
    lf = apply_operator_cc(g, Potential.zero(), f)
    assert quadratic_form(g, Potential.zero(), f, f) == pytest.approx(
        inner_product(g, lf, f).real, rel=1e-14
    )


# --------------------------------------------------------------------------
# finiteness condition


def test_fc_triangular_closed_form():
    g = TriangularGraph()
    for k in (2, 5, 17, 100):
        cert = check_fc(g, (k, 1))
        assert cert.verdict == PASS
        expect = (math.sqrt(k - 1) + math.sqrt(k + 1)) / 2
        assert cert.details["value"] == pytest.approx(expect, rel=1e-12)


def test_fc_root_value():
    g = TriangularGraph()
    cert = check_fc(g, (1, 1))
    assert cert.verdict == PASS
    # two neighbors in row 2, each b^2/mu = 1/(2 sqrt(2))
    assert cert.details["value"] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-14)


def test_fc_inconclusive_without_declared_tail():
    class NoTail(WeightedGraph):
        name = "no tail"
        locally_finite = False

        def mu(self, x):
            return 1.0

        def neighbors(self, x):
            return []

        def has_vertex(self, x):
            return True

        def vertices(self):
            return iter(["x"])

    cert = check_fc(NoTail(), "x")
    assert cert.verdict == INCONCLUSIVE
