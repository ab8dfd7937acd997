"""The formal Schrodinger operator and its finitely supported calculus.

    (L_V f)(x) = (1/mu(x)) * sum_y b(x,y) (f(x) - f(y)) + V(x) f(x)

acting on finitely supported complex functions (C_c).  For f in C_c the sum
is finite around every locally finite vertex, and L_V f is supported on
supp(f) together with its neighbor shell, so every inner product below is a
finite, exactly restricted sum.  Summations use math.fsum (exactly rounded),
and l2 pairings are taken in l2(X, mu):

    (f, g) = sum_x mu(x) f(x) conj(g(x)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .certificates import Certificate, Witness, PASS, FAIL, INCONCLUSIVE, vertex_label
from .graph_core import (
    FiniteGraph,
    InconclusiveError,
    VertexId,
    WeightedGraph,
    sorted_vertices,
    vertex_key,
)

REL_TOL_IDENTITY = 1e-12
ABS_FLOOR_IDENTITY = 1e-14


def _fsum_complex(terms: Iterable[complex]) -> complex:
    re, im = [], []
    for t in terms:
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


# --------------------------------------------------------------------------
# potentials and finitely supported functions


@dataclass(frozen=True)
class Potential:
    """Real vertex potential V, optionally with a split V = U - W into
    declared nonnegative parts (checked lazily at the queried vertices)."""

    fn: Callable[[VertexId], float]
    split: tuple[Callable[[VertexId], float], Callable[[VertexId], float]] | None = None
    name: str = "V"

    def __call__(self, x: VertexId) -> float:
        return self.fn(x)

    def check_split_at(self, x: VertexId, tol: float = 1e-12) -> None:
        if self.split is None:
            raise ValueError(f"potential {self.name} declares no split")
        u, w = self.split
        ux, wx = u(x), w(x)
        if ux < 0 or wx < 0:
            raise ValueError(
                f"split parts must be nonnegative: U({vertex_label(x)})={ux}, W({vertex_label(x)})={wx}"
            )
        vx = self.fn(x)
        scale = max(abs(vx), abs(ux), abs(wx), 1.0)
        if abs((ux - wx) - vx) > tol * scale:
            raise ValueError(f"split violates U - W = V at {vertex_label(x)}")

    @classmethod
    def from_table(cls, table: Mapping[VertexId, float], name: str = "V", default: float | None = None):
        data = dict(table)

        def fn(x):
            if default is not None:
                return data.get(x, default)
            try:
                return data[x]
            except KeyError:
                raise KeyError(f"potential {name} has no value at {vertex_label(x)}") from None

        return cls(fn, name=name)

    @classmethod
    def zero(cls):
        return cls(lambda x: 0.0, name="0")


def as_potential(V) -> Potential:
    if isinstance(V, Potential):
        return V
    if callable(V):
        return Potential(V)
    raise TypeError(f"cannot interpret {V!r} as a potential")


class CcFunction:
    """Finitely supported complex function, stored as {vertex: value}.

    Zero entries are pruned so that `support` is exactly the nonzero set.
    """

    __slots__ = ("_values", "_support")

    def __init__(self, values: Mapping[VertexId, complex]):
        self._values = {x: complex(v) for x, v in values.items() if complex(v) != 0}
        self._support = tuple(sorted_vertices(self._values))

    @property
    def support(self) -> tuple:
        return self._support

    def __call__(self, x: VertexId) -> complex:
        return self._values.get(x, 0j)

    def __len__(self):
        return len(self._values)

    def items(self):
        for x in self._support:
            yield x, self._values[x]

    @classmethod
    def delta(cls, x: VertexId, value: complex = 1.0) -> "CcFunction":
        return cls({x: value})

    @classmethod
    def indicator(cls, vertices: Iterable[VertexId]) -> "CcFunction":
        return cls({x: 1.0 for x in vertices})

    # JSON: {"values": {"id": [re, im], ...}}
    @classmethod
    def from_json(cls, text_or_obj, vertex_parser: Callable[[str], VertexId] = lambda s: s):
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
        try:
            raw = obj["values"]
        except (TypeError, KeyError):
            raise ValueError("function JSON needs a 'values' object") from None
        values = {}
        for key, pair in raw.items():
            if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
                raise ValueError(f"value at {key!r} must be a [re, im] pair")
            values[vertex_parser(key)] = complex(float(pair[0]), float(pair[1]))
        return cls(values)

    def to_json_obj(self) -> dict:
        return {
            "values": {
                vertex_label(x): [v.real, v.imag] for x, v in self.items()
            }
        }


def cc_add(*fs: CcFunction) -> CcFunction:
    out: dict[VertexId, complex] = {}
    for f in fs:
        for x, v in f.items():
            out[x] = out.get(x, 0j) + v
    return CcFunction(out)


def cc_scale(c: complex, f: CcFunction) -> CcFunction:
    return CcFunction({x: c * v for x, v in f.items()})


def cc_mul_fn(fn: Callable[[VertexId], float], f: CcFunction) -> CcFunction:
    """Pointwise product (fn * f) of a real function with a C_c function."""
    return CcFunction({x: fn(x) * v for x, v in f.items()})


def support_with_shell(g: WeightedGraph, *fs: CcFunction) -> list[VertexId]:
    """Union of supports and all their neighbors, sorted."""
    out = set()
    for f in fs:
        for x in f.support:
            out.add(x)
            for y, _b in g.neighbors(x):
                out.add(y)
    return sorted_vertices(out)


# --------------------------------------------------------------------------
# the operator


def apply_operator(g: WeightedGraph, V, f: CcFunction, x: VertexId) -> complex:
    """(L_V f)(x), exactly summed over the neighbors of x.

    Works at any locally finite vertex; a non-locally-finite vertex needs a
    zero declared tail bound or f(x) = 0 for the unenumerated terms to
    vanish, otherwise the value is not certifiable and InconclusiveError is
    raised.
    """
    V = as_potential(V)
    fx = f(x)
    tail = g.tail_bound(x)
    if tail is None or tail > 0:
        raise InconclusiveError(
            f"(L f)({vertex_label(x)}) not certifiable: unenumerated neighbor mass"
        )
    terms = [b * (fx - f(y)) for y, b in g.neighbors(x)]
    s = _fsum_complex(terms)
    return s / g.mu(x) + V(x) * fx


def apply_operator_cc(g: WeightedGraph, V, f: CcFunction) -> CcFunction:
    """L_V f as a C_c function on supp(f) and its neighbor shell.

    Bulk route: contributions b(x,y) f(y) are scattered from the support to
    its neighbors and exactly summed per vertex, then combined with the
    memoized degree sum; algebraically identical to `apply_operator` with
    float grouping differences at roundoff level.
    """
    V = as_potential(V)
    gathered: dict[VertexId, list[complex]] = {}
    for y, fy in f.items():
        tail = g.tail_bound(y)
        if tail is None or tail > 0:
            raise InconclusiveError(
                f"support vertex {vertex_label(y)} has unenumerated neighbor mass"
            )
        for x, b in g.neighbors(y):
            gathered.setdefault(x, []).append(b * fy)
    out: dict[VertexId, complex] = {}
    for x in set(gathered) | set(f.support):
        fx = f(x)
        s = _fsum_complex(gathered.get(x, ()))
        val = (g.weighted_degree(x) + V(x)) * fx - s / g.mu(x)
        out[x] = val
    return CcFunction(out)


def grad_squared(g: WeightedGraph, f: CcFunction, x: VertexId) -> float:
    """|grad f|^2(x) = (1/mu(x)) sum_y b(x,y) |f(x) - f(y)|^2."""
    fx = f(x)
    return (
        math.fsum(b * abs(fx - f(y)) ** 2 for y, b in g.neighbors(x)) / g.mu(x)
    )


def grad_squared_real(g: WeightedGraph, fn: Callable[[VertexId], float], x: VertexId) -> float:
    """|grad fn|^2(x) for a real vertex function (not necessarily finitely
    supported); finite whenever x is locally finite."""
    if g.tail_bound(x) is None:
        raise InconclusiveError(f"|grad|^2 at {vertex_label(x)} not certifiable")
    fx = fn(x)
    return (
        math.fsum(b * (fx - fn(y)) ** 2 for y, b in g.neighbors(x)) / g.mu(x)
    )


def inner_product(g: WeightedGraph, f: CcFunction, h: CcFunction) -> complex:
    """(f, h) = sum mu(x) f(x) conj(h(x)) over the common support."""
    if len(f) <= len(h):
        terms = [g.mu(x) * v * h(x).conjugate() for x, v in f.items()]
    else:
        terms = [g.mu(x) * f(x) * v.conjugate() for x, v in h.items()]
    return _fsum_complex(terms)


def l2_norm_sq(g: WeightedGraph, f: CcFunction) -> float:
    return math.fsum(g.mu(x) * (v.real * v.real + v.imag * v.imag) for x, v in f.items())


def l2_norm(g: WeightedGraph, f: CcFunction) -> float:
    return math.sqrt(l2_norm_sq(g, f))


def quadratic_form(g: WeightedGraph, W, f: CcFunction, u: CcFunction) -> complex:
    """(1/2) sum_{x,y} b(x,y) (f(x)-f(y)) conj(u(x)-u(y)) + sum mu W f conj u.

    The double sum runs over ordered pairs restricted to the supports and
    their neighbor shells; every omitted pair has both gradients zero, so
    the restriction is exact.
    """
    W = as_potential(W)
    region = support_with_shell(g, f, u)
    terms = []
    for x in region:
        fx, ux = f(x), u(x)
        for y, b in g.neighbors(x):
            df = fx - f(y)
            if df == 0:
                continue
            du = ux - u(y)
            if du == 0:
                continue
            terms.append(b * df * du.conjugate())
    grad_part = _fsum_complex(terms) / 2
    pot_terms = [g.mu(x) * W(x) * v * u(x).conjugate() for x, v in f.items() if u(x) != 0]
    return grad_part + _fsum_complex(pot_terms)


# --------------------------------------------------------------------------
# identity checks


def check_green(
    g: WeightedGraph,
    W,
    f: CcFunction,
    u: CcFunction,
    rel_tol: float = REL_TOL_IDENTITY,
    abs_floor: float = ABS_FLOOR_IDENTITY,
) -> Certificate:
    """Three-way Green identity for C_c functions:

        (L_W f, u) = sum mu f conj(L_W u) = quadratic_form(g, W, f, u).

    Passes iff the three routes agree pairwise within rel_tol (with an
    absolute floor near zero).
    """
    W = as_potential(W)
    lw_f = apply_operator_cc(g, W, f)
    lw_u = apply_operator_cc(g, W, u)
    a = inner_product(g, lw_f, u)
    bb = _fsum_complex(g.mu(x) * f(x) * lw_u(x).conjugate() for x, _ in f.items())
    c = quadratic_form(g, W, f, u)
    scale = max(abs(a), abs(bb), abs(c))
    tol = max(abs_floor, rel_tol * scale)
    diffs = {"pairing_vs_adjoint": abs(a - bb), "pairing_vs_form": abs(a - c), "adjoint_vs_form": abs(bb - c)}
    worst = max(diffs.values())
    ok = worst <= tol
    return Certificate(
        condition="Green identity (three-way)",
        scope=f"supp(f)={len(f)}, supp(u)={len(u)} on {g.name}",
        verdict=PASS if ok else FAIL,
        witnesses=[] if ok else [Witness("identity", worst, f"max pairwise deviation, tol={tol}")],
        details={
            "pairing": [a.real, a.imag],
            "adjoint_pairing": [bb.real, bb.imag],
            "form": [c.real, c.imag],
            "max_deviation": worst,
            "scale": scale,
            "tol": tol,
        },
    )


def check_leibniz(
    f: CcFunction,
    h: CcFunction,
    x: VertexId,
    y: VertexId,
    tol: float = ABS_FLOOR_IDENTITY,
) -> Certificate:
    """Discrete product rule for differences along a pair (x, y):

        d(fh) = f(x) dh + (df) h(y) = h(x) df + (dh) f(y),
        where d g = g(x) - g(y).
    """
    lhs = f(x) * h(x) - f(y) * h(y)
    r1 = f(x) * (h(x) - h(y)) + (f(x) - f(y)) * h(y)
    r2 = h(x) * (f(x) - f(y)) + (h(x) - h(y)) * f(y)
    worst = max(abs(lhs - r1), abs(lhs - r2))
    ok = worst <= tol
    return Certificate(
        condition="Leibniz rule for vertex differences",
        scope=f"pair ({vertex_label(x)}, {vertex_label(y)})",
        verdict=PASS if ok else FAIL,
        witnesses=[] if ok else [Witness((x, y), worst, f"deviation exceeds {tol}")],
        details={"deviation": worst},
    )


def check_fc(g: WeightedGraph, x: VertexId) -> Certificate:
    """Summability of y -> b(x,y)/mu(y) in l2(mu):

        sum_y b(x,y)^2 / mu(y) < oo.

    Always finite at a locally finite vertex; otherwise needs a declared
    tail bound for the same quantity.
    """
    tail = g.fc_tail_bound(x)
    if tail is None:
        return Certificate(
            condition="finiteness condition sum b^2/mu",
            scope=f"vertex {vertex_label(x)}",
            verdict=INCONCLUSIVE,
            reason="vertex not locally finite and no tail bound declared",
        )
    value = math.fsum(b * b / g.mu(y) for y, b in g.neighbors(x)) + tail
    finite = math.isfinite(value)
    return Certificate(
        condition="finiteness condition sum b^2/mu",
        scope=f"vertex {vertex_label(x)}",
        verdict=PASS if finite else FAIL,
        witnesses=[] if finite else [Witness(x, value, "sum diverges")],
        details={"value": value, "tail_bound": tail},
    )


# --------------------------------------------------------------------------
# randomized identity suite (used by the CLI and the acceptance gate)


def _random_finite_graph(rng: np.random.Generator, max_vertices: int = 50) -> FiniteGraph:
    n = int(rng.integers(2, max_vertices + 1))
    ids = [f"v{i}" for i in range(n)]
    mu = {v: float(rng.uniform(0.5, 2.0)) for v in ids}
    edges = []
    present: set[tuple[int, int]] = set()
    # spanning tree first so the graph is connected, then extra random edges
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.append((ids[i], ids[j], float(rng.uniform(0.5, 2.0))))
        present.add((j, i))
    extra = int(rng.integers(0, max(1, n)))
    for _ in range(extra):
        i, j = int(rng.integers(0, n)), int(rng.integers(0, n))
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        if key in present:
            continue
        present.add(key)
        edges.append((ids[i], ids[j], float(rng.uniform(0.5, 2.0))))
    return FiniteGraph(mu, edges, name=f"random graph n={n}")


def _random_cc_on(rng: np.random.Generator, vertices: list, max_support: int) -> CcFunction:
    size = int(rng.integers(1, min(max_support, len(vertices)) + 1))
    idx = rng.choice(len(vertices), size=size, replace=False)
    vals = rng.normal(size=size) + 1j * rng.normal(size=size)
    return CcFunction({vertices[int(i)]: complex(v) for i, v in zip(sorted(idx), vals)})


def green_check_suite(
    trials: int,
    seed: int,
    max_vertices: int = 50,
    rel_tol: float = REL_TOL_IDENTITY,
    abs_floor: float = ABS_FLOOR_IDENTITY,
) -> Certificate:
    """Seeded random (graph, W, f, u) instances: Green identity at each, plus
    the Leibniz rule on sampled vertex pairs.  Per-sample RNG streams are
    spawned from the master seed, so results are independent of execution
    order."""
    streams = np.random.SeedSequence(seed).spawn(trials)
    green_worst = 0.0
    leibniz_worst = 0.0
    failures: list[Witness] = []
    for i, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        g = _random_finite_graph(rng, max_vertices)
        vs = list(g.vertices())
        w_table = {v: float(rng.uniform(0.0, 3.0)) for v in vs}
        W = Potential.from_table(w_table, name="random W")
        f = _random_cc_on(rng, vs, max_support=12)
        u = _random_cc_on(rng, vs, max_support=12)
        cert = check_green(g, W, f, u, rel_tol=rel_tol, abs_floor=abs_floor)
        green_worst = max(
            green_worst,
            cert.details["max_deviation"] / max(cert.details["scale"], abs_floor / rel_tol),
        )
        if cert.verdict != PASS:
            failures.append(Witness(f"trial {i}", cert.details["max_deviation"], "green identity"))
        # Leibniz on a random pair (adjacent or not; the rule is pointwise)
        x = vs[int(rng.integers(0, len(vs)))]
        y = vs[int(rng.integers(0, len(vs)))]
        lcert = check_leibniz(f, u, x, y)
        leibniz_worst = max(leibniz_worst, lcert.details["deviation"])
        if lcert.verdict != PASS:
            failures.append(Witness(f"trial {i}", lcert.details["deviation"], "leibniz rule"))
    return Certificate(
        condition="Green + Leibniz randomized identity suite",
        scope=f"{trials} seeded trials, graphs <= {max_vertices} vertices",
        verdict=PASS if not failures else FAIL,
        witnesses=failures,
        details={
            "trials": trials,
            "seed": seed,
            "worst_green_relative": green_worst,
            "worst_leibniz_absolute": leibniz_worst,
        },
    )
