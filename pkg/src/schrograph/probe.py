"""Heuristic spectral diagnostics: truncated matrices, bottom eigenvalues,
and a radial reduction of the triangular family with an l2-growth probe.

Nothing in this module proves or refutes essential self-adjointness; that
is not finitely decidable.  Every report carries the banner below.  The
certificates produced elsewhere in the package never depend on probe
output.

Matrix conventions: the operator acts on l2(X, mu), which is a weighted
space, so the truncated matrix is the unitarily conjugated form on plain
l2: H = D^(1/2) L D^(-1/2) with D = diag(mu).  Concretely

    H[x, x] = Deg(x) + V(x)          (full degree, Dirichlet truncation)
    H[x, y] = -b(x, y) / sqrt(mu(x) mu(y))

restricted to a metric ball.  H acts on w = sqrt(mu) f and satisfies
(H w)(x) = sqrt(mu(x)) (L_V f)(x) whenever f and its neighbor shell stay
inside the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .certificates import vertex_label
from .graph_core import Ball, WeightedGraph
from .operators import CcFunction, as_potential
from .zoo import TriangularGraph

HEURISTIC_BANNER = "HEURISTIC: not a self-adjointness proof"

MAX_EIGEN_SIZE = 20_000
DENSE_CUTOFF = 600
RESIDUAL_TOL = 1e-8


@dataclass
class TruncatedOperator:
    """Dirichlet finite section of the symmetrized operator on a ball.

    Rows and columns outside the ball are dropped; the diagonal keeps the
    full Deg(x) + V(x), including contributions from edges that leave the
    ball.  The sparse matrix is exactly symmetric by construction.
    """

    ball: Ball
    order: tuple  # ball members, matrix index order
    index: dict
    matrix: sp.csr_matrix
    potential_name: str = "V"
    banner: str = HEURISTIC_BANNER

    @property
    def n(self) -> int:
        return len(self.order)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply_vector(self, w: np.ndarray) -> np.ndarray:
        return self.matrix @ w

    def conjugated_apply(self, f: CcFunction, g: WeightedGraph) -> dict:
        """Matrix application of sqrt(mu) f, mapped back to vertex space;
        equals L_V f inside the ball when supp f + shell stays inside."""
        w = np.zeros(self.n, dtype=complex)
        for v, val in f.items():
            w[self.index[v]] = val * math.sqrt(g.mu(v))
        out = self.matrix @ w
        return {
            v: out[i] / math.sqrt(g.mu(v)) for v, i in self.index.items() if out[i] != 0
        }


def truncate(g: WeightedGraph, V, ball: Ball) -> TruncatedOperator:
    """Assemble the symmetrized Dirichlet truncation on an exhausted ball."""
    if not ball.exhausted:
        raise ValueError(
            "ball is not certified complete (budget exhausted); refusing to truncate"
        )
    V = as_potential(V)
    order = tuple(v for v, _d in ball.members)
    index = {v: i for i, v in enumerate(order)}
    diag = np.array([g.weighted_degree(v) + V(v) for v in order])

    rows, cols, vals = [], [], []
    for v in order:
        i = index[v]
        for y, b in g.neighbors(v):
            j = index.get(y)
            if j is None or j <= i:
                continue
            w = -b / math.sqrt(g.mu(v) * g.mu(y))
            rows.extend((i, j))
            cols.extend((j, i))
            vals.extend((w, w))
    n = len(order)
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    mat = mat + sp.diags(diag, format="csr")
    return TruncatedOperator(ball, order, index, mat, potential_name=V.name)


def _gershgorin_lower(mat: sp.csr_matrix) -> float:
    diag = mat.diagonal()
    abs_rows = np.asarray(abs(mat).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.min(diag - abs_rows))


def _check_residuals(mat, vals, vecs) -> float:
    worst = 0.0
    for lam, v in zip(vals, vecs.T):
        r = np.linalg.norm(mat @ v - lam * v) / np.linalg.norm(v)
        worst = max(worst, r)
    return worst


def eigen_bottom(t: TruncatedOperator, m: int = 1) -> list[float]:
    """The m smallest eigenvalues of the truncation, ascending, with an
    explicit residual check (||Av - lambda v|| <= 1e-8 ||v||).

    Small matrices go through a dense symmetric solver; larger ones use
    shift-invert Lanczos anchored below the Gershgorin lower bound, with a
    dense fallback if the iteration fails to converge or the residuals
    come back poor.
    """
    n = t.n
    if m < 1:
        raise ValueError("m must be positive")
    if m > n:
        raise ValueError(f"asked for {m} eigenvalues of a {n}-dimensional truncation")
    if n > MAX_EIGEN_SIZE:
        raise ValueError(f"truncation size {n} exceeds the supported limit {MAX_EIGEN_SIZE}")

    def dense() -> list[float]:
        vals, vecs = scipy.linalg.eigh(t.to_dense(), subset_by_index=[0, m - 1])
        worst = _check_residuals(t.matrix, vals, vecs)
        if worst > RESIDUAL_TOL:
            raise RuntimeError(f"dense eigensolver residual {worst} exceeds {RESIDUAL_TOL}")
        return [float(v) for v in vals]

    if n <= DENSE_CUTOFF or m >= n - 1:
        return dense()

    sigma = _gershgorin_lower(t.matrix) - 1.0
    v0 = np.full(n, 1.0 / math.sqrt(n))
    try:
        vals, vecs = eigsh(t.matrix.tocsc(), k=m, sigma=sigma, which="LM", v0=v0)
    except (ArpackNoConvergence, ArpackError, RuntimeError):
        if n <= 5000:
            return dense()
        raise RuntimeError(
            f"shift-invert eigensolver failed to converge on size {n}"
        ) from None
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    worst = _check_residuals(t.matrix, vals, vecs)
    if worst > RESIDUAL_TOL:
        if n <= 5000:
            return dense()
        raise RuntimeError(f"eigensolver residual {worst} exceeds {RESIDUAL_TOL}")
    return [float(v) for v in vals]


# --------------------------------------------------------------------------
# radial reduction of the triangular family


@dataclass
class RadialOperator:
    """Action of the operator on row-constant profiles of the triangular
    family, rows 1..K with a Dirichlet condition u(K+1) = 0.

    The row measure is m(k) = k * mu(k) = 2 k^(3/2), and the action on a
    profile u is

        (R u)(k) = [ (k-1)(u(k) - u(k-1)) + (k+1)(u(k) - u(k+1)) ]
                     / (2 sqrt(k))  +  V(k) u(k).

    The k-1 backward coefficient vanishes at k = 1, so no boundary rule is
    needed at the root; the forward term at k = K keeps the full (k+1)
    weight of the unbounded family, matching the Dirichlet truncation.
    """

    rows: int
    v_row: np.ndarray  # V on row k at index k-1
    banner: str = HEURISTIC_BANNER

    def measure(self, k: int) -> float:
        return 2.0 * k**1.5

    def measures(self) -> np.ndarray:
        k = np.arange(1, self.rows + 1, dtype=float)
        return 2.0 * k**1.5

    def apply(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        if u.shape != (self.rows,):
            raise ValueError(f"profile must have length {self.rows}")
        k = np.arange(1, self.rows + 1, dtype=float)
        padded = np.concatenate(([0.0], u, [0.0]))
        back = padded[:-2]  # u(k-1), dummy 0 at k=1 (multiplied by k-1 = 0)
        fwd = padded[2:]  # u(k+1), Dirichlet 0 at k=K
        return ((k - 1) * (u - back) + (k + 1) * (u - fwd)) / (2.0 * np.sqrt(k)) + self.v_row * u

    def lift(self, u: np.ndarray) -> CcFunction:
        """Row-constant finitely supported function with value u(k) on
        every row-k vertex."""
        u = np.asarray(u)
        if u.shape != (self.rows,):
            raise ValueError(f"profile must have length {self.rows}")
        values = {}
        for k in range(1, self.rows + 1):
            if u[k - 1] == 0:
                continue
            for j in range(1, k + 1):
                values[(k, j)] = complex(u[k - 1])
        return CcFunction(values)


def radial_reduce(g: WeightedGraph, V, K: int) -> RadialOperator:
    """Reduce the operator to row-constant profiles on rows 1..K.

    Requires the triangular family extending past row K (the reduction
    keeps the forward edge weight at the last row) and a potential that is
    exactly constant on each row.
    """
    if not isinstance(g, TriangularGraph):
        raise TypeError("radial reduction is defined for the triangular family only")
    if K < 1:
        raise ValueError("K must be positive")
    if g.rows is not None and g.rows <= K:
        raise ValueError(
            f"graph is truncated at row {g.rows}; radial reduction to {K} rows "
            "needs the forward edges of row K"
        )
    V = as_potential(V)
    v_row = np.empty(K)
    for k in range(1, K + 1):
        v_row[k - 1] = V((k, 1))
        for j in range(2, k + 1):
            if V((k, j)) != v_row[k - 1]:
                raise ValueError(
                    f"potential is not row-constant at {vertex_label((k, j))}"
                )
    return RadialOperator(K, v_row)


@dataclass
class DeficiencyReport:
    """Forward-recursion growth probe for (L - z)u = 0 on radial profiles.

    The root row has only forward neighbors, so the radial solution space
    is one-dimensional and the recursion from u(1) determines everything.
    `partial_norms[k-1]` is S_k = sum_{j<=k} m(j) |u(j)|^2.  The label is
    a trend observation, nothing more.
    """

    z: complex
    rows: int
    u1: complex
    u: tuple
    terms: tuple
    partial_norms: tuple
    growth_label: str
    banner: str = HEURISTIC_BANNER
    note: str = "no claim of proof: radial growth heuristic only"
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "rows": self.rows,
            "u1": [self.u1.real, self.u1.imag],
            "u": [[c.real, c.imag] for c in self.u],
            "terms": list(self.terms),
            "partial_norms": list(self.partial_norms),
            "growth_label": self.growth_label,
            "banner": self.banner,
            "note": self.note,
            "details": self.details,
        }


def deficiency_probe(r: RadialOperator, z: complex, K: int, u1: complex = 1.0) -> DeficiencyReport:
    """Solve (R - z)u = 0 forward from u(1) = u1 and report the growth of
    the partial l2(m) norms S_K.

    The row-k equation rearranges to

        u(k+1) = [ (2k + 2 sqrt(k)(V(k) - z)) u(k) - (k-1) u(k-1) ] / (k+1),

    valid for k >= 1 with the k = 1 backward term dropping out on its own.
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    if K > r.rows:
        raise ValueError(f"radial operator covers {r.rows} rows, cannot probe {K}")
    z = complex(z)
    if z.imag == 0:
        raise ValueError("z must have nonzero imaginary part")
    if u1 == 0:
        raise ValueError("u1 must be nonzero (the solution space is one-dimensional)")

    u = np.zeros(K, dtype=complex)
    u[0] = u1
    for k in range(1, K):
        coef = k + 1.0
        if coef == 0.0:
            raise RuntimeError(f"forward recursion coefficient vanishes at row {k}")
        back = u[k - 2] if k >= 2 else 0.0
        u[k] = ((2.0 * k + 2.0 * math.sqrt(k) * (r.v_row[k - 1] - z)) * u[k - 1] - (k - 1.0) * back) / coef

    m = r.measures()[:K]
    terms = m * np.abs(u) ** 2
    sums = np.cumsum(terms)

    window = max(10, K // 4)
    tail = terms[-window - 1 :]
    ratios = tail[1:] / tail[:-1]
    if np.min(ratios) > 1.0:
        label = "partial norms growing without apparent bound (limit-point-like)"
    elif np.max(ratios) < 1.0:
        label = "terms decaying (solution looks square-summable)"
    else:
        label = "trend unclear"

    return DeficiencyReport(
        z=z,
        rows=K,
        u1=complex(u1),
        u=tuple(complex(c) for c in u),
        terms=tuple(float(t) for t in terms),
        partial_norms=tuple(float(s) for s in sums),
        growth_label=label,
        details={
            "tail_window": int(len(ratios)),
            "tail_ratio_min": float(np.min(ratios)),
            "tail_ratio_max": float(np.max(ratios)),
            "growth_factor_last_half": float(sums[-1] / sums[K // 2 - 1]),
        },
    )
