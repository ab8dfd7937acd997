"""Certificates for the perturbation-type self-adjointness hypotheses.

The theorem being certified assumes, for L_V on a weighted graph with an
intrinsic path metric rho whose degree is bounded on balls:

    V = U - W,   U >= 0,   W >= 0,
    |grad W|^2(x) <= c1 + c2 * W(x)          (gradient growth condition)

and concludes essential self-adjointness on C_c.  The corollary route
builds the decomposition from a growth bound on the negative part of V:
given V(x) >= -b1 - b2 * rho(o, x)^2 and a certified finite jump size s,

    W(x) = b1 + b2 * (rho(o, x) + s)^2,   U = V + W,
    c1 = 0,   c2 = 9 * b2.

This module checks those hypotheses on finite scopes and audits, on random
finitely supported u, the two quadratic inequalities and the imaginary-part
identity that drive the proof:

    2 Re(L_0 u, (W+1)u) >= -c3 ||u||^2,            c3 = c1 + c2,
    ||L_U u||^2 + ||(W+1)u||^2
        <= ||(L_U + W + 1)u||^2 + c3 ||u||^2,
    Im((W+1)u, L_U u) = Im(W u, L_0 u),
    |Im((W+1)u, L_U u)|
        <= (c1/4) ||u||^2 + ((c2+2)/4) ||(L_U+W+1)u|| ||u||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

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
from .graph_core import (
    Ball,
    InconclusiveError,
    VertexId,
    WeightedGraph,
    reduced_checklist,
    sorted_vertices,
)
from .metrics import JumpSize, PathMetric, RootDistance, check_b_star_ball, check_intrinsic
from .operators import (
    CcFunction,
    Potential,
    apply_operator_cc,
    as_potential,
    cc_add,
    cc_mul_fn,
    check_fc,
    grad_squared_real,
    inner_product,
    l2_norm,
    l2_norm_sq,
)

AUDIT_REL_TOL = 1e-10
IDENTITY_REL_TOL = 1e-12


# --------------------------------------------------------------------------
# scope checks


def nonneg_check(
    fn: Callable[[VertexId], float],
    vertices: Sequence[VertexId],
    name: str,
    scope_label: str,
    tol: float = 0.0,
) -> Certificate:
    """fn >= -tol on every scope vertex, with minimum-slack statistics."""
    witnesses: list[Witness] = []
    min_val, argmin = math.inf, None
    for x in vertices:
        v = fn(x)
        if v < min_val:
            min_val, argmin = v, x
        if v < -tol and len(witnesses) < 50:
            witnesses.append(Witness(x, v, f"{name} negative"))
    ok = not witnesses
    return Certificate(
        condition=f"{name} nonnegative",
        scope=scope_label,
        verdict=PASS if ok else FAIL,
        witnesses=witnesses,
        slack={
            "checked": len(vertices),
            "min_slack": None if math.isinf(min_val) else min_val,
            "argmin": vertex_label(argmin) if argmin is not None else None,
        },
    )


def gradient_bound_check(
    g: WeightedGraph,
    W: Callable[[VertexId], float],
    c1: float,
    c2: float,
    vertices: Sequence[VertexId],
    scope_label: str,
    tol: float = 0.0,
) -> Certificate:
    """|grad W|^2(x) <= c1 + c2 W(x) on the scope.

    Uses orbit reduction when the graph offers one and W is verified
    constant on every orbit involved (including neighbor orbits, since the
    gradient is a neighbor sum).
    """
    checks, reduction = reduced_checklist(g, vertices, constant_fns=(W,))
    witnesses: list[Witness] = []
    min_slack, argmin = math.inf, None
    inconclusive_reason = None
    for x, mult in checks:
        try:
            lhs = grad_squared_real(g, W, x)
        except InconclusiveError as e:
            inconclusive_reason = str(e)
            continue
        rhs = c1 + c2 * W(x)
        slack = rhs - lhs
        if slack < min_slack:
            min_slack, argmin = slack, x
        if slack < -tol and len(witnesses) < 50:
            witnesses.append(
                Witness(x, slack, f"|grad W|^2 = {lhs!r} > c1 + c2 W = {rhs!r}")
            )
    if witnesses:
        verdict, reason = FAIL, None
    elif inconclusive_reason:
        verdict, reason = INCONCLUSIVE, inconclusive_reason
    else:
        verdict, reason = PASS, None
    return Certificate(
        condition="gradient growth bound |grad W|^2 <= c1 + c2 W",
        scope=scope_label,
        verdict=verdict,
        witnesses=witnesses,
        slack={
            "checked": sum(m for _, m in checks),
            "min_slack": None if math.isinf(min_slack) else min_slack,
            "argmin": vertex_label(argmin) if argmin is not None else None,
            **reduction,
        },
        reason=reason,
        details={"c1": c1, "c2": c2},
    )


def fc_scope_check(g: WeightedGraph, vertices: Sequence[VertexId], scope_label: str) -> Certificate:
    """Finiteness condition sum_y b(x,y)^2/mu(y) < oo at every scope vertex."""
    checks, reduction = reduced_checklist(g, vertices)
    witnesses: list[Witness] = []
    worst, argmax = -math.inf, None
    inconclusive_reason = None
    for x, _mult in checks:
        cert = check_fc(g, x)
        if cert.verdict == FAIL:
            witnesses.extend(cert.witnesses)
        elif cert.verdict == INCONCLUSIVE:
            inconclusive_reason = cert.reason
        else:
            v = cert.details["value"]
            if v > worst:
                worst, argmax = v, x
    if witnesses:
        verdict, reason = FAIL, None
    elif inconclusive_reason:
        verdict, reason = INCONCLUSIVE, inconclusive_reason
    else:
        verdict, reason = PASS, None
    return Certificate(
        condition="finiteness condition on scope",
        scope=scope_label,
        verdict=verdict,
        witnesses=witnesses,
        reason=reason,
        details={
            "max_value": None if math.isinf(worst) else worst,
            "argmax": vertex_label(argmax) if argmax is not None else None,
            **reduction,
        },
    )


# --------------------------------------------------------------------------
# theorem hypotheses


@dataclass
class TheoremOneHypotheses:
    """Everything the self-adjointness theorem needs, over a finite scope.

    `balls` lists the balls on which Deg-boundedness is certified; each
    entry is either a prebuilt Ball (e.g. an analytic family ball) or a
    (center, radius) pair to enumerate through `metric`.
    """

    graph: WeightedGraph
    scope_vertices: Sequence[VertexId]
    scope_label: str
    metric: PathMetric
    U: Callable[[VertexId], float]
    W: Callable[[VertexId], float]
    c1: float
    c2: float
    balls: Sequence = field(default_factory=list)
    ball_budget: int = 200_000


def certify_theorem1(h: TheoremOneHypotheses) -> Certificate:
    """Conjunction of all checkable hypotheses on the scope: U, W >= 0, the
    gradient growth bound, the finiteness condition, the intrinsic
    inequality, and Deg-boundedness on each supplied ball."""
    from .graph_core import ball_enumerate

    g = h.graph
    children = [
        nonneg_check(h.U, h.scope_vertices, "U", h.scope_label),
        nonneg_check(h.W, h.scope_vertices, "W", h.scope_label),
        gradient_bound_check(g, h.W, h.c1, h.c2, h.scope_vertices, h.scope_label),
        fc_scope_check(g, h.scope_vertices, h.scope_label),
        check_intrinsic(g, h.metric, h.scope_vertices, h.scope_label),
    ]
    for spec in h.balls:
        ball = spec if isinstance(spec, Ball) else ball_enumerate(
            g, spec[0], spec[1], h.metric, budget=h.ball_budget
        )
        children.append(check_b_star_ball(g, ball))
    return conjunction(
        "self-adjointness theorem hypotheses", h.scope_label, children
    )


# --------------------------------------------------------------------------
# corollary decomposition from a growth bound


@dataclass
class CorollaryResult:
    """Decomposition built from the growth constants: V = U - W with
    W(x) = b1 + b2 (rho(o,x) + s)^2, plus the constants the gradient bound
    certifies (c1 = 0, c2 = 9 b2)."""

    V: Potential
    U: Callable[[VertexId], float]
    W: Callable[[VertexId], float]
    b1: float
    b2: float
    s: float
    c1: float
    c2: float
    rho: RootDistance
    certificate: Certificate

    def potential_with_split(self) -> Potential:
        return Potential(self.V.fn, split=(self.U, self.W), name=f"{self.V.name} = U - W")


def corollary_decomposition(
    g: WeightedGraph,
    rho_o: RootDistance,
    V,
    b1: float,
    b2: float,
    s: JumpSize,
    scope_vertices: Sequence[VertexId],
    scope_label: str,
) -> CorollaryResult:
    """Build W(x) = b1 + b2 (rho(o,x) + s)^2 and U = V + W and certify that
    the pair satisfies the theorem hypotheses it is responsible for:
    U >= 0 on the scope and |grad W|^2 <= 9 b2 W.

    Preconditions surfaced as inconclusive rather than assumed: the jump
    size must be certified finite, and rho must be exact on the scope and
    its neighbor shell.
    """
    V = as_potential(V)
    if b1 < 0 or b2 < 0:
        raise ValueError("growth constants must be nonnegative")
    s_val = s.value if isinstance(s, JumpSize) else float(s)

    def W_fn(x):
        return b1 + b2 * (rho_o.fn(x) + s_val) ** 2

    def U_fn(x):
        return V(x) + W_fn(x)

    c1, c2 = 0.0, 9.0 * b2

    blockers = []
    if isinstance(s, JumpSize) and not s.certified:
        blockers.append(f"jump size not certified ({s.note or 'enumerated bound only'})")
    if not math.isfinite(s_val):
        blockers.append("jump size not finite")
    if not rho_o.exact:
        blockers.append(f"root distances not exact ({rho_o.provenance})")

    if blockers:
        cert = Certificate(
            condition="growth-bound decomposition V = U - W",
            scope=scope_label,
            verdict=INCONCLUSIVE,
            reason="; ".join(blockers),
        )
        return CorollaryResult(V, U_fn, W_fn, b1, b2, s_val, c1, c2, rho_o, cert)

    try:
        children = [
            nonneg_check(U_fn, scope_vertices, "U = V + W", scope_label),
            nonneg_check(W_fn, scope_vertices, "W", scope_label),
            gradient_bound_check(g, W_fn, c1, c2, scope_vertices, scope_label),
        ]
    except KeyError as e:
        cert = Certificate(
            condition="growth-bound decomposition V = U - W",
            scope=scope_label,
            verdict=INCONCLUSIVE,
            reason=f"rho(o, .) not available on the scope and its shell: {e}",
        )
        return CorollaryResult(V, U_fn, W_fn, b1, b2, s_val, c1, c2, rho_o, cert)

    cert = conjunction("growth-bound decomposition V = U - W", scope_label, children)
    cert.details.update(
        {"b1": b1, "b2": b2, "jump_size": s_val, "c1": c1, "c2": c2, "rho": rho_o.provenance}
    )
    return CorollaryResult(V, U_fn, W_fn, b1, b2, s_val, c1, c2, rho_o, cert)


def fit_growth_constants(
    g: WeightedGraph,
    rho_o: RootDistance,
    V,
    scope_vertices: Sequence[VertexId],
    b2_grid: Sequence[float],
) -> list[tuple[float, float]]:
    """For each b2 in the grid, the smallest b1 >= 0 with
    V(x) >= -b1 - b2 rho(o,x)^2 on the scope.  Larger b2 never needs a
    larger b1 (the minimum is monotone nonincreasing in b2)."""
    V = as_potential(V)
    neg_v = np.array([-V(x) for x in scope_vertices])
    rho2 = np.array([rho_o.fn(x) ** 2 for x in scope_vertices])
    out = []
    for b2 in b2_grid:
        if b2 < 0:
            raise ValueError("b2 must be nonnegative")
        b1 = float(max(0.0, np.max(neg_v - b2 * rho2)))
        out.append((float(b2), b1))
    return out


# --------------------------------------------------------------------------
# proof-inequality audits on random C_c functions


def _operator_stack(g, U, W, u: CcFunction):
    """The vectors every audit needs, built from one operator application:
    L_0 u, L_U u = L_0 u + U u, (W+1)u, W u, (L_U + W + 1)u."""
    U = as_potential(U)
    l0u = apply_operator_cc(g, Potential.zero(), u)
    uu = cc_mul_fn(U.fn, u)
    lu = cc_add(l0u, uu)
    wu = cc_mul_fn(W, u)
    gu = cc_add(wu, u)  # (W+1)u
    total = cc_add(lu, gu)
    return l0u, lu, wu, gu, total


def audit_real_inequality(
    g: WeightedGraph,
    U,
    W: Callable[[VertexId], float],
    c1: float,
    c2: float,
    u: CcFunction,
    rel_tol: float = AUDIT_REL_TOL,
) -> Certificate:
    """The two real quadratic inequalities with c3 = c1 + c2:

        2 Re(L_0 u, (W+1)u) >= -c3 ||u||^2
        ||L_U u||^2 + ||(W+1)u||^2 <= ||(L_U+W+1)u||^2 + c3 ||u||^2

    Tolerances are relative to the scale of the dominant accumulated term.
    """
    c3 = c1 + c2
    l0u, lu, _wu, gu, total = _operator_stack(g, U, W, u)
    norm_u2 = l2_norm_sq(g, u)

    lhs1 = 2.0 * inner_product(g, l0u, gu).real
    rhs1 = -c3 * norm_u2
    scale1 = max(2.0 * l2_norm(g, l0u) * l2_norm(g, gu), abs(rhs1), 1e-30)
    slack1 = lhs1 - rhs1
    ok1 = slack1 >= -rel_tol * scale1

    lhs2 = l2_norm_sq(g, lu) + l2_norm_sq(g, gu)
    rhs2 = l2_norm_sq(g, total) + c3 * norm_u2
    scale2 = max(lhs2, rhs2, 1e-30)
    slack2 = rhs2 - lhs2
    ok2 = slack2 >= -rel_tol * scale2

    witnesses = []
    if not ok1:
        witnesses.append(Witness("lower bound on 2 Re(L_0 u, (W+1)u)", slack1, f"scale {scale1}"))
    if not ok2:
        witnesses.append(Witness("norm-splitting bound", slack2, f"scale {scale2}"))
    return Certificate(
        condition="real quadratic inequalities (c3 = c1 + c2)",
        scope=f"|supp u| = {len(u)} on {g.name}",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        slack={
            "lower_bound_slack": slack1,
            "lower_bound_scale": scale1,
            "splitting_slack": slack2,
            "splitting_scale": scale2,
        },
        details={"c1": c1, "c2": c2, "norm_u_sq": norm_u2, "rel_tol": rel_tol},
    )


def audit_imag_inequality(
    g: WeightedGraph,
    U,
    W: Callable[[VertexId], float],
    c1: float,
    c2: float,
    u: CcFunction,
    rel_tol: float = AUDIT_REL_TOL,
    identity_rel_tol: float = IDENTITY_REL_TOL,
) -> Certificate:
    """The imaginary-part identity and its quarter bound:

        Im((W+1)u, L_U u) = Im(W u, L_0 u)
        |Im((W+1)u, L_U u)| <= (c1/4)||u||^2 + ((c2+2)/4)||(L_U+W+1)u|| ||u||
    """
    l0u, lu, wu, gu, total = _operator_stack(g, U, W, u)
    norm_u = l2_norm(g, u)

    i1 = inner_product(g, gu, lu).imag
    i2 = inner_product(g, wu, l0u).imag
    scale_id = max(
        l2_norm(g, gu) * l2_norm(g, lu), l2_norm(g, wu) * l2_norm(g, l0u), 1e-30
    )
    identity_dev = abs(i1 - i2)
    ok_id = identity_dev <= identity_rel_tol * scale_id

    bound_rhs = (c1 / 4.0) * norm_u**2 + ((c2 + 2.0) / 4.0) * l2_norm(g, total) * norm_u
    slack = bound_rhs - abs(i1)
    ok_bound = slack >= -rel_tol * max(bound_rhs, scale_id)

    witnesses = []
    if not ok_id:
        witnesses.append(Witness("imaginary-part identity", identity_dev, f"scale {scale_id}"))
    if not ok_bound:
        witnesses.append(Witness("quarter bound", slack, f"rhs {bound_rhs}"))
    return Certificate(
        condition="imaginary-part identity and quarter bound",
        scope=f"|supp u| = {len(u)} on {g.name}",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        slack={
            "identity_deviation": identity_dev,
            "identity_scale": scale_id,
            "bound_slack": slack,
            "bound_rhs": bound_rhs,
        },
        details={"c1": c1, "c2": c2, "rel_tol": rel_tol, "identity_rel_tol": identity_rel_tol},
    )


def random_cc(rng: np.random.Generator, scope: list, max_support: int = 12, amplitude: float = 1.0) -> CcFunction:
    """Random finitely supported function: support drawn uniformly from the
    scope, values complex standard normal (scaled)."""
    size = int(rng.integers(1, min(max_support, len(scope)) + 1))
    idx = sorted(int(i) for i in rng.choice(len(scope), size=size, replace=False))
    vals = amplitude * (rng.normal(size=size) + 1j * rng.normal(size=size))
    return CcFunction({scope[i]: complex(v) for i, v in zip(idx, vals)})


def audit_suite(
    g: WeightedGraph,
    U,
    W: Callable[[VertexId], float],
    c1: float,
    c2: float,
    scope_vertices: Sequence[VertexId],
    samples: int,
    seed: int,
    rel_tol: float = AUDIT_REL_TOL,
    max_support: int = 12,
) -> Certificate:
    """Seeded random-sample audit of both inequality families.

    Per-sample RNG streams are spawned from the master seed.  The
    certificate fails on any violation and records worst normalized slacks.
    """
    scope = sorted_vertices(scope_vertices)
    streams = np.random.SeedSequence(seed).spawn(samples)
    failures: list[Witness] = []
    worst = {
        "lower_bound": math.inf,
        "splitting": math.inf,
        "identity": 0.0,
        "quarter_bound": math.inf,
    }
    for i, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        u = random_cc(rng, scope, max_support=max_support)
        rc = audit_real_inequality(g, U, W, c1, c2, u, rel_tol=rel_tol)
        ic = audit_imag_inequality(g, U, W, c1, c2, u, rel_tol=rel_tol)
        worst["lower_bound"] = min(
            worst["lower_bound"], rc.slack["lower_bound_slack"] / rc.slack["lower_bound_scale"]
        )
        worst["splitting"] = min(
            worst["splitting"], rc.slack["splitting_slack"] / rc.slack["splitting_scale"]
        )
        worst["identity"] = max(
            worst["identity"], ic.slack["identity_deviation"] / ic.slack["identity_scale"]
        )
        worst["quarter_bound"] = min(
            worst["quarter_bound"],
            ic.slack["bound_slack"] / max(ic.slack["bound_rhs"], ic.slack["identity_scale"]),
        )
        for cert, kind in ((rc, "real"), (ic, "imag")):
            if cert.verdict == FAIL and len(failures) < 50:
                failures.append(
                    Witness(f"sample {i}", None, f"{kind} audit failed (support {list(map(vertex_label, u.support))})")
                )
    return Certificate(
        condition="proof-inequality audit suite",
        scope=f"{samples} random C_c samples over {len(scope)} vertices of {g.name}",
        verdict=PASS if not failures else FAIL,
        witnesses=failures,
        slack={f"worst_{k}": v for k, v in worst.items()},
        details={"samples": samples, "seed": seed, "rel_tol": rel_tol, "max_support": max_support},
    )
