"""Command-line front end.

Subcommands mirror the library layers: `zoo` builds and describes graph
families, `metric` answers distance and intrinsic-condition queries, `op`
applies the operator and runs identity suites, `certify` produces
hypothesis certificates and inequality audits, `golenia` evaluates the
ray comparison criterion, `probe` runs the heuristic spectral
diagnostics, and `reproduce-example` runs the consolidated worked-example
pipeline.

Every command emits a canonical JSON report (stdout, or --out FILE) that
echoes its configuration and seed.  Exit codes: 0 when every requested
certificate passes, 1 on malformed input, 2 when a certificate fails,
3 when the outcome is inconclusive.

A note on --threads: the flag (and the SCHROGRAPH_THREADS environment
variable) is accepted and recorded in reports for forward compatibility,
but execution in this version is sequential.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .certificates import Certificate, INCONCLUSIVE, vertex_label
from .certify import TheoremOneHypotheses, audit_suite, certify_theorem1, corollary_decomposition
from .golenia import check_paper_bound, ray_path, run_criterion
from .graph_core import FiniteGraph, InconclusiveError, WeightedGraph, ball_enumerate
from .metrics import check_intrinsic, degree_path_metric, jump_size_over
from .operators import CcFunction, Potential, apply_operator, green_check_suite
from .probe import HEURISTIC_BANNER, deficiency_probe, eigen_bottom, radial_reduce, truncate
from .report import Report, RunConfig, canonical_json, clamp_tolerance, exit_code_for
from .reproduce import reproduce_example
from .zoo import (
    FAMILIES,
    FamilySpec,
    TriangularGraph,
    build_family,
    materialize,
    triangular_ball,
    triangular_deg_closed_form,
    triangular_jump_size,
    triangular_potential,
    triangular_rho_closed_form,
    triangular_root_distance,
    triangular_sigma_closed_form,
    triangular_spine,
)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse flavor whose usage errors exit with the malformed-input
    code (1) instead of argparse's default 2, which this tool reserves for
    failed certificates."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# input parsing


def parse_complex(text: str) -> complex:
    """Accepts forms like '0+1i', '-2.5i', '3', '1+2j'."""
    try:
        return complex(text.strip().replace("i", "j").replace("I", "j"))
    except ValueError:
        raise CliError(1, f"cannot parse complex number {text!r}") from None


def parse_vertex(text: str, g: WeightedGraph):
    if isinstance(g, TriangularGraph):
        parts = text.split(",")
        if len(parts) != 2:
            raise CliError(1, f"triangular vertex ids look like 'k,j', got {text!r}")
        try:
            return (int(parts[0]), int(parts[1]))
        except ValueError:
            raise CliError(1, f"triangular vertex ids look like 'k,j', got {text!r}") from None
    return text


def parse_scope(text: str, g: WeightedGraph) -> tuple[list, str]:
    """Scope syntax: 'all' (finite graphs), 'rows:1..K' (triangular), or
    'ids:V1;V2;...'."""
    if text == "all":
        if not g.is_finite():
            raise CliError(1, "scope 'all' needs a finite graph; use rows:1..K")
        return list(g.vertices()), "all vertices"
    if text.startswith("rows:1.."):
        if not isinstance(g, TriangularGraph):
            raise CliError(1, "rows:1..K scopes apply to the triangular family")
        try:
            upto = int(text[len("rows:1..") :])
        except ValueError:
            raise CliError(1, f"cannot parse scope {text!r}") from None
        if upto < 1 or (g.rows is not None and upto > g.rows):
            raise CliError(1, f"scope {text!r} out of range for this graph")
        return g.rows_scope(upto), f"rows 1..{upto}"
    if text.startswith("ids:"):
        ids = [parse_vertex(p, g) for p in text[4:].split(";") if p]
        if not ids:
            raise CliError(1, "empty ids: scope")
        for v in ids:
            if not g.has_vertex(v):
                raise CliError(1, f"scope vertex {vertex_label(v)} is not in the graph")
        return ids, f"{len(ids)} listed vertices"
    raise CliError(1, f"cannot parse scope {text!r} (use all, rows:1..K, or ids:...)")


def load_graph(args) -> WeightedGraph:
    if getattr(args, "graph", None) and getattr(args, "family", None):
        raise CliError(1, "give either --graph or --family, not both")
    if getattr(args, "graph", None):
        try:
            obj = json.loads(Path(args.graph).read_text())
        except FileNotFoundError:
            raise CliError(1, f"graph file not found: {args.graph}") from None
        except json.JSONDecodeError as e:
            raise CliError(1, f"graph file {args.graph} is not valid JSON: {e}") from None
        try:
            if isinstance(obj, dict) and "vertices" in obj:
                return FiniteGraph.from_json(obj)
            if isinstance(obj, dict) and "family" in obj:
                return build_family(FamilySpec.from_json(obj))
        except (ValueError, TypeError, KeyError) as e:
            raise CliError(1, f"graph file {args.graph} is malformed: {e}") from None
        raise CliError(1, f"graph file {args.graph} needs a 'vertices' table or a 'family' spec")
    if getattr(args, "family", None):
        if args.family == "triangular":
            params = {} if args.rows is None else {"rows": args.rows}
        else:
            if getattr(args, "size", None) is None:
                raise CliError(1, f"--size is required for the {args.family} family")
            params = {"n": args.size}
        try:
            return build_family(FamilySpec(args.family, params))
        except (ValueError, TypeError) as e:
            raise CliError(1, str(e)) from None
    raise CliError(1, "a graph source is required (--graph FILE or --family NAME)")


def load_potential(text: str | None, g: WeightedGraph, default: str = "zero") -> Potential:
    text = text or default
    if text == "zero":
        return Potential.zero()
    if text == "triangular":
        if not isinstance(g, TriangularGraph):
            raise CliError(1, "--potential triangular applies to the triangular family")
        return triangular_potential()
    try:
        obj = json.loads(Path(text).read_text())
        table = {parse_vertex(k, g): float(v) for k, v in obj["values"].items()}
        return Potential.from_table(
            table, name=Path(text).stem, default=obj.get("default")
        )
    except FileNotFoundError:
        raise CliError(1, f"potential file not found: {text}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise CliError(
            1, f"potential {text!r} must be 'zero', 'triangular', or a JSON table: {e}"
        ) from None


def load_split(path: str, g: WeightedGraph):
    """Split file {"U": {"values": ..., "default": ...}, "W": {...}} into
    a pair of vertex functions."""
    try:
        obj = json.loads(Path(path).read_text())
        out = []
        for part in ("U", "W"):
            spec = obj[part]
            table = {parse_vertex(k, g): float(v) for k, v in spec["values"].items()}
            out.append(Potential.from_table(table, name=part, default=spec.get("default")))
        return out[0], out[1]
    except FileNotFoundError:
        raise CliError(1, f"split file not found: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise CliError(1, f"split file {path} is malformed: {e}") from None


def load_cc(path: str, g: WeightedGraph) -> CcFunction:
    try:
        obj = json.loads(Path(path).read_text())
        return CcFunction.from_json(obj, vertex_parser=lambda s: parse_vertex(s, g))
    except FileNotFoundError:
        raise CliError(1, f"function file not found: {path}") from None
    except (json.JSONDecodeError, ValueError, TypeError) as e:
        raise CliError(1, f"function file {path} is malformed: {e}") from None


def save_line_plot(path: str, xs, ys, xlabel: str, ylabel: str, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(xs, ys, marker="o", markersize=3)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def emit_report(report: Report, args) -> None:
    if getattr(args, "out", None):
        report.write(args.out)
    else:
        sys.stdout.write(report.to_json())


def _config(args, command: str, **options) -> RunConfig:
    return RunConfig(
        command=command,
        options=options,
        seed=getattr(args, "seed", 0),
        threads=getattr(args, "threads", 1),
    )


# --------------------------------------------------------------------------
# handlers


def cmd_zoo_build(args) -> int:
    if not args.family:
        raise CliError(1, "zoo build needs --family")
    if args.family == "triangular":
        if args.rows is None:
            raise CliError(1, "materializing the triangular family needs --rows")
        g = TriangularGraph(rows=args.rows)
    else:
        g = load_graph(args)
    fg = materialize(g)
    graph_json = canonical_json(fg.to_json_obj())
    if args.out:
        Path(args.out).write_text(graph_json)
    else:
        sys.stdout.write(graph_json)
    report = Report(
        config=_config(args, "zoo build", family=args.family, rows=args.rows, size=args.size, out=args.out),
        data={
            "vertex_count": fg.vertex_count(),
            "edge_count": sum(1 for _ in fg.edges()),
            "written_to": args.out,
        },
    )
    if args.out:
        sys.stdout.write(report.to_json())
    return 0


def cmd_zoo_info(args) -> int:
    if args.family != "triangular":
        raise CliError(1, "closed-form info is available for the triangular family")
    k = args.row
    if k < 1:
        raise CliError(1, "--row must be a positive integer")
    report = Report(
        config=_config(args, "zoo info", family=args.family, row=k),
        data={
            "row": k,
            "vertices_in_row": k,
            "mu": 2.0 * math.sqrt(k),
            "Deg": triangular_deg_closed_form(k),
            "V": -math.sqrt(k),
            "rho_from_root": triangular_rho_closed_form(k),
            "sigma_forward_edge": triangular_sigma_closed_form(k),
            "jump_size_bound": 2.0 ** -0.25,
        },
    )
    emit_report(report, args)
    return 0


def cmd_metric_rho(args) -> int:
    g = load_graph(args)
    metric = degree_path_metric(g)
    x = parse_vertex(args.src, g)
    y = parse_vertex(args.dst, g)
    for v in (x, y):
        if not g.has_vertex(v):
            raise CliError(1, f"vertex {vertex_label(v)} is not in the graph")
    r = metric.rho(x, y, budget=args.budget)
    report = Report(
        config=_config(args, "metric rho", src=args.src, dst=args.dst, budget=args.budget,
                       graph=args.graph, family=args.family, rows=args.rows, size=args.size),
        data={"rho": r.value, "exact": r.exact},
    )
    emit_report(report, args)
    return 0


def cmd_metric_intrinsic(args) -> int:
    g = load_graph(args)
    metric = degree_path_metric(g)
    scope, label = parse_scope(args.scope, g)
    cert = check_intrinsic(g, metric, scope, label, rel_tol=clamp_tolerance(args.tol))
    report = Report(
        config=_config(args, "metric intrinsic-check", scope=args.scope, tol=args.tol,
                       graph=args.graph, family=args.family, rows=args.rows, size=args.size),
        certificates=[cert],
    )
    emit_report(report, args)
    return exit_code_for([cert])


def cmd_metric_jump_size(args) -> int:
    g = load_graph(args)
    if isinstance(g, TriangularGraph):
        s = triangular_jump_size(g)
    elif g.is_finite():
        metric = degree_path_metric(g)
        s = jump_size_over(
            metric,
            ((x, y) for x, y, _b in g.edges()),
            scope_label="all edges",
            exact_rho=args.exact_rho,
            complete=True,
        )
    else:
        raise CliError(1, "jump size needs the triangular family or a finite graph")
    report = Report(
        config=_config(args, "metric jump-size", exact_rho=args.exact_rho,
                       graph=args.graph, family=args.family, rows=args.rows, size=args.size),
        data=s.to_dict(),
    )
    emit_report(report, args)
    return 0


def cmd_op_apply(args) -> int:
    g = load_graph(args)
    V = load_potential(args.potential, g)
    f = load_cc(args.f, g)
    x = parse_vertex(args.at, g)
    if not g.has_vertex(x):
        raise CliError(1, f"vertex {vertex_label(x)} is not in the graph")
    config = _config(args, "op apply", potential=args.potential, f=args.f, at=args.at,
                     graph=args.graph, family=args.family, rows=args.rows, size=args.size)
    try:
        val = apply_operator(g, V, f, x)
    except InconclusiveError as e:
        report = Report(
            config=config,
            certificates=[
                Certificate(
                    condition="operator application",
                    scope=f"at {vertex_label(x)}",
                    verdict=INCONCLUSIVE,
                    reason=str(e),
                )
            ],
        )
        emit_report(report, args)
        return 3
    report = Report(config=config, data={"at": vertex_label(x), "value": [val.real, val.imag]})
    emit_report(report, args)
    return 0


def cmd_op_green_check(args) -> int:
    cert = green_check_suite(args.trials, args.seed, max_vertices=args.max_vertices)
    report = Report(
        config=_config(args, "op green-check", trials=args.trials, max_vertices=args.max_vertices),
        certificates=[cert],
    )
    emit_report(report, args)
    return exit_code_for([cert])


def cmd_certify_corollary(args) -> int:
    if args.graph:
        g = load_graph(args)
        if not g.is_finite():
            raise CliError(1, "--graph corollary runs need a finite graph")
        if args.potential is None:
            raise CliError(1, "--potential is required with --graph")
        if args.root is None:
            raise CliError(1, "--root is required with --graph")
        V = load_potential(args.potential, g)
        root = parse_vertex(args.root, g)
        if not g.has_vertex(root):
            raise CliError(1, f"root {vertex_label(root)} is not in the graph")
        metric = degree_path_metric(g)
        scope = list(g.vertices())
        label = "all vertices"
        rho = metric.root_distances(root, scope)
        s = jump_size_over(
            metric, ((x, y) for x, y, _b in g.edges()), scope_label="all edges", complete=True
        )
    else:
        if args.rows is None:
            raise CliError(1, "certify corollary needs --rows K (scope rows 1..K)")
        g = TriangularGraph()  # scope-limited run on the unbounded family
        V = load_potential(args.potential, g, default="triangular")
        scope = g.rows_scope(args.rows)
        label = f"rows 1..{args.rows}"
        rho = triangular_root_distance(g)
        s = triangular_jump_size(g)
    res = corollary_decomposition(g, rho, V, args.b1, args.b2, s, scope, label)
    report = Report(
        config=_config(args, "certify corollary", b1=args.b1, b2=args.b2, rows=args.rows,
                       root=args.root, potential=args.potential,
                       graph=args.graph, family=args.family or "triangular"),
        certificates=[res.certificate],
        data={
            "b1": res.b1,
            "b2": res.b2,
            "jump_size": res.s,
            "c1": res.c1,
            "c2": res.c2,
        },
    )
    emit_report(report, args)
    return exit_code_for([res.certificate])


def cmd_certify_theorem(args) -> int:
    g = load_graph(args)
    scope, label = parse_scope(args.scope, g)
    U, W = load_split(args.split, g)
    metric = degree_path_metric(g)
    balls = []
    for spec in args.ball or []:
        head, sep, radius = spec.rpartition(":")
        if not sep:
            raise CliError(1, f"--ball takes VERTEX:RADIUS, got {spec!r}")
        try:
            r = float(radius)
        except ValueError:
            raise CliError(1, f"--ball takes VERTEX:RADIUS, got {spec!r}") from None
        center = parse_vertex(head, g)
        if not g.has_vertex(center):
            raise CliError(1, f"ball center {vertex_label(center)} is not in the graph")
        balls.append((center, r))
    hyp = TheoremOneHypotheses(
        graph=g,
        scope_vertices=scope,
        scope_label=label,
        metric=metric,
        U=U,
        W=W,
        c1=args.c1,
        c2=args.c2,
        balls=balls,
    )
    cert = certify_theorem1(hyp)
    report = Report(
        config=_config(args, "certify theorem", split=args.split, c1=args.c1, c2=args.c2,
                       scope=args.scope, ball=args.ball,
                       graph=args.graph, family=args.family, rows=args.rows, size=args.size),
        certificates=[cert],
    )
    emit_report(report, args)
    return exit_code_for([cert])


def cmd_certify_audit(args) -> int:
    rel_tol = clamp_tolerance(args.tol)
    rows = args.rows if args.rows is not None else 60
    if args.graph:
        g = load_graph(args)
        if not g.is_finite():
            raise CliError(1, "--graph audits need a finite graph")
        if args.split is None:
            raise CliError(1, "--split is required with --graph (tables for U and W)")
        U, W = load_split(args.split, g)
        c1, c2 = args.c1, args.c2
        scope = list(g.vertices())
    else:
        g = TriangularGraph()
        V = triangular_potential()
        rho = triangular_root_distance(g)
        s = triangular_jump_size(g)
        b1, b2 = args.b1, args.b2

        def W(x):
            return b1 + b2 * (rho.fn(x) + s.value) ** 2

        def U(x):
            return V(x) + W(x)

        c1, c2 = 0.0, 9.0 * b2
        scope = g.rows_scope(rows)
    cert = audit_suite(
        g, U, W, c1, c2, scope, samples=args.samples, seed=args.seed,
        rel_tol=rel_tol, max_support=args.max_support,
    )
    report = Report(
        config=_config(args, "certify audit", samples=args.samples, rows=rows,
                       b1=args.b1, b2=args.b2, c1=args.c1, c2=args.c2, tol=args.tol,
                       max_support=args.max_support, split=args.split,
                       graph=args.graph, family=args.family or "triangular"),
        certificates=[cert],
    )
    emit_report(report, args)
    return exit_code_for([cert])


def cmd_golenia_run(args) -> int:
    spine_mode = False
    if args.graph:
        g = load_graph(args)
        if args.path is None:
            raise CliError(1, "--path is required with --graph (semicolon-separated ids)")
        vs = [parse_vertex(p, g) for p in args.path.split(";") if p]
        provenance = "user list"
        V = load_potential(args.potential, g)
    else:
        if args.family:
            g = load_graph(args)
        else:
            g = TriangularGraph(rows=args.rows)
        if not isinstance(g, TriangularGraph):
            raise CliError(1, "family ray runs support the triangular family; use --graph/--path otherwise")
        if args.path is not None:
            vs = [parse_vertex(p, g) for p in args.path.split(";") if p]
            provenance = "user list"
        else:
            spine = args.spine or "column:1"
            if not spine.startswith("column:"):
                raise CliError(1, f"--spine takes column:C, got {spine!r}")
            try:
                col = int(spine[len("column:") :])
            except ValueError:
                raise CliError(1, f"--spine takes column:C, got {spine!r}") from None
            if col < 1:
                raise CliError(1, "--spine column must be >= 1")
            vs = triangular_spine(args.n, column=col)
            provenance = f"triangular spine column {col}"
            spine_mode = True
        V = load_potential(args.potential, g, default="triangular")
    try:
        path = ray_path(g, vs, provenance=provenance)
        run = run_criterion(g, V, path, delta=args.delta, lam=args.lam, N=args.n)
    except ValueError as e:
        raise CliError(1, str(e)) from None
    certs = [run.admissibility]
    if spine_mode:
        certs.append(check_paper_bound(run, args.delta, args.lam, run.mu))
    data = run.to_dict()
    data.pop("admissibility")
    report = Report(
        config=_config(args, "golenia run", spine=args.spine, path=args.path, delta=args.delta,
                       lam=args.lam, n=args.n, potential=args.potential,
                       graph=args.graph, family=args.family or "triangular", rows=args.rows),
        certificates=certs,
        data=data,
    )
    emit_report(report, args)
    return exit_code_for(certs)


def _probe_ball(g: WeightedGraph, args):
    if isinstance(g, TriangularGraph):
        if args.rows is None:
            raise CliError(1, "probe eig on the triangular family needs --rows")
        base = TriangularGraph()  # keep full degrees on the boundary row
        return base, triangular_ball(base, args.rows)
    if not g.is_finite():
        raise CliError(1, "probe eig needs the triangular family or a finite graph")
    metric = degree_path_metric(g)
    center = min(g.vertices(), key=vertex_label)
    return g, ball_enumerate(g, center, math.inf, metric)


def cmd_probe_eig(args) -> int:
    g0 = load_graph(args) if (args.graph or args.family) else TriangularGraph()
    V_name = args.potential or ("triangular" if isinstance(g0, TriangularGraph) else "zero")
    data: dict = {"banner": HEURISTIC_BANNER}
    try:
        if args.sweep:
            if not isinstance(g0, TriangularGraph):
                raise CliError(1, "--sweep applies to the triangular family")
            try:
                rows_list = sorted({int(p) for p in args.sweep.split(",") if p})
            except ValueError:
                raise CliError(1, f"--sweep takes K1,K2,..., got {args.sweep!r}") from None
            base = TriangularGraph()
            V = load_potential(V_name, base)
            sweep = []
            for rows in rows_list:
                t = truncate(base, V, triangular_ball(base, rows))
                sweep.append({"rows": rows, "eigenvalues": eigen_bottom(t, args.bottom)})
            data["sweep"] = sweep
            if args.plot:
                save_line_plot(
                    args.plot,
                    [s["rows"] for s in sweep],
                    [s["eigenvalues"][0] for s in sweep],
                    "rows",
                    "bottom eigenvalue",
                    "Dirichlet truncation: bottom eigenvalue vs rows",
                )
                data["plot"] = args.plot
        else:
            g, ball = _probe_ball(g0, args)
            V = load_potential(V_name, g)
            t = truncate(g, V, ball)
            data.update({"n": t.n, "eigenvalues": eigen_bottom(t, args.bottom)})
    except RuntimeError as e:
        raise CliError(3, f"eigensolver did not converge: {e}") from None
    report = Report(
        config=_config(args, "probe eig", rows=args.rows, bottom=args.bottom, sweep=args.sweep,
                       potential=V_name, plot=args.plot,
                       graph=args.graph, family=args.family or "triangular"),
        data=data,
    )
    emit_report(report, args)
    return 0


def cmd_probe_deficiency(args) -> int:
    if args.family not in (None, "triangular") or args.graph:
        raise CliError(1, "the deficiency probe runs on the triangular family (radial reduction)")
    g = TriangularGraph()
    V = load_potential(args.potential, g, default="triangular")
    z = parse_complex(args.z)
    try:
        r = radial_reduce(g, V, args.rows)
        rep = deficiency_probe(r, z, args.rows)
    except (ValueError, TypeError) as e:
        raise CliError(1, str(e)) from None
    data = rep.to_dict()
    if args.plot:
        save_line_plot(
            args.plot,
            list(range(1, args.rows + 1)),
            list(rep.partial_norms),
            "rows",
            "partial norm S_K",
            f"radial growth probe at z = {args.z}",
        )
        data["plot"] = args.plot
    report = Report(
        config=_config(args, "probe deficiency", z=args.z, rows=args.rows,
                       potential=args.potential, plot=args.plot),
        data=data,
    )
    emit_report(report, args)
    return 0


def cmd_reproduce(args) -> int:
    try:
        scale = args.scale if args.scale in ("full", "small") else int(args.scale)
    except ValueError:
        raise CliError(1, f"--scale takes full, small, or a row count, got {args.scale!r}") from None
    report = reproduce_example(out_dir=args.out_dir, scale=scale, seed=args.seed)
    if args.out_dir is None:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(canonical_json({"written_to": f"{args.out_dir}/report.json",
                                         "stage_verdicts": report.data["stage_verdicts"]}))
    failing = report.data.get("failing_stages")
    if failing:
        print(f"failing stages: {', '.join(failing)}", file=sys.stderr)
    return report.exit_code()


# --------------------------------------------------------------------------
# parser assembly


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SCHROGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report and used by randomized commands")
    common.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker cap, recorded in reports (execution is sequential in this version; default from SCHROGRAPH_THREADS)",
    )

    gsrc = argparse.ArgumentParser(add_help=False)
    gsrc.add_argument("--graph", help="graph JSON file (vertex table or family spec)")
    gsrc.add_argument("--family", choices=FAMILIES, help="built-in family name")
    gsrc.add_argument("--rows", type=int, help="triangular family: row count / scope rows")
    gsrc.add_argument("--size", type=int, help="stock families: vertex count n")

    parser = _Parser(prog="schrograph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_zoo = sub.add_parser("zoo", help="build and describe graph families")
    zoo_sub = p_zoo.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = zoo_sub.add_parser("build", parents=[common, gsrc], help="materialize a finite graph JSON (--out FILE)")
    p.set_defaults(handler=cmd_zoo_build)
    p = zoo_sub.add_parser("info", parents=[common], help="closed forms at a triangular row")
    p.add_argument("--family", choices=FAMILIES, default="triangular")
    p.add_argument("--row", type=int, required=True)
    p.set_defaults(handler=cmd_zoo_info)

    p_metric = sub.add_parser("metric", help="degree-path metric queries")
    metric_sub = p_metric.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = metric_sub.add_parser("rho", parents=[common, gsrc], help="shortest-path distance between two vertices")
    p.add_argument("--from", dest="src", required=True, metavar="ID")
    p.add_argument("--to", dest="dst", required=True, metavar="ID")
    p.add_argument("--budget", type=int, default=500_000, help="max settled vertices in the Dijkstra run")
    p.set_defaults(handler=cmd_metric_rho)
    p = metric_sub.add_parser("intrinsic-check", parents=[common, gsrc], help="mu(x) >= sum_y b sigma^2 on a scope")
    p.add_argument("--scope", required=True, help="all | rows:1..K | ids:V1;V2;...")
    p.add_argument("--tol", type=float, default=1e-12, help="relative slack tolerance")
    p.set_defaults(handler=cmd_metric_intrinsic)
    p = metric_sub.add_parser("jump-size", parents=[common, gsrc], help="sup of rho over edges")
    p.add_argument("--exact-rho", action="store_true", help="recompute each edge by Dijkstra instead of the edge-length bound")
    p.set_defaults(handler=cmd_metric_jump_size)

    p_op = sub.add_parser("op", help="operator application and identity suites")
    op_sub = p_op.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = op_sub.add_parser("apply", parents=[common, gsrc], help="evaluate L_V f at a vertex")
    p.add_argument("--potential", help="zero | triangular | table.json")
    p.add_argument("--f", required=True, help="finitely supported function JSON")
    p.add_argument("--at", required=True, metavar="ID")
    p.set_defaults(handler=cmd_op_apply)
    p = op_sub.add_parser("green-check", parents=[common], help="randomized adjointness and product-rule suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-vertices", type=int, default=50)
    p.set_defaults(handler=cmd_op_green_check)

    p_certify = sub.add_parser("certify", help="hypothesis certificates and audits")
    certify_sub = p_certify.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = certify_sub.add_parser("corollary", parents=[common, gsrc], help="growth-bound decomposition V = U - W")
    p.add_argument("--b1", type=float, default=1.0)
    p.add_argument("--b2", type=float, default=4.0)
    p.add_argument("--root", metavar="ID", help="root vertex for rho (required with --graph)")
    p.add_argument("--potential", help="zero | triangular | table.json")
    p.set_defaults(handler=cmd_certify_corollary)
    p = certify_sub.add_parser("theorem", parents=[common, gsrc], help="full hypothesis conjunction from a U/W split")
    p.add_argument("--split", required=True, help="JSON file with U and W tables")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--scope", default="all")
    p.add_argument("--ball", action="append", metavar="VERTEX:RADIUS", help="check bounded degree on this ball (repeatable)")
    p.set_defaults(handler=cmd_certify_theorem)
    p = certify_sub.add_parser("audit", parents=[common, gsrc], help="random-sample inequality audits (defaults: triangular rows 1..60, b1=1, b2=4)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--b1", type=float, default=1.0)
    p.add_argument("--b2", type=float, default=4.0)
    p.add_argument("--split", help="JSON file with U and W tables (with --graph)")
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--c2", type=float, default=36.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-support", type=int, default=12)
    p.set_defaults(handler=cmd_certify_audit)

    p_golenia = sub.add_parser("golenia", help="ray comparison-criterion runs")
    golenia_sub = p_golenia.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = golenia_sub.add_parser("run", parents=[common, gsrc], help="products, partial sums, and the factorial majorant check")
    p.add_argument("--spine", help="column:C spine of the triangular family (default column:1)")
    p.add_argument("--path", help="explicit ray: semicolon-separated vertex ids")
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--n", type=int, default=100, help="number of terms")
    p.add_argument("--potential", help="zero | triangular | table.json")
    p.set_defaults(handler=cmd_golenia_run)

    p_probe = sub.add_parser("probe", help="heuristic spectral diagnostics (never certificates)")
    probe_sub = p_probe.add_subparsers(dest="subcommand", parser_class=_Parser)
    p = probe_sub.add_parser("eig", parents=[common, gsrc], help="bottom eigenvalues of the Dirichlet truncation")
    p.add_argument("--bottom", type=int, default=1, help="how many eigenvalues")
    p.add_argument("--sweep", metavar="K1,K2,...", help="repeat over several row counts")
    p.add_argument("--potential", help="zero | triangular | table.json")
    p.add_argument("--plot", help="write a bottom-eigenvalue line chart here (with --sweep)")
    p.set_defaults(handler=cmd_probe_eig)
    p = probe_sub.add_parser("deficiency", parents=[common, gsrc], help="radial growth probe for (L - z)u = 0")
    p.add_argument("--z", required=True, help="complex spectral parameter, e.g. 0+1i")
    p.add_argument("--potential", help="zero | triangular | table.json")
    p.add_argument("--plot", help="write an S_K line chart here")
    p.set_defaults(handler=cmd_probe_deficiency)

    p = sub.add_parser("reproduce-example", parents=[common], help="consolidated worked-example pipeline")
    p.add_argument("--out-dir", help="directory for report.json (default: print to stdout)")
    p.add_argument("--scale", default="full", help="full | small | row count")
    p.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse prints its own diagnostics; surface the code (1 for usage
        # errors, 0 for --help) as a return value so callers never see the
        # exception
        return int(e.code or 0)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        return handler(args)
    except CliError as e:
        print(f"schrograph: error: {e}", file=sys.stderr)
        return e.code
    except InconclusiveError as e:
        print(f"schrograph: inconclusive: {e}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"schrograph: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
