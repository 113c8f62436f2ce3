"""Command-line front end: ``busfactor analyze|generate|experiment|oracle|bench``."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile

from . import __version__
from . import experiments as ex
from . import generators as gen
from . import oracle
from .graph import EdgeListParseError, GraphError, Threshold, format_edge_list, read_edge_list
from .measures import InfeasibleThreshold, analyze
from .strategies import STRATEGIES

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 2, 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_INFEASIBLE):
        super().__init__(message)
        self.code = code


# -- output helpers ----------------------------------------------------------

def _write_outputs(files: dict) -> None:
    """Write every ``path -> text`` entry atomically, or none of them.

    A ``None`` path means standard output.
    """
    written = []
    try:
        for path, text in files.items():
            if path is None:
                continue
            directory = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(dir=directory, prefix=".busfactor-")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.append((tmp, path))
        for tmp, path in written:
            os.replace(tmp, path)
    except BaseException:
        for tmp, path in written:
            for p in (tmp, path):
                if os.path.exists(p):
                    os.unlink(p)
        raise
    if None in files:
        sys.stdout.write(files[None])


def _threshold(args) -> Threshold:
    try:
        return Threshold.parse(args.threshold)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _load(path, min_weight=0.0):
    try:
        data = read_edge_list(path)
    except EdgeListParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_USAGE) from exc
    if not data.edges:
        raise CliError(f"{path}: no edges", EXIT_USAGE)
    return data.to_graph(min_weight)


# -- analyze -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    g = _load(args.input, args.min_weight)
    t = _threshold(args)
    try:
        report = analyze(g, t, args.strategy, args.seed)
    except InfeasibleThreshold as exc:
        raise CliError(f"infeasible threshold {t}: {exc}") from exc
    doc = report.to_dict(g)
    if args.format == "tsv":
        text = "".join(f"{k}\t{json.dumps(v) if isinstance(v, list) else v}\n"
                       for k, v in doc.items())
    else:
        text = json.dumps(doc, indent=2) + "\n"
    _write_outputs({args.output: text})
    return EXIT_OK


# -- generate ----------------------------------------------------------------

def _pairs(text):
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        a, _, b = chunk.partition("-")
        out.append((int(a), int(b)))
    return out


def build_generated(args):
    kind = args.kind
    params = {"kind": kind, "seed": args.seed}
    try:
        if kind == "fixture":
            name = args.name
            params["name"] = name
            if name == "fig1_toy":
                g = gen.fig1_toy()
            elif name == "t5_tree":
                params["k"] = args.k
                g = gen.t5_tree(args.k)
            elif name == "t4_worstcase":
                params.update(n=args.n, m=args.m, t=str(Threshold.parse(args.threshold)))
                g = gen.t4_worstcase(args.n, args.m, args.threshold)
            elif name == "incidence":
                pairs = _pairs(args.pairs or "")
                params.update(vertices=args.vertices, pairs=pairs)
                g = gen.incidence(args.vertices, pairs)
            else:
                raise ValueError(f"unknown fixture {name!r}")
        elif kind == "powerlaw":
            params.update(people=args.people, tasks=args.tasks,
                          people_params=vars_of(gen.PEOPLE_PARAMS),
                          task_params=vars_of(gen.TASK_PARAMS))
            g = gen.power_law_graph(args.people, args.tasks, args.seed)
            if args.rewire_j is not None:
                params.update(rewire_j=args.rewire_j, sweep_count=args.sweeps)
                g = gen.metropolis_rewire(
                    g, gen.RewiringConfig(args.rewire_j, args.sweeps, args.seed))
        else:
            params.update(people=args.people, tasks=args.tasks, edges=args.edges)
            g = gen.random_bipartite(args.people, args.tasks, args.edges, args.seed)
    except (TypeError, ValueError, GraphError) as exc:
        raise CliError(f"invalid generator parameters: {exc}") from exc
    return g, params


def vars_of(p):
    return {"alpha": p.alpha, "a": p.a, "c": p.c}


def cmd_generate(args) -> int:
    g, params = build_generated(args)
    params.update(n=g.n, m=g.m, edge_count=g.edge_count, version=__version__)
    if args.format == "json":
        text = json.dumps({"n": g.n, "m": g.m,
                           "edges": [[g.person_label(p), g.task_label(t)] for p, t in g.edges()]},
                          indent=1) + "\n"
    else:
        text = format_edge_list(g)
    files = {args.output: text}
    if args.output is not None:
        files[args.output + ".json"] = json.dumps(params, indent=2, sort_keys=True) + "\n"
    _write_outputs(files)
    return EXIT_OK


# -- experiment --------------------------------------------------------------

def _base_graph(args):
    if args.input:
        return _load(args.input, args.min_weight)
    return gen.power_law_graph(args.people, args.tasks, args.seed)


def cmd_experiment(args) -> int:
    t = _threshold(args)
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    params["threshold"] = str(t)
    name = args.experiment
    try:
        if name == "density":
            rows = ex.run_density_sweep(_base_graph(args), args.batch, args.total, args.direction,
                                        args.seed, t, args.strategy)
        elif name == "redundancy":
            rows = ex.run_redundancy_sweep(_base_graph(args), args.mode, args.batch, args.total,
                                           args.seed, t, args.strategy)
        elif name == "assortativity":
            if args.input:
                g = _load(args.input, args.min_weight)
                degrees = gen.DegreeSequence(g.person_degrees(), g.task_degrees())
            else:
                degrees = gen.power_law_degrees(args.people, args.tasks, args.seed)
            js = gen.j_grid(args.j_min, args.j_max, args.j_steps)
            rows = ex.run_assortativity_sweep(degrees, js, args.replicas, args.seed, t,
                                              args.strategy, args.sweeps)
        elif name == "strategies":
            rows = ex.run_strategy_comparison(args.people, args.tasks, args.replicas, args.seed,
                                              args.strategies.split(","), t)
        else:
            rows = ex.run_scaling_bench(_int_list(args.sizes), args.seed, args.repeats)
    except (ex.ExperimentError, ValueError) as exc:
        raise CliError(f"{name}: {exc}") from exc
    _emit_rows(args, rows, name, params)
    return EXIT_OK


def _emit_rows(args, rows, name, params):
    buf = io.StringIO()
    ex.write_csv(rows, buf)
    files = {args.output: buf.getvalue()}
    if args.output is not None:
        files[args.output + ".manifest.json"] = json.dumps(
            ex.manifest(name, params), indent=2, sort_keys=True) + "\n"
    _write_outputs(files)


def _int_list(text):
    return [int(float(x)) for x in str(text).split(",") if x.strip()]


def cmd_bench(args) -> int:
    rows = ex.run_scaling_bench(_int_list(args.sizes), args.seed, args.repeats)
    params = {"sizes": _int_list(args.sizes), "seed": args.seed, "repeats": args.repeats}
    _emit_rows(args, rows, "scaling", params)
    return EXIT_OK


# -- oracle ------------------------------------------------------------------

def cmd_oracle(args) -> int:
    if args.fixture:
        g = gen.fig1_toy()
    elif args.input:
        g = _load(args.input, args.min_weight)
    else:
        raise CliError("oracle needs an input edge list or --fixture", EXIT_USAGE)
    limits = oracle.OracleLimits(args.max_subsets, args.max_perms)
    t = _threshold(args)
    label = g.person_label
    measure = args.measure
    try:
        if measure == "mcs":
            value, witness = oracle.exact_mcs(g, t, limits)
            doc = {"value": value, "witness": [label(p) for p in sorted(witness)]}
        elif measure == "mrs":
            value, witness = oracle.exact_mrs(g, t, limits)
            doc = {"value": value, "witness": [label(p) for p in sorted(witness)]}
        elif measure == "robustness":
            value, order = oracle.exact_robustness(g, limits)
            doc = {"value": value, "witness": [label(p) for p in order]}
        elif measure == "cov":
            doc = {"value": oracle.exact_cov(g, args.k, args.agg, limits), "witness": None,
                   "k": args.k, "agg": args.agg}
        elif measure == "z":
            doc = {"value": oracle.exact_z(g, t, args.agg, limits), "witness": None,
                   "agg": args.agg}
        else:
            doc = oracle.proposition1(g, t, limits)
    except oracle.OracleCapExceeded as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(f"{measure}: {exc}") from exc
    doc = {"measure": measure, "threshold": str(t), **doc}
    _write_outputs({args.output: json.dumps(doc, indent=2) + "\n"})
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _global_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--threshold", "--t", default=d("1/2"),
                        help="fraction like 1/2 or decimal like 0.5")
    parser.add_argument("--strategy", choices=STRATEGIES, default=d("degree"))
    parser.add_argument("--min-weight", type=float, default=d(0.0))
    parser.add_argument("--output", "-o", default=d(None))
    parser.add_argument("--format", choices=("json", "tsv"), default=d(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="busfactor",
                                     description="Bus-factor measures on person/task graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="run all measures on an edge list")
    p.add_argument("input")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", parents=[common], help="emit a synthetic edge list")
    gsub = p.add_subparsers(dest="kind", required=True)
    f = gsub.add_parser("fixture", parents=[common])
    f.add_argument("--name", required=True, choices=gen.FIXTURES)
    f.add_argument("--k", type=int, default=3)
    f.add_argument("--n", type=int, default=6)
    f.add_argument("--m", type=int, default=4)
    f.add_argument("--vertices", type=int, default=0)
    f.add_argument("--pairs", help="graph edges for incidence, e.g. 0-1,1-2,0-2")
    pl = gsub.add_parser("powerlaw", parents=[common])
    pl.add_argument("--people", type=int, default=ex.DESK_PEOPLE)
    pl.add_argument("--tasks", type=int, default=ex.DESK_TASKS)
    pl.add_argument("--rewire-j", type=float, default=None)
    pl.add_argument("--sweeps", type=float, default=20)
    rb = gsub.add_parser("random", parents=[common])
    rb.add_argument("--people", type=int, required=True)
    rb.add_argument("--tasks", type=int, required=True)
    rb.add_argument("--edges", type=int, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", parents=[common], help="run a sensitivity sweep")
    esub = p.add_subparsers(dest="experiment", required=True, metavar="{" + ",".join(ex.EXPERIMENTS) + "}")
    exp_common = argparse.ArgumentParser(add_help=False)
    exp_common.add_argument("--input", help="edge list to perturb (default: power-law graph)")
    exp_common.add_argument("--people", type=int, default=ex.DESK_PEOPLE)
    exp_common.add_argument("--tasks", type=int, default=ex.DESK_TASKS)
    e = esub.add_parser("density", parents=[common, exp_common])
    e.add_argument("--direction", choices=("add", "remove"), default="add")
    e.add_argument("--batch", type=int, default=100)
    e.add_argument("--total", type=int, default=5000)
    e = esub.add_parser("redundancy", parents=[common, exp_common])
    e.add_argument("--mode", choices=("singletons", "duplicates"), default="singletons")
    e.add_argument("--batch", type=int, default=100)
    e.add_argument("--total", type=int, default=1000)
    e = esub.add_parser("assortativity", parents=[common, exp_common])
    e.add_argument("--j-min", type=float, default=-0.002)
    e.add_argument("--j-max", type=float, default=0.002)
    e.add_argument("--j-steps", type=int, default=17)
    e.add_argument("--replicas", type=int, default=10)
    e.add_argument("--sweeps", type=float, default=20)
    e = esub.add_parser("strategies", parents=[common, exp_common])
    e.add_argument("--replicas", type=int, default=50)
    e.add_argument("--strategies", default="degree,random")
    e = esub.add_parser("scaling", parents=[common, exp_common])
    e.add_argument("--sizes", default="10000,100000")
    e.add_argument("--repeats", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("oracle", parents=[common], help="exact brute-force values")
    p.add_argument("measure", choices=("mcs", "mrs", "robustness", "cov", "z", "prop1"))
    p.add_argument("input", nargs="?")
    p.add_argument("--fixture", choices=("fig1_toy",))
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--agg", choices=("min", "max"), default="min")
    p.add_argument("--max-subsets", type=int, default=oracle.DEFAULT_LIMITS.max_people_subsets)
    p.add_argument("--max-perms", type=int, default=oracle.DEFAULT_LIMITS.max_people_perms)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", parents=[common], help="runtime scaling benchmark")
    p.add_argument("--sizes", default="10000,100000")
    p.add_argument("--repeats", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    # argparse binds an optional positional before later flags are seen,
    # so `oracle mcs --t 1/2 graph.tsv` leaves the path over
    if (args.command == "oracle" and args.input is None and len(extras) == 1
            and not extras[0].startswith("-")):
        args.input = extras.pop()
    if extras:
        parser.error(f"unrecognized arguments: {' '.join(extras)}")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"busfactor: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
