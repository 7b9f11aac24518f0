"""``nettomo`` command-line front end.

Exit codes: 0 success, 2 usage error, 3 bad input file or value,
4 infeasible instance, 5 size guard hit, 1 anything unexpected. Failures
print one JSON object ``{"error": kind, "message": text}`` on stderr.
Every subcommand finishes all validation and computation before it writes
any output file.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io as nio
from .exceptions import InfeasibleError, SizeGuardError, ValidationError
from .expander import certify_1_identifiable
from .netgraph import build_routing_matrix
from .pathsel import cover_ilp, identifiability_heuristic, identifiability_ilp, verify_selection
from .sim import (SimConfig, k_identifiable, run_identifiability_survey, run_minpath_survey,
                  run_recovery_experiment, to_json)
from .tomo import estimate_delays
from .topogen import TopoConfig, generate_topology, prune, shortest_path_routing

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
EXIT_BAD_INPUT, EXIT_INFEASIBLE, EXIT_SIZE_GUARD = 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _report("usage", message)
        sys.exit(EXIT_USAGE)


def _report(kind, message):
    print(json.dumps({"error": kind, "message": str(message)}, sort_keys=True), file=sys.stderr)


def _emit(outputs):
    """Write every (path, text) pair; called only after all work succeeded."""
    for path, text in outputs:
        nio.write_text(path, text)


# subcommands -----------------------------------------------------------------


def cmd_gen(a):
    cfg = TopoConfig(a.nodes, a.exponent, a.boundary, a.seed, a.edges_per_node)
    return [(a.output, nio.format_graph(generate_topology(cfg)))], None


def cmd_routes(a):
    net = nio.read_graph(a.input)
    paths = shortest_path_routing(net)
    if a.prune:
        inst = prune(net, paths)
        out = [(a.output, nio.format_routing(inst.routing))]
        if a.graph_out:
            out.append((a.graph_out, nio.format_graph(inst.network)))
        if a.log:
            out.append((a.log, nio.dumps(list(inst.log))))
        return out, None
    out = [(a.output, nio.format_routing(build_routing_matrix(net, paths)))]
    if a.graph_out:
        out.append((a.graph_out, nio.format_graph(net)))
    if a.log:
        out.append((a.log, nio.dumps([])))
    return out, None


def cmd_check(a):
    rm = nio.read_routing(a.input)
    if a.k is not None and not a.exhaustive:
        raise ValidationError("--k requires --exhaustive")
    cert = certify_1_identifiable(rm)
    data = cert.to_dict()
    data["epsilon"] = f"{cert.epsilon.numerator}/{cert.epsilon.denominator}"
    if a.exhaustive:
        k = 1 if a.k is None else a.k
        if k < 1:
            raise ValidationError("--k must be >= 1")
        data["exhaustive"] = {"k": k, "phi": 2 * k, "epsilon": "1/4",
                              "passes": k_identifiable(rm, k, a.max_left)}
    text = nio.dumps(data)
    return ([(a.output, text)] if a.output else []), text


def cmd_estimate(a):
    rm = nio.read_routing(a.input)
    y = nio.read_vector(a.y, "y")
    if y.shape[0] != rm.r:
        raise ValidationError(f"{a.y} has {y.shape[0]} values, routing has {rm.r} paths")
    x_true = None
    if a.x_true:
        x_true = nio.read_vector(a.x_true, "x")
    est = estimate_delays(rm, y, nonnegative=not a.signed, x_true=x_true)
    return [(a.output, nio.dumps(est.to_dict()))], None


_METHODS = {"cover": cover_ilp, "ilp": identifiability_ilp, "heuristic": identifiability_heuristic}


def cmd_minpaths(a):
    rm = nio.read_routing(a.input)
    sel = _METHODS[a.method](rm)
    if not sel.feasible:
        msg = sel.message or f"{a.method} found no selection ({sel.status})"
        if sel.uncovered:
            msg += f"; uncovered links {list(sel.uncovered)}"
        raise InfeasibleError(msg)
    cert = verify_selection(rm, sel)
    return [(a.output, nio.dumps(sel.to_dict(cert)))], None


def _sim_config(a):
    data = nio.read_json(a.config)
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")
    if a.seed is not None:
        data["seed"] = a.seed
    if a.jobs is not None:
        data["jobs"] = a.jobs
    try:
        return SimConfig.from_dict(data)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def cmd_survey(a):
    cfg = _sim_config(a)
    rep = run_identifiability_survey(cfg)
    out = [(a.output, rep.to_csv())]
    if a.json:
        out.append((a.json, to_json(rep)))
    if a.ratio_out:
        hist = run_minpath_survey(cfg)
        out.append((a.ratio_out, hist.to_csv()))
        if a.json:
            out.append((a.json + ".minpaths.json", to_json(hist)))
    return out, None


def cmd_recover(a):
    cfg = _sim_config(a)
    rep = run_recovery_experiment(cfg)
    out = [(a.output, rep.to_csv())]
    if a.plot_data:
        out.append((a.plot_data, rep.plot_csv()))
    if a.json:
        out.append((a.json, to_json(rep)))
    return out, None


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nettomo", description="Link-delay tomography toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random power-law topology")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--boundary", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--exponent", type=float, default=2.1)
    g.add_argument("--edges-per-node", type=int, default=2)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("routes", help="shortest-path routing between boundary nodes")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--prune", action="store_true", help="drop unused links, contract degree-2 nodes")
    r.add_argument("--graph-out", help="also write the (pruned) graph")
    r.add_argument("--log", help="write the pruning log as JSON")
    r.set_defaults(func=cmd_routes)

    c = sub.add_parser("check", help="expansion certificate of a routing matrix")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--exhaustive", action="store_true", help="also run the exhaustive subset check")
    c.add_argument("--k", type=int, default=None, help="sparsity for --exhaustive (phi = 2k)")
    c.add_argument("--max-left", type=int, default=40)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("estimate", help="minimum-l1 link delays from path measurements")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("-y", required=True, help="CSV with header 'y'")
    e.add_argument("-o", "--output", required=True)
    e.add_argument("--x-true", help="CSV with header 'x'; enables the error bound")
    e.add_argument("--signed", action="store_true", help="allow negative delays")
    e.set_defaults(func=cmd_estimate)

    m = sub.add_parser("minpaths", help="minimum probe-path selection")
    m.add_argument("-i", "--input", required=True)
    m.add_argument("--method", choices=sorted(_METHODS), default="ilp")
    m.add_argument("-o", "--output", required=True)
    m.set_defaults(func=cmd_minpaths)

    for name, fn, hlp in (("survey", cmd_survey, "identifiability survey"),
                          ("recover", cmd_recover, "recovery-error sweep")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--config", required=True, help="JSON simulation config")
        s.add_argument("-o", "--output", required=True)
        s.add_argument("--json", help="also write the full report as JSON")
        s.add_argument("--seed", type=int, default=None, help="override the config seed")
        s.add_argument("--jobs", type=int, default=None, help="worker processes")
        if name == "survey":
            s.add_argument("--ratio-out", help="also run the min-path survey; write its histogram CSV")
        else:
            s.add_argument("--plot-data", help="write mean error per (k, mu) as plot data CSV")
        s.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        outputs, stdout = args.func(args)
        _emit(outputs)
    except SizeGuardError as exc:
        _report("size_guard", exc)
        return EXIT_SIZE_GUARD
    except InfeasibleError as exc:
        _report("infeasible", exc)
        return EXIT_INFEASIBLE
    except (ValidationError, OSError) as exc:
        _report("bad_input", exc)
        return EXIT_BAD_INPUT
    except Exception as exc:  # pragma: no cover - last resort
        _report("internal", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL
    if stdout:
        sys.stdout.write(stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
