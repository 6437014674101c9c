"""``netflix-games`` command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 enumeration cap exceeded,
3 dynamics failed to settle under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import dynamics, equilibrium, game, oracle
from .graph import Graph, GraphError, is_connected, parse_capacity, parse_graph, uniform_capacity

DEFAULT_SEED = 20240229


class _Out:
    """Collects table text or structured JSON records and writes them in order."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    @property
    def structured(self) -> bool:
        return self.fmt == "structured"

    def record(self, kind: str, payload: dict) -> None:
        if self.structured:
            self.stream.write(json.dumps({"type": kind, **payload}, sort_keys=True) + "\n")

    def text(self, s: str) -> None:
        if not self.structured:
            self.stream.write(s if s.endswith("\n") else s + "\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_graph(args) -> Graph:
    if not args.graph:
        raise GraphError("--graph is required")
    g = parse_graph(_read(args.graph))
    if not is_connected(g):
        print("warning: graph is disconnected; components are handled separately", file=sys.stderr)
    return g


def _load_kappa(args, g: Graph) -> dict[int, int]:
    if args.kappa is not None:
        return parse_capacity(_read(args.kappa), g)
    if args.kappa_uniform is not None:
        return uniform_capacity(g, args.kappa_uniform)
    raise GraphError("one of --kappa or --kappa-uniform is required")


def _load_spec(args, g: Graph, required: bool = True) -> game.UtilitySpec | None:
    if args.netflix_c is not None:
        return game.make_netflix_spec(Fraction(args.netflix_c), g.n)
    if args.spec is not None:
        return game.spec_from_dict(json.loads(_read(args.spec)), g.n)
    if required:
        raise GraphError("one of --netflix-c or --spec is required")
    return None


def _load_profile(args, g: Graph, kappa) -> game.StrategyProfile:
    if not args.profile:
        raise GraphError("--profile is required")
    return game.load_profile(_read(args.profile), g, kappa)


def _range(text: str) -> range:
    a, _, b = text.partition(":")
    lo, hi = int(a), int(b or a)
    return range(lo, hi + 1)


def _profile_rows(p: game.StrategyProfile) -> str:
    g = p.graph
    rows = ["vertex\taction\tnominations"]
    for v in g.vertices:
        rows.append(f"{g.label(v)}\t{p.actions[v]}\t{','.join(g.names(p.nominations[v]))}")
    return "\n".join(rows)


def _dp_rows(h: equilibrium.DPSubgraph) -> str:
    d = h.to_dict()
    return "\n".join([
        "D\t" + " ".join(d["D"]),
        "P\t" + " ".join(d["P"]),
        "H\t" + " ".join(f"{a}-{b}" for a, b in d["H"]),
    ])


# -- commands ------------------------------------------------------------


def cmd_solve(args, out: _Out) -> int:
    g = _load_graph(args)
    kappa = _load_kappa(args, g)
    spec = _load_spec(args, g, required=False) or game.make_netflix_spec(Fraction(1, 2), g.n)
    h = equilibrium.find_dp_subgraph(g, kappa)
    ok, problems = equilibrium.validate_dp_subgraph(h)
    if not ok:
        raise AssertionError("constructed subgraph invalid: " + "; ".join(problems))
    profile = game.build_profile(h, spec, nicely=True)
    out.record("dp_subgraph", h.to_dict())
    out.record("profile", {"q_star": spec.q_star, "vertices": game.profile_to_dict(profile)})
    out.text(_dp_rows(h))
    out.text(_profile_rows(profile))
    return 0


def cmd_check(args, out: _Out) -> int:
    g = _load_graph(args)
    kappa = _load_kappa(args, g)
    spec = _load_spec(args, g)
    profile = _load_profile(args, g, kappa)
    cls = game.classify(profile, kappa, spec.q_star)
    nash, deviator = game.is_nash(profile, spec)
    payload = cls.to_dict()
    payload["nash"] = nash
    payload["deviator"] = g.label(deviator) if deviator is not None else None
    out.record("classification", payload)
    lines = [
        f"specialised\t{cls.specialised}",
        f"balanced\t{cls.balanced}",
        f"nicely_balanced\t{cls.nicely_balanced}",
        f"nash\t{nash}",
    ]
    if deviator is not None:
        lines.append(f"deviator\t{g.label(deviator)}")
    lines += [f"note\t{p}" for p in cls.problems]
    out.text("\n".join(lines))
    return 0


def cmd_simulate(args, out: _Out) -> int:
    g = _load_graph(args)
    kappa = _load_kappa(args, g)
    spec = _load_spec(args, g, required=False)
    q = args.qstar if args.qstar is not None else (spec.q_star if spec else None)
    if q is None:
        raise GraphError("simulate needs --qstar or a spec")
    profile = _load_profile(args, g, kappa)
    m = [profile.nominations[v] for v in g.vertices]
    trace = dynamics.evolve(profile.action_vector(), m, q, args.horizon)
    labels = [g.label(v) for v in g.vertices]
    for t, x in enumerate(trace.profiles):
        out.record("state", {"t": t, "actions": dict(zip(labels, x))})
    out.record("summary", trace.summary())
    out.text(dynamics.trace_table(trace, labels))
    s = trace.summary()
    out.text(f"# status={s['status']} entry={s['entry']} period={s['period']}")
    if args.strict and trace.status != "settled":
        return 3
    return 0


def cmd_stability(args, out: _Out) -> int:
    g = _load_graph(args)
    kappa = _load_kappa(args, g)
    spec = _load_spec(args, g, required=False)
    if spec is None:
        if args.qstar is None:
            raise GraphError("stability needs a spec or --qstar")
        x_max = args.xmax if args.xmax is not None else args.qstar
        spec = game.make_capped_linear_spec(args.qstar, g.n, x_max)
    profile = _load_profile(args, g, kappa)
    stable, cex = dynamics.is_action_stable(profile, spec, args.delta, args.horizon)
    payload = {"stable": stable, "delta": args.delta}
    lines = [f"stable\t{stable}"]
    if cex is not None:
        labels = [g.label(v) for v in g.vertices]
        payload["counterexample"] = {
            "vertex": g.label(cex.vertex),
            "start": dict(zip(labels, cex.actions)),
            **cex.trace.summary(),
        }
        s = cex.trace.summary()
        lines.append(f"perturbed\t{g.label(cex.vertex)}")
        lines.append("start\t" + " ".join(map(str, cex.actions)))
        lines.append(f"trace\tstatus={s['status']} entry={s['entry']} period={s['period']}")
    out.record("stability", payload)
    out.text("\n".join(lines))
    return 0


def cmd_enumerate(args, out: _Out) -> int:
    g = _load_graph(args)
    kappa = _load_kappa(args, g)
    rep = oracle.enumerate_d_sets(g, kappa, args.cap)
    out.record("d_sets", rep.to_dict())
    lines = [f"count\t{len(rep.all_d_sets)}", f"delta_min\t{rep.delta_min}", f"delta_max\t{rep.delta_max}"]
    lines += ["D\t" + " ".join(g.names(s)) for s in rep.all_d_sets]
    out.text("\n".join(lines))
    return 0


def cmd_sweep(args, out: _Out) -> int:
    g = _load_graph(args)
    ks = _range(args.kappa_range) if args.kappa_range else range(1, max(g.degree(v) for v in g.vertices) + 1)
    lines = ["kappa\tcount\tdelta_min\tdelta_max"]
    for k in ks:
        rep = oracle.enumerate_d_sets(g, uniform_capacity(g, k), args.cap)
        out.record("sweep", {"kappa": k, **rep.to_dict()})
        lines.append(f"{k}\t{len(rep.all_d_sets)}\t{rep.delta_min}\t{rep.delta_max}")
    out.text("\n".join(lines))
    return 0


def cmd_bounds(args, out: _Out) -> int:
    n = args.n
    ks = _range(args.kappa_range) if args.kappa_range else range(1, n)
    rows = oracle.bound_table(n, ks)
    for k, lo, hi in rows:
        out.record("bound", {"n": n, "k": k, "lower": lo, "upper": hi})
    out.text("k\tlower\tupper\n" + "\n".join(f"{k}\t{lo}\t{hi}" for k, lo, hi in rows))
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "check": cmd_check,
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "enumerate": cmd_enumerate,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH")
    cap = common.add_mutually_exclusive_group()
    cap.add_argument("--kappa", metavar="PATH")
    cap.add_argument("--kappa-uniform", type=int, metavar="K")
    spec = common.add_mutually_exclusive_group()
    spec.add_argument("--netflix-c", metavar="RATIONAL")
    spec.add_argument("--spec", metavar="PATH")
    common.add_argument("--profile", metavar="PATH")
    common.add_argument("--qstar", type=int)
    common.add_argument("--xmax", type=int, help="top action when only --qstar is given")
    common.add_argument("--horizon", type=int, default=dynamics.DEFAULT_HORIZON)
    common.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    common.add_argument("--delta", type=int, default=1)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("table", "structured"), default="table")
    common.add_argument("--strict", action="store_true")
    common.add_argument("--kappa-range", metavar="A:B")
    common.add_argument("--n", type=int, default=50)

    parser = argparse.ArgumentParser(prog="netflix-games", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    out = _Out(args.format)
    try:
        return COMMANDS[args.command](args, out)
    except oracle.CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (GraphError, game.SpecError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
