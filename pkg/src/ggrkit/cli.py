"""Command-line entry point (``ggrkit``).

Query subcommands (``rigid``, ``globally-rigid``, ``minimal``, ``circuits``,
``rd-connected``) print one answer per input graph and exit 0 whatever the
answer.  ``verify-*`` subcommands run a corpus check and exit 1 when any
violation is found.  Usage and I/O problems exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graph import GraphFormatError, serialize_graph6
from .harness import (
    RunConfig,
    RunConfigError,
    iter_corpus,
    run,
    save_report,
    summary_lines,
)
from .matroid import MatroidOracle
from .rigidity import RandomRegime, is_generically_rigid
from .stress import is_generically_globally_rigid, is_minimally_ggr

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

QUERIES = ("rigid", "globally-rigid", "minimal", "circuits", "rd-connected")
VERIFIERS = {
    "verify-theorem1": {"theorem1"},
    "verify-theorem3": {"theorem3"},
    "verify-gadgets": {"lemma2", "lemma3"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None


def _int(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", "--dimension", type=int, required=True, help="ambient dimension (>= 1)")
    common.add_argument("--seed", type=_int, default=RandomRegime.seed, help="regime seed (default 0xC0FFEE)")
    common.add_argument("--trials", type=int, default=RandomRegime.trials)
    common.add_argument("--coord-bits", type=int, default=RandomRegime.coord_bits)
    common.add_argument("--input", metavar="PATH", help="input file, or - for standard input")
    common.add_argument("--format", choices=("graph6", "edges"), default="graph6")
    common.add_argument("--json", metavar="PATH", help="write a JSON report (- for standard output)")

    parser = _Parser(prog="ggrkit", description="Generic global rigidity toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in QUERIES:
        sub.add_parser(name, parents=[common])
    for name in VERIFIERS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--builtin", type=_range, metavar="A..B",
                       help="enumerate all labeled graphs with A..B vertices")
        p.add_argument("--all-graphs", action="store_true",
                       help="with --builtin, include disconnected graphs")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--pairs", type=int, default=3, help="edge pairs per graph for circuit checks")
    return parser


def _regime(args) -> RandomRegime:
    return RandomRegime(seed=args.seed, coord_bits=args.coord_bits, trials=args.trials)


def _config(args, checks) -> RunConfig:
    source = {}
    if getattr(args, "builtin", None) is not None:
        if args.input is not None:
            raise RunConfigError("--builtin and --input are mutually exclusive")
        source["builtin"] = args.builtin
    elif args.input is None:
        raise RunConfigError("an input source is required (--input or --builtin)")
    elif args.format == "graph6":
        source["graph6_path"] = args.input
    else:
        source["edge_list_path"] = args.input
    return RunConfig(
        dimension=args.dimension,
        regime=_regime(args),
        checks=frozenset(checks),
        output=args.json,
        connected_only=not getattr(args, "all_graphs", False),
        workers=getattr(args, "workers", 1),
        gadget_pairs=getattr(args, "pairs", 3),
        **source,
    )


def _query(args, cfg: RunConfig) -> int:
    d, regime = cfg.dimension, cfg.regime
    results = []
    for g in iter_corpus(cfg):
        g6 = serialize_graph6(g)
        rec = {"graph6": g6}
        if args.command == "rigid":
            v = is_generically_rigid(g, d, regime)
            rec.update(v.as_dict())
            line = "true" if v.decision else "false"
        elif args.command == "globally-rigid":
            v = is_generically_globally_rigid(g, d, regime)
            rec.update(v.as_dict())
            line = "true" if v.decision else "false"
        elif args.command == "minimal":
            v = is_minimally_ggr(g, d, regime)
            rec.update(v.as_dict())
            line = "true" if v.decision else "false"
            if v.witness_edges:
                line += f" (removable edge {v.witness_edges[0][0]}-{v.witness_edges[0][1]})"
        elif args.command == "rd-connected":
            oracle = MatroidOracle(g, d, regime)
            comps = oracle.rd_components()
            ok = oracle.is_rd_connected()
            rec.update({"decision": ok, "components": [[list(g.edges[i]) for i in c] for c in comps]})
            line = "true" if ok else "false"
        else:
            oracle = MatroidOracle(g, d, regime)
            comps = oracle.rd_components()
            circuits = _fundamental_circuits(oracle)
            rec.update({
                "rank": oracle.rank(),
                "components": [[list(g.edges[i]) for i in c] for c in comps],
                "fundamental_circuits": [[list(g.edges[i]) for i in c] for c in circuits],
            })
            parts = [f"rank {oracle.rank()}", f"{len(comps)} component(s)"]
            parts += ["circuit " + " ".join(f"{g.edges[i][0]}-{g.edges[i][1]}" for i in c) for c in circuits]
            line = "\n".join(parts)
        results.append(rec)
        print(line, file=sys.stderr if args.json == "-" else sys.stdout)
    if args.json:
        config = {k: v for k, v in cfg.as_dict().items() if k in ("dimension", "source", "regime")}
        doc = {"schema_version": 1, "command": args.command, "config": config, "results": results}
        text = json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
    return EXIT_OK


def _fundamental_circuits(oracle: MatroidOracle) -> list[list[int]]:
    """Circuits of each non-basis edge against the greedy (edge order) basis."""
    basis: list[int] = []
    circuits = []
    for e in range(oracle.size):
        if oracle.is_independent(basis + [e]):
            basis.append(e)
        else:
            circuits.append(sorted(oracle.fundamental_circuit(basis, e)))
    return circuits


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        checks = VERIFIERS.get(args.command, {"theorem1"})
        cfg = _config(args, checks)
        if args.command in QUERIES:
            return _query(args, cfg)
        reports = run(cfg)
        human = sys.stderr if cfg.output == "-" else sys.stdout
        for line in summary_lines(reports):
            print(line, file=human)
        if cfg.output:
            save_report(cfg, reports)
        return EXIT_OK if all(r.confirmed for r in reports.values()) else EXIT_VIOLATION
    except (RunConfigError, GraphFormatError, OSError, ValueError) as exc:
        print(f"ggrkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
