"""Corpus runs: stream graphs, run the selected checks, write a JSON report.

Checks:

``theorem1``
    graphs with at least ``d+3`` vertices that contain a ``K_{d+2}``; every
    globally rigid one must have an edge whose deletion keeps it globally
    rigid (the witness).  A graph without one is a violation.
``theorem3``
    every globally rigid graph on ``n >= d+2`` vertices must be
    R_d-connected.
``lemma2``
    rank-preserving perturbation of a max-rank stress by a second random
    stress and by a clique simplex stress.
``lemma3``
    simplex-stress identities on every ``K_{d+2}``, circuit stresses on
    circuits through sampled edge pairs, and a logged clique
    proportionality measurement.

Reports are deterministic: graphs are processed in corpus order (or merged
back into it when several workers are used) and nothing depends on time,
hashing order or the worker count.
"""

from __future__ import annotations

import json
import random
import sys
from dataclasses import dataclass, field
from functools import partial
from typing import IO, Iterator

from .graph import (
    Graph,
    GraphFormatError,
    enumerate_graphs,
    find_cliques,
    has_clique,
    read_edge_lists,
    read_graph6_lines,
    serialize_graph6,
)
from .matroid import MatroidOracle, is_rd_connected
from .rigidity import RandomRegime, random_coefficients, representation, sample_framework
from .stress import (
    GenericityError,
    InternalConsistencyError,
    NotACircuitError,
    StressMatrix,
    StressValidationError,
    assemble_stress_matrix,
    clique_proportionality,
    find_removable_edges,
    is_generically_globally_rigid,
    max_rank_stress,
    rank_preserving_perturbation,
    simplex_stress,
)

SCHEMA_VERSION = 1
CHECKS = ("theorem1", "theorem3", "lemma2", "lemma3")


class RunConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a report.

    Exactly one of ``builtin`` (an inclusive ``(n_min, n_max)`` range of
    enumerated labeled graphs), ``graph6_path`` or ``edge_list_path`` must
    be set; ``"-"`` reads standard input.  ``workers`` only affects speed.
    """

    dimension: int
    builtin: tuple[int, int] | None = None
    graph6_path: str | None = None
    edge_list_path: str | None = None
    connected_only: bool = True
    regime: RandomRegime = RandomRegime()
    checks: frozenset = frozenset({"theorem1"})
    output: str | None = None
    workers: int = 1
    gadget_pairs: int = 3

    def __post_init__(self):
        if self.dimension < 1:
            raise RunConfigError("dimension must be >= 1")
        sources = [s for s in (self.builtin, self.graph6_path, self.edge_list_path) if s is not None]
        if len(sources) != 1:
            raise RunConfigError(f"exactly one input source required, got {len(sources)}")
        if self.builtin is not None:
            lo, hi = self.builtin
            if not 0 <= lo <= hi:
                raise RunConfigError(f"bad builtin range {lo}..{hi}")
        object.__setattr__(self, "checks", frozenset(self.checks))
        unknown = self.checks - set(CHECKS)
        if unknown:
            raise RunConfigError(f"unknown checks {sorted(unknown)}")
        if not self.checks:
            raise RunConfigError("no checks selected")
        if self.workers < 1:
            raise RunConfigError("workers must be >= 1")

    def source_dict(self) -> dict:
        if self.builtin is not None:
            return {"kind": "builtin", "n_min": self.builtin[0], "n_max": self.builtin[1],
                    "connected_only": self.connected_only}
        if self.graph6_path is not None:
            return {"kind": "graph6", "path": self.graph6_path}
        return {"kind": "edges", "path": self.edge_list_path}

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "source": self.source_dict(),
            "regime": self.regime.as_dict(),
            "checks": [c for c in CHECKS if c in self.checks],
            "gadget_pairs": self.gadget_pairs,
        }


def _open(path: str):
    if path == "-":
        return sys.stdin
    return open(path, encoding="ascii")


def iter_corpus(cfg: RunConfig) -> Iterator[Graph]:
    """Graphs of the configured source, in a fixed order."""
    if cfg.builtin is not None:
        lo, hi = cfg.builtin
        for n in range(lo, hi + 1):
            yield from enumerate_graphs(n, cfg.connected_only)
        return
    path = cfg.graph6_path if cfg.graph6_path is not None else cfg.edge_list_path
    reader = read_graph6_lines if cfg.graph6_path is not None else read_edge_lists
    f = _open(path)
    try:
        yield from reader(f)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    finally:
        if f is not sys.stdin:
            f.close()


# --------------------------------------------------------------------------
# per-graph work (module level so worker processes can pickle it)


def _theorem1(g: Graph, d: int, regime: RandomRegime, ggr: bool | None):
    """Returns (status, payload, ggr) with status in small/no-clique/not-ggr/witness/violation."""
    if g.n < d + 3:
        return "small", None, ggr
    if not has_clique(g, d + 2):
        return "no-clique", None, ggr
    if ggr is None:
        ggr = is_generically_globally_rigid(g, d, regime).decision
    if not ggr:
        return "not-ggr", None, ggr
    found = find_removable_edges(g, d, regime, 0, first_only=True)
    if found:
        return "witness", list(found[0]), ggr
    detail = (f"globally rigid with a K_{d + 2} but no edge deletion stays globally rigid "
              "(deletion of edge k tested at trial 1+k)")
    return "violation", detail, ggr


def _theorem3(g: Graph, d: int, regime: RandomRegime, ggr: bool | None):
    if g.n < d + 2:
        return "small", None, ggr
    if ggr is None:
        ggr = is_generically_globally_rigid(g, d, regime).decision
    if not ggr:
        return "not-ggr", None, ggr
    if is_rd_connected(g, d, regime):
        return "rd-connected", None, ggr
    return "violation", "globally rigid but not R_d-connected at trial 0", ggr


def _lemma2(g: Graph, d: int, regime: RandomRegime, fw, s0, r, cliques) -> tuple[dict, list]:
    counts = {"perturbations_checked": 0}
    problems = []
    seconds = []
    rep = representation(fw)
    res = rep.restrict(rep.edge_indices(g))
    k = res.stress_dimension
    omega = res.stress_combination(random_coefficients(regime, 1, 0, k))
    lookup = {rep.pairs[p]: v for p, v in omega.items()}
    seconds.append(("random-stress", assemble_stress_matrix(g, fw, [lookup.get(e, 0) for e in g.edges])))
    if cliques:
        seconds.append((f"simplex-stress{cliques[0]}", simplex_stress(fw, cliques[0]).stress))
    for label, s in seconds:
        try:
            pert = rank_preserving_perturbation(s, s0, r)
        except (InternalConsistencyError, ValueError) as exc:
            problems.append(f"perturbation of {label} failed: {exc}")
            continue
        if (s + s0.scale(pert.t)).rank() != r:
            problems.append(f"perturbation of {label} at t={pert.t} lost rank")
        counts["perturbations_checked"] += 1
    return counts, problems


def _lemma3(g: Graph, d: int, regime: RandomRegime, fw, s0, cliques, pairs: int,
            g6: str) -> tuple[dict, list, list]:
    counts = {"simplex_checked": 0, "circuits_checked": 0, "pairs_without_circuit": 0,
              "proportional": 0, "not_proportional": 0}
    problems = []
    measurements = []
    for x in cliques:
        try:
            simplex = simplex_stress(fw, x)
        except (GenericityError, StressValidationError, InternalConsistencyError) as exc:
            problems.append(f"simplex stress on {x}: {exc}")
            continue
        a = simplex.a
        if sum(a) != 0 or any(sum(a[v] * fw.coords[v][i] for v in x) != 0 for i in range(d)):
            problems.append(f"simplex stress on {x}: affine dependence identities fail")
        elif any(a[v] == 0 for v in x):
            problems.append(f"simplex stress on {x}: zero coefficient")
        else:
            counts["simplex_checked"] += 1

    if g.m >= 2:
        oracle = MatroidOracle.from_framework(g, fw)
        rng = random.Random(f"{regime.seed}:{g6}")
        all_pairs = [(e, f) for e in range(g.m) for f in range(e + 1, g.m)]
        for e, f in rng.sample(all_pairs, min(pairs, len(all_pairs))):
            c = oracle.circuit_through_pair(e, f)
            if c is None:
                counts["pairs_without_circuit"] += 1
                continue
            try:
                circuit_stress_checked(g, fw, c)
            except (NotACircuitError, InternalConsistencyError, StressValidationError) as exc:
                problems.append(f"circuit stress on edges {sorted(c)}: {exc}")
                continue
            counts["circuits_checked"] += 1

    if s0 is not None and cliques:
        x = cliques[0]
        prop = clique_proportionality(g, fw, x, s0)
        key = "proportional" if prop.lam is not None else "not_proportional"
        counts[key] += 1
        measurements.append({
            "graph6": g6,
            "clique": list(x),
            "lambda": None if prop.lam is None else str(prop.lam),
            "disagreeing": [list(e) for e in prop.disagreeing],
        })
    return counts, problems, measurements


def circuit_stress_checked(g: Graph, fw, c) -> StressMatrix:
    """Circuit stress plus an explicit check that its support is exactly ``c``."""
    from .stress import circuit_stress

    cs = circuit_stress(g, fw, c)
    support = cs.support()
    want = {g.edges[i] for i in c}
    if support != want:
        raise InternalConsistencyError(f"support {sorted(support)} differs from circuit {sorted(want)}")
    return cs


def examine(g: Graph, d: int, regime: RandomRegime, checks: frozenset, gadget_pairs: int = 3) -> dict:
    """All selected checks on one graph; a small picklable record."""
    out: dict = {"n": g.n}
    ggr = None
    g6 = None
    if "theorem1" in checks:
        status, payload, ggr = _theorem1(g, d, regime, ggr)
        out["theorem1"] = (status, payload)
        if status in ("witness", "violation"):
            g6 = serialize_graph6(g)
    if "theorem3" in checks:
        status, payload, ggr = _theorem3(g, d, regime, ggr)
        out["theorem3"] = (status, payload)
        if status == "violation":
            g6 = g6 or serialize_graph6(g)
    if checks & {"lemma2", "lemma3"}:
        g6 = g6 or serialize_graph6(g)
        out.update(_gadgets(g, d, regime, checks, gadget_pairs, g6))
    if g6 is not None:
        out["graph6"] = g6
    return out


def _gadgets(g: Graph, d: int, regime: RandomRegime, checks, pairs: int, g6: str) -> dict:
    out = {}
    if g.n < d + 2:
        for c in ("lemma2", "lemma3"):
            if c in checks:
                out[c] = ({"skipped_small": 1}, [], [])
        return out
    fw = sample_framework(g.n, d, regime, 0)
    cliques = find_cliques(g, d + 2)
    s0, r = max_rank_stress(g, fw, regime, 0)
    if r == 0:
        s0 = None
    if "lemma2" in checks:
        if s0 is None:
            out["lemma2"] = ({"skipped_no_stress": 1}, [], [])
        else:
            counts, problems = _lemma2(g, d, regime, fw, s0, r, cliques)
            out["lemma2"] = (counts, problems, [])
    if "lemma3" in checks:
        counts, problems, meas = _lemma3(g, d, regime, fw, s0, cliques, pairs, g6)
        if s0 is None:
            counts["proportionality_skipped"] = 1
        out["lemma3"] = (counts, problems, meas)
    return out


# --------------------------------------------------------------------------
# reports


@dataclass
class TheoremReport:
    """Outcome of one check over a corpus."""

    check: str
    dimension: int
    corpus: dict
    regime: RandomRegime
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)  # [{"graph6", "detail"}]
    witnesses: list = field(default_factory=list)  # [(graph6, u, v)]
    measurements: list = field(default_factory=list)
    n_range: list | None = None

    @property
    def confirmed(self) -> bool:
        return not self.violations

    def bump(self, key: str, by: int = 1):
        self.counts[key] = self.counts.get(key, 0) + by

    def consistency_problems(self) -> list[str]:
        c = self.counts
        out = []
        if self.check == "theorem1":
            chain = ["scanned", "clique_containing", "ggr", "minimally_ggr"]
            vals = [c.get(k, 0) for k in chain]
            for (ka, a), (kb, b) in zip(zip(chain, vals), zip(chain[1:], vals[1:])):
                if b > a:
                    out.append(f"{kb}={b} exceeds {ka}={a}")
            if c.get("minimally_ggr", 0) != len(self.violations):
                out.append("minimally_ggr count differs from the violation list")
            if c.get("ggr", 0) - c.get("minimally_ggr", 0) != len(self.witnesses):
                out.append("witness count differs from non-minimal GGR count")
        if self.check == "theorem3" and c.get("rd_connected", 0) > c.get("ggr", 0):
            out.append("rd_connected exceeds ggr")
        return out


def _new_reports(cfg: RunConfig) -> dict[str, TheoremReport]:
    corpus = cfg.source_dict()
    reports = {}
    for check in CHECKS:
        if check in cfg.checks:
            rep = TheoremReport(check, cfg.dimension, corpus, cfg.regime)
            base = {"theorem1": ["scanned", "skipped_small", "clique_containing", "ggr", "minimally_ggr"],
                    "theorem3": ["scanned", "skipped_small", "ggr", "rd_connected", "violations"],
                    "lemma2": ["scanned"],
                    "lemma3": ["scanned"]}[check]
            rep.counts = {k: 0 for k in base}
            reports[check] = rep
    return reports


def _absorb(reports: dict[str, TheoremReport], rec: dict, regime: RandomRegime):
    g6 = rec.get("graph6")
    for check, rep in reports.items():
        rep.bump("scanned")
        n = rec["n"]
        rep.n_range = [n, n] if rep.n_range is None else [min(rep.n_range[0], n), max(rep.n_range[1], n)]
    repro = f"seed={regime.seed:#x} coord_bits={regime.coord_bits} trials={regime.trials} trial=0"
    if "theorem1" in rec:
        rep = reports["theorem1"]
        status, payload = rec["theorem1"]
        if status == "small":
            rep.bump("skipped_small")
        elif status != "no-clique":
            rep.bump("clique_containing")
            if status in ("witness", "violation"):
                rep.bump("ggr")
            if status == "witness":
                rep.witnesses.append((g6, payload[0], payload[1]))
            elif status == "violation":
                rep.bump("minimally_ggr")
                rep.violations.append({"graph6": g6, "detail": f"{payload}; {repro}"})
    if "theorem3" in rec:
        rep = reports["theorem3"]
        status, payload = rec["theorem3"]
        if status == "small":
            rep.bump("skipped_small")
        elif status != "not-ggr":
            rep.bump("ggr")
            if status == "rd-connected":
                rep.bump("rd_connected")
            else:
                rep.bump("violations")
                rep.violations.append({"graph6": g6, "detail": f"{payload}; {repro}"})
    for check in ("lemma2", "lemma3"):
        if check in rec:
            rep = reports[check]
            counts, problems, meas = rec[check]
            for k, v in counts.items():
                rep.bump(k, v)
            for p in problems:
                rep.violations.append({"graph6": g6, "detail": f"{p}; {repro}"})
            rep.measurements.extend(meas)


def run(cfg: RunConfig) -> dict[str, TheoremReport]:
    """Run every selected check over the corpus; reports keyed by check name."""
    reports = _new_reports(cfg)
    work = partial(examine, d=cfg.dimension, regime=cfg.regime, checks=cfg.checks,
                   gadget_pairs=cfg.gadget_pairs)
    corpus = iter_corpus(cfg)
    if cfg.workers == 1:
        for g in corpus:
            _absorb(reports, work(g), cfg.regime)
    else:
        import multiprocessing

        with multiprocessing.Pool(cfg.workers) as pool:
            for rec in pool.imap(work, corpus, chunksize=512):
                _absorb(reports, rec, cfg.regime)
    for rep in reports.values():
        problems = rep.consistency_problems()
        if problems:
            raise InternalConsistencyError(f"{rep.check} report inconsistent: {problems}")
    return reports


def verify_theorem1(cfg: RunConfig) -> TheoremReport:
    return run(_only(cfg, "theorem1"))["theorem1"]


def verify_theorem3(cfg: RunConfig) -> TheoremReport:
    return run(_only(cfg, "theorem3"))["theorem3"]


def verify_lemma_gadgets(cfg: RunConfig) -> dict[str, TheoremReport]:
    checks = cfg.checks & {"lemma2", "lemma3"} or frozenset({"lemma2", "lemma3"})
    return run(_replace(cfg, checks=checks))


def _replace(cfg: RunConfig, **kw) -> RunConfig:
    from dataclasses import replace

    return replace(cfg, **kw)


def _only(cfg: RunConfig, check: str) -> RunConfig:
    return cfg if cfg.checks == {check} else _replace(cfg, checks=frozenset({check}))


# --------------------------------------------------------------------------
# JSON


def _dump(x) -> str:
    return json.dumps(x, sort_keys=True, separators=(", ", ": "))


def write_report(cfg: RunConfig, reports: dict[str, TheoremReport], out: IO[str]):
    """One JSON document, written incrementally (witness lists can be large).

    Layout: ``schema_version``, ``config``, ``counts`` (per check),
    ``n_range`` (per check), ``violations`` (each tagged with its check),
    ``witnesses`` and ``measurements``.
    """
    out.write("{\n")
    out.write(f'"schema_version": {SCHEMA_VERSION},\n')
    out.write(f'"config": {_dump(cfg.as_dict())},\n')
    out.write(f'"counts": {_dump({k: r.counts for k, r in reports.items()})},\n')
    out.write(f'"n_range": {_dump({k: r.n_range for k, r in reports.items()})},\n')
    viol = [dict(v, check=k) for k, r in reports.items() for v in r.violations]
    _write_list(out, "violations", (_dump(v) for v in viol))
    out.write(",\n")
    wit = reports["theorem1"].witnesses if "theorem1" in reports else []
    _write_list(out, "witnesses", (f'{{"edge": [{u}, {v}], "graph6": {json.dumps(g6)}}}'
                                   for g6, u, v in wit))
    out.write(",\n")
    meas = [dict(m, check=k) for k, r in reports.items() for m in r.measurements]
    _write_list(out, "measurements", (_dump(m) for m in meas))
    out.write("\n}\n")


def _write_list(out: IO[str], name: str, items):
    out.write(f'"{name}": [')
    first = True
    for item in items:
        out.write("\n  " if first else ",\n  ")
        out.write(item)
        first = False
    out.write("]" if first else "\n]")


def save_report(cfg: RunConfig, reports: dict[str, TheoremReport], path: str | None = None):
    path = path or cfg.output
    if path is None:
        raise RunConfigError("no output path")
    if path == "-":
        write_report(cfg, reports, sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_report(cfg, reports, f)


def summary_lines(reports: dict[str, TheoremReport]) -> list[str]:
    lines = []
    for k, r in reports.items():
        counts = " ".join(f"{a}={b}" for a, b in r.counts.items())
        verdict = "confirmed" if r.confirmed else f"{len(r.violations)} VIOLATION(S)"
        lines.append(f"{k}: {verdict} ({counts})")
        for v in r.violations[:10]:
            lines.append(f"  {v['graph6']}: {v['detail']}")
    return lines
