"""Combinatorial characterizations of generic global rigidity for d = 1, 2.

These only exist to cross-check the stress-rank engine.  In the line a
graph is generically globally rigid iff it is 2-connected (or complete on
at most two vertices); in the plane iff it is complete on at most three
vertices, or 3-connected and redundantly rigid.  The redundancy test
reuses the rank machinery; only the connectivity half is independent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, is_k_connected
from .rigidity import RandomRegime, is_generically_rigid


@dataclass(frozen=True)
class OracleVerdict:
    decision: bool
    dimension: int
    reason: str

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("oracles exist for d = 1 and d = 2 only")

    def __bool__(self):
        return self.decision


def ggr_oracle_d1(g: Graph) -> OracleVerdict:
    if g.n <= 2:
        ok = g.is_complete()
        return OracleVerdict(ok, 1, "complete-small" if ok else "not-complete")
    if is_k_connected(g, 2):
        return OracleVerdict(True, 1, "2-connected")
    return OracleVerdict(False, 1, "not-2-connected")


def is_redundantly_rigid(g: Graph, d: int, regime: RandomRegime = RandomRegime()) -> bool:
    if not is_generically_rigid(g, d, regime).decision:
        return False
    return all(is_generically_rigid(g.remove_edge(k), d, regime).decision for k in range(g.m))


def ggr_oracle_d2(g: Graph, regime: RandomRegime = RandomRegime()) -> OracleVerdict:
    if g.n <= 3:
        ok = g.is_complete()
        return OracleVerdict(ok, 2, "complete-small" if ok else "not-complete")
    if not is_k_connected(g, 3):
        return OracleVerdict(False, 2, "not-3-connected")
    if not is_redundantly_rigid(g, 2, regime):
        return OracleVerdict(False, 2, "not-redundantly-rigid")
    return OracleVerdict(True, 2, "3-connected-redundantly-rigid")


def ggr_oracle(g: Graph, d: int, regime: RandomRegime = RandomRegime()) -> OracleVerdict:
    if d == 1:
        return ggr_oracle_d1(g)
    if d == 2:
        return ggr_oracle_d2(g, regime)
    raise ValueError(f"no combinatorial oracle for d={d}")
