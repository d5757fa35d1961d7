"""Network-level switching verdicts: node/connection/sequence criteria, the
distribution-depth bound, and followable-path enumeration.

The criteria are counting arguments (they fire when enough cusp pairs are
forced into one cross section); "inconclusive" never claims switching exists.
Path-level truth comes from :func:`heteroswitch.maps.followable`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .maps import followable
from .network import HeteroclinicNetwork, distribution_nodes, enumerate_cycles

__all__ = [
    "SwitchingVerdict",
    "DepthBound",
    "PathEnumeration",
    "node_criterion",
    "connection_criterion",
    "sequence_criterion",
    "depth_bound",
    "enumerate_followable",
    "shared_sequences",
]

NO_SWITCHING = "no_switching"
INCONCLUSIVE = "inconclusive"


@dataclass
class SwitchingVerdict:
    scope: str  # "node" | "connection" | "sequence"
    subject: tuple
    verdict: str
    rationale: str
    arithmetic: dict = field(default_factory=dict)

    @property
    def fired(self) -> bool:
        return self.verdict == NO_SWITCHING


def node_criterion(net: HeteroclinicNetwork, node_id: str) -> SwitchingVerdict:
    """No switching anywhere near the network once one node has every section
    direction contracting (n_c = N) or expanding (n_e = N): that section would
    need 2N pairs of cusps to intersect all-to-all, impossible in N dims."""
    node = net.node(node_id)
    N = net.cross_section_dimension
    arith = {"n_c": node.n_c, "n_e": node.n_e, "N": N, "cusp_pairs": 2 * N}
    if node.n_c == N or node.n_e == N:
        side = "n_c" if node.n_c == N else "n_e"
        return SwitchingVerdict(
            "node", (node_id,), NO_SWITCHING,
            f"{side}={N}=N at {node_id}: a return would force {2 * N} pairs of "
            f"cusps (> N) to intersect all-to-all in an {N}-dimensional section",
            arith,
        )
    return SwitchingVerdict(
        "node", (node_id,), INCONCLUSIVE,
        f"n_c={node.n_c}, n_e={node.n_e} both differ from N={N}",
        arith,
    )


def _cycles_through_edge(cycles: Sequence[tuple], src: str, tgt: str) -> list:
    hits = []
    for cyc in cycles:
        for idx, node in enumerate(cyc):
            if node == src and cyc[(idx + 1) % len(cyc)] == tgt:
                hits.append(cyc)
                break
    return hits


def _cycles_through_path(cycles: Sequence[tuple], seq: Sequence[str]) -> list:
    seq = tuple(seq)
    k = len(seq)
    hits = []
    for cyc in cycles:
        n = len(cyc)
        if k > n + 1:
            continue
        for idx in range(n):
            if all(cyc[(idx + j) % n] == seq[j] for j in range(k)):
                hits.append(cyc)
                break
    return hits


def sequence_criterion(net: HeteroclinicNetwork, seq: Sequence[str],
                       cycles: Optional[list] = None) -> SwitchingVerdict:
    """Common-sequence criterion: for a directed path shared by at least two
    cycles, n_c at its first node plus n_e at its last node reaching N kills
    switching along it (and hence near the whole network)."""
    seq = tuple(seq)
    if len(seq) < 2:
        raise ValueError("sequence needs at least one connection")
    for a, b in zip(seq, seq[1:]):
        if not net.has_connection(a, b):
            raise ValueError(f"no connection {a}->{b}")
    if cycles is None:
        cycles = enumerate_cycles(net)
    sharing = _cycles_through_path(cycles, seq)
    N = net.cross_section_dimension
    first, last = net.node(seq[0]), net.node(seq[-1])
    arith = {
        "n_c_first": first.n_c, "n_e_last": last.n_e, "N": N,
        "sum": first.n_c + last.n_e, "sharing_cycles": len(sharing),
    }
    scope = "connection" if len(seq) == 2 else "sequence"
    if len(sharing) < 2:
        return SwitchingVerdict(
            scope, seq, INCONCLUSIVE,
            f"shared by {len(sharing)} cycle(s); criterion needs a common "
            "connection of at least two cycles",
            arith,
        )
    if first.n_c + last.n_e >= N:
        return SwitchingVerdict(
            scope, seq, NO_SWITCHING,
            f"n_c({seq[0]})+n_e({seq[-1]})={first.n_c}+{last.n_e}>=N={N}: the "
            f"{first.n_c + last.n_e} cusp pairs forced into one {N}-dimensional "
            "section cannot intersect all-to-all",
            arith,
        )
    return SwitchingVerdict(
        scope, seq, INCONCLUSIVE,
        f"n_c({seq[0]})+n_e({seq[-1]})={first.n_c + last.n_e} < N={N}",
        arith,
    )


def connection_criterion(net: HeteroclinicNetwork, source: str, target: str,
                         cycles: Optional[list] = None) -> SwitchingVerdict:
    net.connection(source, target)
    return sequence_criterion(net, (source, target), cycles)


def shared_sequences(net: HeteroclinicNetwork, cycles: Optional[list] = None) -> list:
    """Maximal directed paths (2+ nodes) contained in at least two cycles."""
    if cycles is None:
        cycles = enumerate_cycles(net)
    shared = set()
    for cyc in cycles:
        n = len(cyc)
        for idx in range(n):
            for length in range(2, n + 1):
                seq = tuple(cyc[(idx + j) % n] for j in range(length))
                if len(set(seq)) < len(seq):
                    break
                if len(_cycles_through_path(cycles, seq)) >= 2:
                    shared.add(seq)
    maximal = []
    for seq in shared:
        if not any(s != seq and _contains(s, seq) for s in shared):
            maximal.append(seq)
    return sorted(maximal)


def _contains(longer: tuple, shorter: tuple) -> bool:
    k = len(shorter)
    return any(longer[i:i + k] == shorter for i in range(len(longer) - k + 1))


@dataclass
class DepthBound:
    start: str
    k: int
    N: int
    sequences: list  # (sequence of distribution nodes, partial sums, per-seq k)
    cycle_distribution_counts: list  # distribution nodes per cycle through start

    def table(self) -> list:
        return [
            {"sequence": list(seq), "sums": sums, "k": k}
            for seq, sums, k in self.sequences
        ]


def _distribution_successors(net: HeteroclinicNetwork, dist: set) -> dict:
    """For each distribution node, the distribution nodes first reached along
    outgoing routes through non-distribution nodes."""
    succ = {}
    for d in sorted(dist):
        found = set()
        stack = [c.target for c in net.out_connections(d)]
        seen = set()
        while stack:
            v = stack.pop()
            if v in dist:
                found.add(v)
                continue
            if v in seen:
                continue
            seen.add(v)
            stack.extend(net.successors(v))
        succ[d] = sorted(found)
    return succ


def depth_bound(net: HeteroclinicNetwork, start: str) -> DepthBound:
    """Smallest k per distribution-node sequence from ``start`` with
    sum_{i=1..k} (n_c(j_i) + n_e(j_{i-1})) >= N; the node's bound is the
    maximum over sequences. Exits are freely choosable at the first k
    distribution nodes of a sequence and predetermined after that."""
    dist = set(distribution_nodes(net))
    if start not in dist:
        raise ValueError(f"{start} is not a distribution node")
    N = net.cross_section_dimension
    succ = _distribution_successors(net, dist)

    completed = []
    frontier = [((start,), (), 0)]  # (sequence, sums, running_total)
    while frontier:
        new_frontier = []
        for seq, sums, total in frontier:
            here = seq[-1]
            for nxt in succ[here]:
                term = net.node(nxt).n_c + net.node(here).n_e
                seq2 = seq + (nxt,)
                sums2 = sums + (total + term,)
                if total + term >= N:
                    completed.append((seq2, list(sums2), len(sums2)))
                else:
                    new_frontier.append((seq2, sums2, total + term))
        frontier = new_frontier
        if len(completed) > 10_000:
            raise RuntimeError("distribution-sequence expansion too large")

    cycles = enumerate_cycles(net)
    counts = sorted(
        sum(1 for v in cyc if v in dist)
        for cyc in cycles
        if start in cyc
    )
    k = max(s[2] for s in completed) if completed else 0
    return DepthBound(start, k, N, sorted(completed), counts)


@dataclass
class PathEnumeration:
    start: str
    depth: int
    results: list  # (path tuple, FeasibilityVerdict)

    @property
    def feasible_paths(self) -> list:
        return [p for p, v in self.results if v.intersects_near_origin]

    @property
    def infeasible_paths(self) -> list:
        return [p for p, v in self.results if not v.intersects_near_origin]

    def of_length(self, n_connections: int) -> list:
        return [
            (p, v) for p, v in self.results if len(p) - 1 == n_connections
        ]


def enumerate_followable(net: HeteroclinicNetwork, start: str, depth: int,
                         cap: int = 100_000) -> PathEnumeration:
    """All directed paths from ``start`` with up to ``depth`` connections, in
    lexicographic order, each with its followability verdict."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    net.node(start)
    results = []

    def rec(path):
        if len(results) > cap:
            raise RuntimeError(f"path enumeration exceeds cap {cap}")
        if len(path) > 1:
            results.append((tuple(path), followable(net, path)))
        if len(path) - 1 == depth:
            return
        for nxt in net.successors(path[-1]):
            path.append(nxt)
            rec(path)
            path.pop()

    rec([start])
    return PathEnumeration(start, depth, results)
