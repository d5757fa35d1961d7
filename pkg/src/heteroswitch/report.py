"""Network analysis report: aggregate the switching criteria, depth bounds and
a followable-path enumeration into one renderable structure (text or JSON),
with optional matplotlib figure output alongside."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .network import (
    HeteroclinicNetwork,
    distribution_nodes,
    enumerate_cycles,
    validate_quasi_simple,
)
from .switching import (
    NO_SWITCHING,
    depth_bound,
    enumerate_followable,
    node_criterion,
    sequence_criterion,
    shared_sequences,
)

__all__ = ["NetworkReport", "analyze_network", "render_text", "render_json"]


@dataclass
class NetworkReport:
    name: str
    n_nodes: int
    n_connections: int
    ambient_dimension: int
    section_dimension: int
    valid: bool
    findings: list
    headline: str
    distribution: list
    node_verdicts: list
    connection_verdicts: list
    sequence_verdicts: list
    depth_bounds: list
    enumeration: Optional[dict]
    departure_notes: list

    def to_dict(self) -> dict:
        def verdict_dict(v):
            return {
                "scope": v.scope,
                "subject": list(v.subject),
                "verdict": v.verdict,
                "rationale": v.rationale,
                "arithmetic": v.arithmetic,
            }

        return {
            "network": self.name,
            "nodes": self.n_nodes,
            "connections": self.n_connections,
            "ambient_dimension": self.ambient_dimension,
            "section_dimension": self.section_dimension,
            "valid": self.valid,
            "findings": [
                {"severity": f.severity, "subject": f.subject, "message": f.message}
                for f in self.findings
            ],
            "headline": self.headline,
            "distribution_nodes": self.distribution,
            "node_criteria": [verdict_dict(v) for v in self.node_verdicts],
            "connection_criteria": [verdict_dict(v) for v in self.connection_verdicts],
            "sequence_criteria": [verdict_dict(v) for v in self.sequence_verdicts],
            "depth_bounds": [
                {
                    "start": db.start,
                    "k": db.k,
                    "N": db.N,
                    "sequences": db.table(),
                    "cycle_distribution_counts": db.cycle_distribution_counts,
                }
                for db in self.depth_bounds
            ],
            "enumeration": self.enumeration,
            "departure_notes": self.departure_notes,
        }


def analyze_network(net: HeteroclinicNetwork, depth: Optional[int] = None,
                    enumerate_cap: int = 20_000) -> NetworkReport:
    report = validate_quasi_simple(net)
    cycles = enumerate_cycles(net)
    dist = distribution_nodes(net)
    N = net.cross_section_dimension if report.ok else 0

    node_verdicts = [node_criterion(net, n.id) for n in net.nodes] if report.ok else []
    conn_verdicts = []
    seq_verdicts = []
    bounds = []
    enumeration = None
    departure_notes = []

    if report.ok:
        for c in net.connections:
            conn_verdicts.append(sequence_criterion(net, (c.source, c.target), cycles))
        for seq in shared_sequences(net, cycles):
            if len(seq) > 2:
                seq_verdicts.append(sequence_criterion(net, seq, cycles))
        for d in dist:
            bounds.append(depth_bound(net, d))

        if depth is None:
            depth = max((db.k for db in bounds), default=1) + 2
        paths = []
        feasible = 0
        for start in dist or [net.nodes[0].id]:
            enum = enumerate_followable(net, start, depth, cap=enumerate_cap)
            for p, v in enum.results:
                paths.append({"path": list(p), "followable": bool(v)})
                feasible += bool(v)
        enumeration = {
            "depth": depth,
            "paths_examined": len(paths),
            "feasible": feasible,
            "infeasible": len(paths) - feasible,
            "witness_infeasible": next(
                (p["path"] for p in paths if not p["followable"]), None
            ),
        }

        for node in net.nodes:
            if node.n_t > 0 and len(net.out_connections(node.id)) >= 1:
                departure_notes.append(
                    f"{node.id}: {node.n_t} transverse direction(s); outgoing "
                    "sections are not covered by arrival images, the uncovered "
                    "points leave the network neighborhood"
                )

        fired = [v for v in node_verdicts + conn_verdicts + seq_verdicts if v.fired]
        headline = (
            "No infinite switching: all eigenvalues are real, so every "
            "sufficiently deep family of followable regions loses a cusp pair "
            f"in the {N}-dimensional cross sections"
        )
        if fired:
            headline += f"; {len(fired)} counting criterion(s) already exclude switching"
        if enumeration["witness_infeasible"]:
            headline += (
                f"; finite witness: path {'->'.join(enumeration['witness_infeasible'])} "
                "is not followable"
            )
    else:
        headline = "Network failed quasi-simple validation; no verdicts computed"

    return NetworkReport(
        name=net.name or "network",
        n_nodes=len(net.nodes),
        n_connections=len(net.connections),
        ambient_dimension=net.ambient_dimension,
        section_dimension=N,
        valid=report.ok,
        findings=report.findings,
        headline=headline,
        distribution=dist,
        node_verdicts=node_verdicts,
        connection_verdicts=conn_verdicts,
        sequence_verdicts=seq_verdicts,
        depth_bounds=bounds,
        enumeration=enumeration,
        departure_notes=departure_notes,
    )


def render_json(report: NetworkReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def render_text(report: NetworkReport) -> str:
    lines = []
    add = lines.append
    add(f"Network {report.name}: {report.n_nodes} nodes, "
        f"{report.n_connections} connections, ambient R^{report.ambient_dimension}, "
        f"cross sections of dimension {report.section_dimension}")
    add(f"Valid quasi-simple: {'yes' if report.valid else 'NO'}")
    for f in report.findings:
        add(f"  [{f.severity}] {f.subject}: {f.message}")
    add("")
    add(f"HEADLINE: {report.headline}")
    add("")
    add(f"Distribution nodes: {', '.join(report.distribution) or 'none'}")
    if report.node_verdicts:
        add("Node criterion (n_c = N or n_e = N):")
        for v in report.node_verdicts:
            add(f"  {v.subject[0]}: {v.verdict} ({v.rationale})")
    if report.connection_verdicts:
        add("Connection criterion (shared connection, n_c + n_e >= N):")
        for v in report.connection_verdicts:
            add(f"  {v.subject[0]}->{v.subject[1]}: {v.verdict} ({v.rationale})")
    if report.sequence_verdicts:
        add("Shared-sequence criterion:")
        for v in report.sequence_verdicts:
            add(f"  {'->'.join(v.subject)}: {v.verdict} ({v.rationale})")
    if report.depth_bounds:
        add("Distribution-depth bounds (free exits at the first k distribution"
            " nodes of a sequence, predetermined after):")
        for db in report.depth_bounds:
            add(f"  from {db.start}: k = {db.k} (N = {db.N}; cycle distribution-node"
                f" counts {db.cycle_distribution_counts})")
            for seq, sums, k in db.sequences:
                add(f"    sequence {'->'.join(seq)}: partial sums {sums} -> k={k}")
    if report.enumeration:
        e = report.enumeration
        add(f"Path enumeration to depth {e['depth']}: {e['feasible']} followable / "
            f"{e['paths_examined']} examined")
        if e["witness_infeasible"]:
            add(f"  infeasible witness: {'->'.join(e['witness_infeasible'])}")
    for note in report.departure_notes:
        add(f"Departure: {note}")
    return "\n".join(lines) + "\n"


def render_figures(report: NetworkReport, net: HeteroclinicNetwork, outdir) -> list:
    """Draw the connection graph with per-node verdict annotations."""
    import math

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 6))
    ids = sorted(n.id for n in net.nodes)
    angle = {v: 2 * math.pi * k / len(ids) for k, v in enumerate(ids)}
    pos = {v: (math.cos(a), math.sin(a)) for v, a in angle.items()}
    for c in net.connections:
        x0, y0 = pos[c.source]
        x1, y1 = pos[c.target]
        ax.annotate(
            "", xy=(x1, y1), xytext=(x0, y0),
            arrowprops=dict(arrowstyle="-|>", color="0.3", lw=1.2,
                            shrinkA=18, shrinkB=18,
                            connectionstyle="arc3,rad=0.12"),
        )
    fired_nodes = {v.subject[0] for v in report.node_verdicts if v.fired}
    for v, (x, y) in pos.items():
        dist = v in report.distribution
        color = "#c23b22" if v in fired_nodes else ("#2a6f97" if dist else "0.55")
        ax.plot([x], [y], "o", ms=26, mfc="white", mec=color, mew=2.2)
        ax.text(x, y, v, ha="center", va="center", fontsize=9)
    ax.set_title(f"{report.name}: N={report.section_dimension}, "
                 f"distribution nodes {', '.join(report.distribution)}")
    ax.set_aspect("equal")
    ax.axis("off")
    path = outdir / f"{report.name}_network.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return [path]
