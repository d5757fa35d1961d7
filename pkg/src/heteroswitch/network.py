"""Data model, ingestion and validation for quasi-simple heteroclinic networks.

A network document declares saddle nodes with globally classified real
eigenvalues (radial / contracting / expanding / transverse, each tied to a
labelled eigendirection) and one-dimensional connections, each designating
its local-expanding direction at the source and local-contracting direction
at the target, plus an optional rescaled permutation for the transition map
between cross sections. Eigenvalue classification is trusted input; only
combinatorial consistency is validated here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

__all__ = [
    "Eigenvalue",
    "Node",
    "Connection",
    "HeteroclinicNetwork",
    "Finding",
    "ValidationReport",
    "NetworkFormatError",
    "CycleCapExceeded",
    "load_network",
    "serialize_network",
    "validate_quasi_simple",
    "classify_global",
    "distribution_nodes",
    "enumerate_cycles",
]

KLASSES = ("radial", "contracting", "expanding", "transverse")


class NetworkFormatError(ValueError):
    pass


class CycleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Eigenvalue:
    value: float
    klass: str
    label: str


@dataclass(frozen=True)
class Node:
    id: str
    eigenvalues: tuple

    def __post_init__(self):
        labels = [e.label for e in self.eigenvalues]
        if len(set(labels)) != len(labels):
            raise NetworkFormatError(f"node {self.id}: duplicate eigenvalue labels")

    def by_label(self, label: str) -> Eigenvalue:
        for e in self.eigenvalues:
            if e.label == label:
                return e
        raise KeyError(f"node {self.id} has no eigendirection {label!r}")

    def labels(self, klass: Optional[str] = None) -> tuple:
        return tuple(
            e.label for e in self.eigenvalues if klass is None or e.klass == klass
        )

    @property
    def non_radial_labels(self) -> tuple:
        return tuple(e.label for e in self.eigenvalues if e.klass != "radial")

    @property
    def n_c(self) -> int:
        return sum(1 for e in self.eigenvalues if e.klass == "contracting")

    @property
    def n_e(self) -> int:
        return sum(1 for e in self.eigenvalues if e.klass == "expanding")

    @property
    def n_t(self) -> int:
        return sum(1 for e in self.eigenvalues if e.klass == "transverse")

    @property
    def section_dimension(self) -> int:
        return self.n_c + self.n_e + self.n_t - 1


@dataclass(frozen=True)
class Connection:
    source: str
    target: str
    expanding_label: str
    contracting_label: str
    permutation: Optional[tuple] = None  # ((out_label, in_label), ...)
    rescale: Optional[tuple] = None  # aligned with permutation entries

    @property
    def key(self) -> tuple:
        return (self.source, self.target)


@dataclass(frozen=True)
class HeteroclinicNetwork:
    ambient_dimension: int
    nodes: tuple
    connections: tuple
    name: str = ""

    def node(self, node_id: str) -> Node:
        try:
            return self._node_index[node_id]
        except AttributeError:
            index = {n.id: n for n in self.nodes}
            object.__setattr__(self, "_node_index", index)
            return index[node_id]

    def connection(self, source: str, target: str) -> Connection:
        for c in self.connections:
            if c.key == (source, target):
                return c
        raise KeyError(f"no connection {source} -> {target}")

    def has_connection(self, source: str, target: str) -> bool:
        return any(c.key == (source, target) for c in self.connections)

    def out_connections(self, node_id: str) -> list:
        return sorted(
            (c for c in self.connections if c.source == node_id),
            key=lambda c: c.target,
        )

    def in_connections(self, node_id: str) -> list:
        return sorted(
            (c for c in self.connections if c.target == node_id),
            key=lambda c: c.source,
        )

    def successors(self, node_id: str) -> list:
        return [c.target for c in self.out_connections(node_id)]

    @property
    def cross_section_dimension(self) -> int:
        dims = {n.section_dimension for n in self.nodes}
        if len(dims) != 1:
            raise NetworkFormatError(
                f"cross-section dimension is not uniform: {sorted(dims)}"
            )
        return dims.pop()


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    subject: str
    message: str


@dataclass
class ValidationReport:
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def errors(self) -> list:
        return [f for f in self.findings if f.severity == "error"]

    def warnings(self) -> list:
        return [f for f in self.findings if f.severity == "warning"]


def _parse_eigenvalue(raw: dict, node_id: str) -> Eigenvalue:
    try:
        value = float(raw["value"])
        klass = str(raw["klass"])
        label = str(raw["label"])
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFormatError(f"node {node_id}: malformed eigenvalue entry: {exc}")
    if klass not in KLASSES:
        raise NetworkFormatError(f"node {node_id}: unknown eigenvalue class {klass!r}")
    return Eigenvalue(value, klass, label)


def load_network(source) -> HeteroclinicNetwork:
    """Load a network document (dict, JSON text, or path to a JSON file)."""
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        doc = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        doc = json.loads(source)
    elif isinstance(source, dict):
        doc = source
    else:
        raise NetworkFormatError(f"cannot load network from {type(source)}")

    try:
        ambient = int(doc["ambient_dimension"])
        raw_nodes = doc["nodes"]
        raw_conns = doc["connections"]
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFormatError(f"malformed network document: {exc}")

    nodes = []
    seen = set()
    for raw in raw_nodes:
        node_id = str(raw.get("id", ""))
        if not node_id:
            raise NetworkFormatError("node without id")
        if node_id in seen:
            raise NetworkFormatError(f"duplicate node id {node_id!r}")
        seen.add(node_id)
        eigs = tuple(_parse_eigenvalue(e, node_id) for e in raw.get("eigenvalues", ()))
        if len(eigs) > ambient:
            raise NetworkFormatError(
                f"node {node_id}: more eigenvalues than ambient dimension"
            )
        nodes.append(Node(node_id, eigs))
    node_index = {n.id: n for n in nodes}

    conns = []
    seen_pairs = set()
    for raw in raw_conns:
        try:
            src, tgt = str(raw["from"]), str(raw["to"])
            e_label, c_label = str(raw["expanding_label"]), str(raw["contracting_label"])
        except (KeyError, TypeError) as exc:
            raise NetworkFormatError(f"malformed connection entry: {exc}")
        if src not in node_index or tgt not in node_index:
            raise NetworkFormatError(f"dangling connection endpoint {src}->{tgt}")
        if (src, tgt) in seen_pairs:
            raise NetworkFormatError(f"duplicate connection {src}->{tgt}")
        seen_pairs.add((src, tgt))
        node_index[src].by_label(e_label)
        node_index[tgt].by_label(c_label)
        permutation = raw.get("permutation")
        if permutation is not None:
            permutation = tuple((str(a), str(b)) for a, b in permutation)
        rescale = raw.get("rescale")
        if rescale is not None:
            rescale = tuple(float(r) for r in rescale)
            if any(r <= 0 for r in rescale):
                raise NetworkFormatError(
                    f"connection {src}->{tgt}: rescale coefficients must be positive"
                )
            if permutation is not None and len(rescale) != len(permutation):
                raise NetworkFormatError(
                    f"connection {src}->{tgt}: rescale length does not match permutation"
                )
        conns.append(Connection(src, tgt, e_label, c_label, permutation, rescale))

    return HeteroclinicNetwork(
        ambient,
        tuple(nodes),
        tuple(conns),
        name=str(doc.get("name", "")),
    )


def serialize_network(net: HeteroclinicNetwork) -> dict:
    doc = {
        "name": net.name,
        "ambient_dimension": net.ambient_dimension,
        "nodes": [
            {
                "id": n.id,
                "eigenvalues": [
                    {"value": e.value, "klass": e.klass, "label": e.label}
                    for e in n.eigenvalues
                ],
            }
            for n in net.nodes
        ],
        "connections": [],
    }
    for c in net.connections:
        entry = {
            "from": c.source,
            "to": c.target,
            "expanding_label": c.expanding_label,
            "contracting_label": c.contracting_label,
        }
        if c.permutation is not None:
            entry["permutation"] = [list(p) for p in c.permutation]
        if c.rescale is not None:
            entry["rescale"] = list(c.rescale)
        doc["connections"].append(entry)
    return doc


def _reachability_ok(net: HeteroclinicNetwork) -> bool:
    """Weak connectivity of the connection graph."""
    if not net.nodes:
        return False
    adj = {n.id: set() for n in net.nodes}
    for c in net.connections:
        adj[c.source].add(c.target)
        adj[c.target].add(c.source)
    seen = {net.nodes[0].id}
    stack = [net.nodes[0].id]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(net.nodes)


def validate_quasi_simple(net: HeteroclinicNetwork) -> ValidationReport:
    """Combinatorial consistency checks for the quasi-simple structure."""
    report = ValidationReport()
    add = report.findings.append

    for node in net.nodes:
        if node.n_c < 1:
            add(Finding("error", node.id, "no contracting eigenvalue"))
        if node.n_e < 1:
            add(Finding("error", node.id, "no expanding eigenvalue"))
        for e in node.eigenvalues:
            if e.klass == "contracting" and not e.value < 0:
                add(Finding("error", node.id, f"contracting {e.label} has value {e.value} >= 0"))
            if e.klass == "expanding" and not e.value > 0:
                add(Finding("error", node.id, f"expanding {e.label} has value {e.value} <= 0"))
            if e.klass == "transverse" and e.value == 0:
                add(Finding("error", node.id, f"transverse {e.label} is zero (non-hyperbolic)"))
            if e.klass == "transverse" and e.value > 0:
                add(Finding(
                    "warning", node.id,
                    f"positive transverse eigenvalue {e.label}={e.value:g}: the "
                    "network cannot be asymptotically stable; verdicts still apply",
                ))

        outs = net.out_connections(node.id)
        ins = net.in_connections(node.id)
        if node.n_e != len(outs):
            add(Finding("error", node.id,
                        f"{node.n_e} expanding eigenvalues but {len(outs)} outgoing connections"))
        if node.n_c != len(ins):
            add(Finding("error", node.id,
                        f"{node.n_c} contracting eigenvalues but {len(ins)} incoming connections"))
        e_labels = [c.expanding_label for c in outs]
        if len(set(e_labels)) != len(e_labels):
            add(Finding("error", node.id, "outgoing connections share a local-expanding label"))
        c_labels = [c.contracting_label for c in ins]
        if len(set(c_labels)) != len(c_labels):
            add(Finding("error", node.id, "incoming connections share a local-contracting label"))

    for c in net.connections:
        src, tgt = net.node(c.source), net.node(c.target)
        try:
            if src.by_label(c.expanding_label).klass != "expanding":
                add(Finding("error", f"{c.source}->{c.target}",
                            f"label {c.expanding_label} is not expanding at {c.source}"))
        except KeyError:
            add(Finding("error", f"{c.source}->{c.target}", "unknown expanding label"))
        try:
            if tgt.by_label(c.contracting_label).klass != "contracting":
                add(Finding("error", f"{c.source}->{c.target}",
                            f"label {c.contracting_label} is not contracting at {c.target}"))
        except KeyError:
            add(Finding("error", f"{c.source}->{c.target}", "unknown contracting label"))

    dims = {n.id: n.section_dimension for n in net.nodes}
    if len(set(dims.values())) > 1:
        add(Finding("error", "network",
                    f"cross-section dimension differs across nodes: {dims}"))
    elif net.nodes:
        n_sec = next(iter(dims.values()))
        if n_sec < 2:
            add(Finding("error", "network",
                        f"cross-section dimension {n_sec} < 2: the cusp calculus "
                        "needs at least two section coordinates"))

    if not _reachability_ok(net):
        add(Finding("error", "network", "connection graph is not connected"))

    try:
        cycles = enumerate_cycles(net)
        on_cycle = {n for cyc in cycles for n in cyc}
        for node in net.nodes:
            if node.id not in on_cycle:
                add(Finding("error", node.id, "node lies on no directed cycle"))
    except CycleCapExceeded:
        add(Finding("warning", "network", "cycle enumeration cap exceeded; cycle "
                                          "coverage not checked"))
    return report


def enumerate_cycles(net: HeteroclinicNetwork, cap: int = 10_000) -> list:
    """All simple directed cycles as node tuples, canonically rotated to start
    at their lexicographically smallest node, sorted lexicographically."""
    order = sorted(n.id for n in net.nodes)
    rank = {v: i for i, v in enumerate(order)}
    succ = {n.id: sorted(net.successors(n.id)) for n in net.nodes}
    cycles = []

    def dfs(start: str, here: str, path: list, onpath: set):
        for nxt in succ[here]:
            if rank[nxt] < rank[start]:
                continue
            if nxt == start:
                cycles.append(tuple(path))
                if len(cycles) > cap:
                    raise CycleCapExceeded(f"more than {cap} simple cycles")
            elif nxt not in onpath:
                onpath.add(nxt)
                path.append(nxt)
                dfs(start, nxt, path, onpath)
                path.pop()
                onpath.remove(nxt)

    for start in order:
        dfs(start, start, [start], {start})
    return sorted(cycles)


def distribution_nodes(net: HeteroclinicNetwork) -> list:
    """Nodes with at least two outgoing connections."""
    return sorted(n.id for n in net.nodes if len(net.out_connections(n.id)) >= 2)


def classify_global(net: HeteroclinicNetwork, node_id: str, cycles=None) -> dict:
    """Partition a node's eigendirections by their role over all cycles
    through the node: expanding/contracting if locally so for some cycle,
    transverse if for none, radial as declared."""
    node = net.node(node_id)
    if cycles is None:
        cycles = enumerate_cycles(net)
    through = [c for c in cycles if node_id in c]
    if not through:
        raise ValueError(f"node {node_id} lies on no directed cycle")

    contracting, expanding = set(), set()
    for cyc in through:
        k = cyc.index(node_id)
        prev = cyc[k - 1]
        nxt = cyc[(k + 1) % len(cyc)]
        contracting.add(net.connection(prev, node_id).contracting_label)
        expanding.add(net.connection(node_id, nxt).expanding_label)

    radial = set(node.labels("radial"))
    rest = set(node.non_radial_labels) - contracting - expanding
    return {
        "contracting": contracting,
        "expanding": expanding,
        "transverse": rest,
        "radial": radial,
    }
