"""Leading-order local and transition maps between cross sections, their exact
log-affine composition along paths, and path followability.

Cross sections are unit boxes transverse to a connection near a node; in
eta = -log coordinates every local map is linear (one column of eigenvalue
ratios added to the identity) and every transition map along a connection is
a permutation plus offsets from its rescale coefficients. Compositions stay
affine, so the domain constraints of every traversed node pull back to the
starting section as exact linear inequalities, which the cone engine then
decides near the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cone import Const, Ineq
from .network import HeteroclinicNetwork
from .regions import (
    FeasibilityVerdict,
    LogConeSystem,
    PowerRegion,
    intersects_near_origin,
)

__all__ = [
    "CrossSection",
    "LogAffineMap",
    "LocalMap",
    "RegionSystem",
    "PathTransfer",
    "MapError",
    "cross_section",
    "local_map",
    "domain_C",
    "image_F",
    "global_map",
    "compose_path",
    "followable",
]


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class CrossSection:
    """Section transverse to a connection near a node, with labelled axes."""

    node: str
    kind: str  # "in" | "out"
    neighbor: str
    axes: tuple

    def axis_index(self, label: str) -> int:
        try:
            return self.axes.index(label)
        except ValueError:
            raise MapError(f"section {self} has no axis {label!r}")

    def __str__(self) -> str:
        return f"H^{self.kind}[{self.node}<-{self.neighbor}]" if self.kind == "in" \
            else f"H^{self.kind}[{self.node}->{self.neighbor}]"


def cross_section(net: HeteroclinicNetwork, node_id: str, kind: str, neighbor: str) -> CrossSection:
    node = net.node(node_id)
    if kind == "in":
        conn = net.connection(neighbor, node_id)
        excluded = conn.contracting_label
    elif kind == "out":
        conn = net.connection(node_id, neighbor)
        excluded = conn.expanding_label
    else:
        raise MapError(f"unknown section kind {kind!r}")
    axes = tuple(sorted(l for l in node.non_radial_labels if l != excluded))
    return CrossSection(node_id, kind, neighbor, axes)


@dataclass(frozen=True)
class LogAffineMap:
    """eta_out = matrix @ eta_in + offset, exact over Fractions/log-constants."""

    domain: CrossSection
    codomain: CrossSection
    matrix: tuple  # rows aligned with codomain.axes, columns with domain.axes
    offset: tuple  # of Const

    def apply_eta(self, eta: Sequence[float]) -> list:
        return [
            sum(float(a) * e for a, e in zip(row, eta)) + float(off)
            for row, off in zip(self.matrix, self.offset)
        ]

    def apply_point(self, x: Sequence[float]) -> list:
        eta = [-math.log(v) for v in x]
        return [math.exp(-v) for v in self.apply_eta(eta)]

    def then(self, other: "LogAffineMap") -> "LogAffineMap":
        """Composition other∘self (self first)."""
        if other.domain.axes != self.codomain.axes:
            raise MapError(
                f"cannot compose: {self.codomain} axes {self.codomain.axes} "
                f"!= {other.domain} axes {other.domain.axes}"
            )
        n_mid = len(self.codomain.axes)
        matrix = tuple(
            tuple(
                sum(other.matrix[r][m] * self.matrix[m][c] for m in range(n_mid))
                for c in range(len(self.domain.axes))
            )
            for r in range(len(other.codomain.axes))
        )
        offset = []
        for r in range(len(other.codomain.axes)):
            off = other.offset[r]
            for m in range(n_mid):
                off = off + self.offset[m].scaled(other.matrix[r][m])
            offset.append(off)
        return LogAffineMap(self.domain, other.codomain, matrix, tuple(offset))

    def pull_back_row(self, row: Ineq, label: str = "") -> Ineq:
        """Precompose an inequality over codomain axes with this map."""
        n_in = len(self.domain.axes)
        coeffs = [Fraction(0)] * n_in
        const_shift = Const()
        for r, a in enumerate(row.coeffs):
            if a == 0:
                continue
            for c in range(n_in):
                coeffs[c] += a * self.matrix[r][c]
            const_shift = const_shift + self.offset[r].scaled(a)
        return Ineq(tuple(coeffs), row.rhs - const_shift, row.strict,
                    label or row.label)

    def determinant(self) -> Fraction:
        n = len(self.matrix)
        if n != len(self.domain.axes):
            raise MapError("determinant of a non-square map")
        rows = [list(r) for r in self.matrix]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det *= rows[col][col]
            inv = Fraction(1) / rows[col][col]
            for r in range(col + 1, n):
                factor = rows[r][col] * inv
                if factor:
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
        return det


@dataclass(frozen=True)
class LocalMap:
    """Leading-order passage map phi at a node for one incoming/outgoing pair.

    v_out = w_in^(c1/e1); every other section coordinate z gets multiplied by
    w_in^q with q = c_s/e1 (other contracting), -e_p/e1 (other expanding), or
    t_q/e1 (transverse).
    """

    node: str
    incoming: str
    outgoing: str
    c1_label: str
    e1_label: str
    c1: Fraction
    e1: Fraction
    exponents: dict  # label -> Fraction, for every axis shared by both sections
    domain: CrossSection
    codomain: CrossSection

    def as_log_affine(self) -> LogAffineMap:
        w_col = self.domain.axis_index(self.e1_label)
        n_in = len(self.domain.axes)
        rows = []
        for label in self.codomain.axes:
            row = [Fraction(0)] * n_in
            if label == self.c1_label:
                row[w_col] = self.c1 / self.e1
            else:
                row[self.domain.axis_index(label)] = Fraction(1)
                row[w_col] = self.exponents[label]
            rows.append(tuple(row))
        offsets = tuple(Const() for _ in self.codomain.axes)
        return LogAffineMap(self.domain, self.codomain, tuple(rows), offsets)

    def apply(self, w_in: float, z_in: dict) -> tuple:
        """Evaluate on a point given as (w, {label: z}); returns (v, {label: z'})."""
        v_out = w_in ** float(self.c1 / self.e1)
        z_out = {
            label: z_in[label] * w_in ** float(q)
            for label, q in self.exponents.items()
        }
        return v_out, z_out


@dataclass
class RegionSystem:
    """Inequality system over a section's axes; two-coordinate rows render as
    power regions, composed rows may involve more coordinates."""

    section: CrossSection
    rows: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.section.axes)

    def as_log_cone(self) -> LogConeSystem:
        return LogConeSystem(self.dimension, list(self.rows))

    def power_regions(self) -> list:
        """Render rows of the form +/-(eta_i - alpha*eta_j) > ln a as regions."""
        out = []
        for row in self.rows:
            nz = [(idx, a) for idx, a in enumerate(row.coeffs) if a != 0]
            if len(nz) != 2:
                raise MapError(f"row {row.label!r} is not a two-coordinate inequality")
            (i1, a1), (i2, a2) = nz
            if a1 < 0:
                (i1, a1), (i2, a2) = (i2, a2), (i1, a1)
            if a1 <= 0 or a2 >= 0:
                raise MapError(f"row {row.label!r} has no power-region form")
            alpha = -a2 / a1
            a_val = math.exp(float(row.rhs.scaled(Fraction(1) / a1)))
            out.append(PowerRegion(i1, i2, a_val, float(alpha), "thin"))
        return out


def _resolve_step(net: HeteroclinicNetwork, i: str, j: str, k: str):
    try:
        conn_in = net.connection(i, j)
        conn_out = net.connection(j, k)
    except KeyError as exc:
        raise MapError(str(exc))
    node = net.node(j)
    c1 = node.by_label(conn_in.contracting_label)
    e1 = node.by_label(conn_out.expanding_label)
    if c1.klass != "contracting":
        raise MapError(f"{i}->{j}: designated label {c1.label} is not contracting")
    if e1.klass != "expanding":
        raise MapError(f"{j}->{k}: designated label {e1.label} is not expanding")
    return node, conn_in, conn_out, c1, e1


def local_map(net: HeteroclinicNetwork, i: str, j: str, k: str) -> LocalMap:
    node, conn_in, conn_out, c1, e1 = _resolve_step(net, i, j, k)
    domain = cross_section(net, j, "in", i)
    codomain = cross_section(net, j, "out", k)
    e1_frac = Fraction(e1.value)
    exponents = {}
    for label in codomain.axes:
        if label == c1.label:
            continue
        eig = node.by_label(label)
        if eig.klass == "contracting":
            exponents[label] = Fraction(-eig.value) / e1_frac
        elif eig.klass == "expanding":
            exponents[label] = Fraction(eig.value) / e1_frac * -1
        else:
            exponents[label] = Fraction(-eig.value) / e1_frac
    return LocalMap(
        j, i, k, c1.label, e1.label,
        Fraction(-c1.value), e1_frac, exponents, domain, codomain,
    )


def domain_C(net: HeteroclinicNetwork, i: str, j: str, k: str) -> RegionSystem:
    """Constraints on the incoming section selecting points that exit via k:
    one thin-type row z_p < w^(e_p/e1) per secondary expanding direction."""
    node, conn_in, conn_out, c1, e1 = _resolve_step(net, i, j, k)
    section = cross_section(net, j, "in", i)
    w_idx = section.axis_index(e1.label)
    e1_frac = Fraction(e1.value)
    rows = []
    for label in section.axes:
        eig = node.by_label(label)
        if eig.klass != "expanding" or label == e1.label:
            continue
        coeffs = [Fraction(0)] * len(section.axes)
        coeffs[section.axis_index(label)] = Fraction(1)
        coeffs[w_idx] = -Fraction(eig.value) / e1_frac
        rows.append(Ineq(tuple(coeffs), Const(), True,
                         f"C[{i}->{j}->{k}]: {label} < {e1.label}^({eig.value:g}/{e1.value:g})"))
    return RegionSystem(section, rows)


def image_F(net: HeteroclinicNetwork, i: str, j: str, k: str) -> RegionSystem:
    """Image of the local map in the outgoing section: z_s < v^(c_s/c1) for the
    secondary contracting directions and z_q < v^(t_q/c1) for transverse
    directions with t_q > 0 (decaying transverse eigenvalues); growing
    transverse directions put no constraint inside the unit box."""
    node, conn_in, conn_out, c1, e1 = _resolve_step(net, i, j, k)
    section = cross_section(net, j, "out", k)
    v_idx = section.axis_index(c1.label)
    c1_frac = Fraction(-c1.value)
    rows = []
    for label in section.axes:
        eig = node.by_label(label)
        if label == c1.label or eig.klass == "expanding":
            continue
        if eig.klass == "contracting":
            q = Fraction(-eig.value) / c1_frac
        else:
            if eig.value > 0:
                continue
            q = Fraction(-eig.value) / c1_frac
        coeffs = [Fraction(0)] * len(section.axes)
        coeffs[section.axis_index(label)] = Fraction(1)
        coeffs[v_idx] = -q
        rows.append(Ineq(tuple(coeffs), Const(), True,
                         f"F[{i}->{j}->{k}]: {label} < {c1.label}^{float(q):g}"))
    return RegionSystem(section, rows)


def global_map(net: HeteroclinicNetwork, j: str, k: str) -> LogAffineMap:
    """Transition map along a connection: rescaled permutation of section axes."""
    conn = net.connection(j, k)
    domain = cross_section(net, j, "out", k)
    codomain = cross_section(net, k, "in", j)
    if conn.permutation is not None:
        pairs = list(conn.permutation)
    else:
        if set(domain.axes) != set(codomain.axes):
            raise MapError(
                f"connection {j}->{k}: no permutation given and axis labels "
                f"differ ({domain.axes} vs {codomain.axes})"
            )
        pairs = [(l, l) for l in domain.axes]
    if sorted(p[0] for p in pairs) != sorted(domain.axes):
        raise MapError(f"connection {j}->{k}: permutation does not cover the "
                       f"outgoing section axes {domain.axes}")
    if sorted(p[1] for p in pairs) != sorted(codomain.axes):
        raise MapError(f"connection {j}->{k}: permutation does not cover the "
                       f"incoming section axes {codomain.axes}")
    rescale = conn.rescale if conn.rescale is not None else tuple(1.0 for _ in pairs)
    if len(rescale) != len(pairs):
        raise MapError(f"connection {j}->{k}: rescale length mismatch")

    n = len(pairs)
    rows = [[Fraction(0)] * n for _ in range(n)]
    offsets = [Const() for _ in range(n)]
    for (out_label, in_label), r in zip(pairs, rescale):
        to = codomain.axis_index(in_label)
        frm = domain.axis_index(out_label)
        rows[to][frm] = Fraction(1)
        if r != 1.0:
            offsets[to] = Const.log(r, -1)
    return LogAffineMap(domain, codomain, tuple(tuple(r) for r in rows), tuple(offsets))


@dataclass
class PathTransfer:
    path: tuple
    map: LogAffineMap
    pulled_back: RegionSystem


def _step_constraint_rows(net: HeteroclinicNetwork, i: str, j: str, k: str) -> list:
    """C-rows plus unit-box rows for growing transverse directions."""
    node, conn_in, conn_out, c1, e1 = _resolve_step(net, i, j, k)
    section = cross_section(net, j, "in", i)
    rows = list(domain_C(net, i, j, k).rows)
    w_idx = section.axis_index(e1.label)
    e1_frac = Fraction(e1.value)
    for label in section.axes:
        eig = node.by_label(label)
        if eig.klass == "transverse" and eig.value > 0:
            coeffs = [Fraction(0)] * len(section.axes)
            coeffs[section.axis_index(label)] = Fraction(1)
            coeffs[w_idx] = -Fraction(eig.value) / e1_frac
            rows.append(Ineq(tuple(coeffs), Const(), True,
                             f"box[{i}->{j}->{k}]: {label}*{e1.label}^"
                             f"({-eig.value:g}/{e1.value:g}) < 1"))
    return rows


def compose_path(net: HeteroclinicNetwork, path: Sequence[str]) -> PathTransfer:
    """Compose local and transition maps along a heteroclinic path and pull
    every traversed domain constraint back to the starting incoming section.

    ``path`` lists node ids; consecutive pairs must be connections and the
    path must contain at least one interior node (length >= 3).
    """
    path = tuple(path)
    if len(path) < 3:
        raise MapError("path must contain at least one interior node")
    for a, b in zip(path, path[1:]):
        if not net.has_connection(a, b):
            raise MapError(f"broken path: no connection {a}->{b}")

    start = cross_section(net, path[1], "in", path[0])
    n = len(start.axes)
    ident = LogAffineMap(
        start, start,
        tuple(tuple(Fraction(1 if r == c else 0) for c in range(n)) for r in range(n)),
        tuple(Const() for _ in range(n)),
    )
    total = ident
    pulled = []
    for m in range(1, len(path) - 1):
        i, j, k = path[m - 1], path[m], path[m + 1]
        for row in _step_constraint_rows(net, i, j, k):
            pulled.append(total.pull_back_row(row))
        phi = local_map(net, i, j, k).as_log_affine()
        psi = global_map(net, j, k)
        total = total.then(phi).then(psi)
        if total.determinant() == 0:
            raise MapError(f"composition became singular at {j}")
    return PathTransfer(path, total, RegionSystem(start, pulled))


def followable(net: HeteroclinicNetwork, path: Sequence[str]) -> FeasibilityVerdict:
    """Can nearby trajectories follow the whole path? A single connection is
    trivially followable; otherwise decide the pulled-back system near the
    origin of the starting section."""
    path = tuple(path)
    if len(path) < 2:
        raise MapError("path needs at least one connection")
    if len(path) == 2:
        if not net.has_connection(path[0], path[1]):
            raise MapError(f"no connection {path[0]}->{path[1]}")
        start = cross_section(net, path[1], "in", path[0])
        n = len(start.axes)
        return FeasibilityVerdict(
            True,
            witness_ray=[1.0] * n,
            witness_base=[0.0] * n,
            ray_strict=True,
            system=LogConeSystem(n, []),
        )
    transfer = compose_path(net, path)
    return intersects_near_origin(transfer.pulled_back.as_log_cone())
