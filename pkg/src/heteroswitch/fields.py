"""Built-in vector fields realizing the bundled networks.

Three families cover the fixtures:

* quadratic Lotka-Volterra type, ``x_j' = x_j (1 - |x|^2 + sum_k A_jk x_k^2)``:
  equilibria on the unit coordinate axes, radial eigenvalue -2, and the
  eigenvalue of direction k at node j equal to ``A_kj`` -- fully designable
  from the fixture's eigenvalue table (kirk_silber, bowtie, house);
* single-population replicator with payoff ``ones + L``: vertices of the unit
  simplex, radial eigenvalue -1, directional eigenvalues ``L_kj`` (the
  simplex-method style construction; rspls_replicator, r6_simplex);
* the two-person rock-scissors-paper replicator on the product of two
  simplices in R^6; its nine saddles project three-to-one onto the quotient
  network shipped as the ``rsp`` fixture.

Every field is checked against its fixture: the Jacobian spectrum at each
node representative must reproduce the declared eigenvalues to 1e-8 (plus,
where the field lives in a bigger space than the fixture, the known spectrum
of the extra constraint directions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .fixtures import load_fixture
from .network import HeteroclinicNetwork

__all__ = [
    "VectorField",
    "ConnectionSupport",
    "FieldConsistencyError",
    "build_field",
    "quadratic_field",
    "replicator_field",
    "two_person_rsp_field",
    "linear_saddle_field",
    "FIELD_NAMES",
]

FIELD_NAMES = ("kirk_silber", "bowtie", "rsp_replicator", "rspls_replicator", "r6_simplex")

EIGENVALUE_TOL = 1e-8


class FieldConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConnectionSupport:
    """One representative of a connection in state space.

    ``off_rows``/``off_shift`` give affine expressions vanishing on the
    invariant plane carrying the connection and positive toward the region
    trajectories live in; their norm measures off-tube distance.
    """

    source: str
    target: str
    source_pos: np.ndarray
    target_pos: np.ndarray
    off_rows: np.ndarray  # (n_off, n)
    off_shift: np.ndarray  # (n_off,)

    def off_values(self, x: np.ndarray) -> np.ndarray:
        return x @ self.off_rows.T + self.off_shift

    def off_distance(self, x: np.ndarray) -> np.ndarray:
        return np.linalg.norm(self.off_values(x), axis=-1)


@dataclass
class VectorField:
    name: str
    ambient_dimension: int
    parameters: dict
    rhs: Callable
    jacobian: Callable
    network: HeteroclinicNetwork
    node_reps: dict  # node id -> (n_reps, n) array
    supports: list  # ConnectionSupport
    state_bound: float = 3.0
    # Extra spectrum carried by directions the network model does not see
    # (e.g. simplex normals when the field lives in a bigger space than the
    # fixture's ambient dimension): node id -> (n_reps, n_aux).
    aux_spectrum: Optional[dict] = None
    seed_projector: Optional[Callable] = None
    # Field-specific overrides to the stock SimConfig (e.g. coarser node
    # detection for neutrally-circulating networks).
    sim_overrides: dict = field(default_factory=dict)

    def node_rep_list(self) -> list:
        """Flattened (node_id, position) pairs in deterministic order."""
        out = []
        for node_id in sorted(self.node_reps):
            for pos in self.node_reps[node_id]:
                out.append((node_id, pos))
        return out

    def __call__(self, x):
        return self.rhs(x)


def _match_eigenvalues(declared: np.ndarray, computed: np.ndarray, where: str):
    if len(declared) != len(computed):
        raise FieldConsistencyError(
            f"{where}: {len(computed)} Jacobian eigenvalues for "
            f"{len(declared)} declared values"
        )
    if np.max(np.abs(computed.imag)) > 1e-9:
        raise FieldConsistencyError(f"{where}: complex Jacobian eigenvalues")
    d = np.sort(declared)
    c = np.sort(computed.real)
    worst = float(np.max(np.abs(d - c))) if len(d) else 0.0
    if worst > EIGENVALUE_TOL:
        raise FieldConsistencyError(
            f"{where}: eigenvalue mismatch {worst:.3e} (declared {d}, computed {c})"
        )


def _check_against_fixture(fieldobj: VectorField):
    net = fieldobj.network
    for node_id, reps in sorted(fieldobj.node_reps.items()):
        base = [e.value for e in net.node(node_id).eigenvalues]
        for idx, pos in enumerate(reps):
            declared = np.array(base + (
                list(fieldobj.aux_spectrum[node_id][idx])
                if fieldobj.aux_spectrum else []
            ))
            f0 = np.asarray(fieldobj.rhs(pos), dtype=float)
            if np.max(np.abs(f0)) > 1e-12:
                raise FieldConsistencyError(
                    f"{node_id} rep {idx}: not an equilibrium (|f|={np.max(np.abs(f0)):.2e})"
                )
            jac = np.asarray(fieldobj.jacobian(pos), dtype=float)
            _match_eigenvalues(declared, np.linalg.eigvals(jac), f"{node_id} rep {idx}")


def _axis_index(label: str) -> int:
    if not label.startswith("x"):
        raise ValueError(f"coordinate label {label!r} is not axis-style")
    return int(label[1:]) - 1


def _node_axis(node) -> int:
    """Axis a node sits on: the coordinate of its radial eigendirection."""
    radial = [e for e in node.eigenvalues if e.klass == "radial"]
    if len(radial) != 1:
        raise ValueError(f"node {node.id}: need exactly one radial eigenvalue")
    return _axis_index(radial[0].label)


def _eigen_matrix(net: HeteroclinicNetwork) -> np.ndarray:
    """Directional eigenvalue table: M[k, j] = value of the axis-k direction
    at the node sitting on axis j (eigendirection labels x1..xn)."""
    n = net.ambient_dimension
    M = np.zeros((n, n))
    for node in net.nodes:
        j = _node_axis(node)
        for e in node.eigenvalues:
            k = _axis_index(e.label)
            if k != j:
                M[k, j] = e.value
    return M


def _axis_supports(net: HeteroclinicNetwork, positions: dict) -> list:
    supports = []
    n = net.ambient_dimension
    for c in net.connections:
        j = _node_axis(net.node(c.source))
        k = _node_axis(net.node(c.target))
        off = [m for m in range(n) if m not in (j, k)]
        rows = np.zeros((len(off), n))
        for r, m in enumerate(off):
            rows[r, m] = 1.0
        supports.append(ConnectionSupport(
            c.source, c.target, positions[c.source][0], positions[c.target][0],
            rows, np.zeros(len(off)),
        ))
    return supports


def quadratic_field(name: str, net: HeteroclinicNetwork) -> VectorField:
    n = net.ambient_dimension
    A = _eigen_matrix(net)  # growth rate of x_i at node e_j is A[i, j]
    np.fill_diagonal(A, 0.0)

    def rhs(x):
        x = np.asarray(x, dtype=float)
        sq = x * x
        g = 1.0 - sq.sum(axis=-1, keepdims=True) + sq @ A.T
        return x * g

    def jacobian(x):
        x = np.asarray(x, dtype=float)
        sq = x * x
        g = 1.0 - sq.sum() + A @ sq
        J = np.diag(g) + 2.0 * np.outer(x, x) * (A - 1.0)
        return J

    positions = {
        node.id: np.eye(n)[[_node_axis(node)]] for node in net.nodes
    }
    return VectorField(
        name, n, {"interaction": A}, rhs, jacobian, net,
        positions, _axis_supports(net, positions), state_bound=2.5,
    )


def replicator_field(name: str, net: HeteroclinicNetwork) -> VectorField:
    n = net.ambient_dimension
    L = _eigen_matrix(net)
    np.fill_diagonal(L, 0.0)
    B = np.ones((n, n)) + L  # column shifts leave simplex dynamics unchanged

    def rhs(x):
        x = np.asarray(x, dtype=float)
        bx = x @ B.T
        s = (x * bx).sum(axis=-1, keepdims=True)
        return x * (bx - s)

    def jacobian(x):
        x = np.asarray(x, dtype=float)
        bx = B @ x
        btx = B.T @ x
        s = float(x @ bx)
        J = np.diag(bx - s) + x[:, None] * (B - bx[None, :] - btx[None, :])
        return J

    positions = {
        node.id: np.eye(n)[[_node_axis(node)]] for node in net.nodes
    }
    return VectorField(
        name, n, {"payoff": B}, rhs, jacobian, net,
        positions, _axis_supports(net, positions), state_bound=2.0,
    )


# Two-person RSP: strategies R=0, S=1, P=2; i beats i+1 (mod 3). Simulated in
# full R^6 = (x, y) with payoff B = A + 2*ones: on the product of simplices the
# shift is invisible, while it makes the simplex-normal direction at every
# vertex stable (rate -(2 + A_ij) < 0), so roundoff cannot drift off-simplex.


def _rsp_payoff(eps: float, sigma: float) -> np.ndarray:
    A = np.zeros((3, 3))
    for i in range(3):
        A[i, (i + 1) % 3] = eps
        A[i, (i - 1) % 3] = -sigma
    return A


def _quotient_class(i: int, j: int) -> str:
    if i == j:
        return "xi1"
    if j == (i + 1) % 3:
        return "xi2"
    return "xi3"


def _vertex(i: int, j: int) -> np.ndarray:
    pos = np.zeros(6)
    pos[i] = 1.0
    pos[3 + j] = 1.0
    return pos


def two_person_rsp_field(name: str, net: HeteroclinicNetwork,
                         eps: float, sigma: float) -> VectorField:
    A = _rsp_payoff(eps, sigma)
    B = A + 2.0

    def rhs(u):
        u = np.asarray(u, dtype=float)
        x, y = u[..., :3], u[..., 3:]
        bx = y @ B.T  # payoff to each X strategy
        by = x @ B.T
        sx = (x * bx).sum(axis=-1, keepdims=True)
        sy = (y * by).sum(axis=-1, keepdims=True)
        return np.concatenate([x * (bx - sx), y * (by - sy)], axis=-1)

    def jacobian(u):
        x, y = np.asarray(u[:3], dtype=float), np.asarray(u[3:], dtype=float)
        bx, by = B @ y, B @ x
        sx, sy = float(x @ bx), float(y @ by)
        J = np.zeros((6, 6))
        J[:3, :3] = np.diag(bx - sx) - x[:, None] * bx[None, :]
        J[:3, 3:] = x[:, None] * (B - (B.T @ x)[None, :])
        J[3:, 3:] = np.diag(by - sy) - y[:, None] * by[None, :]
        J[3:, :3] = y[:, None] * (B - (B.T @ y)[None, :])
        return J

    reps: dict = {"xi1": [], "xi2": [], "xi3": []}
    aux: dict = {"xi1": [], "xi2": [], "xi3": []}
    for i in range(3):
        for j in range(3):
            cls = _quotient_class(i, j)
            reps[cls].append(_vertex(i, j))
            aux[cls].append([-(2.0 + A[i, j]), -(2.0 + A[j, i])])
    node_reps = {k: np.array(v) for k, v in reps.items()}
    aux_spectrum = {k: np.array(v) for k, v in aux.items()}

    supports = []
    for i in range(3):
        for j in range(3):
            if i == j:
                movers = [((i - 1) % 3, j, "x"), (i, (j - 1) % 3, "y")]
            elif j == (i + 1) % 3:
                movers = [(i, i, "y"), (i, (i - 1) % 3, "y")]
            else:
                movers = [(j, j, "x"), ((j - 1) % 3, j, "x")]
            for (ti, tj, who) in movers:
                if who == "x":
                    third = 3 - i - ti
                    off = [third, 3 + (j + 1) % 3, 3 + (j + 2) % 3]
                else:
                    third = 3 - j - tj
                    off = [3 + third, (i + 1) % 3, (i + 2) % 3]
                rows = np.zeros((len(off), 6))
                for r, c in enumerate(off):
                    rows[r, c] = 1.0
                supports.append(ConnectionSupport(
                    _quotient_class(i, j), _quotient_class(ti, tj),
                    _vertex(i, j), _vertex(ti, tj), rows, np.zeros(len(off)),
                ))

    def on_simplices(u):
        u = np.array(u, dtype=float)
        u[..., :3] /= u[..., :3].sum(axis=-1, keepdims=True)
        u[..., 3:] /= u[..., 3:].sum(axis=-1, keepdims=True)
        return u

    return VectorField(
        name, 6, {"eps": eps, "sigma": sigma}, rhs, jacobian, net,
        node_reps, supports, state_bound=2.0,
        aux_spectrum=aux_spectrum, seed_projector=on_simplices,
        # Every quotient cycle's contraction ratios telescope to exactly 1,
        # so trajectories circulate at their seeding depth instead of
        # converging; detection must be coarser than that depth swing.
        sim_overrides={"node_radius": 0.05, "max_time": 220.0,
                       "seed_suppress": 3e-5, "max_events": 7},
    )


def linear_saddle_field(rates: dict) -> VectorField:
    """Synthetic single-node linear flow x_k' = rate_k * x_k, for validating
    the leading-order passage maps against direct integration."""
    labels = sorted(rates)
    lam = np.array([rates[k] for k in labels])
    n = len(lam)

    def rhs(x):
        return np.asarray(x) * lam

    def jacobian(x):
        return np.diag(lam)

    return VectorField(
        "linear_saddle", n, {"rates": dict(rates)}, rhs, jacobian,
        network=None, node_reps={"origin": np.zeros((1, n))}, supports=[],
        state_bound=float("inf"),
    )


def build_field(name: str, params: Optional[dict] = None) -> VectorField:
    """Construct a built-in field and assert its spectrum matches the fixture."""
    params = dict(params or {})
    if name == "kirk_silber":
        fieldobj = quadratic_field(name, load_fixture("kirk_silber"))
    elif name == "bowtie":
        fieldobj = quadratic_field(name, load_fixture("bowtie"))
    elif name == "rspls_replicator":
        fieldobj = replicator_field(name, load_fixture("rspls"))
    elif name == "r6_simplex":
        fieldobj = replicator_field(name, load_fixture("r6_simplex"))
    elif name == "rsp_replicator":
        eps = float(params.pop("eps", 0.8125))
        sigma = float(params.pop("sigma", 1.421875))
        fieldobj = two_person_rsp_field(name, load_fixture("rsp"), eps, sigma)
    else:
        raise ValueError(f"unknown field {name!r}; choose from {FIELD_NAMES}")
    if params:
        raise ValueError(f"unknown parameters for {name}: {sorted(params)}")
    _check_against_fixture(fieldobj)
    return fieldobj
