"""Direct numerical integration of the built-in fields with section-crossing
event detection, itinerary recording, and the empirical switching harness.

The integrator is an embedded Dormand-Prince 5(4) pair stepping a whole
ensemble at once (each member keeps its own time and step size), with cubic
Hermite interpolation between accepted steps for event location. Node visits
are detected with hysteresis: a member enters a node neighborhood at
``node_radius`` and is considered there until it leaves ``exit_factor`` times
that radius; consecutive visits are attributed to the connecting edge.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .fields import VectorField
from .maps import followable
from .network import HeteroclinicNetwork

__all__ = [
    "SimConfig",
    "Trajectory",
    "Itinerary",
    "ItineraryEvent",
    "IntegrationError",
    "integrate",
    "integrate_until",
    "record_itinerary",
    "ensemble_itineraries",
    "empirical_switching_test",
    "SwitchingTestResult",
]

# Dormand-Prince 5(4) tableau.
_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    node_radius: float = 1e-2
    exit_factor: float = 2.0
    shell: float = 1e-3
    rtol: float = 1e-9
    atol: float = 1e-30
    max_step: float = 0.5
    min_step: float = 1e-11
    max_time: float = 250.0
    max_events: int = 9
    ensemble: int = 100
    seed: int = 0
    depart_radius: float = 0.9
    transit_timeout: float = 80.0
    # Seed noise along co-expanding directions is suppressed by this factor
    # relative to the shell (see _seed_ensemble).
    seed_suppress: float = 1e-3
    # A recorded connection traversal must stay this close to its tube.
    tube_tolerance: float = 0.6

    @classmethod
    def for_field(cls, fieldobj: VectorField, **overrides) -> "SimConfig":
        """Stock configuration with the field's recommended adjustments."""
        merged = dict(fieldobj.sim_overrides)
        merged.update(overrides)
        return cls(**merged).validated_for(fieldobj)

    def validated_for(self, fieldobj: VectorField) -> "SimConfig":
        reps = [pos for _, pos in fieldobj.node_rep_list()]
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                sep = float(np.linalg.norm(reps[i] - reps[j]))
                if sep <= 2.0 * self.exit_factor * self.node_radius:
                    raise ValueError(
                        f"node neighborhoods overlap: separation {sep:.3g} vs "
                        f"hysteresis diameter {2 * self.exit_factor * self.node_radius:.3g}; "
                        "reduce node_radius"
                    )
        return self


@dataclass(frozen=True)
class ItineraryEvent:
    kind: str  # "entered_node" | "traversed_connection"
    subject: tuple  # (node,) or (from, to)
    time: float


@dataclass
class Itinerary:
    member: int
    events: list
    terminal: str  # "still_near_network" | "departed" | "time_exhausted"

    def node_path(self) -> tuple:
        return tuple(e.subject[0] for e in self.events if e.kind == "entered_node")


@dataclass
class Trajectory:
    ts: np.ndarray
    ys: np.ndarray
    fs: np.ndarray

    def eval(self, t: float) -> np.ndarray:
        ts = self.ts
        if t <= ts[0]:
            return self.ys[0]
        if t >= ts[-1]:
            return self.ys[-1]
        k = int(np.searchsorted(ts, t) - 1)
        return _hermite(ts[k], self.ys[k], self.fs[k],
                        ts[k + 1], self.ys[k + 1], self.fs[k + 1], t)


def _hermite(t0, y0, f0, t1, y1, f1, t):
    h = t1 - t0
    if h <= 0:
        return y1
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


class _Batch:
    """Ensemble Dormand-Prince stepper; each member has its own clock."""

    def __init__(self, fieldobj: VectorField, x0: np.ndarray, config: SimConfig):
        self.field = fieldobj
        self.cfg = config
        self.y = np.array(x0, dtype=float)
        if self.y.ndim == 1:
            self.y = self.y[None, :]
        self.m, self.n = self.y.shape
        self.t = np.zeros(self.m)
        self.f = np.asarray(fieldobj.rhs(self.y), dtype=float)
        self.h = np.full(self.m, min(1e-3, config.max_step))
        self.active = np.ones(self.m, dtype=bool)

    def step(self):
        """Advance every active member by one attempted step; returns the
        indices of members whose step was accepted, with step data."""
        cfg = self.cfg
        ia = np.flatnonzero(self.active)
        if ia.size == 0:
            return ia, None
        y0 = self.y[ia]
        f0 = self.f[ia]
        h = np.minimum(self.h[ia], cfg.max_time - self.t[ia])
        h = np.maximum(h, cfg.min_step)
        hc = h[:, None]

        k1 = f0
        k2 = np.asarray(self.field.rhs(y0 + hc * (_A[0][0] * k1)))
        k3 = np.asarray(self.field.rhs(y0 + hc * (_A[1][0] * k1 + _A[1][1] * k2)))
        k4 = np.asarray(self.field.rhs(
            y0 + hc * (_A[2][0] * k1 + _A[2][1] * k2 + _A[2][2] * k3)))
        k5 = np.asarray(self.field.rhs(
            y0 + hc * (_A[3][0] * k1 + _A[3][1] * k2 + _A[3][2] * k3 + _A[3][3] * k4)))
        k6 = np.asarray(self.field.rhs(
            y0 + hc * (_A[4][0] * k1 + _A[4][1] * k2 + _A[4][2] * k3
                       + _A[4][3] * k4 + _A[4][4] * k5)))
        y1 = y0 + hc * (_B[0] * k1 + _B[2] * k3 + _B[3] * k4 + _B[4] * k5 + _B[5] * k6)
        k7 = np.asarray(self.field.rhs(y1))
        err = hc * (_E[0] * k1 + _E[2] * k3 + _E[3] * k4 + _E[4] * k5
                    + _E[5] * k6 + _E[6] * k7)
        scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y0), np.abs(y1))
        err_norm = np.sqrt(np.mean((err / scale) ** 2, axis=1))

        with np.errstate(divide="ignore"):
            factor = 0.9 * err_norm ** -0.2
        factor = np.clip(np.nan_to_num(factor, nan=5.0, posinf=5.0), 0.2, 5.0)
        accept = err_norm <= 1.0

        if np.any(~accept & (h <= cfg.min_step * 1.0001)):
            raise IntegrationError("step size underflow (non-hyperbolic slowdown?)")

        new_h = np.clip(h * factor, cfg.min_step, cfg.max_step)
        self.h[ia] = new_h

        acc = ia[accept]
        data = None
        if acc.size:
            data = {
                "t0": self.t[acc].copy(),
                "y0": y0[accept].copy(),
                "f0": f0[accept].copy(),
                "t1": self.t[acc] + h[accept],
                "y1": y1[accept].copy(),
                "f1": k7[accept].copy(),
            }
            self.t[acc] = data["t1"]
            self.y[acc] = data["y1"]
            self.f[acc] = data["f1"]
        return acc, data

    def deactivate(self, idx):
        self.active[idx] = False


class _Observer:
    """Hysteresis node-visit detector for the whole ensemble.

    A member departs the network when it blows past the loose distance guard,
    fails to reach any node neighborhood within ``transit_timeout`` after
    leaving one, or reattaches at a node not adjacent to its previous visit
    (an escape that happened to land back near the network).
    """

    def __init__(self, fieldobj: VectorField, config: SimConfig, m: int):
        self.field = fieldobj
        self.cfg = config
        reps = fieldobj.node_rep_list()
        self.rep_nodes = [node for node, _ in reps]
        self.rep_pos = np.array([pos for _, pos in reps])
        self.rep_supports = self._rep_supports(fieldobj)
        self.current = np.full(m, -1, dtype=int)  # rep index or -1
        self.events = [[] for _ in range(m)]
        self.entry_counts = np.zeros(m, dtype=int)
        self.terminal = [None] * m
        self.last_exit = np.zeros(m)
        # Worst off-tube distance per candidate connection over the segment
        # since the member last left a node; confirms attributions.
        self.seg_worst = [dict() for _ in range(m)]
        self._entry_reps = {}

    def _rep_supports(self, fieldobj) -> dict:
        """(source_rep, target_rep) -> ConnectionSupport."""
        def find(pos):
            for idx, (_, rpos) in enumerate(fieldobj.node_rep_list()):
                if np.allclose(rpos, pos):
                    return idx
            raise ValueError("support endpoint is not a node representative")

        return {
            (find(s.source_pos), find(s.target_pos)): s for s in fieldobj.supports
        }

    def observe(self, idx: np.ndarray, data: dict) -> list:
        """Process accepted steps; returns member indices to deactivate."""
        if idx.size == 0:
            return []
        cfg = self.cfg
        y1 = data["y1"]
        d1 = np.linalg.norm(y1[:, None, :] - self.rep_pos[None, :, :], axis=2)
        dmin = d1.min(axis=1)
        nearest = d1.argmin(axis=1)
        done = []

        cur = self.current[idx]
        r_in = cfg.node_radius
        r_out = cfg.exit_factor * cfg.node_radius

        # Exits: no event, only state change.
        has_cur = cur >= 0
        if np.any(has_cur):
            dcur = d1[np.arange(idx.size), np.where(has_cur, cur, 0)]
            leaving = has_cur & (dcur > r_out)
            self.current[idx[leaving]] = -1
            self.last_exit[idx[leaving]] = data["t1"][leaving]
            for w in np.flatnonzero(leaving):
                self.seg_worst[int(idx[w])] = {}
            cur = self.current[idx]

        # Track tube occupancy of the current transit segment.
        in_transit = cur < 0
        for w in np.flatnonzero(in_transit):
            member = int(idx[w])
            prev = self._last_entry(member)
            if prev is None:
                continue
            worst = self.seg_worst[member]
            for (src, tgt), support in self.rep_supports.items():
                if src != prev[1]:
                    continue
                off = float(support.off_distance(y1[w]))
                if off > worst.get(tgt, 0.0):
                    worst[tgt] = off

        # Entries.
        entering = in_transit & (dmin < r_in)
        for w in np.flatnonzero(entering):
            member = int(idx[w])
            rep = int(nearest[w])
            t_ev = self._refine_entry(data, w, rep)
            if not self._record_entry(member, rep, t_ev):
                self.terminal[member] = "departed"
                done.append(member)
                continue
            self.current[idx[w]] = rep
            if self.entry_counts[member] >= cfg.max_events:
                self.terminal[member] = "still_near_network"
                done.append(member)

        # Departures: blowup or a long stretch with no node neighborhood.
        away = (self.current[idx] < 0) & (dmin > r_out)
        if np.any(away):
            sub = y1[away]
            off = np.full(sub.shape[0], np.inf)
            for support in self.field.supports:
                off = np.minimum(off, support.off_distance(sub))
            too_big = np.linalg.norm(sub, axis=1) > self.field.state_bound
            stalled = (data["t1"][away] - self.last_exit[idx[away]]) > cfg.transit_timeout
            departed = (off > cfg.depart_radius) | too_big | stalled
            for w, dep in zip(np.flatnonzero(away), departed):
                member = int(idx[w])
                if dep and self.terminal[member] is None:
                    self.terminal[member] = "departed"
                    done.append(member)
        return done

    def _record_entry(self, member: int, rep: int, t_ev: float) -> bool:
        """Record a node entry; False when the visit cannot be attributed to
        a connection from the previous one (not adjacent, or the transit
        segment strayed from that connection's tube -- e.g. the member cut
        across a face and skimmed past an intermediate node)."""
        node = self.rep_nodes[rep]
        events = self.events[member]
        prev = self._last_entry(member)
        if prev is not None:
            prev_node, prev_rep = prev
            if (prev_rep, rep) not in self.rep_supports:
                return False
            worst = self.seg_worst[member].get(rep, 0.0)
            if worst > self.cfg.tube_tolerance:
                return False
            events.append(ItineraryEvent(
                "traversed_connection", (prev_node, node), t_ev))
        events.append(ItineraryEvent("entered_node", (node,), t_ev))
        self._entry_reps.setdefault(member, []).append(rep)
        self.entry_counts[member] += 1
        return True

    def _last_entry(self, member: int):
        reps = self._entry_reps.get(member)
        if not reps:
            return None
        return self.rep_nodes[reps[-1]], reps[-1]

    def _refine_entry(self, data: dict, w: int, rep: int) -> float:
        pos = self.rep_pos[rep]
        t0, t1 = float(data["t0"][w]), float(data["t1"][w])
        y0, y1 = data["y0"][w], data["y1"][w]
        f0, f1 = data["f0"][w], data["f1"][w]
        r = self.cfg.node_radius

        def g(t):
            return float(np.linalg.norm(
                _hermite(t0, y0, f0, t1, y1, f1, t) - pos)) - r

        lo, hi = t0, t1
        if g(lo) <= 0:
            return lo
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0:
                lo = mid
            else:
                hi = mid
        return hi


def _make_observer(fieldobj, config, m):
    return _Observer(fieldobj, config, m)


def integrate(fieldobj: VectorField, x0, config: Optional[SimConfig] = None) -> Trajectory:
    """Adaptive integration of a single initial condition with dense output."""
    cfg = (config or SimConfig())
    batch = _Batch(fieldobj, np.asarray(x0, dtype=float), cfg)
    ts = [0.0]
    ys = [batch.y[0].copy()]
    fs = [batch.f[0].copy()]
    while batch.active.any():
        acc, data = batch.step()
        if acc.size:
            ts.append(float(data["t1"][0]))
            ys.append(data["y1"][0].copy())
            fs.append(data["f1"][0].copy())
        if batch.t[0] >= cfg.max_time - 1e-12:
            batch.deactivate(0)
    return Trajectory(np.array(ts), np.array(ys), np.array(fs))


def integrate_until(fieldobj: VectorField, x0, event: Callable,
                    config: Optional[SimConfig] = None) -> tuple:
    """Integrate until ``event(x)`` changes sign (negative to positive);
    returns (t, x) at the crossing located on the step interpolant."""
    cfg = config or SimConfig()
    batch = _Batch(fieldobj, np.asarray(x0, dtype=float), cfg)
    while batch.active.any():
        acc, data = batch.step()
        if acc.size and event(data["y1"][0]) > 0:
            t0, t1 = float(data["t0"][0]), float(data["t1"][0])
            y0, y1 = data["y0"][0], data["y1"][0]
            f0, f1 = data["f0"][0], data["f1"][0]
            lo, hi = t0, t1
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if event(_hermite(t0, y0, f0, t1, y1, f1, mid)) > 0:
                    hi = mid
                else:
                    lo = mid
            return hi, _hermite(t0, y0, f0, t1, y1, f1, hi)
        if batch.t[0] >= cfg.max_time - 1e-12:
            raise IntegrationError("event not reached before max_time")
    raise IntegrationError("integration finished without event")


def record_itinerary(trajectory: Trajectory, fieldobj: VectorField,
                     config: Optional[SimConfig] = None, member: int = 0) -> Itinerary:
    """Replay the hysteresis detector over a stored trajectory."""
    cfg = (config or SimConfig()).validated_for(fieldobj)
    obs = _make_observer(fieldobj, cfg, 1)
    finished = None
    for k in range(len(trajectory.ts) - 1):
        data = {
            "t0": trajectory.ts[k:k + 1],
            "y0": trajectory.ys[k:k + 1],
            "f0": trajectory.fs[k:k + 1],
            "t1": trajectory.ts[k + 1:k + 2],
            "y1": trajectory.ys[k + 1:k + 2],
            "f1": trajectory.fs[k + 1:k + 2],
        }
        done = obs.observe(np.array([0]), data)
        if done:
            finished = obs.terminal[0]
            break
    terminal = finished or obs.terminal[0] or "time_exhausted"
    return Itinerary(member, obs.events[0], terminal)


def _seed_ensemble(fieldobj: VectorField, cfg: SimConfig, rng) -> np.ndarray:
    """Points just outside a source node's hysteresis ball, on a connection,
    displaced by the shell off the network.

    Off-directions that are expanding at the source node run along sibling
    connections rather than away from the network; noise there is strongly
    suppressed so the faster-growing sibling cannot overtake mid-transit
    (which would cut the corner across a 2-face instead of following the
    seeded connection).
    """
    supports = fieldobj.supports
    n = fieldobj.ambient_dimension
    out = np.empty((cfg.ensemble, n))
    choice = rng.integers(0, len(supports), size=cfg.ensemble)
    for i in range(cfg.ensemble):
        s = supports[choice[i]]
        direction = s.target_pos - s.source_pos
        direction = direction / np.linalg.norm(direction)
        x = s.source_pos + (cfg.exit_factor + 0.5) * cfg.node_radius * direction
        jac_src = np.asarray(fieldobj.jacobian(s.source_pos), dtype=float)
        jac_tgt = np.asarray(fieldobj.jacobian(s.target_pos), dtype=float)
        for row, shift in zip(s.off_rows, s.off_shift):
            norm2 = float(row @ row)
            rate = max(
                float(row @ jac_src @ row), float(row @ jac_tgt @ row)
            ) / norm2
            u = rng.uniform(0.2, 1.0) * cfg.shell
            if rate > 0:
                u *= cfg.seed_suppress
            x = x + (u / norm2) * row
        if fieldobj.seed_projector is not None:
            x = fieldobj.seed_projector(x)
        out[i] = x
    return out


def ensemble_itineraries(fieldobj: VectorField, config: Optional[SimConfig] = None) -> list:
    cfg = (config or SimConfig()).validated_for(fieldobj)
    rng = np.random.default_rng(cfg.seed)
    x0 = _seed_ensemble(fieldobj, cfg, rng)
    batch = _Batch(fieldobj, x0, cfg)
    obs = _make_observer(fieldobj, cfg, cfg.ensemble)
    while batch.active.any():
        acc, data = batch.step()
        if acc.size:
            for member in obs.observe(acc, data):
                batch.deactivate(member)
        timed_out = batch.active & (batch.t >= cfg.max_time - 1e-12)
        for member in np.flatnonzero(timed_out):
            if obs.terminal[member] is None:
                obs.terminal[member] = "time_exhausted"
            batch.deactivate(member)
    return [
        Itinerary(i, obs.events[i], obs.terminal[i] or "time_exhausted")
        for i in range(cfg.ensemble)
    ]


@dataclass
class SwitchingTestResult:
    field_name: str
    path_counts: Counter
    violations: list  # (member, path)
    itineraries: list
    checked_prefixes: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def empirical_switching_test(fieldobj: VectorField,
                             config: Optional[SimConfig] = None,
                             net: Optional[HeteroclinicNetwork] = None) -> SwitchingTestResult:
    """Integrate an ensemble and check every observed itinerary prefix against
    the followability verdicts; violations should be empty."""
    net = net or fieldobj.network
    itineraries = ensemble_itineraries(fieldobj, config)
    cache: dict = {}
    violations = []
    counts = Counter()
    checked = 0
    for itin in itineraries:
        path = itin.node_path()
        if len(path) >= 2:
            counts[path] += 1
        for k in range(3, len(path) + 1):
            prefix = path[:k]
            if prefix not in cache:
                cache[prefix] = bool(followable(net, prefix))
            checked += 1
            if not cache[prefix]:
                violations.append((itin.member, prefix))
                break
    return SwitchingTestResult(fieldobj.name, counts, violations, itineraries, checked)
