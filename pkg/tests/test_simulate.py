import numpy as np
import pytest

from heteroswitch.fields import FIELD_NAMES, build_field, linear_saddle_field
from heteroswitch.fixtures import load_fixture
from heteroswitch.maps import local_map
from heteroswitch.simulate import (
    SimConfig,
    empirical_switching_test,
    ensemble_itineraries,
    integrate,
    integrate_until,
    record_itinerary,
)


def test_build_field_names_and_eigen_gate():
    for name in FIELD_NAMES:
        fieldobj = build_field(name)
        assert fieldobj.network is not None
    with pytest.raises(ValueError):
        build_field("house")
    with pytest.raises(ValueError):
        build_field("rsp_replicator", {"bogus": 1})


def test_fields_vanish_at_node_representatives():
    for name in FIELD_NAMES:
        fieldobj = build_field(name)
        for node, pos in fieldobj.node_rep_list():
            assert np.max(np.abs(fieldobj.rhs(pos))) < 1e-12


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(2)
    for name in FIELD_NAMES:
        fieldobj = build_field(name)
        x = np.abs(rng.normal(0.25, 0.1, fieldobj.ambient_dimension))
        J = np.asarray(fieldobj.jacobian(x))
        eps = 1e-7
        for k in range(fieldobj.ambient_dimension):
            dx = np.zeros(fieldobj.ambient_dimension)
            dx[k] = eps
            col = (np.asarray(fieldobj.rhs(x + dx)) - np.asarray(fieldobj.rhs(x - dx))) / (2 * eps)
            assert np.allclose(J[:, k], col, rtol=1e-5, atol=1e-7), name


def test_integrate_equilibrium_stays_put():
    fieldobj = build_field("kirk_silber")
    pos = fieldobj.node_reps["xi1"][0]
    traj = integrate(fieldobj, pos, SimConfig(max_time=10.0))
    assert np.max(np.abs(traj.ys - pos)) < 1e-10


def test_integrate_connection_converges_to_target():
    fieldobj = build_field("kirk_silber")
    support = next(s for s in fieldobj.supports
                   if (s.source, s.target) == ("xi1", "xi2"))
    x0 = support.source_pos + 0.05 * (support.target_pos - support.source_pos)
    traj = integrate(fieldobj, x0, SimConfig(max_time=40.0))
    d_end = np.linalg.norm(traj.ys[-1] - support.target_pos)
    assert d_end < 1e-3


def test_tolerance_halving_changes_crossing_little():
    fieldobj = build_field("kirk_silber")
    support = next(s for s in fieldobj.supports
                   if (s.source, s.target) == ("xi1", "xi2"))
    x0 = support.source_pos + 0.02 * (support.target_pos - support.source_pos)
    x0 = x0 + 1e-4

    def crossing(rtol):
        cfg = SimConfig(max_time=60.0, rtol=rtol)
        _, x = integrate_until(fieldobj, x0, lambda s: s[1] - 0.5, cfg)
        return x

    a = crossing(1e-8)
    b = crossing(5e-9)
    assert np.max(np.abs(a - b)) < 1e-4


def test_itinerary_structure_and_determinism():
    fieldobj = build_field("bowtie")
    cfg = SimConfig.for_field(fieldobj, ensemble=12, seed=3)
    runs = [ensemble_itineraries(fieldobj, cfg) for _ in range(2)]
    for a, b in zip(*runs):
        assert a.terminal == b.terminal
        assert a.events == b.events  # bit-for-bit at the event level
    for itin in runs[0]:
        kinds = [ev.kind for ev in itin.events]
        # entries and traversals alternate, starting with an entry
        assert kinds[::2] == ["entered_node"] * len(kinds[::2])
        assert kinds[1::2] == ["traversed_connection"] * len(kinds[1::2])
        net = fieldobj.network
        path = itin.node_path()
        for a_node, b_node in zip(path, path[1:]):
            assert net.has_connection(a_node, b_node)


def test_record_itinerary_single_trajectory():
    fieldobj = build_field("kirk_silber")
    support = next(s for s in fieldobj.supports
                   if (s.source, s.target) == ("xi3", "xi1"))
    x0 = support.source_pos + 0.03 * (support.target_pos - support.source_pos)
    x0 = x0 + np.array([0.0, 1e-4, 0.0, 1e-6])
    traj = integrate(fieldobj, x0, SimConfig(max_time=120.0))
    itin = record_itinerary(traj, fieldobj, SimConfig(max_events=4))
    path = itin.node_path()
    assert path[0] == "xi1"
    assert len(path) >= 3


def test_node_radius_overlap_rejected():
    fieldobj = build_field("kirk_silber")
    with pytest.raises(ValueError, match="overlap"):
        SimConfig(node_radius=0.5).validated_for(fieldobj)


def test_empirical_switching_small_ensembles_are_sound():
    for name in FIELD_NAMES:
        fieldobj = build_field(name)
        cfg = SimConfig.for_field(fieldobj, ensemble=40, seed=5)
        res = empirical_switching_test(fieldobj, cfg)
        assert res.violations == [], name
        assert res.path_counts


def test_departure_flagged_when_trajectory_leaves_all_tubes():
    from heteroswitch.simulate import Trajectory

    fieldobj = build_field("kirk_silber")
    pos = fieldobj.node_reps["xi1"][0]
    inside = pos + np.array([0.0, 0.005, 0.0, 0.0])
    outside = pos + np.array([0.0, 0.05, 0.0, 0.0])
    far = np.full(4, 0.75)  # >0.9 off every connection plane
    ts = np.array([0.0, 1.0, 2.0, 3.0])
    ys = np.stack([inside, inside, outside, far])
    traj = Trajectory(ts, ys, np.zeros_like(ys))
    itin = record_itinerary(traj, fieldobj, SimConfig())
    assert itin.node_path() == ("xi1",)
    assert itin.terminal == "departed"


def test_departure_flagged_on_transit_timeout():
    from heteroswitch.simulate import Trajectory

    fieldobj = build_field("kirk_silber")
    pos = fieldobj.node_reps["xi1"][0]
    inside = pos + np.array([0.0, 0.005, 0.0, 0.0])
    hover = pos + np.array([0.0, 0.25, 0.0, 0.0])  # in-tube, outside the ball
    ts = np.array([0.0, 1.0, 2.0, 100.0])
    ys = np.stack([inside, inside, hover, hover])
    traj = Trajectory(ts, ys, np.zeros_like(ys))
    itin = record_itinerary(traj, fieldobj, SimConfig(transit_timeout=80.0))
    assert itin.terminal == "departed"


def test_house_transverse_points_leave_the_connection_tube():
    # Points in the outgoing section at xi1 with a large transverse component
    # (outside every arrival image) do not stay near the [xi1 -> xi2]
    # connection, unlike in-image points.
    from heteroswitch.fields import quadratic_field

    house = quadratic_field("house", load_fixture("house"))
    target = house.node_reps["xi2"][0]

    def closest_approach_to_xi2(x4):
        x0 = house.node_reps["xi1"][0].copy()
        x0[1] += 0.05
        x0[3] += x4
        traj = integrate(house, x0, SimConfig(max_time=12.0))
        return min(float(np.linalg.norm(traj.eval(t) - target))
                   for t in np.linspace(0.0, 12.0, 400))

    assert closest_approach_to_xi2(1e-3) < 0.05   # in-image: follows xi1->xi2
    assert closest_approach_to_xi2(0.45) > 0.4    # escapee never gets near xi2


def test_linear_saddle_passage_exponent():
    fieldobj = linear_saddle_field({"a": -1.5, "b": 1.0})
    _, x = integrate_until(fieldobj, np.array([1.0, 1e-4]),
                           lambda s: s[1] - 1.0, SimConfig(max_time=60.0))
    assert x[0] == pytest.approx((1e-4) ** 1.5, rel=1e-6)


def test_local_map_exponents_recovered_from_flow():
    # log-log regression across a saddle passage reproduces the map exponents
    net = load_fixture("rsp")
    lm = local_map(net, "xi3", "xi2", "xi1")
    fieldobj = build_field("rsp_replicator")
    h = 0.01
    ws = np.geomspace(1e-6, 1e-4, 12)
    lv = []
    for w in ws:
        x = np.array([1e-13, h, 1.0 - 1e-13 - h])
        y = np.array([1.0 - w - 1e-13, 1e-13, w])
        _, u = integrate_until(fieldobj, np.concatenate([x, y]),
                               lambda s: s[5] - h,
                               SimConfig(max_time=300.0, max_step=0.25))
        lv.append(np.log(u[1]))  # the reborn contracting coordinate
    slope = np.polyfit(np.log(ws), lv, 1)[0]
    assert slope == pytest.approx(float(lm.c1 / lm.e1), rel=0.05)


def test_finite_difference_jacobian_eigenvalues_at_nodes():
    # numerically differentiated Jacobian reproduces the declared spectrum
    for name in FIELD_NAMES:
        fieldobj = build_field(name)
        net = fieldobj.network
        for node_id, reps in sorted(fieldobj.node_reps.items()):
            declared = sorted(e.value for e in net.node(node_id).eigenvalues)
            for idx, pos in enumerate(reps):
                n = fieldobj.ambient_dimension
                J = np.zeros((n, n))
                eps = 1e-6
                for kk in range(n):
                    dx = np.zeros(n)
                    dx[kk] = eps
                    J[:, kk] = (np.asarray(fieldobj.rhs(pos + dx))
                                - np.asarray(fieldobj.rhs(pos - dx))) / (2 * eps)
                eig = sorted(np.linalg.eigvals(J).real)
                if fieldobj.aux_spectrum:
                    whole = sorted(declared
                                   + list(fieldobj.aux_spectrum[node_id][idx]))
                else:
                    whole = declared
                for d, c in zip(whole, eig):
                    assert abs(d - c) <= 1e-6 * max(1.0, abs(d)), (name, node_id)
