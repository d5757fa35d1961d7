import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heteroswitch.regions import (
    PowerRegion,
    count_guarantee,
    intersects_near_origin,
    pairwise_rule,
    sample_oracle,
    to_log_system,
    verify_certificate,
    verify_witness,
)

V = PowerRegion


def test_region_validation():
    with pytest.raises(ValueError):
        V(1, 1, 1.0, 2.0)
    with pytest.raises(ValueError):
        V(0, 1, -1.0, 2.0)
    with pytest.raises(ValueError):
        V(0, 1, 1.0, 0.0)
    assert V(0, 1, 1.0, 0.5).generalized


def test_log_inequality_signs():
    # thin a*x_i < x_j^alpha  ->  eta_i - alpha*eta_j > ln a
    sys3 = to_log_system([V(2, 1, 1.0, 2.0)], 3)
    coeffs = sys3.rows[0].coeffs
    assert float(coeffs[2]) == 1.0 and float(coeffs[1]) == -2.0
    # thick flips the sense
    sys3c = to_log_system([V(1, 0, 2.0, 1.5, "thick")], 3)
    coeffs = sys3c.rows[0].coeffs
    assert float(coeffs[1]) == -1.0 and float(coeffs[0]) == 1.5


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        to_log_system([V(0, 1, 1.0, 2.0), V(3, 1, 1.0, 2.0)], 2)


def test_nested_pair_verdicts():
    thin_hi = V(2, 1, 1.0, 2.5)
    thin_lo = V(2, 1, 1.0, 1.5)
    assert intersects_near_origin([thin_hi, thin_lo], 3)
    assert not intersects_near_origin([thin_hi, thin_lo.complement()], 3)
    assert intersects_near_origin([thin_hi.complement(), thin_lo], 3)
    assert intersects_near_origin([thin_hi.complement(), thin_lo.complement()], 3)


def test_witness_ray_eventually_satisfies_rows():
    v = intersects_near_origin([V(2, 1, 1.0, 2.5), V(0, 2, 1.1, 1.8)], 3)
    assert v and verify_witness(v)


def test_certificate_replays():
    v = intersects_near_origin([V(1, 2, 1.0, 2.0), V(2, 1, 1.0, 2.0)], 3)
    assert not v and verify_certificate(v)


def test_empty_region_list_oracle_full_hit():
    res = sample_oracle([], 1e-2, 50, seed=0, dimension=2)
    assert res.hit_fraction == 1.0


def test_oracle_is_deterministic():
    regions = [V(1, 0, 1.0, 2.0)]
    a = sample_oracle(regions, 1e-2, 10_000, seed=7, dimension=2)
    b = sample_oracle(regions, 1e-2, 10_000, seed=7, dimension=2)
    assert a.hits == b.hits


def test_oracle_input_validation():
    with pytest.raises(ValueError):
        sample_oracle([V(1, 0, 1.0, 2.0)], 1.5, 10, seed=0)
    with pytest.raises(ValueError):
        sample_oracle([V(1, 0, 1.0, 2.0)], 0.5, 0, seed=0)


def test_count_guarantee_levels():
    quad = [V(0, 1, 1.0, 2.0), V(1, 2, 1.0, 2.1), V(0, 2, 1.1, 2.2), V(2, 1, 1.0, 1.9)]
    cb = count_guarantee(quad, 3)
    assert cb.kind == "bound_exceeded" and cb.pair_bound == 4
    assert cb.all_to_all_impossible
    cb3 = count_guarantee(quad[:3], 3)
    assert cb3.kind == "below_bound" and cb3.all_to_all_impossible
    cb1 = count_guarantee([V(0, 1, 1.0, 2.0)], 2)
    assert cb1.kind == "below_bound" and not cb1.all_to_all_impossible


def test_pairwise_rule_examples():
    nested = pairwise_rule(V(2, 1, 1.0, 2.5), V(2, 1, 1.0, 1.5))
    assert nested.kind == "some_pair_empty"
    assert nested.empty_combos == [("thin", "thick")]
    opposed = pairwise_rule(V(1, 2, 1.0, 2.0), V(2, 1, 1.0, 2.0))
    assert opposed.empty_combos == [("thin", "thin")]
    indep = pairwise_rule(V(2, 1, 1.0, 2.0), V(0, 2, 1.0, 2.0))
    assert indep.kind == "always_intersect"


def test_pairwise_rule_ties():
    same = pairwise_rule(V(0, 1, 1.0, 2.0), V(0, 1, 1.0, 2.0))
    assert set(same.empty_combos) == {("thin", "thick"), ("thick", "thin")}
    coeff = pairwise_rule(V(0, 1, 2.0, 2.0), V(0, 1, 1.0, 2.0))
    assert coeff.empty_combos == [("thin", "thick")]


@st.composite
def region_pairs(draw):
    dim = draw(st.integers(2, 5))
    idx = st.integers(0, dim - 1)
    i1 = draw(idx)
    j1 = draw(idx.filter(lambda v: v != i1))
    relation = draw(st.sampled_from(["nested", "opposed", "other"]))
    if relation == "nested":
        i2, j2 = i1, j1
    elif relation == "opposed":
        i2, j2 = j1, i1
    else:
        i2 = draw(idx)
        j2 = draw(idx.filter(lambda v: v != i2))
    alpha = st.floats(1.05, 3.0)
    a = st.floats(0.5, 2.0)
    orient = st.sampled_from(["thin", "thick"])
    r1 = V(i1, j1, draw(a), draw(alpha), draw(orient))
    r2 = V(i2, j2, draw(a), draw(alpha), draw(orient))
    return dim, r1, r2


@settings(max_examples=300, deadline=None)
@given(region_pairs())
def test_pairwise_rule_consistent_with_cone_engine(case):
    dim, r1, r2 = case
    outcome = pairwise_rule(r1, r2)
    verdict = bool(intersects_near_origin([r1, r2], dim))
    assert verdict == outcome.allows(r1.orientation, r2.orientation)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 6), st.randoms(use_true_random=False))
def test_cyclic_all_thin_chain_is_empty(dim, rnd):
    order = list(range(dim))
    rnd.shuffle(order)
    regions = [
        V(order[m], order[(m + 1) % dim], 1.0, 1.05 + rnd.random())
        for m in range(dim)
    ]
    assert not intersects_near_origin(regions, dim)


@settings(max_examples=150, deadline=None)
@given(region_pairs(), st.sampled_from(["thin", "thick"]), st.integers(0, 4))
def test_verdict_monotone_under_added_region(case, orient, j_shift):
    dim, r1, r2 = case
    base = intersects_near_origin([r1, r2], dim)
    j3 = (r1.i + 1 + j_shift) % dim
    if j3 == r1.i:
        j3 = (j3 + 1) % dim
    extra = V(r1.i, j3, 1.3, 1.7, orient)
    bigger = intersects_near_origin([r1, r2, extra], dim)
    if not base:
        assert not bigger
