from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heteroswitch.cone import (
    Const,
    Ineq,
    decide_near_origin,
    replay_certificate,
    solve_system,
)


def row(coeffs, rhs=None, strict=True):
    return Ineq(tuple(F(c) for c in coeffs), rhs or Const(), strict)


def test_const_log_cancellation_is_exact():
    c = Const.log(1.7) + Const.log(1.7, -1)
    assert c.is_exact_zero
    assert c.sign() == 0


def test_const_skips_unit_logs():
    assert Const.log(1.0).is_exact_zero


def test_simple_feasible_system_has_witness():
    rows = [row([1, -2]), row([-1, 3])]  # 2y < x < 3y
    sol = solve_system(rows, 2)
    assert sol.feasible
    x, y = sol.witness
    assert x - 2 * y > 0 and -x + 3 * y > 0


def test_infeasible_system_yields_replayable_certificate():
    rows = [row([1, -1]), row([-1, 1])]  # x > y and x < y
    sol = solve_system(rows, 2)
    assert not sol.feasible
    assert replay_certificate(rows, sol.certificate)


def test_weak_pair_at_equality_is_feasible():
    rows = [row([1, -1], strict=False), row([-1, 1], strict=False)]
    assert solve_system(rows, 2).feasible


def test_near_origin_opposed_pair_infeasible():
    rows = [row([1, -2]), row([-3, 1])]
    decision = decide_near_origin(rows, 2)
    assert not decision.feasible
    assert decision.certificate.kind == "ray"
    assert replay_certificate(rows, decision.certificate)


def test_near_origin_constant_tie_decided_by_coefficients():
    # x1 < x2/a and x1 > x2/b: nonempty near the origin iff a < b.
    def tie(a, b):
        rows = [
            Ineq((F(1), F(-1)), Const.log(a)),
            Ineq((F(-1), F(1)), Const.log(b, -1)),
        ]
        return decide_near_origin(rows, 2)

    assert tie(0.5, 2.0).feasible
    assert not tie(2.0, 0.5).feasible
    assert not tie(1.3, 1.3).feasible


def test_near_origin_weak_ray_requires_base_point():
    decision = decide_near_origin(
        [Ineq((F(1), F(-1)), Const.log(0.5)),
         Ineq((F(-1), F(1)), Const.log(2.0, -1))], 2)
    assert decision.feasible and not decision.ray_strict
    base, ray = decision.base, decision.ray
    for t in (0.0, 5.0, 50.0):
        point = [b + t * r for b, r in zip(base, ray)]
        assert point[0] - point[1] > float(Const.log(0.5))
        assert -point[0] + point[1] > -float(Const.log(2.0))


@settings(max_examples=200, deadline=None)
@given(st.lists(
    st.tuples(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        st.booleans(),
    ),
    min_size=1, max_size=6,
))
def test_verdict_agrees_with_certificates_on_random_homogeneous_systems(spec):
    rows = [row(coeffs, strict=strict) for coeffs, strict in spec]
    decision = decide_near_origin(rows, 3)
    if decision.feasible:
        base, ray = decision.base, decision.ray
        point = [b + 100.0 * r for b, r in zip(base, ray)]
        assert all(p > 0 for p in point)
        for r in rows:
            val = sum(float(c) * p for c, p in zip(r.coeffs, point))
            assert val > -1e-9
    else:
        assert replay_certificate(rows, decision.certificate)


def test_rows_must_match_arity():
    with pytest.raises(ValueError):
        solve_system([row([1, 2, 3])], 2)
