"""Power regions (thin/thick cusps) and their near-origin intersection calculus.

A region is ``a*x_i < x_j**alpha`` (thin) or its complement (thick) inside
the positive unit box. Taking eta = -log(x) turns membership into a linear
inequality, and "does the family intersect every ball around the origin"
into a cone-feasibility question answered exactly by :mod:`.cone`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cone import (
    Certificate,
    Const,
    Ineq,
    decide_near_origin,
    replay_certificate,
)

__all__ = [
    "PowerRegion",
    "LogConeSystem",
    "FeasibilityVerdict",
    "PairwiseOutcome",
    "OracleResult",
    "CountBound",
    "to_log_system",
    "intersects_near_origin",
    "pairwise_rule",
    "sample_oracle",
    "count_guarantee",
    "verify_witness",
    "verify_certificate",
]

THIN = "thin"
THICK = "thick"


@dataclass(frozen=True)
class PowerRegion:
    """Region ``a*x_i < x_j**alpha`` (thin) or ``a*x_i > x_j**alpha`` (thick).

    ``i`` is the index of the axis the boundary hypersurface is tangent to,
    ``j`` the index of its symmetry axis. alpha > 1 is the proper cusp case;
    0 < alpha <= 1 is accepted as a generalized region (pulled-back path
    constraints produce such exponents).
    """

    i: int
    j: int
    a: float
    alpha: float
    orientation: str = THIN

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("tangent and symmetry axes must differ")
        if self.i < 0 or self.j < 0:
            raise ValueError("axis indices must be nonnegative")
        if not self.a > 0:
            raise ValueError("coefficient must be positive")
        if not self.alpha > 0:
            raise ValueError("exponent must be positive")
        if self.orientation not in (THIN, THICK):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def generalized(self) -> bool:
        return self.alpha <= 1

    def complement(self) -> "PowerRegion":
        other = THICK if self.orientation == THIN else THIN
        return PowerRegion(self.i, self.j, self.a, self.alpha, other)

    def contains(self, x: np.ndarray) -> np.ndarray:
        """Vectorized membership for points x of shape (..., dim)."""
        lhs = self.a * x[..., self.i]
        rhs = x[..., self.j] ** self.alpha
        return lhs < rhs if self.orientation == THIN else lhs > rhs

    def log_inequality(self, dim: int) -> Ineq:
        """eta_i - alpha*eta_j > ln a  (thin); reversed for thick."""
        coeffs = [Fraction(0)] * dim
        sign = 1 if self.orientation == THIN else -1
        coeffs[self.i] = Fraction(sign)
        coeffs[self.j] = -Fraction(self.alpha) * sign
        return Ineq(
            tuple(coeffs),
            Const.log(self.a, sign),
            True,
            f"{self.orientation} V[{self.i},{self.j}](a={self.a:g}, alpha={self.alpha:g})",
        )

    def __str__(self) -> str:
        op = "<" if self.orientation == THIN else ">"
        return f"{self.a:g}*x{self.i} {op} x{self.j}^{self.alpha:g}"


@dataclass
class LogConeSystem:
    """Strict linear system over eta = -log coordinates of the unit box."""

    dimension: int
    rows: list

    def __post_init__(self):
        for row in self.rows:
            if len(row.coeffs) != self.dimension:
                raise ValueError("row arity mismatch")


@dataclass
class FeasibilityVerdict:
    intersects_near_origin: bool
    witness_ray: Optional[list] = None
    witness_base: Optional[list] = None
    ray_strict: bool = False
    certificate: Optional[Certificate] = None
    system: Optional[LogConeSystem] = None

    def __bool__(self) -> bool:
        return self.intersects_near_origin


@dataclass
class PairwiseOutcome:
    kind: str  # "always_intersect" | "some_pair_empty"
    empty_combos: list = field(default_factory=list)  # [(orient1, orient2)]
    relation: str = "independent"  # "nested" | "opposed" | "independent"

    def allows(self, o1: str, o2: str) -> bool:
        return (o1, o2) not in self.empty_combos


@dataclass
class OracleResult:
    kind: str  # "empirically_nonempty" | "no_hit"
    hits: int
    count: int

    @property
    def hit_fraction(self) -> float:
        return self.hits / self.count if self.count else 1.0


@dataclass
class CountBound:
    kind: str  # "below_bound" | "bound_exceeded"
    n_hypersurfaces: int
    dimension: int
    pair_bound: int
    all_to_all_impossible: bool


def to_log_system(regions: Sequence[PowerRegion], dimension: Optional[int] = None) -> LogConeSystem:
    regions = list(regions)
    if dimension is None:
        if not regions:
            raise ValueError("dimension required for an empty region list")
        dimension = max(max(r.i, r.j) for r in regions) + 1
    for r in regions:
        if max(r.i, r.j) >= dimension:
            raise ValueError(
                f"region {r} does not fit in dimension {dimension}"
            )
    return LogConeSystem(dimension, [r.log_inequality(dimension) for r in regions])


def intersects_near_origin(
    regions: Sequence[PowerRegion] | LogConeSystem,
    dimension: Optional[int] = None,
) -> FeasibilityVerdict:
    """Does the common intersection meet B_delta of the positive unit box for
    every delta > 0 (with positive measure)?"""
    if isinstance(regions, LogConeSystem):
        system = regions
    else:
        if not list(regions):
            raise ValueError("need at least one region")
        system = to_log_system(regions, dimension)
    decision = decide_near_origin(system.rows, system.dimension)
    return FeasibilityVerdict(
        decision.feasible,
        witness_ray=decision.ray,
        witness_base=decision.base,
        ray_strict=decision.ray_strict,
        certificate=decision.certificate,
        system=system,
    )


def _opposed_empty_combos(r1: PowerRegion, r2: PowerRegion) -> list:
    # thin&thin empty iff a1*a2^alpha1 >= 1 at the exponent tie, iff
    # alpha1*alpha2 > 1 otherwise; thick&thick mirrors it.
    p = Fraction(r1.alpha) * Fraction(r2.alpha)
    combos = []
    if p > 1:
        combos.append((THIN, THIN))
    elif p < 1:
        combos.append((THICK, THICK))
    else:
        crit = math.log(r1.a) + r1.alpha * math.log(r2.a)
        if crit >= 0:
            combos.append((THIN, THIN))
        if crit <= 0:
            combos.append((THICK, THICK))
    return combos


def _nested_empty_combos(r1: PowerRegion, r2: PowerRegion) -> list:
    # Larger exponent = thinner sliver; thin(thinner) ∩ thick(fatter) = empty.
    if r1.alpha > r2.alpha:
        return [(THIN, THICK)]
    if r1.alpha < r2.alpha:
        return [(THICK, THIN)]
    if r1.a > r2.a:
        return [(THIN, THICK)]
    if r1.a < r2.a:
        return [(THICK, THIN)]
    return [(THIN, THICK), (THICK, THIN)]  # identical boundary


def pairwise_rule(r1: PowerRegion, r2: PowerRegion) -> PairwiseOutcome:
    """Index-combinatorial form of the two-hypersurface emptiness rule.

    Empty combinations exist exactly when the two boundary hypersurfaces
    involve the same coordinate pair -- nested (same tangent axis and same
    symmetry axis) or geometrically opposed (axes swapped). Independent of
    the orientations carried by the inputs; ``empty_combos`` names which
    thin/thick combinations are empty near the origin.
    """
    if (r1.i, r1.j) == (r2.i, r2.j):
        return PairwiseOutcome("some_pair_empty", _nested_empty_combos(r1, r2), "nested")
    if (r1.i, r1.j) == (r2.j, r2.i):
        return PairwiseOutcome("some_pair_empty", _opposed_empty_combos(r1, r2), "opposed")
    return PairwiseOutcome("always_intersect", [], "independent")


def sample_oracle(
    regions: Sequence[PowerRegion],
    delta: float,
    count: int,
    seed: int,
    dimension: Optional[int] = None,
    span: Optional[float] = None,
) -> OracleResult:
    """Brute-force membership testing on log-uniform samples of the delta-ball.

    Samples eta_i iid uniform on [ln(sqrt(dim)/delta), ... + span], so every
    sample satisfies |x| < delta inside the positive orthant; the default span
    scales with the depth so that rays with compounded coordinate ratios stay
    inside the sampled window. Deterministic for a given seed. An empty region
    list vacuously reports full hit rate.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if count < 1:
        raise ValueError("count must be >= 1")
    regions = list(regions)
    if not regions:
        return OracleResult("empirically_nonempty", count, count)
    if dimension is None:
        dimension = max(max(r.i, r.j) for r in regions) + 1
    rng = np.random.default_rng(seed)
    low = math.log(math.sqrt(dimension) / delta)
    if span is None:
        span = 4.5 * low
    eta = rng.uniform(low, low + span, size=(count, dimension))
    # Membership is tested on the log side (a*x_i < x_j**alpha iff
    # eta_i - alpha*eta_j > ln a): the predicate is identical point by point
    # and avoids exponentiating every sample.
    inside = np.ones(count, dtype=bool)
    for region in regions:
        lhs = eta[:, region.i] - region.alpha * eta[:, region.j]
        thr = math.log(region.a)
        inside &= (lhs > thr) if region.orientation == THIN else (lhs < thr)
        if not inside.any():
            break
    hits = int(inside.sum())
    return OracleResult("empirically_nonempty" if hits else "no_hit", hits, count)


def count_guarantee(regions: Sequence[PowerRegion], dimension: Optional[int] = None) -> CountBound:
    """Counting bounds: 1 + N(N-1)/2 distinct hypersurfaces guarantee an empty
    pair by pigeonhole on coordinate pairs; N pairs already rule out an
    all-to-all intersection."""
    regions = list(regions)
    if dimension is None:
        dimension = max(max(r.i, r.j) for r in regions) + 1 if regions else 2
    surfaces = {(r.i, r.j, r.a, r.alpha) for r in regions}
    n = len(surfaces)
    pair_bound = 1 + dimension * (dimension - 1) // 2
    kind = "bound_exceeded" if n >= pair_bound else "below_bound"
    return CountBound(kind, n, dimension, pair_bound, n >= dimension)


def verify_witness(verdict: FeasibilityVerdict, t: float = 60.0) -> bool:
    """Check that base + t*ray satisfies every row of the verdict's system."""
    if not verdict.intersects_near_origin or verdict.system is None:
        return False
    base = verdict.witness_base or [0.0] * verdict.system.dimension
    ray = verdict.witness_ray
    point = [b + t * r for b, r in zip(base, ray)]
    for row in verdict.system.rows:
        val = sum(float(a) * p for a, p in zip(row.coeffs, point))
        if not val > float(row.rhs):
            return False
    return True


def verify_certificate(verdict: FeasibilityVerdict) -> bool:
    if verdict.intersects_near_origin or verdict.certificate is None:
        return False
    return replay_certificate(verdict.system.rows, verdict.certificate)
