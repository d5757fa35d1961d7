"""Exact feasibility kernel for strict/weak linear inequality systems.

Inequalities have Fraction coefficients and constants that are rational
combinations of logarithms of positive reals (the form produced by taking
-log of power-law region inequalities). Feasibility is decided by
Fourier-Motzkin elimination, which doubles as the certificate generator:
every derived row remembers the nonnegative combination of original rows
it came from, so an infeasible system yields multipliers that replay to an
explicit contradiction.

Two questions are answered:

* ``solve_system``       -- is {A x (>|>=) b} satisfiable, and a witness.
* ``decide_near_origin`` -- is {A x > b} satisfiable with min(x) arbitrarily
  large (equivalently: does the region it encodes meet every ball around
  the origin of the positive unit box after x = -log coordinates).

The second reduces to: (a) the affine system is strictly feasible, and
(b) there is a componentwise-positive direction d with A d >= 0. Along
``base + t*d`` every strict inequality then holds for all t >= 0 while
min(x) -> infinity; conversely a Gale-type alternative shows one of the
two certificates exists otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "Const",
    "Ineq",
    "Certificate",
    "SystemSolution",
    "NearOriginDecision",
    "ConeEngineError",
    "solve_system",
    "decide_near_origin",
    "replay_certificate",
]

# Row-count guard; FM can blow up combinatorially, our systems never should.
_MAX_ROWS = 200_000

# Constants whose float evaluation is below this (relative) threshold but are
# not syntactically zero get sign 0; see module docstring for the caveat.
_ZERO_TOL = 1e-11


class ConeEngineError(RuntimeError):
    pass


class Const:
    """Rational number plus a rational combination of logs of positive reals.

    Kept symbolic so that structurally cancelling constants (e.g. the same
    rescale appearing with opposite multipliers) compare exactly equal to
    zero instead of to float noise.
    """

    __slots__ = ("rat", "logs")

    def __init__(self, rat: Fraction | int = 0, logs: Optional[dict] = None):
        self.rat = Fraction(rat)
        self.logs = {}
        if logs:
            for value, coeff in logs.items():
                if value <= 0:
                    raise ValueError("log of non-positive value")
                coeff = Fraction(coeff)
                if value != 1.0 and coeff != 0:
                    self.logs[float(value)] = coeff

    @classmethod
    def log(cls, value: float, coeff: Fraction | int = 1) -> "Const":
        return cls(0, {float(value): Fraction(coeff)})

    def scaled(self, q: Fraction) -> "Const":
        if q == 0:
            return Const()
        out = Const(self.rat * q)
        out.logs = {v: c * q for v, c in self.logs.items()}
        return out

    def __add__(self, other: "Const") -> "Const":
        out = Const(self.rat + other.rat)
        logs = dict(self.logs)
        for v, c in other.logs.items():
            c2 = logs.get(v, Fraction(0)) + c
            if c2 == 0:
                logs.pop(v, None)
            else:
                logs[v] = c2
        out.logs = logs
        return out

    def __sub__(self, other: "Const") -> "Const":
        return self + other.scaled(Fraction(-1))

    def __float__(self) -> float:
        return float(self.rat) + math.fsum(
            float(c) * math.log(v) for v, c in self.logs.items()
        )

    @property
    def is_exact_zero(self) -> bool:
        return self.rat == 0 and not self.logs

    def sign(self) -> int:
        """-1, 0, +1; exact when purely rational, float otherwise."""
        if not self.logs:
            return (self.rat > 0) - (self.rat < 0)
        val = float(self)
        scale = abs(float(self.rat)) + math.fsum(
            abs(float(c) * math.log(v)) for v, c in self.logs.items()
        )
        if abs(val) <= _ZERO_TOL * max(1.0, scale):
            return 0
        return 1 if val > 0 else -1

    def __repr__(self) -> str:
        parts = []
        if self.rat:
            parts.append(str(self.rat))
        parts.extend(f"{c}*ln({v:g})" for v, c in sorted(self.logs.items()))
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Ineq:
    """coeffs . x  (>|>=)  rhs, with provenance multipliers over originals."""

    coeffs: tuple
    rhs: Const
    strict: bool = True
    label: str = ""
    combo: dict = field(default_factory=dict, compare=False, hash=False)

    def scaled_sum(self, mult: Fraction, other: "Ineq", mult_other: Fraction) -> "Ineq":
        coeffs = tuple(
            a * mult + b * mult_other for a, b in zip(self.coeffs, other.coeffs)
        )
        rhs = self.rhs.scaled(mult) + other.rhs.scaled(mult_other)
        combo = dict()
        for idx, q in self.combo.items():
            combo[idx] = combo.get(idx, Fraction(0)) + q * mult
        for idx, q in other.combo.items():
            combo[idx] = combo.get(idx, Fraction(0)) + q * mult_other
        return Ineq(coeffs, rhs, self.strict or other.strict, "", combo)


@dataclass
class Certificate:
    """Nonnegative multipliers over original rows that replay a contradiction.

    kind ``affine``: sum(mult_m * row_m) has zero coefficients and rhs >= 0
    (with at least one strict row weighted), i.e. 0 > 0.
    kind ``ray``: taken over homogenized rows plus positivity rows d_i >= 1;
    the region-row part combines to a nonpositive, nonzero coefficient vector
    (a sign clash: the combination forces a positive amount of -x to stay
    nonnegative as min(x) grows).
    """

    kind: str
    multipliers: dict
    positivity_multipliers: dict = field(default_factory=dict)

    def rows_used(self) -> list:
        return sorted(self.multipliers)


@dataclass
class SystemSolution:
    feasible: bool
    witness: Optional[list] = None
    certificate: Optional[Certificate] = None


@dataclass
class NearOriginDecision:
    feasible: bool
    base: Optional[list] = None
    ray: Optional[list] = None
    ray_strict: bool = False
    certificate: Optional[Certificate] = None


def _violated(row: Ineq) -> bool:
    s = row.rhs.sign()
    return s > 0 or (s == 0 and row.strict)


def _normalize(row: Ineq) -> Ineq:
    for a in row.coeffs:
        if a != 0:
            q = Fraction(1) / abs(a)
            if q == 1:
                return row
            return Ineq(
                tuple(c * q for c in row.coeffs),
                row.rhs.scaled(q),
                row.strict,
                row.label,
                {i: m * q for i, m in row.combo.items()},
            )
    return row


def _dedupe(rows: Sequence[Ineq]) -> list:
    """Keep, per coefficient vector, only the dominant (tightest) row."""
    best: dict = {}
    for row in rows:
        key = row.coeffs
        cur = best.get(key)
        if cur is None:
            best[key] = row
            continue
        d = (row.rhs - cur.rhs).sign()
        if d > 0 or (d == 0 and row.strict and not cur.strict):
            best[key] = row
    return list(best.values())


def _eliminate(rows: list, var: int) -> list:
    pos, neg, rest = [], [], []
    for row in rows:
        c = row.coeffs[var]
        if c > 0:
            pos.append(row)
        elif c < 0:
            neg.append(row)
        else:
            rest.append(row)
    out = list(rest)
    for p in pos:
        cp = p.coeffs[var]
        for n in neg:
            cn = n.coeffs[var]
            out.append(p.scaled_sum(-cn, n, cp))
    if len(out) > _MAX_ROWS:
        raise ConeEngineError("Fourier-Motzkin row blow-up; system too large")
    return out


def solve_system(rows: Sequence[Ineq], n_vars: int) -> SystemSolution:
    """Decide satisfiability of the system over R^n_vars by elimination."""
    work = []
    for idx, row in enumerate(rows):
        if len(row.coeffs) != n_vars:
            raise ValueError("row arity does not match n_vars")
        work.append(
            Ineq(row.coeffs, row.rhs, row.strict, row.label, {idx: Fraction(1)})
        )
    work = _dedupe(_normalize(r) for r in work)

    stages = []  # (var, rows-before-eliminating-var)
    while True:
        for row in work:
            if all(a == 0 for a in row.coeffs) and _violated(row):
                return SystemSolution(False, None, Certificate("affine", row.combo))
        work = [r for r in work if any(a != 0 for a in r.coeffs)]
        live = [v for v in range(n_vars) if any(r.coeffs[v] != 0 for r in work)]
        if not live:
            break
        # Cheapest variable first: fewest pairwise combinations.
        def cost(v: int) -> int:
            p = sum(1 for r in work if r.coeffs[v] > 0)
            n = sum(1 for r in work if r.coeffs[v] < 0)
            return p * n - p - n

        var = min(live, key=cost)
        stages.append((var, work))
        work = _dedupe(_normalize(r) for r in _eliminate(work, var))

    witness = [0.0] * n_vars
    for var, stage_rows in reversed(stages):
        lo, lo_strict = None, False
        hi, hi_strict = None, False
        for row in stage_rows:
            c = row.coeffs[var]
            if c == 0:
                continue
            rest = float(row.rhs) - sum(
                float(a) * witness[i]
                for i, a in enumerate(row.coeffs)
                if i != var and a != 0
            )
            bound = rest / float(c)
            if c > 0:
                if lo is None or bound > lo:
                    lo, lo_strict = bound, row.strict
            else:
                if hi is None or bound < hi:
                    hi, hi_strict = bound, row.strict
        if lo is None and hi is None:
            witness[var] = 0.0
        elif lo is None:
            witness[var] = hi - 1.0
        elif hi is None:
            witness[var] = lo + 1.0
        else:
            witness[var] = 0.5 * (lo + hi)
    return SystemSolution(True, witness, None)


def _homogenized(rows: Sequence[Ineq], strict: bool) -> list:
    return [Ineq(r.coeffs, Const(), strict, r.label) for r in rows]


def _positivity(n_vars: int, bound: int = 1) -> list:
    rows = []
    for i in range(n_vars):
        coeffs = tuple(Fraction(1) if j == i else Fraction(0) for j in range(n_vars))
        rows.append(Ineq(coeffs, Const(Fraction(bound)), False, f"x[{i}]>=1"))
    return rows


def decide_near_origin(rows: Sequence[Ineq], n_vars: int) -> NearOriginDecision:
    """Decide whether {A x > b} admits points with min(x) arbitrarily large."""
    rows = list(rows)
    affine = solve_system(rows, n_vars)
    if not affine.feasible:
        return NearOriginDecision(False, certificate=affine.certificate)

    m = len(rows)
    strict_dir = solve_system(_homogenized(rows, True) + _positivity(n_vars), n_vars)
    if strict_dir.feasible:
        return NearOriginDecision(True, affine.witness, strict_dir.witness, True)

    weak_dir = solve_system(_homogenized(rows, False) + _positivity(n_vars), n_vars)
    if weak_dir.feasible:
        return NearOriginDecision(True, affine.witness, weak_dir.witness, False)

    cert = weak_dir.certificate
    mult = {i: q for i, q in cert.multipliers.items() if i < m}
    pos = {i - m: q for i, q in cert.multipliers.items() if i >= m}
    return NearOriginDecision(False, certificate=Certificate("ray", mult, pos))


def replay_certificate(rows: Sequence[Ineq], cert: Certificate) -> bool:
    """Recombine original rows with the certificate multipliers and verify
    that the result is an explicit contradiction."""
    n = len(rows[0].coeffs) if rows else 0
    coeffs = [Fraction(0)] * n
    rhs = Const()
    any_strict = False
    for idx, q in cert.multipliers.items():
        if q < 0:
            return False
        if q == 0:
            continue
        row = rows[idx]
        for i, a in enumerate(row.coeffs):
            coeffs[i] += a * q
        rhs = rhs + row.rhs.scaled(q)
        any_strict = any_strict or row.strict

    if cert.kind == "affine":
        if any(a != 0 for a in coeffs):
            return False
        s = rhs.sign()
        return s > 0 or (s == 0 and any_strict)

    if cert.kind == "ray":
        # Region rows combine to -mu with mu >= 0 picked from positivity rows.
        if any(a > 0 for a in coeffs) or all(a == 0 for a in coeffs):
            return False
        total = Fraction(0)
        for i, q in cert.positivity_multipliers.items():
            if q < 0 or not (0 <= i < n):
                return False
            if coeffs[i] + q != 0:
                return False
            total += q
        if any(coeffs[i] != 0 for i in range(n) if i not in cert.positivity_multipliers):
            return False
        return total > 0

    return False
