"""Family points, rotation number estimates, and mode-locking tests.

PL points are decided exactly through the PL engine.  Sine points use a
certified branch-and-bound bound on the displacement x -> F^q(x) - x - p:
per interval we bound d by d(center) + |d'(center)| r + M r^2 / 2 with a
proven curvature constant M for the q-th iterate, padded for float
round-off, so LOCKED/BELOW/ABOVE verdicts are rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import numpy as np

from .numeric import Rational, rat
from .forcing import Forcing, ReducedPLForcing, SineForcing
from .pl_engine import PLMap, pl_from_family


class Verdict(Enum):
    BELOW = "below"        # rho < p/q: max displacement < 0
    LOCKED = "locked"      # min <= 0 <= max displacement
    ABOVE = "above"        # rho > p/q: min displacement > 0
    UNRESOLVED = "unresolved"


class UnresolvedError(RuntimeError):
    """A certified verdict could not be reached within budget."""


@dataclass(frozen=True)
class FamilyPoint:
    b: Union[Fraction, float]
    omega: Union[Fraction, float]
    forcing: Forcing

    def eval(self, x):
        if isinstance(self.forcing, SineForcing):
            return x + float(self.omega) + float(self.b) * self.forcing.eval(x)
        return x + self.omega + self.b * self.forcing.eval(x)

    def pl_map(self) -> PLMap:
        if isinstance(self.forcing, SineForcing):
            raise TypeError("sine family point has no exact PL map")
        return pl_from_family(rat(self.b), rat(self.omega), self.forcing)


def rotation_estimate(fp: FamilyPoint, n: int = 4096) -> tuple[float, float]:
    """Enclosure of the rotation number from n iterates.

    (F^n(x) - x - 1)/n <= rho <= (F^n(x) - x + 1)/n for monotone lifts;
    a small pad covers float round-off for the sine forcing.
    """
    x = 0.0
    if isinstance(fp.forcing, SineForcing):
        b, om = float(fp.b), float(fp.omega)
        for _ in range(n):
            x = x + om + b * fp.forcing.eval(x)
        pad = 1e-9
        return ((x - 1) / n - pad, (x + 1) / n + pad)
    f = fp.pl_map()
    y = Fraction(0)
    for _ in range(n):
        y = f.eval(y)
    return (float((y - 1) / n), float((y + 1) / n))


def mode_lock_test(fp: FamilyPoint, p: int, q: int,
                   budget: int = 40) -> Verdict:
    """Certified verdict on whether rho(fp) == p/q (mode locked)."""
    if isinstance(fp.forcing, SineForcing):
        return _sine_verdict(float(fp.b), float(fp.omega), p, q, budget)
    f = fp.pl_map().power(q)
    lo, hi = f.displacement_range(Fraction(p))
    if hi < 0:
        return Verdict.BELOW
    if lo > 0:
        return Verdict.ABOVE
    return Verdict.LOCKED


# ---------------- certified sine displacement bounds ----------------

_FLOAT_SLACK = 1e-12


def _iterate_with_deriv(x: np.ndarray, b: float, omega: float,
                        q: int) -> tuple[np.ndarray, np.ndarray]:
    """F^q(x) and (F^q)'(x) for the sine family, vectorized."""
    two_pi = 2 * math.pi
    d = np.ones_like(x)
    y = x.copy()
    for _ in range(q):
        d *= 1 + b * np.cos(two_pi * y)
        y = y + omega + b * np.sin(two_pi * y) / two_pi
    return y, d


def _curvature_bound(b: float, q: int) -> float:
    """Proven upper bound on |(d/dx)^2 (F^q(x) - x)| for the sine family.

    With a = 1 + b >= sup F' and c = 2 pi b >= sup |F''|, induction gives
    M_q <= c a^{2(q-1)} + a M_{q-1}, hence M_q <= c a^{q-1} (a^q - 1)/(a - 1).
    """
    a = 1 + b
    c = 2 * math.pi * b
    if b == 0:
        return 0.0
    return c * a ** (q - 1) * (a ** q - 1) / (a - 1) * (1 + 1e-9)


def sine_displacement_range(b: float, omega: float, p: int, q: int,
                            depth: int = 40, n0: int = 4096,
                            max_elems: int = 4_000_000) -> tuple[float, float]:
    """Certified outer bounds (lo, hi) with lo <= min d and max d <= hi
    for the displacement d(x) = F^q(x) - x - p of the sine family."""
    _, max_hi = _sine_extremum(b, omega, p, q, +1, depth, n0, max_elems)
    _, min_neg_hi = _sine_extremum(b, omega, p, q, -1, depth, n0, max_elems)
    return (-min_neg_hi, max_hi)


def _sine_extremum(b: float, omega: float, p: int, q: int, sign: int,
                   depth: int = 40, n0: int = 4096,
                   max_elems: int = 4_000_000,
                   target_gap: float = 0.0,
                   stop_sign: bool = False) -> tuple[float, float]:
    """Certified enclosure (lo, hi) of max_x sign*(F^q(x) - x - p).

    lo is an attained value (inner bound), hi a rigorous upper bound.
    Stops early once the gap falls below target_gap, or (with stop_sign)
    as soon as the sign of the extremum is decided.
    """
    n = max(n0, 256 * q)
    centers = (np.arange(n) + 0.5) / n
    radius = 0.5 / n
    m2 = _curvature_bound(b, q)
    best_lo = -math.inf
    hi = math.inf
    for _ in range(depth):
        y, d1 = _iterate_with_deriv(centers, b, omega, q)
        vals = sign * (y - centers - p)
        slack = _FLOAT_SLACK * (1 + abs(p) + np.abs(y))
        ub = vals + np.abs(d1 - 1) * radius + 0.5 * m2 * radius * radius + slack
        best_lo = max(best_lo, float(vals.max()) - float(slack.max()))
        hi = float(ub.max())
        if stop_sign and (hi < 0 or best_lo > 0):
            return (best_lo, hi)
        if hi - best_lo < max(target_gap, 1e-15 * (1 + abs(best_lo))):
            return (best_lo, hi)
        keep = ub > best_lo
        centers = centers[keep]
        if 2 * centers.size > max_elems:
            return (best_lo, hi)
        centers = np.concatenate([centers - radius / 2, centers + radius / 2])
        radius /= 2
    return (best_lo, hi)


def _sine_verdict(b: float, omega: float, p: int, q: int,
                  budget: int) -> Verdict:
    max_lo, max_hi = _sine_extremum(b, omega, p, q, +1, depth=budget)
    if max_hi < 0:
        return Verdict.BELOW
    min_neg_lo, min_neg_hi = _sine_extremum(b, omega, p, q, -1, depth=budget)
    min_hi, min_lo_bound = -min_neg_lo, -min_neg_hi
    if min_lo_bound > 0:
        return Verdict.ABOVE
    if max_lo >= 0 and min_hi <= 0:
        return Verdict.LOCKED
    return Verdict.UNRESOLVED


def sine_displacement_gap(b: float, omega: float, p: int, q: int,
                          budget: int = 40) -> tuple[float, float, float, float]:
    """(max_lo, max_hi, min_lo, min_hi) enclosures for the displacement
    extrema of the sine family; each pair encloses the true extremum."""
    max_lo, max_hi = _sine_extremum(b, omega, p, q, +1, depth=budget)
    neg_lo, neg_hi = _sine_extremum(b, omega, p, q, -1, depth=budget)
    return (max_lo, max_hi, -neg_hi, -neg_lo)
