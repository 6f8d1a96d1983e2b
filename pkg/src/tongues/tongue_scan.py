"""Tongue boundary bisection, diagram sweeps, and pinch-candidate filtering.

For fixed b the locking window of p/q in omega is an interval; its left
endpoint is where max_x(F^q(x) - x - p) crosses 0 and its right endpoint is
where min_x crosses 0, both strictly increasing in omega.  PL forcings get
exact sign predicates; the sine forcing uses certified extremum bounds.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .numeric import RationalInterval, rat, rat_str
from .forcing import Forcing, ReducedPLForcing, SineForcing
from .pl_engine import pl_from_family
from .circle_map import UnresolvedError, _sine_extremum

log = logging.getLogger(__name__)

DEFAULT_TOL = Fraction(1, 2 ** 40)
DEFAULT_B_GRID = tuple(Fraction(i, 200) for i in range(1, 201))


@dataclass(frozen=True)
class TongueRecord:
    p: int
    q: int
    b: Fraction
    omega_left: RationalInterval
    omega_right: RationalInterval

    @property
    def width_lower_bound(self) -> Fraction:
        return max(Fraction(0), self.omega_right.lo - self.omega_left.hi)

    @property
    def width_upper_bound(self) -> Fraction:
        return max(Fraction(0), self.omega_right.hi - self.omega_left.lo)


def _pl_extremum_sign(f: ReducedPLForcing, b: Fraction, omega: Fraction,
                      p: int, q: int, which: str) -> int:
    g = pl_from_family(b, omega, f).power(q)
    lo, hi = g.displacement_range(Fraction(p))
    v = hi if which == "max" else lo
    return (v > 0) - (v < 0)


def _boundary_pl(f: ReducedPLForcing, b: Fraction, p: int, q: int,
                 tol: Fraction, which: str) -> RationalInterval:
    center = Fraction(p, q)
    a, c = center - Fraction(1, 2), center + Fraction(1, 2)
    # invariant: extremum < 0 at a, >= 0 at c
    for _ in range(8):
        if _pl_extremum_sign(f, b, a, p, q, which) < 0:
            break
        a -= (c - a)
    else:
        raise UnresolvedError("no negative-sign bracket endpoint found")
    for _ in range(8):
        if _pl_extremum_sign(f, b, c, p, q, which) >= 0:
            break
        c += (c - a)
    else:
        raise UnresolvedError("no nonnegative-sign bracket endpoint found")
    while c - a > tol:
        mid = (a + c) / 2
        if _pl_extremum_sign(f, b, mid, p, q, which) < 0:
            a = mid
        else:
            c = mid
    return RationalInterval(a, c)


def _boundary_sine(b: float, p: int, q: int, tol: Fraction,
                   which: str, budget: int = 40) -> RationalInterval:
    sign = +1 if which == "max" else -1
    center = p / q
    a, c = center - 0.5, center + 0.5
    tol_f = float(tol)
    while c - a > tol_f:
        mid = (a + c) / 2
        # enclosure of sign-adjusted extremum of the displacement at mid
        lo, hi = _sine_extremum(b, mid, p, q, sign, depth=budget,
                                target_gap=(c - a) / 32, stop_sign=True)
        if sign < 0:
            lo, hi = -hi, -lo
        if hi < 0:
            a = mid
        elif lo > 0:
            c = mid
        else:
            # the extremum is increasing in omega with derivative >= 1, so
            # the crossing lies within m = max(|lo|,|hi|) of mid; when the
            # sign is undecided at gap <= (c-a)/32 this shrinks the bracket
            # by at least a factor of 4
            m = max(abs(lo), abs(hi))
            na, nc = max(a, mid - m), min(c, mid + m)
            if nc - na >= (c - a) * 0.9:
                raise UnresolvedError(
                    f"extremum enclosure [{lo}, {hi}] too wide to make progress")
            a, c = na, nc
    return RationalInterval(Fraction(a), Fraction(c))


def left_boundary(f: Forcing, b, p: int, q: int,
                  tol=DEFAULT_TOL) -> RationalInterval:
    """Interval of width <= tol around the omega where locking at p/q begins."""
    tol = rat(tol)
    if isinstance(f, SineForcing):
        return _boundary_sine(float(b), p, q, tol, "max")
    return _boundary_pl(f, rat(b), p, q, tol, "max")


def right_boundary(f: Forcing, b, p: int, q: int,
                   tol=DEFAULT_TOL) -> RationalInterval:
    tol = rat(tol)
    if isinstance(f, SineForcing):
        return _boundary_sine(float(b), p, q, tol, "min")
    return _boundary_pl(f, rat(b), p, q, tol, "min")


def farey_fractions(q_max: int) -> list[tuple[int, int]]:
    """Reduced p/q in [0, 1) with q <= q_max, ordered by (q, p)."""
    out = []
    for q in range(1, q_max + 1):
        for p in range(q):
            if gcd(p, q) == 1:
                out.append((p, q))
    return out


def scan_tongues(f: Forcing, q_max: int,
                 b_values: Sequence = DEFAULT_B_GRID,
                 tol=DEFAULT_TOL) -> list[TongueRecord]:
    """One record per (p/q, b); order (q, p, b); unresolved cells skipped."""
    tol = rat(tol)
    records = []
    for p, q in farey_fractions(q_max):
        for b in b_values:
            b = rat(b)
            if b == 0:
                point = RationalInterval.point(Fraction(p, q))
                records.append(TongueRecord(p, q, Fraction(0), point, point))
                continue
            try:
                left = left_boundary(f, b, p, q, tol)
                right = right_boundary(f, b, p, q, tol)
            except UnresolvedError as exc:
                log.warning("unresolved cell p/q=%d/%d b=%s: %s", p, q, b, exc)
                continue
            records.append(TongueRecord(p, q, b, left, right))
    return records


def pinch_candidates(records: Iterable[TongueRecord],
                     width_threshold) -> list[tuple[int, int, Fraction]]:
    """(p, q, b) cells whose certified width upper bound is below threshold."""
    width_threshold = rat(width_threshold)
    return [(r.p, r.q, r.b) for r in records
            if r.q > 1 and r.width_upper_bound < width_threshold]


CSV_COLUMNS = [
    "p", "q", "b",
    "omega_left_lo", "omega_left_hi",
    "omega_right_lo", "omega_right_hi",
    "width_lb",
    "b_float", "omega_left_float", "omega_right_float", "width_lb_float",
]


def write_csv(path: str, records: Sequence[TongueRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([
                r.p, r.q, rat_str(r.b),
                rat_str(r.omega_left.lo), rat_str(r.omega_left.hi),
                rat_str(r.omega_right.lo), rat_str(r.omega_right.hi),
                rat_str(r.width_lower_bound),
                repr(float(r.b)),
                repr(float(r.omega_left.mid)),
                repr(float(r.omega_right.mid)),
                repr(float(r.width_lower_bound)),
            ])


def read_csv(path: str) -> list[TongueRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(TongueRecord(
                int(row["p"]), int(row["q"]), rat(row["b"]),
                RationalInterval(rat(row["omega_left_lo"]),
                                 rat(row["omega_left_hi"])),
                RationalInterval(rat(row["omega_right_lo"]),
                                 rat(row["omega_right_hi"])),
            ))
    return records
