"""Exact piecewise-linear circle map engine.

A PLMap is the lift of a degree-one PL circle endomorphism, represented by
its cut points in [0, 1) (always including 0), one slope per piece, and the
anchor value F(0).  All arithmetic is rational, so composition, powers,
displacement ranges and translation tests are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .numeric import Rational, rat, rat_str
from .forcing import ReducedPLForcing

MAX_PIECES = 10 ** 6


class PieceBudgetError(RuntimeError):
    pass


class OrbitHitsBreakpointError(ValueError):
    pass


class BreakType(Enum):
    UP = "up"      # slope increases across the cut
    DOWN = "down"  # slope decreases across the cut


@dataclass(frozen=True)
class PLMap:
    """Lift of a degree-one PL circle map.

    cuts: strictly increasing rationals in [0, 1), cuts[0] == 0 always.
    slopes: slopes on [cuts[i], cuts[i+1]) (wrapping to cuts[0] + 1).
    anchor: F(0).
    """

    cuts: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    anchor: Fraction

    @classmethod
    def make(cls, cuts: Sequence, slopes: Sequence, anchor) -> "PLMap":
        cuts = [rat(c) for c in cuts]
        slopes = [rat(s) for s in slopes]
        anchor = rat(anchor)
        if len(cuts) != len(slopes):
            raise ValueError("need one slope per piece")
        if not cuts or cuts[0] != 0:
            raise ValueError("cuts must start at 0")
        if any(not 0 <= c < 1 for c in cuts):
            raise ValueError("cuts must lie in [0, 1)")
        if any(a >= b for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cuts must be strictly increasing")
        lengths = [b - a for a, b in zip(cuts, cuts[1:] + [Fraction(1)])]
        if sum(s * l for s, l in zip(slopes, lengths)) != 1:
            raise ValueError("slopes do not integrate to 1 (degree-one failure)")
        # merge interior cuts where the slope does not change (cut 0 is kept)
        keep_cuts, keep_slopes = [cuts[0]], [slopes[0]]
        for c, s in zip(cuts[1:], slopes[1:]):
            if s == keep_slopes[-1]:
                continue
            keep_cuts.append(c)
            keep_slopes.append(s)
        return cls(tuple(keep_cuts), tuple(keep_slopes), anchor)

    @classmethod
    def rotation(cls, p) -> "PLMap":
        return cls.make((Fraction(0),), (Fraction(1),), rat(p))

    @property
    def n_pieces(self) -> int:
        return len(self.cuts)

    def _cut_values(self) -> tuple[Fraction, ...]:
        """F at each cut, accumulated exactly from the anchor."""
        vals = [self.anchor]
        for i in range(1, self.n_pieces):
            vals.append(vals[-1] + self.slopes[i - 1] * (self.cuts[i] - self.cuts[i - 1]))
        return tuple(vals)

    def eval(self, x) -> Fraction:
        x = rat(x)
        n = math.floor(x)
        t = x - n
        vals = self._cut_values()
        i = self._piece_index(t)
        return n + vals[i] + self.slopes[i] * (t - self.cuts[i])

    def _piece_index(self, t: Fraction) -> int:
        lo, hi = 0, self.n_pieces - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.cuts[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def slope_at(self, x) -> Fraction:
        t = rat(x)
        t -= math.floor(t)
        return self.slopes[self._piece_index(t)]

    def is_true_break(self, x) -> Optional[BreakType]:
        """Break type at x if the slope changes across x mod 1, else None."""
        t = rat(x)
        t -= math.floor(t)
        if t not in self.cuts:
            return None
        i = self.cuts.index(t)
        ahead = self.slopes[i]
        behind = self.slopes[i - 1]  # i == 0 wraps to the last piece
        if ahead == behind:
            return None
        return BreakType.UP if ahead > behind else BreakType.DOWN

    def true_breaks(self) -> tuple[Fraction, ...]:
        return tuple(c for c in self.cuts if self.is_true_break(c) is not None)

    def compose(self, inner: "PLMap") -> "PLMap":
        """self o inner."""
        f, g = inner, self
        f_vals = f._cut_values()
        f_cuts = list(f.cuts) + [Fraction(1)]
        f_end = f.anchor + 1  # F(1)
        new_cuts: list[Fraction] = []
        new_slopes: list[Fraction] = []
        for i in range(f.n_pieces):
            lo_x, hi_x = f_cuts[i], f_cuts[i + 1]
            lo_v = f_vals[i]
            hi_v = f_vals[i + 1] if i + 1 < f.n_pieces else f_end
            s = f.slopes[i]
            pts = [lo_x]
            if s != 0:
                # preimages of g's cuts (shifted by integers) inside (lo_v, hi_v)
                a, b = (lo_v, hi_v) if s > 0 else (hi_v, lo_v)
                for d in g.cuts:
                    n0 = math.floor(a - d) + 1  # smallest n with d + n > a
                    n = n0
                    while d + n < b:
                        pts.append(lo_x + (d + n - lo_v) / s)
                        n += 1
            pts = sorted(set(pts))
            ends = pts[1:] + [hi_x]
            for p, e in zip(pts, ends):
                mid = (p + e) / 2
                new_cuts.append(p)
                new_slopes.append(s * g.slope_at(f.eval(mid)))
                if len(new_cuts) > MAX_PIECES:
                    raise PieceBudgetError("composition exceeded piece budget")
        return PLMap.make(new_cuts, new_slopes, g.eval(f.anchor))

    def power(self, q: int) -> "PLMap":
        if q < 1:
            raise ValueError("power must be >= 1")
        result = self
        for _ in range(q - 1):
            result = self.compose(result)
        return result

    def displacement_range(self, p) -> tuple[Fraction, Fraction]:
        """Exact (min, max) over x of F(x) - x - p."""
        p = rat(p)
        vals = self._cut_values()
        disps = [v - c - p for v, c in zip(vals, self.cuts)]
        return (min(disps), max(disps))

    def is_translation(self, p) -> bool:
        return self.slopes == (Fraction(1),) and self.anchor == rat(p)

    def inverse(self) -> "PLMap":
        if any(s <= 0 for s in self.slopes):
            raise ValueError("inverse requires strictly increasing map")
        vals = self._cut_values()
        # piece i maps [c_i, c_{i+1}) onto [v_i, v_{i+1}); its inverse has
        # cut v_i mod 1, slope 1/s_i
        pairs = sorted((v - math.floor(v), Fraction(1) / s)
                       for v, s in zip(vals, self.slopes))
        new_cuts = [t for t, _ in pairs]
        new_slopes = [s for _, s in pairs]
        if new_cuts[0] != 0:
            # [0, min cut) is covered by the piece wrapping past 1
            new_cuts.insert(0, Fraction(0))
            new_slopes.insert(0, new_slopes[-1])
        # anchor = F^{-1}(0): the image intervals tile [anchor_v, anchor_v+1),
        # so exactly one piece's value interval contains an integer n
        ends = list(vals[1:]) + [self.anchor + 1]
        anchor = None
        for c, v, e, s in zip(self.cuts, vals, ends, self.slopes):
            n = math.ceil(v)
            if v <= n < e:
                anchor = c + (n - v) / s - n
                break
        assert anchor is not None
        return PLMap.make(new_cuts, new_slopes, anchor)

    def orbit(self, x, q: int) -> list[Fraction]:
        """x, f(x), ..., f^{q-1}(x) as lift values (not reduced mod 1)."""
        x = rat(x)
        out = [x]
        for _ in range(q - 1):
            out.append(self.eval(out[-1]))
        return out

    def is_periodic_point(self, x, p, q: int) -> bool:
        x = rat(x)
        y = x
        for _ in range(q):
            y = self.eval(y)
        return y == x + rat(p)

    def derivative_product(self, x, q: int) -> Fraction:
        """Product of slopes along the length-q orbit of x.

        Raises if the orbit lands on a true break, where the one-sided
        derivatives differ.
        """
        prod = Fraction(1)
        y = rat(x)
        for _ in range(q):
            if self.is_true_break(y) is not None:
                raise OrbitHitsBreakpointError(f"orbit hits break at {y}")
            prod *= self.slope_at(y)
            y = self.eval(y)
        return prod

    def to_json(self) -> dict:
        return {
            "breakpoints": [rat_str(c) for c in self.cuts],
            "slopes": [rat_str(s) for s in self.slopes],
            "anchor": rat_str(self.anchor),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLMap":
        return cls.make(
            [rat(c) for c in data["breakpoints"]],
            [rat(s) for s in data["slopes"]],
            rat(data["anchor"]),
        )


def pl_from_family(b, omega, forcing: ReducedPLForcing) -> PLMap:
    """The map x + omega + b * phi(x) for a reduced PL forcing phi."""
    b, omega = rat(b), rat(omega)
    if b < 0 or b > 1:
        raise ValueError("b must lie in [0, 1] for a monotone standard-like family")
    cuts = forcing.cuts
    slopes = tuple(1 + b * w for w in forcing.w)
    return PLMap.make(cuts, slopes, omega + b * forcing.eval(Fraction(0)))
