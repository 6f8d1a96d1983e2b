"""Standard-like forcings.

A standard-like forcing is a periodic phi with essential infimum of phi'
equal to -1, so the family x + omega + b*phi(x) loses invertibility exactly
at b = 1.  Piecewise-linear forcings live in reduced (w, l) coordinates:
weights w (the slopes) and interval lengths l with w.l = 0, sum(l) = 1 and
w_1 = -1.  The sine forcing sin(2*pi*x)/(2*pi) is the one smooth built-in.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .numeric import rat, rat_str


class ConstantForcingError(ValueError):
    pass


class AmbiguousReductionError(ValueError):
    """The slope -1 region is not unique, so the (r, s) reduction fails."""


class EmptyCellError(ValueError):
    pass


@dataclass(frozen=True)
class ReducedPLForcing:
    """Reduced PL forcing given by weights w and interval lengths ell."""

    w: tuple[Fraction, ...]
    ell: tuple[Fraction, ...]

    @classmethod
    def make(cls, w: Sequence, ell: Sequence) -> "ReducedPLForcing":
        w = tuple(rat(x) for x in w)
        ell = tuple(rat(x) for x in ell)
        violation = validate_reduced(w, ell)
        if violation is not None:
            raise ValueError(violation)
        return cls(w, ell)

    @property
    def k(self) -> int:
        return len(self.w)

    @property
    def cuts(self) -> tuple[Fraction, ...]:
        """Left endpoints of the intervals of definition, starting at 0."""
        out = [Fraction(0)]
        for length in self.ell[:-1]:
            out.append(out[-1] + length)
        return tuple(out)

    def slope_at(self, x: Fraction) -> Fraction:
        """phi'(x) on the interval of definition containing x (left-closed)."""
        t = x - math.floor(x)
        cuts = self.cuts
        for i in range(self.k - 1, -1, -1):
            if t >= cuts[i]:
                return self.w[i]
        raise AssertionError("unreachable")

    def eval(self, x: Fraction) -> Fraction:
        """Exact phi(x): the piecewise-linear antiderivative with phi(0)=0."""
        x = rat(x)
        t = x - math.floor(x)
        acc = Fraction(0)
        pos = Fraction(0)
        for w_i, ell_i in zip(self.w, self.ell):
            if t <= pos + ell_i:
                return acc + w_i * (t - pos)
            acc += w_i * ell_i
            pos += ell_i
        return acc  # t == 1 exactly; equals 0 by periodicity

    def value_range(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Exact (min, max) of phi over [lo, hi]."""
        if hi - lo >= 1:
            vals = [self.eval(c) for c in self.cuts]
            return (min(vals + [Fraction(0)]), max(vals + [Fraction(0)]))
        candidates = [self.eval(lo), self.eval(hi)]
        base = math.floor(lo)
        for n in (base, base + 1):
            for c in self.cuts:
                if lo <= c + n <= hi:
                    candidates.append(self.eval(c))
        return (min(candidates), max(candidates))

    def max_abs(self) -> Fraction:
        lo, hi = self.value_range(Fraction(0), Fraction(1))
        return max(abs(lo), abs(hi))

    def max_slope(self) -> Fraction:
        return max(self.w)


@dataclass(frozen=True)
class SineForcing:
    """phi(x) = sin(2 pi x) / (2 pi); min phi' = -1 analytically."""

    def eval(self, x: float) -> float:
        return math.sin(2 * math.pi * x) / (2 * math.pi)

    def deriv(self, x: float) -> float:
        return math.cos(2 * math.pi * x)

    max_abs_value = 1.0 / (2 * math.pi)
    max_abs_deriv = 1.0
    max_abs_second_deriv = 2 * math.pi


Forcing = Union[ReducedPLForcing, SineForcing]


def triangle_forcing(delta: Fraction) -> ReducedPLForcing:
    """Two-break forcing whose slope is -1 on an interval of width delta."""
    delta = rat(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return ReducedPLForcing.make(
        w=(Fraction(-1), delta / (1 - delta)),
        ell=(delta, 1 - delta),
    )


def validate_reduced(w: Sequence[Fraction], ell: Sequence[Fraction]) -> Optional[str]:
    """None if (w, ell) is a valid reduced forcing, else the violated condition."""
    if len(w) != len(ell):
        return f"length mismatch: {len(w)} weights vs {len(ell)} lengths"
    k = len(w)
    if k < 2:
        return "need at least two intervals of definition"
    if any(l <= 0 for l in ell):
        return "all lengths must be positive"
    if sum(ell) != 1:
        return f"lengths sum to {sum(ell)}, not 1"
    if w[0] != -1:
        return f"w_1 = {w[0]}, must be -1"
    if any(x < -1 for x in w):
        return "all weights must be >= -1"
    dot = sum(wi * li for wi, li in zip(w, ell))
    if dot != 0:
        return f"w.ell = {dot}, must be 0 (periodicity)"
    for i in range(k):
        if w[i] == w[(i + 1) % k]:
            return f"adjacent weights equal at index {i} (not a true break)"
    return None


def normalize_standard_like(w: Sequence, ell: Sequence) -> ReducedPLForcing:
    """Rescale PL slopes so the minimum slope is exactly -1."""
    w = [rat(x) for x in w]
    ell = [rat(x) for x in ell]
    m = min(w)
    if m >= 0:
        raise ConstantForcingError("minimum slope must be negative")
    scale = -m
    scaled = [x / scale for x in w]
    order = _rotate_min_first(scaled, ell)
    return ReducedPLForcing.make(*order)


def _rotate_min_first(w: list[Fraction], ell: list[Fraction]):
    idx = w.index(Fraction(-1))
    return (tuple(w[idx:] + w[:idx]), tuple(ell[idx:] + ell[:idx]))


def normalize_samples(samples: Sequence[float]) -> list[float]:
    """Rescale sampled phi' values so the sampled minimum is -1."""
    m = min(samples)
    if m >= 0:
        raise ConstantForcingError("sampled minimum slope must be negative")
    return [s / -m for s in samples]


@dataclass(frozen=True)
class GeneralPLForcing:
    """General PL standard-like forcing: cuts in [0,1), slopes, value at 0."""

    cuts: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    value_at_zero: Fraction

    def lengths(self) -> tuple[Fraction, ...]:
        out = []
        for i in range(len(self.cuts)):
            nxt = self.cuts[i + 1] if i + 1 < len(self.cuts) else self.cuts[0] + 1
            out.append(nxt - self.cuts[i])
        return tuple(out)


def shift_translate(r: Fraction, s: Fraction, f: ReducedPLForcing) -> GeneralPLForcing:
    """Build r + phi(x + s) as a general PL forcing (the inverse of reduction)."""
    r, s = rat(r), rat(s)
    s_frac = s - math.floor(s)
    cuts = sorted((c - s_frac) % 1 for c in f.cuts)
    slopes = tuple(f.slope_at(c + s_frac) for c in cuts)
    return GeneralPLForcing(tuple(cuts), slopes, r + f.eval(s_frac))


def reduce_general_pl(psi: GeneralPLForcing) -> tuple[Fraction, Fraction, ReducedPLForcing]:
    """Recover the unique (r, s, f) with psi(x) = r + f(x + s).

    Requires a unique interval of definition with slope exactly -1.
    """
    minus_one = [i for i, sl in enumerate(psi.slopes) if sl == -1]
    if len(minus_one) == 0:
        raise ValueError("forcing is not standard-like: no slope -1 interval")
    if len(minus_one) > 1:
        raise AmbiguousReductionError(
            f"slope -1 on {len(minus_one)} intervals of definition")
    idx = minus_one[0]
    left = psi.cuts[idx]
    s = -left
    k = len(psi.cuts)
    w = tuple(psi.slopes[(idx + i) % k] for i in range(k))
    lengths = psi.lengths()
    ell = tuple(lengths[(idx + i) % k] for i in range(k))
    f = ReducedPLForcing.make(w, ell)
    # r = psi at the left endpoint of the slope -1 interval
    r = _eval_general(psi, left)
    return (r, s, f)


def _eval_general(psi: GeneralPLForcing, x: Fraction) -> Fraction:
    t = x - math.floor(x)
    acc = psi.value_at_zero
    # integrate from 0 to t across the cut structure
    cuts = list(psi.cuts) + [psi.cuts[0] + 1]
    # slope on [cuts[-1]-1, cuts[0]) wraps from the last piece
    pos = Fraction(0)
    if psi.cuts[0] > 0:
        first = min(t, psi.cuts[0])
        acc += psi.slopes[-1] * first
        pos = first
    if t <= pos:
        return acc
    for i, sl in enumerate(psi.slopes):
        lo = psi.cuts[i]
        hi = cuts[i + 1]
        if t <= lo:
            break
        seg = min(t, hi) - lo
        if seg > 0:
            acc += sl * seg
    return acc


def discretize(samples: Sequence, n_cells: int) -> ReducedPLForcing:
    """Bin sampled phi' values into n_cells weight classes.

    Samples are centred before binning so the zero-mean (periodicity)
    condition holds exactly in rational arithmetic, then rescaled by the
    magnitude of the most negative cell average so w_1 = -1 exactly.
    Cell order: the -1 cell first, remaining cells ascending.
    """
    vals = [rat(s) if not isinstance(s, float) else Fraction(s) for s in samples]
    if n_cells < 2:
        raise ValueError("need at least two cells")
    mean = sum(vals) / len(vals)
    vals = [v - mean for v in vals]
    lo, hi = min(vals), max(vals)
    if lo == hi:
        raise ConstantForcingError("sampled derivative is constant")
    step = (hi - lo) / n_cells
    bins: list[list[Fraction]] = [[] for _ in range(n_cells)]
    for v in vals:
        idx = min(int((v - lo) / step), n_cells - 1)  # left-closed cells
        bins[idx].append(v)
    for i, cell in enumerate(bins):
        if not cell:
            raise EmptyCellError(f"cell {i} of {n_cells} has zero mass")
    weights = [sum(cell) / len(cell) for cell in bins]
    masses = [Fraction(len(cell), len(vals)) for cell in bins]
    scale = -weights[0]  # cell 0 holds the minimum values
    weights = [w / scale for w in weights]
    return ReducedPLForcing.make(tuple(weights), tuple(masses))


def solve_lengths(w: Sequence[Fraction],
                  ell_free: Sequence[Fraction]) -> Optional[tuple[Fraction, ...]]:
    """Complete (ell_1..ell_{k-2}) to a full length vector satisfying
    w.ell = 0 and sum(ell) = 1, or None if the result is not positive."""
    w = [rat(x) for x in w]
    k = len(w)
    free = [rat(x) for x in ell_free]
    if len(free) != k - 2:
        raise ValueError("expected k-2 free lengths")
    if w[-2] == w[-1]:
        raise ValueError("last two weights must differ")
    psi1 = free[0] - sum(w[i] * free[i] for i in range(1, k - 2))
    psi2 = 1 - sum(free)
    lkm1 = (psi1 - w[-1] * psi2) / (w[-2] - w[-1])
    lk = (w[-2] * psi2 - psi1) / (w[-2] - w[-1])
    ell = tuple(free) + (lkm1, lk)
    if any(l <= 0 for l in ell):
        return None
    return ell


def random_reduced_forcing(k: int, rng: random.Random,
                           max_attempts: int = 1000) -> ReducedPLForcing:
    """Seeded random valid reduced forcing with k intervals."""
    for _ in range(max_attempts):
        w = [Fraction(-1)]
        for _ in range(k - 1):
            w.append(Fraction(rng.randint(-90, 300), 100))
        try:
            ell = solve_lengths(w, [Fraction(rng.randint(5, 40), 100)
                                    for _ in range(k - 2)])
        except ValueError:
            continue
        if ell is None:
            continue
        if validate_reduced(tuple(w), ell) is None:
            return ReducedPLForcing(tuple(w), ell)
    raise RuntimeError(f"no valid random forcing with k={k} found")


# -- CLI forcing grammar: sine | triangle:<rat> | pl:w=<rat,...>;l=<rat,...> --

def parse_forcing(spec: str) -> Forcing:
    spec = spec.strip()
    if spec == "sine":
        return SineForcing()
    if spec.startswith("triangle:"):
        return triangle_forcing(rat(spec.split(":", 1)[1]))
    if spec.startswith("pl:"):
        body = spec[3:]
        parts = dict(p.split("=", 1) for p in body.split(";") if p)
        if set(parts) != {"w", "l"}:
            raise ValueError(f"bad pl forcing spec: {spec!r}")
        w = [rat(x) for x in parts["w"].split(",")]
        ell = [rat(x) for x in parts["l"].split(",")]
        return ReducedPLForcing.make(w, ell)
    raise ValueError(f"unknown forcing spec: {spec!r}")


def forcing_to_spec(f: Forcing) -> str:
    if isinstance(f, SineForcing):
        return "sine"
    w = ",".join(rat_str(x) for x in f.w)
    ell = ",".join(rat_str(x) for x in f.ell)
    return f"pl:w={w};l={ell}"
