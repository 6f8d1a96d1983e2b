"""Plausible index sets, their Jacobian, and root-separating perturbations.

For a weight vector w, each size-q multiset J of indices determines a
product polynomial G(y, w, J) = prod (1 + y w_j); the J whose unit root
lies in [1/n, 1] are the (1/n)-plausible sets.  Perturbing w inside the
constraint subspace {v : v.l = 0, v_1 = 0} generically makes all plausible
roots distinct; we search randomized directions and certify disjointness.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .numeric import (FactoredPolynomial, LemmaShapeError, RationalInterval,
                      poly_gcd, poly_trim, rat, refine_root, unique_root,
                      is_plausible_shape)
from .forcing import ReducedPLForcing, validate_reduced

MAX_MULTISETS = 10 ** 6


class TooManySetsError(ValueError):
    pass


class BudgetExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class IndexMultiset:
    """Size-q multiset of weight indices as sorted (index, multiplicity)."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_indices(cls, indices: Sequence[int]) -> "IndexMultiset":
        counts: dict[int, int] = {}
        for i in indices:
            counts[i] = counts.get(i, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @property
    def size(self) -> int:
        return sum(e for _, e in self.pairs)

    def multiplicity(self, j: int) -> int:
        return dict(self.pairs).get(j, 0)

    def poly(self, w: Sequence[Fraction]) -> FactoredPolynomial:
        return FactoredPolynomial.make([(w[i], e) for i, e in self.pairs])


def G_eval(b, w: Sequence, J: IndexMultiset) -> Fraction:
    """prod over J (with multiplicity) of (1 + b w_j), exactly."""
    b = rat(b)
    out = Fraction(1)
    for i, e in J.pairs:
        out *= (1 + b * rat(w[i])) ** e
    return out


@dataclass(frozen=True)
class PlausibleSet:
    J: IndexMultiset
    root: RationalInterval
    alpha: RationalInterval  # derivative of the product at the root; < 0


def enumerate_plausible(w: Sequence, q: int, n: int,
                        root_width=Fraction(1, 2 ** 40)) -> list[PlausibleSet]:
    """All (1/n)-plausible index multisets: G(., w, J) = 1 solvable in [1/n, 1]."""
    w = [rat(x) for x in w]
    if w[0] != -1:
        raise ValueError("w_1 must be -1")
    if not any(x > 0 for x in w):
        raise ValueError("need a positive weight")
    if n <= 1:
        raise ValueError("n must exceed 1")
    if math.comb(len(w) + q - 1, q) > MAX_MULTISETS:
        raise TooManySetsError("multiset enumeration too large")
    out = []
    inv_n = Fraction(1, n)
    for combo in combinations_with_replacement(range(len(w)), q):
        J = IndexMultiset.from_indices(combo)
        p = J.poly(w)
        try:
            has_root = is_plausible_shape(p)
        except LemmaShapeError:
            continue  # single-signed product: no unit root in (0, 1)
        if not has_root:
            continue
        if p.eval(inv_n) < 1:
            continue  # unique root lies below 1/n (p decreasing past its max)
        root = unique_root(p, rat(root_width))
        if root.hi < inv_n:
            continue
        alpha = _derivative_interval(p, root)
        out.append(PlausibleSet(J, root, alpha))
    return out


def _derivative_interval(p: FactoredPolynomial,
                         iv: RationalInterval) -> RationalInterval:
    vals = [p.eval_derivative(iv.lo), p.eval_derivative(iv.hi),
            p.eval_derivative(iv.mid)]
    # p' is smooth; pad by its Lipschitz bound over the (tiny) interval
    pad = _second_derivative_bound(p) * iv.width
    return RationalInterval(min(vals) - pad, max(vals) + pad)


def _second_derivative_bound(p: FactoredPolynomial) -> Fraction:
    coeffs = p.expand()
    return sum(abs(c) * i * (i - 1) for i, c in enumerate(coeffs))


class DegenerateFactorError(AssertionError):
    pass


def jacobian(w: Sequence, sets: Sequence[PlausibleSet]) -> list[list[RationalInterval]]:
    """A[i][j] = -b_i e_{i,j} / (alpha_i (1 + b_i w_j)) for j in J_i, else 0."""
    w = [rat(x) for x in w]
    zero = RationalInterval.point(Fraction(0))
    rows = []
    for ps in sets:
        if not ps.alpha.hi < 0:
            raise DegenerateFactorError("alpha interval not strictly negative")
        row = []
        for j, wj in enumerate(w):
            e = ps.J.multiplicity(j)
            if e == 0:
                row.append(zero)
                continue
            denom_factor = RationalInterval.point(Fraction(1)) + ps.root * wj
            if denom_factor.contains(Fraction(0)):
                raise DegenerateFactorError("1 + b w_j straddles 0")
            num = -(ps.root * e)
            row.append(_interval_div(num, _interval_mul(ps.alpha, denom_factor)))
        rows.append(row)
    return rows


def _interval_mul(a: RationalInterval, b: RationalInterval) -> RationalInterval:
    return a * b


def _interval_div(a: RationalInterval, b: RationalInterval) -> RationalInterval:
    if b.contains(Fraction(0)):
        raise ZeroDivisionError("interval denominator contains 0")
    cands = [a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi]
    return RationalInterval(min(cands), max(cands))


def _roots_pairwise_disjoint(w: Sequence[Fraction], q: int, n: int,
                             depth: int = 3) -> Optional[bool]:
    """True if all plausible roots are pairwise disjoint after refinement;
    False if two sets provably share a root; None if undecided."""
    sets = enumerate_plausible(w, q, n)
    polys = [ps.J.poly(w) for ps in sets]
    roots = [ps.root for ps in sets]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            ri, rj = roots[i], roots[j]
            for _ in range(depth):
                if ri.disjoint_from(rj):
                    break
                ri = refine_root(polys[i], ri, ri.width / 2 ** 20)
                rj = refine_root(polys[j], rj, rj.width / 2 ** 20)
            else:
                if _share_unit_root(polys[i], polys[j], ri, rj):
                    return False
                return None
            roots[i], roots[j] = ri, rj
    return True


def _share_unit_root(p1: FactoredPolynomial, p2: FactoredPolynomial,
                     iv1: RationalInterval, iv2: RationalInterval) -> bool:
    """Exact test: do p1(y)=1 and p2(y)=1 share a solution near the hull?"""
    a = p1.expand()
    b = p2.expand()
    a[0] -= 1
    b[0] -= 1
    g = poly_gcd(a, b)
    if len(poly_trim(g)) <= 1:
        return False
    # shared algebraic root iff the gcd changes sign on the interval hull
    lo = min(iv1.lo, iv2.lo)
    hi = max(iv1.hi, iv2.hi)
    from .numeric import poly_eval
    return poly_eval(g, lo) * poly_eval(g, hi) <= 0


def separate_roots(w: Sequence, ell: Sequence, q: int, n: int, epsilon,
                   seed: int = 0, max_attempts: int = 64) -> tuple[tuple, tuple]:
    """Perturb (w, ell) within epsilon so all plausible roots are disjoint.

    The perturbation direction lives in {v : v.ell = 0, v_1 = 0}, keeping the
    reduced-forcing constraints exact; step size halves across attempts.
    """
    w = tuple(rat(x) for x in w)
    ell = tuple(rat(x) for x in ell)
    epsilon = rat(epsilon)
    if validate_reduced(w, ell) is not None:
        raise ValueError(validate_reduced(w, ell))
    if len(w) < 3:
        raise ValueError("k=2 weights cannot be perturbed independently")
    if _roots_pairwise_disjoint(w, q, n):
        return (w, ell)
    rng = random.Random(seed)
    k = len(w)
    step = epsilon / 2
    for attempt in range(max_attempts):
        # random direction with v_1 = 0, projected onto v.ell = 0 using
        # the last coordinate
        v = [Fraction(0)] + [Fraction(rng.randint(-64, 64), 64)
                             for _ in range(k - 1)]
        dot = sum(vi * li for vi, li in zip(v, ell))
        v[-1] -= dot / ell[-1]
        scale = max(abs(x) for x in v)
        if scale == 0:
            continue
        v = [x / scale for x in v]
        w2 = tuple(wi + step * vi for wi, vi in zip(w, v))
        if validate_reduced(w2, ell) is not None:
            step /= 2
            continue
        if _roots_pairwise_disjoint(w2, q, n):
            return (w2, ell)
        if attempt % 4 == 3:
            step /= 2
    raise BudgetExhaustedError(
        f"no separating perturbation within {max_attempts} attempts")


def perturb_length_ratio(w: Sequence, ell: Sequence, epsilon) -> tuple:
    """ell' within epsilon of ell, valid for the same w, with a changed
    ratio ell_1/ell_2."""
    w = tuple(rat(x) for x in w)
    ell = tuple(rat(x) for x in ell)
    epsilon = rat(epsilon)
    if validate_reduced(w, ell) is not None:
        raise ValueError(validate_reduced(w, ell))
    k = len(w)
    if k < 3:
        raise ValueError("need k >= 3 to move lengths with w fixed")
    step = epsilon / 4
    while step > 0:
        if k == 3:
            # one free variable: l_1; l_2, l_3 follow from the constraints
            l1 = ell[0] + step
            if w[1] == w[2]:
                raise ValueError("w_2 = w_3 leaves no motion at k=3")
            l2 = (l1 - w[2] * (1 - l1)) / (w[1] - w[2])
            l3 = 1 - l1 - l2
            cand = (l1, l2, l3)
        else:
            # move l_1 and l_2 oppositely, re-solving l_{k-1}, l_k
            from .forcing import solve_lengths
            free = [ell[0] + step, ell[1] - step] + list(ell[2:k - 2])
            solved = solve_lengths(w, free)
            cand = solved
        if cand is not None and all(l > 0 for l in cand) \
                and validate_reduced(w, tuple(cand)) is None \
                and Fraction(cand[0]) / cand[1] != ell[0] / ell[1]:
            return tuple(cand)
        step /= 2
        if step < epsilon / 2 ** 40:
            break
    raise BudgetExhaustedError("no valid length perturbation found")
