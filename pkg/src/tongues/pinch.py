"""Pinch points: enumeration (k=2 closed form), certification, census,
configurations, induced polynomials, conjugacies, and invariant densities.

A p/q-pinch point is a parameter (b, omega) where the p/q tongue has zero
width; equivalently f^q is the rigid translation by p.  For two-weight
forcings w = (-1, w) the pinch b-values are the unique unit roots of
p_{q,j,w}(y) = (1-y)^j (1+wy)^{q-j} for j = 1..ceil(q w/(w+1)) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence, Union

from .numeric import (FactoredPolynomial, LemmaShapeError, RationalInterval,
                      rat, rat_str, rational_unit_root, refine_root,
                      unique_root, is_plausible_shape)
from .forcing import ReducedPLForcing
from .pl_engine import BreakType, PLMap, pl_from_family
from .circle_map import UnresolvedError

DEFAULT_SUP_BOUND = Fraction(1, 10 ** 12)


class JOutOfRangeError(ValueError):
    pass


class NotPinchError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotExactPinchError(NotPinchError):
    pass


class CertificateKind(Enum):
    EXACT_TRANSLATION = "exact"
    INTERVAL_CERTIFIED = "interval"


@dataclass(frozen=True)
class PinchCertificate:
    kind: CertificateKind
    epsilon: Optional[Fraction] = None  # sup-norm bound, interval grade only

    def label(self) -> str:
        if self.kind is CertificateKind.EXACT_TRANSLATION:
            return "exact"
        return f"interval:{float(self.epsilon):.0e}"


@dataclass(frozen=True)
class PinchPoint:
    p: int
    q: int
    j: int
    b: Union[Fraction, RationalInterval]
    b_poly: FactoredPolynomial
    omega: Union[Fraction, RationalInterval]
    certificate: PinchCertificate

    def to_json(self) -> dict:
        if isinstance(self.b, Fraction):
            b_json = {"exact": rat_str(self.b)}
        else:
            b_json = {
                "poly": [[rat_str(k), str(e)] for k, e in self.b_poly.factors],
                "interval": list(self.b.to_strs()),
            }
        if isinstance(self.omega, Fraction):
            omega_json = {"exact": rat_str(self.omega)}
        else:
            omega_json = {"interval": list(self.omega.to_strs())}
        return {"p": self.p, "q": self.q, "j": self.j, "b": b_json,
                "omega": omega_json, "certificate": self.certificate.label()}


def k2_forcing(w) -> ReducedPLForcing:
    """The reduced forcing with weights (-1, w); lengths forced by w.l = 0."""
    w = rat(w)
    if w <= 0:
        raise ValueError("second weight must be positive")
    return ReducedPLForcing.make((Fraction(-1), w),
                                 (w / (w + 1), Fraction(1) / (w + 1)))


def pinch_count(q: int, w) -> int:
    """tau(q, w) = ceil(q w/(w+1)) - 1: pinches per p/q tongue at k=2."""
    w = rat(w)
    if w <= 0:
        raise ValueError("w must be positive")
    delta = w / (w + 1)
    return -((-delta.numerator * q) // delta.denominator) - 1


def pinch_poly(q: int, j: int, w) -> FactoredPolynomial:
    """(1 - y)^j (1 + w y)^(q-j)."""
    return FactoredPolynomial.make([(Fraction(-1), j), (rat(w), q - j)])


def pinch_b(q: int, j: int, w,
            width=Fraction(1, 10 ** 9)) -> Union[Fraction, RationalInterval]:
    """Certified unique root of p_{q,j,w}(y) = 1 in (0, 1); exact if rational."""
    w = rat(w)
    tau = pinch_count(q, w)
    if not 1 <= j <= tau:
        raise JOutOfRangeError(f"j={j} outside 1..tau={tau} for q={q}, w={w}")
    poly = pinch_poly(q, j, w)
    exact = rational_unit_root(poly)
    if exact is not None:
        return exact
    return unique_root(poly, rat(width))


def solve_periodic_omega(b: Fraction, f: ReducedPLForcing, p: int, q: int,
                         x0=Fraction(0), max_iter: int = 500) -> Fraction:
    """The unique omega with F^q(x0) = x0 + p, solved exactly.

    g(omega) = F_omega^q(x0) - x0 - p is continuous, piecewise affine and
    strictly increasing in omega (d/d omega >= 1); bisection interleaved
    with affine extrapolation lands on the root exactly.
    """
    b, x0 = rat(b), rat(x0)
    if not 0 <= b <= 1:
        raise ValueError("b must lie in [0, 1]")

    def g(omega: Fraction) -> tuple[Fraction, Fraction]:
        x, d = x0, Fraction(0)
        for _ in range(q):
            d = 1 + (1 + b * f.slope_at(x)) * d
            x = x + omega + b * f.eval(x)
        return x - x0 - p, d

    span = b * f.max_abs() + 1
    lo, hi = Fraction(p, q) - span, Fraction(p, q) + span
    assert g(lo)[0] < 0 < g(hi)[0]
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        val, dval = g(mid)
        if val == 0:
            return mid
        if val < 0:
            lo = mid
        else:
            hi = mid
        cand = mid - val / dval
        if lo < cand < hi:
            vc, _ = g(cand)
            if vc == 0:
                return cand
            if vc < 0:
                lo = cand
            else:
                hi = cand
    raise UnresolvedError("omega solve did not terminate")


def _orbit_interval(bs: RationalInterval, omega: Fraction,
                    f: ReducedPLForcing, q: int,
                    x0=Fraction(0)) -> RationalInterval:
    """Outer enclosure of {F_{b,omega}^q(x0) : b in bs}."""
    x = RationalInterval.point(rat(x0))
    for _ in range(q):
        phi = RationalInterval(*f.value_range(x.lo, x.hi))
        x = x + omega + bs * phi
    return x


def _periodicity_certificate(bs: RationalInterval, omega: RationalInterval,
                             f: ReducedPLForcing, p: int, q: int) -> bool:
    """True if for every b in bs some omega' in omega makes 0 p/q-periodic.

    F^q(0) is increasing in omega, so it suffices that F^q(0) <= p at
    omega.lo and >= p at omega.hi for all b in bs.
    """
    at_lo = _orbit_interval(bs, omega.lo, f, q)
    at_hi = _orbit_interval(bs, omega.hi, f, q)
    return at_lo.hi <= p and at_hi.lo >= p


def _lipschitz_geom(f: ReducedPLForcing, b_hi: Fraction, q: int) -> Fraction:
    """sum_{i<q} S^i with S an upper bound for the family's slopes."""
    s = 1 + b_hi * max(f.max_slope(), Fraction(0))
    return sum(s ** i for i in range(q))


def verify_pinch(b, omega, f: ReducedPLForcing, p: int, q: int,
                 bound=DEFAULT_SUP_BOUND, b_poly: Optional[FactoredPolynomial] = None,
                 max_refine: int = 60):
    """Certify that (b, omega) is a p/q-pinch of the family over f.

    Exact rational (b, omega): checks f^q is the translation by p, giving an
    ExactTranslation certificate or NotPinch with a worst displacement
    witness.  Interval b (with its defining polynomial for refinement):
    returns IntervalCertified(eps) where eps bounds sup|F^q(x) - x - p| over
    the parameter box and the periodicity certificate for the orbit of the
    break at 0 holds across it.
    """
    bound = rat(bound)
    if isinstance(b, Fraction) or isinstance(b, int) or isinstance(b, str):
        b, omega = rat(b), rat(omega)
        g = pl_from_family(b, omega, f).power(q)
        if g.is_translation(p):
            return PinchCertificate(CertificateKind.EXACT_TRANSLATION)
        disps = [(abs(g.eval(c) - c - p), c) for c in g.cuts]
        worst, witness = max(disps)
        raise NotPinchError(
            f"f^q is not the translation by {p}; |displacement| = {worst} "
            f"at x = {witness}", witness=witness)

    bs: RationalInterval = b
    geom = _lipschitz_geom(f, bs.hi, q)
    maxphi = f.max_abs()
    for _ in range(max_refine):
        b_mid = bs.mid
        omega_c = solve_periodic_omega(b_mid, f, p, q)
        pad = bs.width * maxphi * geom + bound / (32 * geom)
        oms = RationalInterval(omega_c - pad, omega_c + pad)
        gmap = pl_from_family(b_mid, omega_c, f).power(q)
        dlo, dhi = gmap.displacement_range(Fraction(p))
        eps = max(abs(dlo), abs(dhi)) + (bs.width * maxphi + oms.width) * geom
        if eps <= bound and _periodicity_certificate(bs, oms, f, p, q):
            return PinchCertificate(CertificateKind.INTERVAL_CERTIFIED, eps)
        if b_poly is None:
            raise UnresolvedError(
                "cannot refine b enclosure without its defining polynomial")
        bs = refine_root(b_poly, bs, bs.width / 2 ** 8)
    raise UnresolvedError("sup-norm certification did not converge")


def pinch_omega(p: int, q: int, j: int, w,
                bound=DEFAULT_SUP_BOUND) -> Union[Fraction, RationalInterval]:
    """omega of the (p/q, j) pinch of the k=2 family with weights (-1, w).

    Exact rational when pinch_b is rational; otherwise a certified interval
    around the unique omega making the break at 0 p/q-periodic.
    """
    f = k2_forcing(w)
    b = pinch_b(q, j, rat(w))
    if isinstance(b, Fraction):
        return solve_periodic_omega(b, f, p, q)
    poly = pinch_poly(q, j, rat(w))
    bound = rat(bound)
    bs = b
    geom = _lipschitz_geom(f, bs.hi, q)
    maxphi = f.max_abs()
    for _ in range(60):
        omega_c = solve_periodic_omega(bs.mid, f, p, q)
        pad = bs.width * maxphi * geom + bound / 8
        oms = RationalInterval(omega_c - pad, omega_c + pad)
        if oms.width <= 4 * bound and _periodicity_certificate(bs, oms, f, p, q):
            return oms
        bs = refine_root(poly, bs, bs.width / 2 ** 8)
    raise UnresolvedError("omega certification did not converge")


def certify_pinch(p: int, q: int, j: int, w,
                  bound=DEFAULT_SUP_BOUND) -> PinchPoint:
    """Full k=2 pipeline: b certificate, omega, and pinch certificate."""
    w = rat(w)
    f = k2_forcing(w)
    poly = pinch_poly(q, j, w)
    b = pinch_b(q, j, w)
    omega = pinch_omega(p, q, j, w, bound)
    cert = verify_pinch(b, omega if isinstance(b, Fraction) else omega,
                        f, p, q, bound=bound,
                        b_poly=None if isinstance(b, Fraction) else poly)
    return PinchPoint(p, q, j, b, poly, omega, cert)


def enumerate_pinches(w, q_max: int,
                      bound=DEFAULT_SUP_BOUND) -> list[PinchPoint]:
    """All certified pinch points of the k=2 family, q <= q_max, p/q in [0,1)."""
    w = rat(w)
    out = []
    for q in range(2, q_max + 1):
        tau = pinch_count(q, w)
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            for j in range(1, tau + 1):
                out.append(certify_pinch(p, q, j, w, bound))
    return out


def rational_pinch_family(u, q: int, j: int) -> tuple[Fraction, Fraction]:
    """(w, b) with b = 1 - u^(j-q) an exact rational pinch value of the
    k=2 family with weights (-1, w), w = (u^j - 1)/b; requires u > 1 rational
    and j within the pinch range of (q, w)."""
    u = rat(u)
    if u <= 1:
        raise ValueError("u must exceed 1")
    b = 1 - u ** (j - q)
    w = (u ** j - 1) / b
    if not 1 <= j <= pinch_count(q, w):
        raise JOutOfRangeError(f"j={j} invalid for constructed w={w}, q={q}")
    assert pinch_poly(q, j, w).eval(b) == 1
    return w, b


# ---------------- census, configurations, conjugacy ----------------

def itinerary_census(b, omega, f: ReducedPLForcing, q: int) -> tuple[Fraction, ...]:
    """Lebesgue masses (lambda_0..lambda_q) of the itinerary classes of a
    k=2 family map: lambda_j = |{x : the q-orbit of x visits [0, l_1) j times}|.

    Asserts both census identities: sum lambda_j = 1 and
    sum p_{q,j,w}(b) lambda_j = 1.
    """
    if f.k != 2:
        raise ValueError("census requires a two-weight forcing")
    b, omega = rat(b), rat(omega)
    w = f.w[1]
    if b == 0:
        return (Fraction(1),) + (Fraction(0),) * q
    fmap = pl_from_family(b, omega, f)
    g = fmap.power(q)
    ell1 = f.ell[0]
    lam = [Fraction(0)] * (q + 1)
    cuts = list(g.cuts) + [Fraction(1)]
    for i in range(g.n_pieces):
        mid = (cuts[i] + cuts[i + 1]) / 2
        gamma = 0
        x = mid
        for _ in range(q):
            t = x - math.floor(x)
            if t < ell1:
                gamma += 1
            x = fmap.eval(x)
        lam[gamma] += cuts[i + 1] - cuts[i]
    assert sum(lam) == 1
    assert sum((1 - b) ** jj * (1 + w * b) ** (q - jj) * lam[jj]
               for jj in range(q + 1)) == 1
    return tuple(lam)


@dataclass(frozen=True)
class Configuration:
    """Marked points on the m rigid-rotation orbits of the anchors
    (i-1)/(qm), plus the weight attached to each marked interval."""

    p: int
    q: int
    m: int
    marked: tuple[Fraction, ...]   # sorted, in [0, 1), multiples of 1/(qm)
    weights: tuple[Fraction, ...]  # weight on [marked[t], marked[t+1])

    def __post_init__(self):
        qm = self.q * self.m
        if any(x * qm != int(x * qm) for x in self.marked):
            raise ValueError("marked points must lie on the 1/(qm) grid")
        if len(self.weights) != len(self.marked):
            raise ValueError("need one weight per marked interval")
        per_orbit = [0] * self.m
        for x in self.marked:
            per_orbit[int(x * qm) % self.m] += 1
        if any(c < 2 for c in per_orbit):
            raise ValueError("each orbit needs at least two marked points")

    def weight_at(self, x: Fraction) -> Fraction:
        t = x - math.floor(x)
        for i in range(len(self.marked) - 1, -1, -1):
            if t >= self.marked[i]:
                return self.weights[i]
        return self.weights[-1]  # wraps below marked[0]


def extract_configuration(b, omega, f: ReducedPLForcing,
                          p: int, q: int) -> Configuration:
    """Configuration of an exact pinch: breaks grouped into periodic orbits
    and pushed to the uniform 1/(qm) grid by the order identification."""
    cert = verify_pinch(rat(b), rat(omega), f, p, q)  # raises NotPinch
    assert cert.kind is CertificateKind.EXACT_TRANSLATION
    g = pl_from_family(rat(b), rat(omega), f)
    breaks = g.true_breaks()
    orbits: list[set[Fraction]] = []
    for c in breaks:
        pts = {x - math.floor(x) for x in g.orbit(c, q)}
        for o in orbits:
            if c in o:
                break
        else:
            orbits.append(pts)
    m = len(orbits)
    all_pts = sorted(set().union(*orbits))
    qm = q * m
    assert len(all_pts) == qm
    index = {x: i for i, x in enumerate(all_pts)}
    marked = sorted(Fraction(index[c], qm) for c in breaks)
    # weight on the marked interval starting at Psi(c_i) is the forcing
    # weight on [c_i, c_{i+1}): Psi is order-preserving with Psi(0) = 0
    weights = tuple(f.w[i] for i in range(f.k))
    return Configuration(p, q, m, tuple(marked), weights)


def induced_polynomials(c: Configuration) -> list[FactoredPolynomial]:
    """One degree-q polynomial per orbit-interval class: the product of
    (1 + w y) over the weights met by the rotation orbit of each interval."""
    qm = c.q * c.m
    out = []
    for i in range(c.m):
        factors = []
        for jj in range(c.q):
            mid = (Fraction(i, qm) + Fraction(1, 2 * qm)
                   + jj * Fraction(c.p, c.q)) % 1
            factors.append((c.weight_at(mid), 1))
        out.append(FactoredPolynomial.make(factors))
    return out


def build_conjugacy(g: PLMap, p: int, q: int) -> PLMap:
    """PL homeomorphism h with h o g o h^-1 = R_{p/q}, exactly.

    Requires g^q to be the exact translation by p; h sends the union of the
    break orbits to the uniform grid and is affine in between, so it has at
    most floor(qk/2) breakpoints for a k-break g.
    """
    if not g.power(q).is_translation(p):
        raise NotExactPinchError("g^q is not the exact translation by p")
    breaks = g.true_breaks()
    if not breaks:
        return PLMap.rotation(Fraction(0))  # g is already a rotation; h = id
    pts: set[Fraction] = set()
    for c in breaks:
        pts.update(x - math.floor(x) for x in g.orbit(c, q))
    all_pts = sorted(pts)
    n = len(all_pts)
    ends = all_pts[1:] + [all_pts[0] + 1]
    slopes = [Fraction(1, n) / (e - a) for a, e in zip(all_pts, ends)]
    if all_pts[0] != 0:
        raise NotExactPinchError("break orbits miss 0; unexpected for a "
                                 "reduced family map")
    h = PLMap.make(all_pts, slopes, Fraction(0))
    rot = PLMap.rotation(Fraction(p, q))
    if h.compose(g) != rot.compose(h):
        raise NotExactPinchError("order identification failed to conjugate")
    return h


@dataclass(frozen=True)
class StepDensity:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def integral(self) -> Fraction:
        ends = self.breakpoints[1:] + (self.breakpoints[0] + 1,)
        return sum(v * (e - a) for v, a, e
                   in zip(self.values, self.breakpoints, ends))

    def value_at(self, x: Fraction) -> Fraction:
        t = x - math.floor(x)
        for i in range(len(self.breakpoints) - 1, -1, -1):
            if t >= self.breakpoints[i]:
                return self.values[i]
        return self.values[-1]


def invariant_density(g: PLMap, h: PLMap) -> StepDensity:
    """eta = h' as a step function; g preserves eta d(lambda) exactly.

    Verified by the change-of-variables identity eta(g(x)) g'(x) = eta(x)
    on every piece of h o g.
    """
    eta = StepDensity(h.cuts, h.slopes)
    hg = h.compose(g)
    cuts = list(hg.cuts) + [Fraction(1)]
    for a, e in zip(cuts, cuts[1:]):
        mid = (a + e) / 2
        assert eta.value_at(g.eval(mid)) * g.slope_at(mid) == eta.value_at(mid)
    assert eta.integral() == 1
    assert all(v > 0 for v in eta.values)
    return eta


# ---------------- exhaustive exact-pinch search ----------------

def find_exact_pinches(f: ReducedPLForcing, q_max: int) -> list[tuple]:
    """All rational (b, omega, p, q) where f^q is the exact translation.

    Complete for rational parameters: at an exact pinch the break at 0 is
    p/q-periodic and the slope product along any piece of f^q equals 1, so
    b is a rational unit root of some weight-multiset product polynomial.
    """
    found = []
    for q in range(2, q_max + 1):
        roots: set[Fraction] = set()
        for combo in combinations_with_replacement(range(f.k), q):
            ks = [f.w[i] for i in combo]
            if not (any(k > 0 for k in ks) and any(k < 0 for k in ks)):
                continue
            factors = [(k, 1) for k in ks]
            r = rational_unit_root(FactoredPolynomial.make(factors))
            if r is not None and 0 < r < 1:
                roots.add(r)
        for b in sorted(roots):
            for p in range(1, q):
                if math.gcd(p, q) != 1:
                    continue
                omega = solve_periodic_omega(b, f, p, q)
                g = pl_from_family(b, omega, f).power(q)
                if g.is_translation(p):
                    found.append((b, omega, p, q))
    return found
