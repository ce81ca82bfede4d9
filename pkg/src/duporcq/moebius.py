"""Photogrammetric pictures of planar 5-tuples under isotropic projections.

A direction of projection is a point c on the conic x^2+y^2+z^2=0.  A planar
point M projects to the complex value z = M.x*c1 + M.y*c2; the pairwise
differences D_ij = z_i - z_j assemble into six quintic products phi_0..phi_5
whose projective class is a Moebius invariant of the five projected values.
The vanishing pattern of the phi tuple decides membership in the ten lines
L_ij, which is what the reconstruction filter consumes.

For a direction along which a collinear triple projects to one point, all six
phi vanish; the extended picture divides out the common linear factor of the
six binary forms in (c1, c2) and evaluates the quotient.  For a rational
direction this is exact, and it agrees projectively with parametrizing the
conic by c(t) = (2t : 1-t^2 : i(1+t^2)) and cancelling the polynomial gcd
in t, without ever leaving the rationals (the t of a special direction is
usually irrational even when the direction itself is rational).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import GaussRational, I, MPoly, as_gauss, gcd, generators
from .geometry import BaseParams, PlanarPoint, canonical_base, collinear, cross

PAIRS = ((1, 2), (1, 3), (1, 4), (1, 5), (2, 3),
         (2, 4), (2, 5), (3, 4), (3, 5), (4, 5))

# factor lists of phi_0..phi_5; repeated pair means a squared factor
PHI_FACTORS = (
    ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5)),
    ((1, 2), (2, 5), (1, 5), (3, 4), (3, 4)),
    ((1, 2), (2, 3), (1, 3), (4, 5), (4, 5)),
    ((2, 3), (3, 4), (2, 4), (1, 5), (1, 5)),
    ((3, 4), (4, 5), (3, 5), (1, 2), (1, 2)),
    ((1, 4), (4, 5), (1, 5), (2, 3), (2, 3)),
)

SUPPORT = {pair: frozenset(k for k in range(6) if pair in PHI_FACTORS[k])
           for pair in PAIRS}


class AllZero(ArithmeticError):
    """All six picture components vanish; use the extended picture."""


class NotCollinearDirection(ValueError):
    """Extension requested along a direction with no unique collinear triple."""


@dataclass(frozen=True)
class ConicDirection:
    """Point (c1 : c2 : c3) of the conic; c3 may stay implicit for planar use."""

    c1: GaussRational
    c2: GaussRational
    c3: GaussRational | None = None

    def __post_init__(self):
        object.__setattr__(self, "c1", as_gauss(self.c1))
        object.__setattr__(self, "c2", as_gauss(self.c2))
        if self.c3 is not None:
            c3 = as_gauss(self.c3)
            object.__setattr__(self, "c3", c3)
            if self.c1 ** 2 + self.c2 ** 2 + c3 ** 2 != GaussRational(0):
                raise ValueError("c must satisfy c1^2+c2^2+c3^2 = 0")
        if not self.c1 and not self.c2:
            raise ValueError("c1 = c2 = 0 projects every planar point to 0")

    @classmethod
    def from_t(cls, t) -> "ConicDirection":
        t = as_gauss(t)
        return cls(2 * t, 1 - t * t, I * (1 + t * t))

    @classmethod
    def from_direction(cls, u) -> "ConicDirection":
        """Projection direction parallel to the planar vector u."""
        u1, u2 = _as_uv(u)
        return cls(GaussRational(u2), GaussRational(-u1))

    def planar_direction(self) -> PlanarPoint:
        if not (self.c1.is_real() and self.c2.is_real()):
            raise ValueError("no rational planar direction for a complex c")
        return PlanarPoint(-self.c2.as_fraction(), self.c1.as_fraction())


def _as_uv(u) -> tuple:
    if isinstance(u, PlanarPoint):
        u1, u2 = u.x, u.y
    else:
        u1, u2 = (Fraction(str(v)) if not isinstance(v, (int, Fraction)) else Fraction(v)
                  for v in u)
    if u1 == 0 and u2 == 0:
        raise ValueError("zero direction")
    return Fraction(u1), Fraction(u2)


@dataclass(frozen=True)
class DelPezzoPoint:
    phi: tuple

    def __post_init__(self):
        phi = tuple(as_gauss(v) for v in self.phi)
        if len(phi) != 6:
            raise ValueError("need six components")
        if not any(phi):
            raise AllZero("all six components vanish")
        object.__setattr__(self, "phi", phi)

    def zeros(self) -> frozenset:
        return frozenset(k for k, v in enumerate(self.phi) if not v)

    def proportional(self, other: "DelPezzoPoint") -> bool:
        if self.zeros() != other.zeros():
            return False
        ref = next(k for k, v in enumerate(self.phi) if v)
        a, b = self.phi[ref], other.phi[ref]
        return all(self.phi[k] * b == other.phi[k] * a for k in range(6))


def project(points, c: ConicDirection) -> list:
    return [c.c1 * GaussRational(p.x) + c.c2 * GaussRational(p.y)
            for p in points]


def dij(points, c: ConicDirection, i: int, j: int) -> GaussRational:
    """Projected difference z_i - z_j; zero iff M_i M_j is parallel to the
    direction of c."""
    if i == j:
        raise ValueError("need two distinct indices")
    d = points[i - 1] - points[j - 1]
    return c.c1 * GaussRational(d.x) + c.c2 * GaussRational(d.y)


def phi_from_projections(z) -> tuple:
    """Six picture components from five already-projected complex values."""
    z = [as_gauss(v) for v in z]
    dd = {}
    for (i, j) in PAIRS:
        dd[(i, j)] = z[i - 1] - z[j - 1]
    out = []
    for factors in PHI_FACTORS:
        prod = GaussRational(1)
        for pair in factors:
            prod = prod * dd[pair]
        out.append(prod)
    return tuple(out)


def del_pezzo(points, c: ConicDirection) -> DelPezzoPoint:
    phi = phi_from_projections(project(points, c))
    if not any(phi):
        raise AllZero("collinear-triple direction; use extended_del_pezzo")
    return DelPezzoPoint(phi)


def collinear_triples(points) -> list:
    out = []
    for i in range(1, 6):
        for j in range(i + 1, 6):
            for k in range(j + 1, 6):
                if collinear(points[i - 1], points[j - 1], points[k - 1]):
                    out.append((i, j, k))
    return out


def extended_del_pezzo(points, direction) -> DelPezzoPoint:
    """Picture at a direction carrying exactly one collinear triple.

    Every D_ij vanishing along the direction is a rational multiple of one
    linear form; dividing the six products by the minimal common power of
    that form and evaluating is exact and matches the conic-parameter gcd
    construction projectively.
    """
    u1, u2 = _as_uv(direction)
    udir = PlanarPoint(u1, u2)
    matching = [T for T in collinear_triples(points)
                if cross(points[T[1] - 1] - points[T[0] - 1], udir) == 0]
    if len(matching) != 1:
        raise NotCollinearDirection(
            f"direction ({u1},{u2}) carries {len(matching)} collinear triples")
    c1, c2 = GaussRational(u2), GaussRational(-u1)
    val = {}     # nonvanishing D values at c
    lam = {}     # D = lam * L for the vanishing ones
    for (i, j) in PAIRS:
        d = points[i - 1] - points[j - 1]
        v = c1 * GaussRational(d.x) + c2 * GaussRational(d.y)
        if v:
            val[(i, j)] = v
        else:
            # D_ij = a*x1 + b*x2 with (a,b) = d, proportional to L = -u1*x1 - u2*x2
            lam[(i, j)] = (GaussRational(d.x) / GaussRational(-u1) if u1 != 0
                           else GaussRational(d.y) / GaussRational(-u2))
    mults = [sum(1 for pair in factors if pair in lam) for factors in PHI_FACTORS]
    m = min(mults)
    out = []
    for k, factors in enumerate(PHI_FACTORS):
        if mults[k] > m:
            out.append(GaussRational(0))
            continue
        prod = GaussRational(1)
        for pair in factors:
            prod = prod * (lam[pair] if pair in lam else val[pair])
        out.append(prod)
    return DelPezzoPoint(tuple(out))


def picture(points, c: ConicDirection) -> DelPezzoPoint:
    """Plain picture, falling back to the extended one at special directions."""
    try:
        return del_pezzo(points, c)
    except AllZero:
        return extended_del_pezzo(points, c.planar_direction())


def line_membership(p: DelPezzoPoint) -> set:
    z = p.zeros()
    return {frozenset(pair) for pair in PAIRS if SUPPORT[pair] == z}


def same_picture(tuple_a, tuple_b, c: ConicDirection) -> bool:
    """True iff the two pictures agree as projective points.

    Each side independently falls back to its extended picture when its five
    projections collapse; a complex c admits no extension, so AllZero
    propagates there.
    """
    def side(points):
        try:
            return del_pezzo(points, c)
        except AllZero:
            if c.c1.is_real() and c.c2.is_real():
                return extended_del_pezzo(points, c.planar_direction())
            raise
    return side(tuple_a).proportional(side(tuple_b))


def special_directions(points) -> list:
    """The six decisive directions of a two-triple tuple, by defining points:
    the two triple carriers and the four remaining connecting lines."""
    M1, M2, _, M4, M5 = points
    return [
        ("d123", M2 - M1),
        ("d345", M5 - M4),
        ("d15", M5 - M1),
        ("d14", M4 - M1),
        ("d25", M5 - M2),
        ("d24", M4 - M2),
    ]


def random_directions(seed: int, samples: int) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < samples:
        t = Fraction(rng.randint(-60, 60), rng.randint(1, 40))
        c = ConicDirection.from_t(t)
        out.append(("t=" + str(t), c))
    return out


def validate_candidates(base: BaseParams, candidates, seed: int = 0,
                        samples: int = 20) -> list:
    """Keep the candidates whose pictures match the base's at 20 random
    directions and at all six special directions."""
    report = candidate_report(base, candidates, seed=seed, samples=samples)
    return [c for c in candidates if report[c.tag]["accepted"]]


def candidate_report(base: BaseParams, candidates, seed: int = 0,
                     samples: int = 20) -> dict:
    """Per-candidate verdicts with the memberships that decide them."""
    pts, _, _, _ = canonical_base(base)
    directions = [(name, ConicDirection.from_direction(u))
                  for name, u in special_directions(pts)]
    directions += random_directions(seed, samples)
    report = {}
    for cand in candidates:
        entry = {"accepted": True, "first_failure": None, "directions": {}}
        for name, c in directions:
            ok = same_picture(pts, cand.platform, c)
            if name.startswith("d"):
                def memb(tuple_):
                    try:
                        p = del_pezzo(tuple_, c)
                        ext = False
                    except AllZero:
                        p = extended_del_pezzo(tuple_, c.planar_direction())
                        ext = True
                    return sorted(sorted(pair) for pair in line_membership(p)), ext
                base_m, base_ext = memb(pts)
                cand_m, cand_ext = memb(cand.platform)
                entry["directions"][name] = {
                    "match": ok,
                    "base_membership": base_m,
                    "base_extended": base_ext,
                    "candidate_membership": cand_m,
                    "candidate_extended": cand_ext,
                }
            if not ok and entry["first_failure"] is None:
                entry["accepted"] = False
                entry["first_failure"] = name
            elif not ok:
                entry["accepted"] = False
        report[cand.tag] = entry
    return report


def membership_report(points, directions) -> list:
    """JSON-ready membership summary for a list of (name, planar direction)."""
    out = []
    for name, u in directions:
        u1, u2 = _as_uv(u)
        c = ConicDirection.from_direction((u1, u2))
        try:
            p = del_pezzo(points, c)
            extended = False
        except AllZero:
            p = extended_del_pezzo(points, (u1, u2))
            extended = True
        out.append({
            "direction": name,
            "vector": [str(u1), str(u2)],
            "extended": extended,
            "membership": sorted(sorted(pair) for pair in line_membership(p)),
            "phi": [str(v) for v in p.phi],
        })
    return out


@dataclass(frozen=True)
class ProfileCurve:
    """Six conic-parameter polynomials with their common factor removed."""

    components: tuple
    removed: MPoly

    def __post_init__(self):
        g = None
        for comp in self.components:
            g = comp if g is None else gcd(g, comp)
        assert g is not None and g.degree() == 0, "components share a factor"


def profile(points) -> ProfileCurve:
    (t,) = generators(("t",))
    one = MPoly.const(("t",), 1)
    z = [2 * t * GaussRational(p.x) + (one - t * t) * GaussRational(p.y)
         for p in points]
    dd = {(i, j): z[i - 1] - z[j - 1] for (i, j) in PAIRS}
    phis = []
    for factors in PHI_FACTORS:
        prod = one
        for pair in factors:
            prod = prod * dd[pair]
        phis.append(prod)
    g = None
    for p in phis:
        if not p.is_zero():
            g = p if g is None else gcd(g, p)
    if g is None:
        raise AllZero("degenerate tuple: identically zero profile")
    components = tuple(p.exact_div(g) if not p.is_zero() else p for p in phis)
    return ProfileCurve(components, g)


def profile_rows(curve: ProfileCurve, ts) -> list:
    """CSV rows (t, phi0..phi5) at rational parameter values."""
    rows = []
    for t in ts:
        tv = as_gauss(t)
        vals = [comp.evaluate({"t": tv}).scalar() for comp in curve.components]
        rows.append([str(Fraction(t))] + [str(v) for v in vals])
    return rows


def cross_ratio(a, b, c, d) -> GaussRational:
    a, b, c, d = (as_gauss(v) for v in (a, b, c, d))
    return ((a - c) * (b - d)) / ((b - c) * (a - d))
