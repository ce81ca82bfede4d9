"""Planar pentapod and hexapod designs: canonical base, kappa-map platforms,
complete-quadrilateral completion, affine ratios, reconstruction candidates.

All coordinates are exact Fractions embedded at z=0; floating point never
enters this module, so every degeneracy predicate is decidable.

The canonical base is
    M1=(0,0), M2=(1,0), M4=(A4,B4), M5=(A5,B5),
    M3=((B4*A5-A4*B5)/(B4-B5), 0),
which places M3 on both carrier lines M1M2 and M4M5.  The nondegeneracy
values are
    U1=(B4-B5)(B4*A5-A4*B5)(B4*A5-A4*B5-B4+B5),
    U2=B4*A5+B5-A4*B5,  U3=B4*A5-B4-A4*B5.
U1=0 iff M3 coincides with M1 or M2; U2=0 iff M1M5 is parallel to M2M4
(the quadrilateral vertex M1M5∩M2M4 escapes to infinity); U3=0 iff
M1M4 is parallel to M2M5.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class DegenerateBase(ValueError):
    """Base parameters violate a nondegeneracy constraint."""


class DegeneratePlatform(ValueError):
    """Constructed platform has a vertex at infinity or a coincidence."""


class NotCollinear(ValueError):
    """tv_ratio input points are not on one line."""


class CoincidentBase(ValueError):
    """tv_ratio base pair coincides."""


class NotDuporcq(ValueError):
    """Design is not a pair of congruent complete quadrilaterals."""


class SchemaError(ValueError):
    """Design JSON does not match the expected schema."""


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class PlanarPoint:
    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        object.__setattr__(self, "x", _fr(x))
        object.__setattr__(self, "y", _fr(y))

    def __sub__(self, other: "PlanarPoint") -> "PlanarPoint":
        return PlanarPoint(self.x - other.x, self.y - other.y)

    def __add__(self, other: "PlanarPoint") -> "PlanarPoint":
        return PlanarPoint(self.x + other.x, self.y + other.y)

    def scale(self, s) -> "PlanarPoint":
        s = _fr(s)
        return PlanarPoint(self.x * s, self.y * s)

    def as3(self) -> tuple:
        return (self.x, self.y, Fraction(0))

    def __iter__(self):
        return iter((self.x, self.y))


def cross(u: PlanarPoint, v: PlanarPoint) -> Fraction:
    return u.x * v.y - u.y * v.x


def collinear(p: PlanarPoint, q: PlanarPoint, r: PlanarPoint) -> bool:
    return cross(q - p, r - p) == 0


def dist2(p: PlanarPoint, q: PlanarPoint) -> Fraction:
    d = p - q
    return d.x * d.x + d.y * d.y


def intersect_lines(p: PlanarPoint, du: PlanarPoint,
                    q: PlanarPoint, dv: PlanarPoint) -> PlanarPoint | None:
    """Intersection of p + s*du and q + t*dv; None if parallel."""
    denom = cross(du, dv)
    if denom == 0:
        return None
    s = cross(q - p, dv) / denom
    return p + du.scale(s)


@dataclass(frozen=True)
class BaseParams:
    A4: Fraction
    B4: Fraction
    A5: Fraction
    B5: Fraction

    def __init__(self, A4, B4, A5, B5):
        object.__setattr__(self, "A4", _fr(A4))
        object.__setattr__(self, "B4", _fr(B4))
        object.__setattr__(self, "A5", _fr(A5))
        object.__setattr__(self, "B5", _fr(B5))
        if self.B4 * self.B5 == 0:
            raise DegenerateBase("B4*B5 = 0")
        if self.B4 == self.B5:
            raise DegenerateBase("B4 = B5 (M3 at infinity)")
        if self.U1 == 0 or self.U2 == 0 or self.U3 == 0:
            raise DegenerateBase(
                f"U1,U2,U3 = {self.U1},{self.U2},{self.U3} (zero value signals "
                "a coincident vertex or a quadrilateral vertex at infinity)")

    @property
    def V(self) -> Fraction:
        return self.B4 * self.A5 - self.A4 * self.B5

    @property
    def U1(self) -> Fraction:
        return (self.B4 - self.B5) * self.V * (self.V - self.B4 + self.B5)

    @property
    def U2(self) -> Fraction:
        return self.V + self.B5

    @property
    def U3(self) -> Fraction:
        return self.V - self.B4


@dataclass(frozen=True)
class AffineMap2:
    """Upper-triangular affine normalization (x,y) -> (mu1*x+mu2*y, mu3*y)."""

    mu1: Fraction
    mu2: Fraction
    mu3: Fraction

    def __init__(self, mu1, mu2, mu3):
        object.__setattr__(self, "mu1", _fr(mu1))
        object.__setattr__(self, "mu2", _fr(mu2))
        object.__setattr__(self, "mu3", _fr(mu3))
        if self.mu1 * self.mu3 == 0:
            raise ValueError("mu1*mu3 must be nonzero")
        if self.mu1 <= 0:
            raise ValueError("mu1 must be positive")

    @classmethod
    def identity(cls) -> "AffineMap2":
        return cls(1, 0, 1)

    def apply(self, p: PlanarPoint) -> PlanarPoint:
        return PlanarPoint(self.mu1 * p.x + self.mu2 * p.y, self.mu3 * p.y)


@dataclass(frozen=True)
class PentapodDesign:
    base: tuple
    platform: tuple
    radii2: tuple

    def __init__(self, base, platform, radii2):
        base = tuple(base)
        platform = tuple(platform)
        radii2 = tuple(_fr(r) for r in radii2)
        if len(base) != 5 or len(platform) != 5 or len(radii2) != 5:
            raise SchemaError("need 5 base points, 5 platform points, 5 radii")
        for pts, label in ((base, "base"), (platform, "platform")):
            for i in range(5):
                for j in range(i + 1, 5):
                    if pts[i] == pts[j]:
                        raise SchemaError(f"{label} points {i+1},{j+1} coincide")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "platform", platform)
        object.__setattr__(self, "radii2", radii2)


@dataclass(frozen=True)
class HexapodDesign:
    pentapod: PentapodDesign
    M6: PlanarPoint
    m6: PlanarPoint


def canonical_base(params: BaseParams):
    """Five base points plus the nondegeneracy values (U1, U2, U3)."""
    M3x = params.V / (params.B4 - params.B5)
    pts = (
        PlanarPoint(0, 0),
        PlanarPoint(1, 0),
        PlanarPoint(M3x, 0),
        PlanarPoint(params.A4, params.B4),
        PlanarPoint(params.A5, params.B5),
    )
    return pts, params.U1, params.U2, params.U3


def sixth_vertex(params: BaseParams) -> PlanarPoint:
    """Quadrilateral vertex M1M5 ∩ M2M4 completing the canonical base."""
    return PlanarPoint(params.B4 * params.A5 / params.U2,
                       params.B4 * params.B5 / params.U2)


def build_platform(base: BaseParams, kappa: int, A: AffineMap2):
    """Platform anchors of the kappa_2 / kappa_3 correspondence.

    kappa_2 sends M1->m4, M2->m5, M4->m1, M5->m2 (anchor images under A in
    the normalized frame); kappa_3 swaps the roles of indices 4 and 5.  m3 is
    the intersection of the two platform carrier lines of its case.
    """
    if kappa not in (2, 3):
        raise ValueError("kappa must be 2 or 3")
    M, _, _, _ = canonical_base(base)
    M1, M2, _, M4, M5 = M
    if kappa == 2:
        m1, m2, m4, m5 = A.apply(M4), A.apply(M5), A.apply(M1), A.apply(M2)
        m3 = intersect_lines(m1, m5 - m1, m2, m4 - m2)
    else:
        m1, m2, m4, m5 = A.apply(M5), A.apply(M4), A.apply(M2), A.apply(M1)
        m3 = intersect_lines(m1, m4 - m1, m2, m5 - m2)
    if m3 is None:
        raise DegeneratePlatform("m3 at infinity")
    anchors = (m1, m2, m4, m5)
    if any(m3 == a for a in anchors):
        raise DegeneratePlatform("m3 coincides with an anchor")
    platform = (m1, m2, m3, m4, m5)
    # collinearity constraints of the case must hold exactly
    if kappa == 2:
        assert collinear(m1, m3, m5) and collinear(m2, m3, m4)
    else:
        assert collinear(m1, m3, m4) and collinear(m2, m3, m5)
    return platform


def platform_m3_closed_form(base: BaseParams, A: AffineMap2) -> PlanarPoint:
    """kappa_2 closed form: m3 = (B4(A5 mu1 + B5 mu2)/U2, B4 B5 mu3/U2)."""
    return PlanarPoint(
        base.B4 * (base.A5 * A.mu1 + base.B5 * A.mu2) / base.U2,
        base.B4 * base.B5 * A.mu3 / base.U2,
    )


def tv_ratio(X: PlanarPoint, Y: PlanarPoint, Z: PlanarPoint) -> Fraction:
    """Affine ratio r with Z = X + r*(Y-X) for collinear X,Y,Z."""
    if X == Y:
        raise CoincidentBase("X = Y")
    d = Y - X
    w = Z - X
    if cross(d, w) != 0:
        raise NotCollinear(f"{Z} not on line {X},{Y}")
    return w.x / d.x if d.x != 0 else w.y / d.y


def _case_of_platform(platform) -> int | None:
    """2 if {m1,m3,m5},{m2,m3,m4} are collinear, 3 if {m1,m3,m4},{m2,m3,m5}."""
    m1, m2, m3, m4, m5 = platform
    if collinear(m1, m3, m5) and collinear(m2, m3, m4):
        return 2
    if collinear(m1, m3, m4) and collinear(m2, m3, m5):
        return 3
    return None


# leg i joins base vertex i to the platform image of its opposite vertex;
# which base vertex is opposite depends on the platform collinearity case
OPPOSITE = {2: {1: 4, 2: 5, 3: 6, 4: 1, 5: 2, 6: 3},
            3: {1: 5, 2: 4, 3: 6, 4: 2, 5: 1, 6: 3}}


def duporcq_hexapod(design: PentapodDesign) -> HexapodDesign:
    """Complete a Duporcq pentapod to its architecturally singular hexapod.

    M6 is the remaining vertex of the base quadrilateral, m6 the remaining
    vertex of the platform quadrilateral; the two quadrilaterals must be
    congruent under the case's opposite-vertex pairing (3<->6 always).
    """
    M1, M2, M3, M4, M5 = design.base
    if not (collinear(M1, M2, M3) and collinear(M3, M4, M5)):
        raise NotDuporcq("base triples (1,2,3) and (3,4,5) not collinear")
    case = _case_of_platform(design.platform)
    if case is None:
        raise NotDuporcq("platform has no case-2/case-3 collinearity pattern")
    if case == 2:
        M6 = intersect_lines(M1, M5 - M1, M2, M4 - M2)
    else:
        M6 = intersect_lines(M1, M4 - M1, M2, M5 - M2)
    m1, m2, m3, m4, m5 = design.platform
    m6 = intersect_lines(m1, m2 - m1, m4, m5 - m4)
    if M6 is None or m6 is None:
        raise NotDuporcq("completion vertex at infinity")
    Mpts = {1: M1, 2: M2, 3: M3, 4: M4, 5: M5, 6: M6}
    mpts = {1: m1, 2: m2, 3: m3, 4: m4, 5: m5, 6: m6}
    opp = OPPOSITE[case]
    for i in range(1, 7):
        for j in range(i + 1, 7):
            if dist2(Mpts[i], Mpts[j]) != dist2(mpts[opp[i]], mpts[opp[j]]):
                raise NotDuporcq(
                    f"edge M{i}M{j} not congruent to m{opp[i]}m{opp[j]}")
    return HexapodDesign(design, M6, m6)


@dataclass(frozen=True)
class Candidate:
    """One slot of the reconstruction case tree.

    closure_ok records the case's parallelism closure; acceptance is decided
    later by the picture filter, so a rejection here is data, not an error.
    """

    tag: str
    platform: tuple
    closure_ok: bool
    case: int


def reconstruct_candidates(base: BaseParams) -> list:
    """All six candidate reconstructions of the case tree.

    The free anchor choices are pinned: slots 1a/1b/2a anchor m1:=M1, m4:=M4;
    slots 2bi/2bii anchor m1:=M4, m4:=M1; slot 3 anchors m1:=M5, m5:=M1.
    """
    M, _, _, _ = canonical_base(base)
    M1, M2, _, M4, M5 = M
    d12, d15, d24, d25, d45 = M2 - M1, M5 - M1, M4 - M2, M5 - M2, M5 - M4
    d14 = M4 - M1

    def parallel(u, v):
        return cross(u, v) == 0

    out = []

    # case 1: platform triples mirror the base split {m1,m2,m3},{m3,m4,m5}
    m1, m4 = M1, M4
    m2 = intersect_lines(m1, d12, m4, d24)
    m5 = intersect_lines(m4, d45, m1, d15)
    m3 = intersect_lines(m1, m2 - m1, m4, m5 - m4)
    out.append(Candidate("1a", (m1, m2, m3, m4, m5),
                         parallel(m5 - m2, d25), 1))

    m2 = intersect_lines(m1, d45, m4, d24)
    m5 = intersect_lines(m4, d12, m1, d15)
    m3 = intersect_lines(m1, m2 - m1, m4, m5 - m4)
    out.append(Candidate("1b", (m1, m2, m3, m4, m5),
                         parallel(m5 - m2, d25), 1))

    # case 2(a): same anchor parallels as 1a but the case-2 m3
    m2 = intersect_lines(m1, d12, m4, d24)
    m5 = intersect_lines(m4, d45, m1, d15)
    m3 = intersect_lines(m1, m5 - m1, m2, m4 - m2)
    out.append(Candidate("2a", (m1, m2, m3, m4, m5),
                         parallel(m5 - m2, d25), 2))

    # case 2(b): anchors swapped to m1:=M4, m4:=M1
    m1, m4 = M4, M1
    m2 = intersect_lines(m1, d45, m4, d15)
    m5 = intersect_lines(m4, d12, m1, d24)
    m3 = intersect_lines(m1, m5 - m1, m2, m4 - m2)
    out.append(Candidate("2bi", (m1, m2, m3, m4, m5),
                         parallel(m5 - m2, d25), 2))

    m2 = intersect_lines(m1, d45, m4, d24)
    m5 = intersect_lines(m4, d12, m1, d15)
    m3 = intersect_lines(m1, m5 - m1, m2, m4 - m2)
    out.append(Candidate("2bii", (m1, m2, m3, m4, m5),
                         parallel(m5 - m2, d25), 2))

    # case 3: the 4<->5 swap of 2(b)i, anchors m1:=M5, m5:=M1
    m1, m5 = M5, M1
    m2 = intersect_lines(m1, d45, m5, d14)
    m4 = intersect_lines(m5, d12, m1, d25)
    m3 = intersect_lines(m1, m4 - m1, m2, m5 - m2)
    out.append(Candidate("3", (m1, m2, m3, m4, m5),
                         parallel(m4 - m2, d24), 3))

    for cand in out:
        if cand.platform[2] is None or any(p is None for p in cand.platform):
            raise DegeneratePlatform(f"candidate {cand.tag} degenerates")
    return out


# ------------------------------------------------------------------ JSON I/O

def _point_to_json(p: PlanarPoint) -> list:
    return [str(p.x), str(p.y), "0"]


def _point_from_json(v) -> PlanarPoint:
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise SchemaError(f"point must be [x,y,z]: {v!r}")
    try:
        x, y, z = (Fraction(str(c)) for c in v)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational in point {v!r}: {exc}") from exc
    if z != 0:
        raise SchemaError("only planar designs (z=0) are supported")
    return PlanarPoint(x, y)


def design_to_dict(design: PentapodDesign, hexapod: HexapodDesign | None = None) -> dict:
    d = {
        "base": [_point_to_json(p) for p in design.base],
        "platform": [_point_to_json(p) for p in design.platform],
        "radii2": [str(r) for r in design.radii2],
    }
    if hexapod is not None:
        d["sixth"] = {"M": _point_to_json(hexapod.M6),
                      "m": _point_to_json(hexapod.m6)}
    return d


def design_from_dict(d: dict) -> tuple:
    """Returns (PentapodDesign, sixth-pair-or-None)."""
    if not isinstance(d, dict):
        raise SchemaError("design must be a JSON object")
    for key in ("base", "platform", "radii2"):
        if key not in d:
            raise SchemaError(f"missing key {key!r}")
    base = d["base"]
    platform = d["platform"]
    radii2 = d["radii2"]
    if len(base) != 5 or len(platform) != 5 or len(radii2) != 5:
        raise SchemaError("base, platform, radii2 must have 5 entries each")
    try:
        radii = tuple(Fraction(str(r)) for r in radii2)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational in radii2: {exc}") from exc
    design = PentapodDesign(
        tuple(_point_from_json(p) for p in base),
        tuple(_point_from_json(p) for p in platform),
        radii,
    )
    sixth = None
    if "sixth" in d:
        s = d["sixth"]
        if not isinstance(s, dict) or "M" not in s or "m" not in s:
            raise SchemaError('"sixth" must contain "M" and "m"')
        sixth = (_point_from_json(s["M"]), _point_from_json(s["m"]))
    return design, sixth


def load_design(path: str) -> tuple:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read design JSON: {exc}") from exc
    return design_from_dict(d)


WORKED_PARAMS = BaseParams(0, 1, 2, 3)


def worked_design() -> PentapodDesign:
    """The Duporcq design used throughout: base (0,1,2,3), kappa_2 platform
    under the identity normalization, leg radii admitting a self-motion."""
    base, _, _, _ = canonical_base(WORKED_PARAMS)
    platform = build_platform(WORKED_PARAMS, 2, AffineMap2.identity())
    radii = (Fraction(1), Fraction(18), Fraction(18, 25),
             Fraction(1), Fraction(18))
    return PentapodDesign(base, platform, radii)
