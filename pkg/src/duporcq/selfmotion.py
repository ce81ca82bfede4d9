"""Two-parameter self-motions of canonical pentapods: the radii constraint G,
a numeric pose sampler on the motion, the translational circle at the
half-turn, similarity bonds, and the architectural-singularity test for the
hexapod extension.

The motion lives on e0 = 0: for each rotation direction (0:e1:e2:e3) the legs
admit a translation fiber, generically two points, one of which the sampler
returns.  A design carries such a motion exactly when its squared radii
satisfy the linear relation G = 0 produced by derive_G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactpoly import MPoly, NotDivisible
from .geometry import (
    AffineMap2,
    BaseParams,
    CoincidentBase,
    HexapodDesign,
    NotCollinear,
    PentapodDesign,
    PlanarPoint,
    build_platform,
    canonical_base,
    collinear,
    cross,
    tv_ratio,
)
from .study import GENS, CanonicalDesign, compute_Ke


class Unrealizable(ValueError):
    """The requested radii do not yield a movable design."""


class InconsistentSystem(ArithmeticError):
    """Leg equations fail to close within tolerance; not a motion design."""


class NoRealSolution(ArithmeticError):
    """The translation fiber for this direction has no real point."""


class RankTooHigh(ArithmeticError):
    """The half-turn difference system exceeds rank one; no circle."""


class ConstructionDegenerate(ValueError):
    """A bond construction step is undefined for this design."""


# --------------------------------------------------------------- radii relation

def derive_G(params: BaseParams) -> MPoly:
    """The radii constraint: K_e restricted to e0 = 0 splits off the factor
    e1^2 + e2^2 + e3^2; the quotient G is linear in the squared radii."""
    design = CanonicalDesign.from_params(params)
    ke = compute_Ke(design)
    restricted = ke.poly.evaluate({"e0": 0})
    g = GENS
    e123 = g["e1"] * g["e1"] + g["e2"] * g["e2"] + g["e3"] * g["e3"]
    quotient = restricted.exact_div(e123)
    for v in ("e0", "e1", "e2", "e3"):
        assert quotient.degree_in(v) == 0, "quotient must be free of e"
    return quotient


def g_coefficients(gpoly: MPoly) -> tuple:
    """(g0, g1, ..., g5): constant term and the r1sq..r5sq coefficients."""
    zeros = {f"r{i}sq": 0 for i in range(1, 6)}
    out = [gpoly.evaluate(zeros).scalar().as_fraction()]
    for i in range(1, 6):
        block = dict(zeros)
        block[f"r{i}sq"] = 1
        out.append(gpoly.coeff_block(block).scalar().as_fraction())
    return tuple(out)


@dataclass(frozen=True)
class RadiiSolution:
    r1sq: Fraction
    r2sq: Fraction
    r3sq: Fraction
    r4sq: Fraction
    r5sq: Fraction

    def as_tuple(self) -> tuple:
        return (self.r1sq, self.r2sq, self.r3sq, self.r4sq, self.r5sq)


def motion_radii(params: BaseParams, r1sq, r2sq) -> RadiiSolution:
    """Radii with a self-motion: legs 4,5 copy legs 1,2 and G = 0 fixes leg 3."""
    r1sq, r2sq = Fraction(r1sq), Fraction(r2sq)
    if r1sq <= 0 or r2sq <= 0:
        raise Unrealizable("squared radii must be positive")
    g = derive_G(params)
    coeff = g_coefficients(g)
    a = coeff[3]
    assert a != 0, "r3sq coefficient vanishes on a valid base"
    b = (coeff[0] + (coeff[1] + coeff[4]) * r1sq + (coeff[2] + coeff[5]) * r2sq)
    r3sq = -b / a
    if r3sq < 0:
        raise Unrealizable(f"forced r3^2 = {r3sq} < 0")
    return RadiiSolution(r1sq, r2sq, r3sq, r1sq, r2sq)


def build_motion_design(params: BaseParams, r1sq, r2sq) -> PentapodDesign:
    """Concrete pentapod with the kappa_2 identity platform and motion radii."""
    radii = motion_radii(params, r1sq, r2sq)
    base, _, _, _ = canonical_base(params)
    platform = build_platform(params, 2, AffineMap2.identity())
    return PentapodDesign(base, platform, radii.as_tuple())


# ------------------------------------------------------------------ numeric legs

def _leg_arrays(design):
    """(M, m, r2) float arrays; a hexapod contributes its sixth leg last."""
    if isinstance(design, HexapodDesign):
        penta = design.pentapod
        base = list(penta.base) + [design.M6]
        plat = list(penta.platform) + [design.m6]
        radii = list(penta.radii2) + [sixth_radius(design)]
    else:
        base = list(design.base)
        plat = list(design.platform)
        radii = list(design.radii2)
    M = np.array([[float(p.x), float(p.y), 0.0] for p in base])
    m = np.array([[float(p.x), float(p.y), 0.0] for p in plat])
    r2 = np.array([float(r) for r in radii])
    return M, m, r2


def sixth_radius(design: HexapodDesign) -> Fraction:
    """Sixth squared leg length, read off at the half-turn reference pose."""
    p = design.m6.scale(-1) - design.M6
    return p.x * p.x + p.y * p.y


def _rotation(e):
    e0, e1, e2, e3 = e
    return np.array([
        [e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3,
         2 * (e1 * e2 - e0 * e3), 2 * (e1 * e3 + e0 * e2)],
        [2 * (e1 * e2 + e0 * e3),
         e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3, 2 * (e2 * e3 - e0 * e1)],
        [2 * (e1 * e3 - e0 * e2), 2 * (e2 * e3 + e0 * e1),
         e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3]])


def _translation(e, f):
    e0, e1, e2, e3 = e
    f0, f1, f2, f3 = f
    return np.array([
        2 * (e0 * f1 - e1 * f0 + e2 * f3 - e3 * f2),
        2 * (e0 * f2 - e2 * f0 + e3 * f1 - e1 * f3),
        2 * (e0 * f3 - e3 * f0 + e1 * f2 - e2 * f1)])


def _leg_linear(e, Mi, mi, r2i):
    """Row L and constant c with Q_i(f) = 4|f|^2 + L.f + c at unit N."""
    e0, e1, e2, e3 = e
    a, b, c_ = mi
    A, B, C = Mi
    em = 4 * np.array([-(e1 * a + e2 * b + e3 * c_),
                       e0 * a + e2 * c_ - e3 * b,
                       e0 * b + e3 * a - e1 * c_,
                       e0 * c_ + e1 * b - e2 * a])
    tM = np.array([4 * (e1 * A + e2 * B + e3 * C),
                   -4 * (e0 * A + e3 * B - e2 * C),
                   -4 * (-e3 * A + e0 * B + e1 * C),
                   -4 * (e2 * A - e1 * B + e0 * C)])
    rot = _rotation(e)
    const = (a * a + b * b + c_ * c_ + A * A + B * B + C * C - r2i
             - 2.0 * (np.array([A, B, C]) @ rot @ np.array([a, b, c_])))
    return em + tM, const


def residuals_at(design, e, f) -> np.ndarray:
    """Per-leg dist^2 - r^2 at a unit-norm pose."""
    M, m, r2 = _leg_arrays(design)
    rot = _rotation(e)
    t = _translation(e, f)
    moved = m @ rot.T + t
    return ((moved - M) ** 2).sum(axis=1) - r2


@dataclass(frozen=True)
class MotionSample:
    e: tuple
    f: tuple
    residuals: tuple
    leg_tolerance: float
    f0_tolerance: float

    def __post_init__(self):
        worst = max(abs(r) for r in self.residuals)
        if worst > self.leg_tolerance:
            raise InconsistentSystem(
                f"leg residual {worst:.3e} over {self.leg_tolerance:.3e}")
        if abs(self.f[0]) > self.f0_tolerance:
            raise InconsistentSystem(
                f"|f0| = {abs(self.f[0]):.3e} over {self.f0_tolerance:.3e}")


def sample_pose(design, direction, tol_leg: float = 1e-9,
                tol_f0: float = 1e-12) -> MotionSample:
    """Least-norm motion pose over a rotation direction (e1, e2, e3).

    Solves the linear slice {S = 0, Q1 - Qi = 0 for every other leg} for f,
    then intersects with Q1 = 0 along the kernel, keeping the least-norm
    point.  A design carrying the motion leaves this slice rank-deficient
    with a consistent right side; InconsistentSystem otherwise.
    NoRealSolution means the fiber over this direction is empty.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or not np.linalg.norm(d) > 0:
        raise ValueError("direction must be a nonzero 3-vector")
    e = np.concatenate([[0.0], d / np.linalg.norm(d)])
    M, m, r2 = _leg_arrays(design)
    rows, consts = [], []
    for i in range(len(r2)):
        L, c = _leg_linear(e, M[i], m[i], r2[i])
        rows.append(L)
        consts.append(c)
    A = np.vstack([e] + [rows[0] - rows[i] for i in range(1, len(rows))])
    b = np.array([0.0] + [consts[i] - consts[0] for i in range(1, len(rows))])
    fp, *_ = np.linalg.lstsq(A, b, rcond=None)
    scale = 1.0 + float(np.max(np.abs(r2)))
    if np.linalg.norm(A @ fp - b) > tol_leg * scale:
        raise InconsistentSystem("linear slice is inconsistent")
    _, sv, Vt = np.linalg.svd(A)
    rank = int((sv > 1e-9 * sv[0]).sum())
    kernel = Vt[rank:]

    L1, c1 = rows[0], consts[0]

    def q1(f):
        return 4.0 * f @ f + L1 @ f + c1

    if rank >= 4:
        f = fp
        if abs(q1(f)) > tol_leg * scale:
            raise NoRealSolution("fiber is a single inconsistent point")
    elif kernel.shape[0] == 1:
        k = kernel[0]
        cb = 8.0 * fp @ k + L1 @ k
        cc = q1(fp)
        disc = cb * cb - 16.0 * cc
        if disc < 0:
            raise NoRealSolution(f"negative discriminant {disc:.3e}")
        roots = [fp + s * k for s in ((-cb + math.sqrt(disc)) / 8.0,
                                      (-cb - math.sqrt(disc)) / 8.0)]
        # both roots close legs 1,2,4; only points on the motion close the rest
        good = [v for v in roots
                if np.max(np.abs(residuals_at(design, e, v))) <= tol_leg * scale]
        f = min(good, key=lambda v: v @ v) if good \
            else min(roots, key=lambda v: np.max(np.abs(residuals_at(design, e, v))))
    else:
        lin = np.array([8.0 * fp @ k + L1 @ k for k in kernel])
        center = -lin / 8.0
        rho2 = center @ center - q1(fp) / 4.0
        if rho2 < 0:
            raise NoRealSolution(f"negative circle radius {rho2:.3e}")
        nc = np.linalg.norm(center)
        if nc < 1e-300:
            s = np.zeros(len(kernel))
            s[0] = math.sqrt(rho2)
        else:
            s = center * (1.0 - math.sqrt(rho2) / nc)
        f = fp + s @ kernel
    res = residuals_at(design, e, f)
    return MotionSample(tuple(e), tuple(f), tuple(res),
                        leg_tolerance=tol_leg * scale, f0_tolerance=tol_f0)


def fibonacci_directions(count: int):
    """Deterministic spread of unit directions over the e3 >= 0 hemisphere."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    for k in range(count):
        z = (k + 0.5) / count
        r = math.sqrt(max(0.0, 1.0 - z * z))
        yield (r * math.cos(k * golden), r * math.sin(k * golden), z)


@dataclass(frozen=True)
class MotionReport:
    samples: tuple
    attempted: int
    max_residual: float
    max_f0: float
    tangents: tuple
    tangent_angle: float


def tangent_pair(design, h: float = 1e-4, tol_leg: float = 1e-9,
                 tol_f0: float = 1e-12):
    """Two independent motion tangents at the half-turn reference pose."""
    ref = sample_pose(design, (0, 0, 1), tol_leg, tol_f0)
    p0 = np.array(ref.e + ref.f)
    tangents = []
    for u in ((h, 0, 1), (0, h, 1)):
        s = sample_pose(design, u, tol_leg, tol_f0)
        tangents.append((np.array(s.e + s.f) - p0) / h)
    t1, t2 = tangents
    cosang = abs(t1 @ t2) / (np.linalg.norm(t1) * np.linalg.norm(t2))
    angle = math.acos(min(1.0, max(-1.0, cosang)))
    return (tuple(t1), tuple(t2)), angle


def verify_selfmotion(design, count: int = 100, tol_leg: float = 1e-9,
                      tol_f0: float = 1e-12) -> MotionReport:
    """Sample the motion over a direction grid and collect the evidence.

    Directions whose fiber is empty are skipped; InconsistentSystem from any
    direction propagates, since it falsifies the motion itself.
    """
    size = 2 * count
    while True:
        samples = []
        attempted = 0
        for d in fibonacci_directions(size):
            attempted += 1
            try:
                samples.append(sample_pose(design, d, tol_leg, tol_f0))
            except NoRealSolution:
                continue
            if len(samples) == count:
                break
        if len(samples) == count:
            break
        if size >= 64 * count:
            raise NoRealSolution(
                f"only {len(samples)} of {count} directions admit real poses")
        size *= 2
    tangents, angle = tangent_pair(design, tol_leg=tol_leg, tol_f0=tol_f0)
    return MotionReport(
        tuple(samples), attempted,
        max(max(abs(r) for r in s.residuals) for s in samples),
        max(abs(s.f[0]) for s in samples),
        tangents, angle)


# ------------------------------------------------------- translational circle

def _primitive(p: PlanarPoint) -> PlanarPoint:
    nx, ny = p.x, p.y
    den = nx.denominator * ny.denominator // math.gcd(nx.denominator,
                                                      ny.denominator)
    ax, ay = nx * den, ny * den
    g = math.gcd(int(ax), int(ay))
    if g:
        ax, ay = ax / g, ay / g
    if ax < 0 or (ax == 0 and ay < 0):
        ax, ay = -ax, -ay
    return PlanarPoint(ax, ay)


@dataclass(frozen=True)
class TranslationalCircle:
    normal: tuple       # primitive integer direction, z = 0
    offset: Fraction    # plane equation <t, normal> = offset
    center: tuple
    rho2: Fraction


def translational_submotion(design) -> TranslationalCircle:
    """The circle of translations at the half-turn rotation e = (0:0:0:1).

    Each leg constrains the translation to a sphere |t - c_i|^2 = r_i^2 with
    c_i = M_i + m_i; the pairwise differences must be proportional (rank one),
    leaving one plane whose sphere section is the circle.
    """
    if isinstance(design, HexapodDesign):
        penta = design.pentapod
        base = list(penta.base) + [design.M6]
        plat = list(penta.platform) + [design.m6]
        radii = list(penta.radii2) + [sixth_radius(design)]
    else:
        base, plat, radii = list(design.base), list(design.platform), list(design.radii2)
    centers = [Mi + mi for Mi, mi in zip(base, plat)]
    norms = [c.x * c.x + c.y * c.y for c in centers]
    rows = [centers[i] - centers[0] for i in range(1, len(centers))]
    rhs = [Fraction(norms[i] - radii[i] - norms[0] + radii[0], 2)
           for i in range(1, len(centers))]
    pivot = next((i for i, r in enumerate(rows) if r != PlanarPoint(0, 0)), None)
    if pivot is None:
        raise ConstructionDegenerate("all leg spheres are concentric")
    n = rows[pivot]
    for i, r in enumerate(rows):
        if cross(n, r) != 0:
            raise RankTooHigh(f"difference rows {pivot+1} and {i+1} independent")
        lam = r.x / n.x if n.x != 0 else r.y / n.y
        if rhs[i] != lam * rhs[pivot]:
            raise InconsistentSystem("parallel planes with different offsets")
    offset = rhs[pivot]
    prim = _primitive(n)
    offset = offset * (prim.x / n.x if n.x != 0 else prim.y / n.y)
    n = prim
    n2 = n.x * n.x + n.y * n.y
    c1 = centers[0]
    lam = (offset - (c1.x * n.x + c1.y * n.y)) / n2
    center = c1 + n.scale(lam)
    rho2 = radii[0] - (offset - (c1.x * n.x + c1.y * n.y)) ** 2 / n2
    if rho2 < 0:
        raise NoRealSolution(f"empty circle, rho^2 = {rho2}")
    return TranslationalCircle((n.x, n.y, Fraction(0)), offset,
                               (center.x, center.y, Fraction(0)), rho2)


def circle_translations(circle: TranslationalCircle, count: int):
    """Float translation samples on the circle."""
    nx, ny, _ = (float(v) for v in circle.normal)
    nn = math.hypot(nx, ny)
    u = np.array([-ny / nn, nx / nn, 0.0])
    v = np.array([0.0, 0.0, 1.0])
    c = np.array([float(x) for x in circle.center])
    rho = math.sqrt(float(circle.rho2))
    for k in range(count):
        th = 2 * math.pi * k / count
        yield c + rho * (math.cos(th) * u + math.sin(th) * v)


def pose_from_translation(t) -> tuple:
    """Study pose (e, f) of the half-turn composed with translation t."""
    e = (0.0, 0.0, 0.0, 1.0)
    f = (-t[2] / 2.0, t[1] / 2.0, -t[0] / 2.0, 0.0)
    return e, f


# ------------------------------------------------------------- similarity bond

@dataclass(frozen=True)
class SimilarityBond:
    m3_prime: PlanarPoint
    m3_second: PlanarPoint
    M3_prime: PlanarPoint
    M3_second: PlanarPoint
    direction: tuple


def similarity_bond(design: PentapodDesign) -> SimilarityBond:
    """Degenerate-triangle data of the bond at infinity.

    Affine ratios along the collinear triples transfer the third anchor
    between base and platform; the two transferred platform points and the
    two transferred base points must be collinear with m3 and M3
    respectively, on parallel lines.
    """
    M1, M2, M3, M4, M5 = design.base
    m1, m2, m3, m4, m5 = design.platform
    try:
        m3p = m1 + (m2 - m1).scale(tv_ratio(M1, M2, M3))
        r = tv_ratio(M3, M4, M5)
        if r == 1:
            raise ConstructionDegenerate("unit ratio on M3,M4,M5")
        m3pp = (m5 - m4.scale(r)).scale(Fraction(1, 1) / (1 - r))
        M3p = M1 + (M5 - M1).scale(tv_ratio(m1, m5, m3))
        M3pp = M2 + (M4 - M2).scale(tv_ratio(m2, m4, m3))
    except (CoincidentBase, NotCollinear) as exc:
        raise ConstructionDegenerate(str(exc)) from exc
    if not (collinear(m3, m3p, m3pp) and collinear(M3, M3p, M3pp)):
        raise ConstructionDegenerate("bond points fail collinearity")
    g_dir = m3pp - m3p
    G_dir = M3pp - M3p
    if g_dir == PlanarPoint(0, 0) or G_dir == PlanarPoint(0, 0):
        raise ConstructionDegenerate("bond line collapses to a point")
    if cross(g_dir, G_dir) != 0:
        raise ConstructionDegenerate("bond lines are not parallel")
    d = _primitive(g_dir)
    return SimilarityBond(m3p, m3pp, M3p, M3pp, (d.x, d.y, Fraction(0)))


# --------------------------------------------------- architectural singularity

def random_pose(rng) -> tuple:
    """A random unit-norm study pose (any rigid displacement)."""
    while True:
        e = rng.normal(size=4)
        n = e @ e
        if n > 1e-6:
            break
    f = rng.normal(size=4)
    f = f - ((f @ e) / n) * e
    s = math.sqrt(n)
    return e / s, f / s


def plucker_matrix(design: HexapodDesign, e, f) -> np.ndarray:
    """Rows are the six leg lines (direction; moment) at the given pose."""
    M, m, _ = _leg_arrays(design)
    rot = _rotation(np.asarray(e))
    t = _translation(np.asarray(e), np.asarray(f))
    moved = m @ rot.T + t
    rows = np.hstack([moved - M, np.cross(M, moved)])
    return rows


def arch_singularity_check(design: HexapodDesign, seed: int = 0,
                           samples: int = 100) -> float:
    """Worst relative smallest singular value of the leg-line matrix over
    random poses; tiny values certify architectural singularity."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        e, f = random_pose(rng)
        rows = plucker_matrix(design, e, f)
        norms = np.linalg.norm(rows, axis=1)
        if np.min(norms) < 1e-12:
            continue
        sv = np.linalg.svd(rows / norms[:, None], compute_uv=False)
        worst = max(worst, sv[-1] / sv[0])
    return worst


# ----------------------------------------------------------------- trajectory

TRAJECTORY_COLUMNS = ("t1", "t2", "e1", "e2", "e3", "f1", "f2", "f3",
                      "tx", "ty", "tz",
                      "res1", "res2", "res3", "res4", "res5", "res6")


def trajectory(design: HexapodDesign, n1: int = 6, n2: int = 12,
               tol_leg: float = 1e-9, tol_f0: float = 1e-12) -> list:
    """Motion samples over a (t1, t2) grid of rotation directions.

    t1 is the polar angle from the half-turn axis, t2 the azimuth; grid
    points whose fiber is empty are skipped.
    """
    rows = []
    for i in range(n1):
        t1 = (i + 1) * (math.pi / 2) / (n1 + 1)
        for j in range(n2):
            t2 = 2 * math.pi * j / n2
            d = (math.sin(t1) * math.cos(t2), math.sin(t1) * math.sin(t2),
                 math.cos(t1))
            try:
                s = sample_pose(design, d, tol_leg, tol_f0)
            except NoRealSolution:
                continue
            t = _translation(np.array(s.e), np.array(s.f))
            rows.append((t1, t2) + s.e[1:] + s.f[1:]
                        + tuple(t) + tuple(s.residuals))
    return rows


def write_trajectory(rows, path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
