"""Two-parameter self-motions: radii relation, pose sampling, the
translational circle, the similarity bond, and the hexapod extension."""

import csv
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from duporcq.geometry import (
    BaseParams,
    HexapodDesign,
    PentapodDesign,
    PlanarPoint,
    collinear,
)
from duporcq.selfmotion import (
    TRAJECTORY_COLUMNS,
    ConstructionDegenerate,
    InconsistentSystem,
    NoRealSolution,
    RankTooHigh,
    Unrealizable,
    arch_singularity_check,
    build_motion_design,
    circle_translations,
    derive_G,
    fibonacci_directions,
    g_coefficients,
    motion_radii,
    pose_from_translation,
    residuals_at,
    sample_pose,
    similarity_bond,
    sixth_radius,
    tangent_pair,
    trajectory,
    translational_submotion,
    verify_selfmotion,
    write_trajectory,
)

WORKED = BaseParams(0, 1, 2, 3)


def worked_design() -> PentapodDesign:
    return build_motion_design(WORKED, 1, 18)


def worked_hexapod() -> HexapodDesign:
    return HexapodDesign(worked_design(),
                         PlanarPoint(Fraction(2, 5), Fraction(3, 5)),
                         PlanarPoint(-1, 0))


def random_fraction(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_base(rng) -> BaseParams:
    while True:
        try:
            return BaseParams(random_fraction(rng), random_fraction(rng),
                              random_fraction(rng), random_fraction(rng))
        except ValueError:
            continue


# ------------------------------------------------------------- radii relation

def test_g_coefficients_worked():
    g = g_coefficients(derive_G(WORKED))
    assert g == (-312, 120, -60, 100, -240, 80)


def test_g3_closed_form_random_bases():
    # the r3sq coefficient factors as (B4-B5)^2 * U2^2 * U3
    rng = random.Random(7)
    for _ in range(4):
        p = random_base(rng)
        g = g_coefficients(derive_G(p))
        assert g[3] == (p.B4 - p.B5) ** 2 * p.U2 ** 2 * p.U3


def test_motion_radii_worked():
    sol = motion_radii(WORKED, 1, 18)
    assert sol.as_tuple() == (1, 18, Fraction(18, 25), 1, 18)


def test_motion_radii_copies_first_pair():
    sol = motion_radii(WORKED, Fraction(5, 2), 7)
    assert sol.r4sq == sol.r1sq and sol.r5sq == sol.r2sq


def test_motion_radii_unrealizable():
    with pytest.raises(Unrealizable):
        motion_radii(WORKED, 1, 100)
    with pytest.raises(Unrealizable):
        motion_radii(WORKED, 0, 18)
    with pytest.raises(Unrealizable):
        motion_radii(WORKED, 1, -2)


def test_build_motion_design_worked():
    d = worked_design()
    assert [(p.x, p.y) for p in d.base] == [
        (0, 0), (1, 0), (-1, 0), (0, 1), (2, 3)]
    assert [(p.x, p.y) for p in d.platform] == [
        (0, 1), (2, 3), (Fraction(2, 5), Fraction(3, 5)), (0, 0), (1, 0)]
    assert d.radii2 == (1, 18, Fraction(18, 25), 1, 18)


# --------------------------------------------------------------- pose sampling

def test_reference_pose_is_exact_zero():
    s = sample_pose(worked_design(), (0.0, 0.0, 1.0))
    assert s.f == (0.0, 0.0, 0.0, 0.0)
    assert max(abs(r) for r in s.residuals) == 0.0


def test_sample_pose_on_symmetry_plane():
    # directions with e2 = 0 leave a rank-deficient three-row slice; the
    # full-system solve must still close every leg
    d = worked_design()
    t1 = math.pi / 10
    s = sample_pose(d, (math.sin(t1), 0.0, math.cos(t1)))
    assert max(abs(r) for r in s.residuals) <= 1e-12
    assert abs(s.f[0]) <= 1e-14


def test_sample_pose_rejects_zero_direction():
    with pytest.raises(ValueError):
        sample_pose(worked_design(), (0.0, 0.0, 0.0))


def test_sample_pose_wrong_radii_inconsistent():
    d = worked_design()
    bad = PentapodDesign(d.base, d.platform, (1, 18, 1, 1, 18))
    with pytest.raises(InconsistentSystem):
        sample_pose(bad, (0.3, 0.5, 0.9))


def test_fibonacci_directions_unit_hemisphere():
    pts = list(fibonacci_directions(40))
    assert len(pts) == 40
    for p in pts:
        assert abs(sum(v * v for v in p) - 1.0) <= 1e-12
        assert p[2] > 0


def test_verify_selfmotion_worked():
    rep = verify_selfmotion(worked_design(), count=40)
    assert len(rep.samples) == 40
    assert rep.max_residual <= 1e-12
    assert rep.max_f0 <= 1e-14
    assert len(rep.tangents) == 2
    assert abs(rep.tangent_angle - math.pi / 2) <= 1e-6


def test_tangent_pair_independent():
    tangents, angle = tangent_pair(worked_design())
    t1, t2 = (np.array(t) for t in tangents)
    assert np.linalg.norm(np.cross(t1[:3], t2[:3])) > 1e-3 or angle > 1e-3


# --------------------------------------------------------- translational circle

def test_translational_circle_worked():
    c = translational_submotion(worked_design())
    assert c.normal == (3, 2, 0)
    assert c.offset == 0
    assert c.center == (Fraction(-6, 13), Fraction(9, 13), 0)
    assert c.rho2 == Fraction(9, 13)


def test_circle_points_close_all_legs():
    d = worked_design()
    c = translational_submotion(d)
    n = np.array([float(v) for v in c.normal])
    for t in circle_translations(c, 12):
        assert abs(n @ t - float(c.offset)) <= 1e-12
        e, f = pose_from_translation(t)
        res = residuals_at(d, np.array(e), np.array(f))
        assert np.max(np.abs(res)) <= 1e-12


def test_circle_on_hexapod_matches_pentapod():
    c5 = translational_submotion(worked_design())
    c6 = translational_submotion(worked_hexapod())
    assert (c5.normal, c5.offset, c5.center, c5.rho2) == \
        (c6.normal, c6.offset, c6.center, c6.rho2)


def test_pose_from_translation_map():
    e, f = pose_from_translation((2.0, 4.0, 6.0))
    assert e == (0.0, 0.0, 0.0, 1.0)
    assert f == (-3.0, 2.0, -1.0, 0.0)


def test_translational_rank_too_high():
    d = worked_design()
    plat = list(d.platform)
    plat[1] = PlanarPoint(2, 4)
    with pytest.raises(RankTooHigh):
        translational_submotion(PentapodDesign(d.base, tuple(plat), d.radii2))


def test_translational_concentric_degenerate():
    d = worked_design()
    plat = tuple(p.scale(-1) for p in d.base)
    with pytest.raises(ConstructionDegenerate):
        translational_submotion(PentapodDesign(d.base, plat, d.radii2))


def test_translational_inconsistent_offsets():
    d = worked_design()
    bad = PentapodDesign(d.base, d.platform, (1, 18, 1, 1, 18))
    with pytest.raises(InconsistentSystem):
        translational_submotion(bad)


def test_translational_empty_circle():
    # shifting every squared radius by the same amount keeps the plane but
    # can push the first sphere inside it
    d = worked_design()
    delta = Fraction(9, 10)
    radii = tuple(r - delta for r in d.radii2)
    with pytest.raises(NoRealSolution):
        translational_submotion(PentapodDesign(d.base, d.platform, radii))


# -------------------------------------------------------------- similarity bond

def test_similarity_bond_worked():
    b = similarity_bond(worked_design())
    assert b.m3_prime == PlanarPoint(-2, -1)
    assert b.m3_second == PlanarPoint(Fraction(-1, 2), 0)
    assert b.M3_prime == PlanarPoint(Fraction(4, 5), Fraction(6, 5))
    assert b.M3_second == PlanarPoint(Fraction(1, 5), Fraction(4, 5))
    assert b.direction == (3, 2, 0)


def test_similarity_bond_collinear_with_anchors():
    d = worked_design()
    b = similarity_bond(d)
    assert collinear(d.platform[2], b.m3_prime, b.m3_second)
    assert collinear(d.base[2], b.M3_prime, b.M3_second)


def test_similarity_bond_matches_circle_direction():
    assert similarity_bond(worked_design()).direction == \
        translational_submotion(worked_design()).normal


def test_similarity_bond_degenerate_platform():
    d = worked_design()
    plat = list(d.platform)
    plat[1] = PlanarPoint(2, 4)
    with pytest.raises(ConstructionDegenerate):
        similarity_bond(PentapodDesign(d.base, tuple(plat), d.radii2))


# --------------------------------------------------------------------- hexapod

def test_sixth_radius_worked():
    assert sixth_radius(worked_hexapod()) == Fraction(18, 25)


def test_hexapod_motion_closes_sixth_leg():
    rep = verify_selfmotion(worked_hexapod(), count=30)
    assert len(rep.samples) == 30
    assert rep.max_residual <= 1e-12


def test_arch_singularity_worked_hexapod():
    assert arch_singularity_check(worked_hexapod(), samples=50) <= 1e-9


def test_arch_singularity_generic_hexapod():
    generic = HexapodDesign(worked_design(), PlanarPoint(5, 7),
                            PlanarPoint(1, 2))
    assert arch_singularity_check(generic, samples=20) > 1e-6


# ------------------------------------------------------------------ trajectory

def test_trajectory_rows_and_csv(tmp_path):
    rows = trajectory(worked_hexapod(), n1=2, n2=4)
    assert rows
    for row in rows:
        assert len(row) == len(TRAJECTORY_COLUMNS)
        assert max(abs(v) for v in row[-6:]) <= 1e-12
    path = tmp_path / "traj.csv"
    write_trajectory(rows, str(path))
    with open(path, newline="") as fh:
        got = list(csv.reader(fh))
    assert tuple(got[0]) == TRAJECTORY_COLUMNS
    assert len(got) == len(rows) + 1
    back = [tuple(float(v) for v in r) for r in got[1:]]
    assert back == [tuple(float(v) for v in r) for r in rows]
