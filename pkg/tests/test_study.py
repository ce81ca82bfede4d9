"""Study-parameter displacements, sphere conditions, and the elimination
pipeline on the canonical pentapod."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duporcq.exactpoly import MPoly, ZeroDegree
from duporcq.geometry import BaseParams
from duporcq.study import (
    GENS,
    AnsatzSolvable,
    CanonicalDesign,
    ExceptionalPose,
    NotFFree,
    QuadricForm,
    SphereConstraint,
    StudyPose,
    StudyViolation,
    N_poly,
    S_poly,
    _normalize_quadric,
    apply_pose,
    chain_vanishes_at,
    compute_Ke,
    delta,
    displacement,
    e0e3_ratio,
    epsilon_quadric,
    exact_rank,
    f1_degeneracy_certificate,
    f1_f2,
    f_matrix_at,
    leg_condition,
    numeric_rank,
    pipeline_report,
    poly,
    rank_drop_T,
    resultant_chain,
    sphere_condition,
    tangency_ansatz,
)

WORKED_RADII = (1, 18, Fraction(18, 25), 1, 18)

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)
small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def random_fraction(rng, lo=-6, hi=6, den=6):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_base(rng) -> BaseParams:
    while True:
        try:
            return BaseParams(random_fraction(rng), random_fraction(rng),
                              random_fraction(rng), random_fraction(rng))
        except ValueError:
            continue


def random_mu(rng):
    while True:
        mu1 = random_fraction(rng, -4, 4, 4)
        mu3 = random_fraction(rng, -4, 4, 4)
        if mu1 != 0 and mu3 != 0:
            return (mu1, random_fraction(rng, -4, 4, 4), mu3)


# ---------------------------------------------------------------- displacement

def test_identity_pose():
    rot, tra = displacement(StudyPose.identity())
    assert rot == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert tra == (0, 0, 0)


def test_half_turn_about_z():
    pose = StudyPose((0, 0, 0, 1), (0, 0, 0, 0))
    assert apply_pose(pose, (1, 0, 0)) == (-1, 0, 0)
    assert apply_pose(pose, (0, 1, 0)) == (0, -1, 0)
    assert apply_pose(pose, (0, 0, 1)) == (0, 0, 1)


def test_pure_translation():
    pose = StudyPose((1, 0, 0, 0), (0, Fraction(1, 2), 0, 0))
    assert apply_pose(pose, (0, 0, 0)) == (1, 0, 0)
    assert apply_pose(pose, (5, -2, 3)) == (6, -2, 3)


def test_study_violation():
    with pytest.raises(StudyViolation):
        displacement(StudyPose((1, 0, 0, 0), (1, 0, 0, 0)))


def test_exceptional_pose():
    with pytest.raises(ExceptionalPose):
        displacement(StudyPose((0, 0, 0, 0), (0, 1, 0, 0)))


def test_float_pose():
    pose = StudyPose((0.6, 0.0, 0.0, 0.8), (0.0, 0.0, 0.0, 0.0))
    x = apply_pose(pose, (1.0, 0.0, 0.0))
    assert abs(x[0] - (-0.28)) < 1e-12
    assert abs(x[1] - 0.96) < 1e-12
    assert abs(x[2]) < 1e-12


@given(st.lists(rationals, min_size=4, max_size=4),
       st.lists(rationals, min_size=4, max_size=4))
def test_rotation_is_orthogonal(e, f):
    n = sum(x * x for x in e)
    if n == 0:
        return
    s = sum(x * y for x, y in zip(e, f))
    f = tuple(fi - s * ei / n for ei, fi in zip(e, f))
    rot, _ = displacement(StudyPose(tuple(e), f))
    for i in range(3):
        for j in range(3):
            dot = sum(rot[i][k] * rot[j][k] for k in range(3))
            assert dot == (1 if i == j else 0)


# ------------------------------------------------------------ sphere condition

def test_sphere_zero_radius_at_identity():
    leg = SphereConstraint((3, 4, 0), (3, 4, 0), 0)
    assert sphere_condition(StudyPose.identity(), leg) == 0


def test_sphere_matching_radius_at_identity():
    leg = SphereConstraint((3, 4, 0), (0, 0, 0), 25)
    assert sphere_condition(StudyPose.identity(), leg) == 0


def test_worked_design_closes_at_half_turn():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    pose = StudyPose((0, 0, 0, 1), (0, 0, 0, 0))
    for i in (1, 2, 3, 4, 5):
        assert leg_condition(design, i, pose) == 0


@given(st.lists(rationals, min_size=4, max_size=4),
       st.lists(rationals, min_size=4, max_size=4),
       st.lists(small_rationals, min_size=3, max_size=3),
       st.lists(small_rationals, min_size=3, max_size=3),
       small_rationals)
@settings(max_examples=40)
def test_sphere_condition_matches_distance(e, f, M, m, r2):
    n = sum(x * x for x in e)
    if n == 0:
        return
    s = sum(x * y for x, y in zip(e, f))
    f = tuple(fi - s * ei / n for ei, fi in zip(e, f))
    pose = StudyPose(tuple(e), f)
    moved = apply_pose(pose, tuple(m))
    dist2 = sum((a - b) ** 2 for a, b in zip(moved, M))
    q = sphere_condition(pose, SphereConstraint(tuple(M), tuple(m), r2))
    assert q == n * (dist2 - r2)


@given(st.lists(rationals, min_size=4, max_size=4),
       st.lists(rationals, min_size=4, max_size=4),
       st.lists(small_rationals, min_size=3, max_size=3),
       st.lists(small_rationals, min_size=3, max_size=3),
       small_rationals,
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
@settings(max_examples=25)
def test_weighted_sphere_condition_scales(e, f, M, m, r2, w):
    n = sum(x * x for x in e)
    if n == 0:
        return
    s = sum(x * y for x, y in zip(e, f))
    f = tuple(fi - s * ei / n for ei, fi in zip(e, f))
    pose = StudyPose(tuple(e), f)
    plain = sphere_condition(pose, SphereConstraint(tuple(M), tuple(m), r2))
    scaled_leg = SphereConstraint(tuple(w * x for x in M),
                                  tuple(w * x for x in m), r2)
    assert sphere_condition(pose, scaled_leg, weight=w) == w * w * plain


# -------------------------------------------------------------- leg differences

def test_identical_legs_cancel():
    pose = StudyPose.symbolic()
    leg = SphereConstraint((2, 3, 0), (1, -1, 0), 7)
    d = sphere_condition(pose, leg) - sphere_condition(pose, leg)
    assert poly(d).is_zero()


def test_delta_linear_in_f():
    rng = random.Random(7)
    for _ in range(3):
        design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
        for i in (2, 3, 4, 5):
            d = delta(design, i)
            for fv in ("f0", "f1", "f2", "f3"):
                assert d.degree_in(fv) <= 1


def test_delta_rejects_bad_index():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    with pytest.raises(ValueError):
        delta(design, 1)


# -------------------------------------------------------------------- K_e

def test_Ke_is_f_free_and_quadratic():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    ke = compute_Ke(design)
    for fv in ("f0", "f1", "f2", "f3"):
        assert ke.poly.degree_in(fv) == 0
    assert ke.poly.degree() == 2


def test_Ke_ratio_is_minus_eight_at_identity_map():
    rng = random.Random(3)
    for _ in range(10):
        design = CanonicalDesign.from_params(random_base(rng))
        ke = compute_Ke(design)
        assert e0e3_ratio(ke, design) == -8


def test_Ke_ratio_general_map():
    rng = random.Random(5)
    for _ in range(5):
        mu = random_mu(rng)
        design = CanonicalDesign.from_params(random_base(rng), mu=mu)
        ke = compute_Ke(design)
        assert e0e3_ratio(ke, design) == -4 * (mu[0] + mu[2])


def test_Ke_cross_terms_vanish():
    rng = random.Random(11)
    design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
    ke = compute_Ke(design)
    for (i, j) in ((0, 1), (0, 2), (1, 3), (2, 3)):
        assert ke.coeff(i, j).is_zero()
    assert (ke.coeff(0, 0) - ke.coeff(1, 1)).is_zero()
    assert (ke.coeff(2, 2) - ke.coeff(3, 3)).is_zero()


def test_Ke_symbolic_term_count_and_ratio():
    design = CanonicalDesign.symbolic()
    ke = compute_Ke(design)
    assert ke.poly.term_count == 1356
    ratio = e0e3_ratio(ke, design)
    assert poly(ratio) == -4 * (poly(GENS["mu1"]) + poly(GENS["mu3"]))


def test_quadric_form_rejects_f_terms():
    with pytest.raises(NotFFree):
        QuadricForm(GENS["e0"] * GENS["f1"] + GENS["e1"] * GENS["e1"])


def test_quadric_form_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        QuadricForm(GENS["e0"] * GENS["e0"] * GENS["e0"])


# ------------------------------------------------------------------- T quadric

def test_T_worked_identity_map():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    td = rank_drop_T(design)
    g = GENS
    expect = g["e0"] * (-2 * g["e1"] + 3 * g["e2"])
    assert td.T.poly == _normalize_quadric(expect)


def test_T_epsilon_golden():
    design = CanonicalDesign.from_params(BaseParams(0, 1, 2, 3),
                                         mu=(Fraction(2), Fraction(0), Fraction(1)))
    td = rank_drop_T(design)
    assert td.epsilons["eps01"] == -6
    assert td.T.poly == _normalize_quadric(epsilon_quadric(td.epsilons))


def test_T_matches_epsilon_quadric_on_draws():
    rng = random.Random(13)
    for _ in range(4):
        design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
        td = rank_drop_T(design)
        eq = epsilon_quadric(td.epsilons)
        if eq.is_zero():
            assert td.T.poly.is_zero()
        else:
            assert td.T.poly == _normalize_quadric(eq)


def _t_zero_sample(eps, rng):
    """An e vector with T(e) = 0, via the linear slice in e0."""
    while True:
        e1 = random_fraction(rng)
        e2 = random_fraction(rng)
        e3 = random_fraction(rng)
        den = eps["eps01"] * e1 + eps["eps02"] * e2
        if den == 0:
            continue
        e0 = -e3 * (eps["eps13"] * e1 + eps["eps23"] * e2) / den
        return (e0, e1, e2, e3)


def test_rank_drop_iff_T_vanishes():
    rng = random.Random(17)
    design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
    td = rank_drop_T(design)
    hits = 0
    for k in range(30):
        if k % 2 == 0:
            e = tuple(random_fraction(rng) for _ in range(4))
        else:
            e = _t_zero_sample(td.epsilons, rng)
        if all(x == 0 for x in e):
            continue
        t_val = td.T(e)
        rank = exact_rank(f_matrix_at(design, e))
        if t_val.is_zero():
            assert rank < 4
            hits += 1
        else:
            assert rank == 4
    assert hits >= 10


def test_numeric_rank_agrees_with_exact():
    rng = random.Random(19)
    design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
    td = rank_drop_T(design)
    e = _t_zero_sample(td.epsilons, rng)
    mat = f_matrix_at(design, e)
    assert exact_rank(mat) == numeric_rank(mat)
    e_generic = (Fraction(1), Fraction(2), Fraction(3), Fraction(5))
    mat = f_matrix_at(design, e_generic)
    assert exact_rank(mat) == numeric_rank(mat) == 4


# -------------------------------------------------------------------- F1 and F2

def test_F2_zero_iff_identity_map():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    _, f2 = f1_f2(design)
    assert f2.is_zero()
    rng = random.Random(23)
    for _ in range(8):
        mu = random_mu(rng)
        if mu == (1, 0, 1):
            continue
        design = CanonicalDesign.from_params(random_base(rng), mu=mu)
        _, f2 = f1_f2(design)
        assert not f2.is_zero()


def test_F1_never_zero_on_valid_designs():
    rng = random.Random(29)
    for _ in range(20):
        design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
        f1, _ = f1_f2(design)
        assert not f1.is_zero()


def test_F1_degeneracy_certificate():
    cert = f1_degeneracy_certificate()
    A = poly(GENS["A5"] - GENS["A4"] + 1)
    B = poly(GENS["B4"] - GENS["B5"])
    assert cert == -2 * poly(GENS["mu3"]) * B * B * (A * A + B * B)


# ---------------------------------------------------------------------- ansatz

def test_ansatz_forces_zero_on_worked_design():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    report = tangency_ansatz(compute_Ke(design))
    assert report.forces_all_zero()
    assert "q03" in report.branch_a.obstructions
    assert "q03_square" in report.branch_b.obstructions


def test_ansatz_forces_zero_on_draws():
    rng = random.Random(31)
    for _ in range(4):
        design = CanonicalDesign.from_params(random_base(rng), mu=random_mu(rng))
        report = tangency_ansatz(compute_Ke(design))
        assert report.forces_all_zero()
        assert report.branch_a.forced == {"nu1": 0, "nu2": 0}
        assert report.branch_b.forced == {"nu0": 0, "nu3": 0}


def test_ansatz_sanity_branch_b():
    g = GENS
    ke = QuadricForm(-N_poly() - g["e0"] * g["e0"])
    with pytest.raises(AnsatzSolvable) as exc:
        tangency_ansatz(ke)
    assert exc.value.branch == "nu1=nu2=0"
    assert exc.value.witness["nu0"] == 1


def test_ansatz_sanity_branch_a():
    g = GENS
    lin = g["e1"] + g["e2"]
    ke = QuadricForm(-N_poly() - lin * lin)
    with pytest.raises(AnsatzSolvable) as exc:
        tangency_ansatz(ke)
    assert exc.value.branch == "nu0=nu3=0"
    assert abs(exc.value.witness["nu1"]) == 1
    assert abs(exc.value.witness["nu2"]) == 1


# ------------------------------------------------------------- resultant chain

def _generic_design(rng):
    return CanonicalDesign.from_params(
        random_base(rng), mu=random_mu(rng),
        radii=tuple(random_fraction(rng, 1, 6, 4) for _ in range(5)))


def test_chain_matches_F1F2_on_draws():
    rng = random.Random(37)
    for _ in range(3):
        design = _generic_design(rng)
        ke = compute_Ke(design)
        td = rank_drop_T(design)
        chain = resultant_chain(ke, td.T, design)
        assert chain.factor_match, chain.gcd.to_str()
        assert not chain.gcd.is_zero()


def test_chain_vanishes_identically_at_identity_map():
    design = CanonicalDesign.worked(radii=WORKED_RADII)
    ke = compute_Ke(design)
    td = rank_drop_T(design)
    chain = resultant_chain(ke, td.T, design)
    assert chain.gcd.is_zero()
    assert chain.factor_match


def test_chain_locus_samples():
    rng = random.Random(41)
    on, off = 0, 0
    while on < 4 or off < 4:
        base = random_base(rng)
        radii = tuple(random_fraction(rng, 1, 6, 4) for _ in range(5))
        e1 = random_fraction(rng)
        e2 = random_fraction(rng)
        if e1 == 0 or e2 == 0:
            continue
        mu1, mu3 = random_mu(rng)[0], random_mu(rng)[2]
        mu2_on = ((1 + mu1) * (mu3 - 1) * e1 ** 2
                  + (1 + mu3) * (mu1 - 1) * e2 ** 2) / (2 * e1 * e2)
        try:
            if on < 4:
                design = CanonicalDesign.from_params(
                    base, mu=(mu1, mu2_on, mu3), radii=radii)
                assert chain_vanishes_at(design, e1, e2)
                on += 1
            else:
                design = CanonicalDesign.from_params(
                    base, mu=(mu1, mu2_on + 1, mu3), radii=radii)
                f1, f2 = f1_f2(design)
                a = {"e1": e1, "e2": e2}
                if f1.evaluate(a).is_zero() or f2.evaluate(a).is_zero():
                    continue
                assert not chain_vanishes_at(design, e1, e2)
                off += 1
        except ZeroDegree:
            continue


def test_pipeline_report_shape():
    rng = random.Random(43)
    report = pipeline_report(_generic_design(rng))
    assert set(report) == {"conclusion", "ansatz", "Ke", "T", "F1F2", "chain"}
    assert set(report["Ke"]) == {"terms", "e0e3_ratio"}
    assert set(report["T"]["epsilons"]) == {"eps01", "eps02", "eps13", "eps23"}
    assert report["chain"]["factors"]["expected"] == "F1^2*F2^2"
    assert report["chain"]["factors"]["match"] is True
    assert report["ansatz"]["forces_all_zero"] is True
    assert report["conclusion"] == "no two-parameter self-motion"
