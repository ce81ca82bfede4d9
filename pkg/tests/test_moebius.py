from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from duporcq.exactpoly import GaussRational, I, as_gauss
from duporcq.geometry import BaseParams, PlanarPoint, canonical_base, reconstruct_candidates
from duporcq.moebius import (
    AllZero,
    ConicDirection,
    DelPezzoPoint,
    NotCollinearDirection,
    PAIRS,
    PHI_FACTORS,
    SUPPORT,
    candidate_report,
    collinear_triples,
    cross_ratio,
    del_pezzo,
    dij,
    extended_del_pezzo,
    line_membership,
    membership_report,
    phi_from_projections,
    picture,
    profile,
    profile_rows,
    project,
    same_picture,
    special_directions,
    validate_candidates,
)

WORKED = BaseParams(0, 1, 2, 3)
PTS = canonical_base(WORKED)[0]
C_IZ = ConicDirection(1, I, 0)


def G(re, im=0):
    return GaussRational(re, im)


# ----------------------------------------------------------------- structure

def test_phi_factor_table():
    # each phi is a quintic product; each point index appears exactly twice
    for factors in PHI_FACTORS:
        assert len(factors) == 5
        counts = {i: 0 for i in range(1, 6)}
        for (i, j) in factors:
            counts[i] += 1
            counts[j] += 1
        assert all(v == 2 for v in counts.values())


def test_support_sizes():
    triple_line_pairs = {(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)}
    for pair in PAIRS:
        expected = 4 if pair in triple_line_pairs else 1
        assert len(SUPPORT[pair]) == expected, pair


# ---------------------------------------------------------------- projection

def test_projection_golden():
    assert [str(v) for v in project(PTS, C_IZ)] == ["0", "1", "-1", "i", "2+3i"]


def test_dij_golden():
    assert dij(PTS, C_IZ, 1, 2) == G(-1)


def test_dij_rejects_equal_indices():
    with pytest.raises(ValueError):
        dij(PTS, C_IZ, 2, 2)


def test_dij_vanishes_along_segment():
    c = ConicDirection.from_direction((2, 3))
    assert not dij(PTS, c, 1, 5)


def test_conic_direction_invariant():
    ConicDirection.from_t(Fraction(1, 2))   # c.c = 0 holds by construction
    with pytest.raises(ValueError):
        ConicDirection(1, 2, 3)
    with pytest.raises(ValueError):
        ConicDirection(0, 0, None)


def test_from_t_satisfies_conic():
    c = ConicDirection.from_t(Fraction(3, 7))
    assert c.c1 ** 2 + c.c2 ** 2 + c.c3 ** 2 == G(0)


# ----------------------------------------------------------------- pictures

def test_generic_direction_empty_membership():
    p = del_pezzo(PTS, ConicDirection.from_direction((1, 7)))
    assert line_membership(p) == set()
    assert p.zeros() == frozenset()


def test_collinear_triple_direction_all_zero():
    with pytest.raises(AllZero):
        del_pezzo(PTS, ConicDirection.from_direction((1, 0)))


SPECIAL_EXPECT = {
    "d123": ({(4, 5)}, True),
    "d345": ({(1, 2)}, True),
    "d15": ({(1, 5)}, False),
    "d14": ({(1, 4)}, False),
    "d25": ({(2, 5)}, False),
    "d24": ({(2, 4)}, False),
}


def test_special_direction_membership_matrix():
    for name, u in special_directions(PTS):
        want, want_ext = SPECIAL_EXPECT[name]
        c = ConicDirection.from_direction(u)
        try:
            p = del_pezzo(PTS, c)
            ext = False
        except AllZero:
            p = extended_del_pezzo(PTS, u)
            ext = True
        assert ext == want_ext, name
        assert line_membership(p) == {frozenset(x) for x in want}, name


def test_extended_metallic_pattern():
    p = extended_del_pezzo(PTS, (1, 0))
    assert p.zeros() == frozenset({0, 2, 4, 5})
    assert line_membership(p) == {frozenset({4, 5})}


def test_extended_requires_triple_direction():
    with pytest.raises(NotCollinearDirection):
        extended_del_pezzo(PTS, (1, 7))
    with pytest.raises(ValueError):
        extended_del_pezzo(PTS, (0, 0))


def test_collinear_triples_worked():
    assert collinear_triples(PTS) == [(1, 2, 3), (3, 4, 5)]


def test_picture_auto_extends():
    p = picture(PTS, ConicDirection.from_direction((1, 0)))
    assert line_membership(p) == {frozenset({4, 5})}


# -------------------------------------------------------------- same_picture

def test_same_picture_self():
    assert same_picture(PTS, PTS, C_IZ)


def test_same_picture_base_vs_duporcq_platform():
    rec2 = {c.tag: c for c in reconstruct_candidates(WORKED)}["2bi"].platform
    assert same_picture(PTS, rec2, C_IZ)


def test_same_picture_rejects_2bii_at_orange():
    cand = {c.tag: c for c in reconstruct_candidates(WORKED)}["2bii"].platform
    c = ConicDirection.from_direction((-1, 1))   # along M2M4
    assert not same_picture(PTS, cand, c)


def test_same_picture_propagates_allzero_for_complex_c():
    # c = (0 : i) kills every pair with dy = 0, hence every phi, and a
    # complex component ratio admits no rational extension direction
    with pytest.raises(AllZero):
        same_picture(PTS, PTS, ConicDirection(0, G(0, 1)))


# -------------------------------------------------------------- reconstruction

def test_validate_candidates_accepts_exactly_123():
    cands = reconstruct_candidates(WORKED)
    accepted = validate_candidates(WORKED, cands)
    assert [c.tag for c in accepted] == ["1a", "2bi", "3"]


def test_rejection_paths():
    cands = reconstruct_candidates(WORKED)
    rep = candidate_report(WORKED, cands)
    # 1b and 2a fail with the triple-line memberships swapped
    assert rep["1b"]["accepted"] is False
    assert rep["1b"]["directions"]["d123"]["candidate_membership"] == [[1, 2]]
    assert rep["1b"]["directions"]["d123"]["base_membership"] == [[4, 5]]
    assert rep["2a"]["accepted"] is False
    assert rep["2a"]["directions"]["d123"]["candidate_membership"] == [[1, 2]]
    # 2bii fails with the fourth connecting line landing on L15
    assert rep["2bii"]["accepted"] is False
    assert rep["2bii"]["directions"]["d24"]["candidate_membership"] == [[1, 5]]
    assert rep["2bii"]["directions"]["d24"]["base_membership"] == [[2, 4]]


def test_accepted_match_at_all_special_directions():
    rep = candidate_report(WORKED, reconstruct_candidates(WORKED))
    for tag in ("1a", "2bi", "3"):
        assert rep[tag]["accepted"] is True
        assert all(d["match"] for d in rep[tag]["directions"].values())


def test_membership_report_shape():
    entries = membership_report(PTS, special_directions(PTS))
    assert [e["direction"] for e in entries] == ["d123", "d345", "d15", "d14", "d25", "d24"]
    d24 = entries[-1]
    assert d24["membership"] == [[2, 4]]
    assert d24["extended"] is False
    assert len(d24["phi"]) == 6


# ------------------------------------------------------------------- profile

def test_profile_removed_factor():
    curve = profile(PTS)
    assert curve.removed.to_str() == "t^3 - 2*t^2 - t"
    assert all(c.degree() <= 7 for c in curve.components)


def test_profile_generic_degree_ten():
    pts = (PlanarPoint(0, 0), PlanarPoint(1, 2), PlanarPoint(3, 1),
           PlanarPoint(-1, 5), PlanarPoint(2, -3))
    curve = profile(pts)
    for comp in curve.components:
        assert comp.degree() + curve.removed.degree() == 10


def test_profile_matches_pointwise_picture():
    curve = profile(PTS)
    for t in (Fraction(1), Fraction(2, 3), Fraction(-5, 4)):
        vals = [c.evaluate({"t": as_gauss(t)}).scalar() for c in curve.components]
        direct = picture(PTS, ConicDirection.from_t(t))
        assert DelPezzoPoint(tuple(vals)).proportional(direct)


def test_profile_rows():
    curve = profile(PTS)
    rows = profile_rows(curve, [Fraction(2, 3)])
    assert len(rows) == 1 and len(rows[0]) == 7
    assert rows[0][0] == "2/3"


# ----------------------------------------------------------------- invariance

def test_cross_ratio_oracle():
    z = project(PTS, C_IZ)
    assert cross_ratio(z[0], z[1], z[2], z[3]) == GaussRational(Fraction(1, 2), Fraction(1, 2))
    rec2 = {c.tag: c for c in reconstruct_candidates(WORKED)}["2bi"].platform
    w = project(rec2, C_IZ)
    assert cross_ratio(w[0], w[1], w[2], w[3]) == GaussRational(Fraction(1, 2), Fraction(1, 2))


def test_same_picture_implies_equal_cross_ratios():
    rec2 = {c.tag: c for c in reconstruct_candidates(WORKED)}["2bi"].platform
    z = project(PTS, C_IZ)
    w = project(rec2, C_IZ)
    assert same_picture(PTS, rec2, C_IZ)
    for idx in ((0, 1, 2, 3), (0, 1, 2, 4), (1, 2, 3, 4), (0, 2, 3, 4)):
        a = cross_ratio(*(z[k] for k in idx))
        b = cross_ratio(*(w[k] for k in idx))
        assert a == b, idx


small_gauss = st.builds(
    GaussRational,
    st.fractions(min_value=-5, max_value=5, max_denominator=3),
    st.fractions(min_value=-5, max_value=5, max_denominator=3),
)


@given(zs=st.lists(small_gauss, min_size=5, max_size=5, unique=True),
       a=small_gauss, b=small_gauss, c=small_gauss, d=small_gauss)
@settings(max_examples=60, deadline=None)
def test_moebius_invariance_of_pictures(zs, a, b, c, d):
    assume(a * d - b * c)
    assume(all(c * z + d for z in zs))
    phi = phi_from_projections(zs)
    assume(any(phi))
    mapped = [(a * z + b) / (c * z + d) for z in zs]
    phi2 = phi_from_projections(mapped)
    assert DelPezzoPoint(phi).proportional(DelPezzoPoint(phi2))


@given(t=st.fractions(min_value=-8, max_value=8, max_denominator=5),
       s=st.fractions(min_value=-4, max_value=4, max_denominator=3))
@settings(max_examples=40, deadline=None)
def test_scaling_invariance_of_c(t, s):
    assume(s != 0)
    c = ConicDirection.from_t(t)
    scaled = ConicDirection(c.c1 * GaussRational(s), c.c2 * GaussRational(s))
    try:
        p = del_pezzo(PTS, c)
    except AllZero:
        return
    q = del_pezzo(PTS, scaled)
    assert p.proportional(q)


@given(A4=st.fractions(min_value=-4, max_value=4, max_denominator=3),
       B4=st.fractions(min_value=-4, max_value=4, max_denominator=3),
       A5=st.fractions(min_value=-4, max_value=4, max_denominator=3),
       B5=st.fractions(min_value=-4, max_value=4, max_denominator=3))
@settings(max_examples=50, deadline=None)
def test_single_pair_membership(A4, B4, A5, B5):
    # a direction parallel to exactly one segment lands on exactly that line
    try:
        params = BaseParams(A4, B4, A5, B5)
    except Exception:
        assume(False)
    pts = canonical_base(params)[0]
    for (i, j) in ((1, 4), (1, 5), (2, 4), (2, 5)):
        u = pts[j - 1] - pts[i - 1]
        c = ConicDirection.from_direction(u)
        vanishing = {pair for pair in PAIRS if not dij(pts, c, *pair)}
        if vanishing != {(i, j)}:
            continue
        p = del_pezzo(pts, c)
        assert line_membership(p) == {frozenset({i, j})}
