import pytest
from fractions import Fraction as F
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from frechet.core import make_pmf, margins, mix, point_mass
from frechet.exceptions import DimensionMismatch, NotAMember, OutOfRange, UnsupportedDimension
from frechet.linalg import mat_vec
from frechet.polytope import (
    ConvexWeights, annotate_oracle, build_constraints, closed_form_extremals, decompose,
    enumerate_vertices_oracle, expected_vertex_count, is_member, is_vertex, same_vertices,
    sweep_point,
)


def _grid(max_denominator):
    return sorted({F(s, t) for t in range(2, max_denominator + 1) for s in range(1, t // 2 + 1)})


# ==========================================================
# Constraint system
# ==========================================================

def test_build_constraints_sign_pattern_at_half():
    cs = build_constraints(3, F(1, 2))
    assert list(cs.h[0]) == [F(-1, 2), F(1, 2)] * 4


def test_build_constraints_annihilates_r4():
    cs = build_constraints(3, F(1, 4))
    r4 = closed_form_extremals(F(1, 4)).vertex("r4")
    assert mat_vec(cs.h, r4.values) == [0, 0, 0]


def test_build_constraints_detects_wrong_margin():
    cs = build_constraints(3, F(1, 4))
    assert mat_vec(cs.h, point_mass(3, (1, 1, 1)).values) == [F(3, 4)] * 3


def test_build_constraints_rejects_dimension():
    with pytest.raises(UnsupportedDimension):
        build_constraints(5, F(1, 4))


# ==========================================================
# Closed-form extremal points
# ==========================================================

def test_closed_form_low_margin_table():
    es = closed_form_extremals(F(1, 4))
    assert len(es) == 6
    assert es.vertex("r4").values == (F(5, 8), 0, 0, F(1, 8), 0, F(1, 8), F(1, 8), 0)
    assert es.labels == ("r1", "r2", "r3", "r4", "r5", "r6")
    assert es.tag_of("r4") == "type0-plus"
    assert es.tag_of("r6") == "type0-minus"


def test_closed_form_high_margin_table():
    es = closed_form_extremals(F(2, 5))
    assert len(es) == 9
    assert es.vertex("r6").values == (0, F(1, 5), F(1, 5), F(1, 5), F(2, 5), 0, 0, 0)
    assert [es.tag_of(label) for label in ("r6", "r7", "r8")] == ["supportX1X2"] * 3
    assert es.tag_of("r9") == "type0-minus"
    assert es.tag_of("r5") == "kernel"


def test_closed_form_merges_duplicates_at_half():
    es = closed_form_extremals(F(1, 2))
    assert len(es) == 6
    assert es.labels == ("r1", "r2", "r3", "r4", "r5", "r9")
    assert es.vertex("r1").values == (0, 0, 0, F(1, 2), F(1, 2), 0, 0, 0)


def test_closed_form_boundary_keeps_explicit_zero():
    es = closed_form_extremals(F(1, 3))
    assert es.vertex("r6").values == (0, F(1, 3), F(1, 3), 0, F(1, 3), 0, 0, 0)


def test_closed_form_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        closed_form_extremals(F(3, 5))
    with pytest.raises(OutOfRange):
        closed_form_extremals(F(0))


def test_expected_vertex_count():
    assert expected_vertex_count(F(1, 4)) == 6
    assert expected_vertex_count(F(1, 3)) == 6
    assert expected_vertex_count(F(2, 5)) == 9
    assert expected_vertex_count(F(1, 2)) == 6


# ==========================================================
# Oracle
# ==========================================================

def test_oracle_matches_low_margin_table():
    cs = build_constraints(3, F(1, 4))
    assert same_vertices(enumerate_vertices_oracle(cs), closed_form_extremals(F(1, 4)))


def test_oracle_matches_high_margin_table():
    oracle = enumerate_vertices_oracle(build_constraints(3, F(2, 5)))
    assert len(oracle) == 9
    assert same_vertices(oracle, closed_form_extremals(F(2, 5)))


def test_oracle_bivariate_half():
    oracle = enumerate_vertices_oracle(build_constraints(2, F(1, 2)))
    assert oracle.value_set() == {
        (F(1, 2), 0, 0, F(1, 2)),
        (0, F(1, 2), F(1, 2), 0),
    }
    assert set(oracle.tags) == {"oracle"}


def test_oracle_rejects_dimension():
    cs = build_constraints(3, F(1, 4))
    object.__setattr__(cs, "d", 5)
    with pytest.raises(UnsupportedDimension):
        enumerate_vertices_oracle(cs)


@pytest.mark.parametrize("p", _grid(20))
def test_oracle_equals_closed_form_on_grid(p):
    oracle = enumerate_vertices_oracle(build_constraints(3, p))
    closed = closed_form_extremals(p)
    assert same_vertices(oracle, closed)
    assert len(oracle) == expected_vertex_count(p)


def test_oracle_vertices_have_small_support():
    for d, p in [(3, F(2, 5)), (4, F(1, 4))]:
        cs = build_constraints(d, p)
        for f in enumerate_vertices_oracle(cs).vertices:
            assert len(f.support) <= d + 1
            assert is_vertex(cs, f)


def test_annotate_oracle_marks_upper_frechet_and_kernel():
    es = annotate_oracle(enumerate_vertices_oracle(build_constraints(2, F(1, 4))))
    tags = dict(zip((f.values for f in es.vertices), es.tags))
    assert tags[(F(3, 4), 0, 0, F(1, 4))] == "upperFrechet"
    assert tags[(F(1, 2), F(1, 4), F(1, 4), 0)] == "kernel"


# ==========================================================
# Membership and vertices
# ==========================================================

def test_is_member_examples():
    es = closed_form_extremals(F(2, 5))
    assert is_member(build_constraints(3, F(2, 5)), es.vertex("r9"))
    assert not is_member(build_constraints(3, F(1, 4)), point_mass(3, (0, 0, 0)))
    low = closed_form_extremals(F(1, 4))
    midpoint = mix([low.vertex("r5"), low.vertex("r6")], [F(1, 2), F(1, 2)])
    assert is_member(build_constraints(3, F(1, 4)), midpoint)


def test_is_member_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        is_member(build_constraints(2, F(1, 4)), point_mass(3, (0, 0, 0)))


def test_is_vertex_examples():
    cs = build_constraints(3, F(2, 5))
    es = closed_form_extremals(F(2, 5))
    assert is_vertex(cs, es.vertex("r1"))
    midpoint = mix([es.vertex("r6"), es.vertex("r7")], [F(1, 2), F(1, 2)])
    assert not is_vertex(cs, midpoint)
    boundary = make_pmf(3, [0, F(1, 3), F(1, 3), 0, F(1, 3), 0, 0, 0])
    assert is_vertex(build_constraints(3, F(1, 3)), boundary)


def test_is_vertex_requires_membership():
    with pytest.raises(NotAMember):
        is_vertex(build_constraints(3, F(1, 4)), point_mass(3, (0, 0, 0)))


def test_proper_combinations_of_two_vertices_are_not_vertices():
    cs = build_constraints(3, F(2, 5))
    vertices = closed_form_extremals(F(2, 5)).vertices
    for a in range(len(vertices)):
        for b in range(a + 1, len(vertices)):
            f = mix([vertices[a], vertices[b]], [F(1, 3), F(2, 3)])
            assert not is_vertex(cs, f)


# ==========================================================
# Decomposition
# ==========================================================

def test_decompose_midpoint_remixes_exactly():
    es = closed_form_extremals(F(1, 4))
    f = mix([es.vertex("r5"), es.vertex("r6")], [F(1, 2), F(1, 2)])
    weights = decompose(es, f)
    assert weights.remix(es) == f


def test_decompose_vertex_uses_only_itself():
    es = closed_form_extremals(F(2, 5))
    weights = decompose(es, es.vertex("r4"))
    assert weights.weights[es.labels.index("r4")] == 1
    assert sum(weights.weights) == 1


def test_decompose_exchangeable_member():
    es = closed_form_extremals(F(2, 5))
    third = F(1, 3)
    fe = mix([es.vertex("r6"), es.vertex("r7"), es.vertex("r8")], [third, third, third])
    assert decompose(es, fe).remix(es) == fe


def test_decompose_is_deterministic():
    es = closed_form_extremals(F(2, 5))
    f = mix(es.vertices, [F(1, 9)] * 9)
    assert decompose(es, f) == decompose(es, f)


def test_decompose_rejects_non_member():
    es = closed_form_extremals(F(1, 4))
    with pytest.raises(NotAMember):
        decompose(es, point_mass(3, (0, 0, 0)))


@seed(2)
@settings(max_examples=40, deadline=None)
@given(
    p=st.sampled_from([F(1, 5), F(1, 3), F(2, 5), F(1, 2)]),
    raw=st.lists(st.integers(min_value=0, max_value=12), min_size=9, max_size=9),
)
def test_decompose_then_remix_is_identity(p, raw):
    es = closed_form_extremals(p)
    raw = raw[:len(es)]
    if sum(raw) == 0:
        raw[-1] = 1
    f = mix(es.vertices, [F(w, sum(raw)) for w in raw])
    weights = decompose(es, f)
    assert isinstance(weights, ConvexWeights)
    assert weights.remix(es) == f


# ==========================================================
# Random pmfs
# ==========================================================

RANDOM_PMF_MASSES = st.lists(st.integers(min_value=0, max_value=20), min_size=8, max_size=8).filter(any)


@pytest.mark.parametrize("p", [F(1, 4), F(1, 3), F(2, 5)])
@seed(7)
@settings(max_examples=100, deadline=None)
@given(raw=RANDOM_PMF_MASSES)
def test_constraint_rows_measure_margin_excess_on_random_pmfs(p, raw):
    cs = build_constraints(3, p)
    f = make_pmf(3, [F(w, sum(raw)) for w in raw])
    residual = mat_vec(cs.h, f.values)
    assert residual == [m - p for m in margins(f)]
    assert (residual == [0, 0, 0]) == all(m == p for m in margins(f))
    assert is_member(cs, f) == all(m == p for m in margins(f))


@pytest.mark.parametrize("p", [F(1, 4), F(1, 3), F(2, 5)])
@seed(8)
@settings(max_examples=100, deadline=None)
@given(raw=st.lists(st.integers(min_value=0, max_value=20), min_size=9, max_size=9).filter(any))
def test_random_class_members_are_annihilated(p, raw):
    es = closed_form_extremals(p)
    raw = raw[:len(es)]
    if sum(raw) == 0:
        raw[0] = 1
    f = mix(es.vertices, [F(w, sum(raw)) for w in raw])
    assert mat_vec(build_constraints(3, p).h, f.values) == [0, 0, 0]
    assert margins(f) == (p, p, p)


# ==========================================================
# Sweep point
# ==========================================================

def test_sweep_point_quarter_d4():
    point = sweep_point(25, 100, 4)
    assert point.p == F(1, 4)
    assert point.vertex_count >= 1
    assert point.sane
    assert point.elapsed_ms >= 0


def test_sweep_point_is_deterministic():
    first = sweep_point(50, 100, 4)
    second = sweep_point(50, 100, 4)
    assert first.vertex_count == second.vertex_count
