import pytest
from fractions import Fraction as F
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from frechet.core import (
    MarginParam, atom_index, atoms, class_parameter, correlation, make_pmf, margin, margins, mix,
    parse_rational, format_rational, permute, point_mass, second_moment, sum_distribution,
    sum_support, variance_of_sum,
)
from frechet.exceptions import (
    DegenerateMargin, DimensionMismatch, InvalidWeights, MalformedRational, NegativeMass,
    NotNormalized, OutOfRange, UnequalMargins, UnsupportedDimension,
)
from frechet.polytope import closed_form_extremals

# reverse-lex: 000, 100, 010, 110, 001, 101, 011, 111
R6_LOW_QUARTER = make_pmf(3, [F(1, 4), F(1, 4), F(1, 4), 0, F(1, 4), 0, 0, 0])
R6_HIGH_TWO_FIFTHS = make_pmf(3, [0, F(1, 5), F(1, 5), F(1, 5), F(2, 5), 0, 0, 0])
R4_QUARTER = make_pmf(3, [F(5, 8), 0, 0, F(1, 8), 0, F(1, 8), F(1, 8), 0])
R5_TWO_FIFTHS = make_pmf(3, [F(3, 5), 0, 0, 0, 0, 0, 0, F(2, 5)])
R9_TWO_FIFTHS = make_pmf(3, [0, F(3, 10), F(3, 10), 0, F(3, 10), 0, 0, F(1, 10)])
UNIFORM = make_pmf(3, [F(1, 8)] * 8)


# ==========================================================
# Rationals
# ==========================================================

def test_parse_rational_canonical_forms():
    assert parse_rational("2/5") == F(2, 5)
    assert parse_rational("-1/3") == F(-1, 3)
    assert parse_rational("0/1") == 0
    assert parse_rational("7/1") == 7


@pytest.mark.parametrize("text", ["2/4", "1/-2", "0/5", "-0/1", "1.5", "3", "", "01/2", "1/0", " /2", " 1/4", "1/4\n", " 1/4\n", "1 /4"])
def test_parse_rational_rejects_non_canonical(text):
    with pytest.raises(MalformedRational):
        parse_rational(text)


def test_parse_rational_rejects_non_strings():
    with pytest.raises(MalformedRational):
        parse_rational(F(1, 2))


def test_format_rational_always_has_a_slash():
    assert format_rational(F(0)) == "0/1"
    assert format_rational(F(3)) == "3/1"
    assert format_rational(F(-6, 4)) == "-3/2"


# ==========================================================
# Margin parameter
# ==========================================================

def test_margin_param_derives_p_and_c():
    param = MarginParam(2, 5)
    assert param.p == F(2, 5)
    assert param.c == F(-1, 2)
    # p c = 2p - 1
    assert param.p * param.c == 2 * param.p - 1
    assert str(param) == "2/5"


def test_margin_param_keeps_unreduced_s_and_t():
    param = MarginParam(25, 100)
    assert param.p == F(1, 4)
    assert param.c == MarginParam(1, 4).c


def test_margin_param_rejects_p_above_half_with_symmetry_hint():
    with pytest.raises(OutOfRange) as exc:
        MarginParam.of("3/4")
    assert "1/4" in exc.value.message


@pytest.mark.parametrize("s,t", [(0, 5), (-1, 3), (1, 0)])
def test_margin_param_rejects_nonpositive(s, t):
    with pytest.raises(OutOfRange):
        MarginParam(s, t)


def test_margin_param_of_accepts_several_inputs():
    assert MarginParam.of("1/3") == MarginParam(1, 3)
    assert MarginParam.of(F(1, 2)) == MarginParam(1, 2)
    param = MarginParam(2, 5)
    assert MarginParam.of(param) is param


# ==========================================================
# Atoms and pmf construction
# ==========================================================

def test_atoms_follow_reverse_lexicographic_order():
    labels = ["".join(map(str, x)) for x in atoms(3)]
    assert labels == ["000", "100", "010", "110", "001", "101", "011", "111"]
    assert atom_index((1, 1, 0)) == 3
    assert atom_index((0, 0, 1)) == 4


def test_make_pmf_upper_frechet():
    f = make_pmf(3, [F(3, 5), 0, 0, 0, 0, 0, 0, F(2, 5)])
    assert f.values[0] == F(3, 5)
    assert f.support == (0, 7)


def test_make_pmf_accepts_degenerate_point_mass():
    f = make_pmf(3, [1, 0, 0, 0, 0, 0, 0, 0])
    assert margins(f) == (0, 0, 0)


def test_make_pmf_errors():
    with pytest.raises(NotNormalized):
        make_pmf(3, [F(1, 8)] * 7 + [F(2, 8)])
    with pytest.raises(NegativeMass):
        make_pmf(3, [F(1, 2), F(-1, 4), F(3, 4), 0, 0, 0, 0, 0])
    with pytest.raises(DimensionMismatch):
        make_pmf(3, [F(1, 2), F(1, 2)])
    with pytest.raises(UnsupportedDimension):
        make_pmf(5, [F(1, 32)] * 32)


def test_pmf_lookup_by_atom():
    assert R6_HIGH_TWO_FIFTHS[(1, 1, 0)] == F(1, 5)
    assert R6_HIGH_TWO_FIFTHS[(0, 0, 1)] == F(2, 5)


# ==========================================================
# Moments
# ==========================================================

def test_margin_examples():
    assert margin(R6_LOW_QUARTER, 1) == F(1, 4)
    assert margin(point_mass(3, (1, 1, 1)), 2) == 1
    assert margin(UNIFORM, 3) == F(1, 2)


def test_margin_rejects_bad_coordinate():
    with pytest.raises(DimensionMismatch):
        margin(UNIFORM, 4)


def test_second_moment_examples():
    assert second_moment(R6_HIGH_TWO_FIFTHS, 1, 2) == F(1, 5)
    assert second_moment(R6_HIGH_TWO_FIFTHS, 1, 3) == 0
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert second_moment(R5_TWO_FIFTHS, i, j) == F(2, 5)


def test_correlation_examples():
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert correlation(R4_QUARTER, i, j) == F(1, 3)
        assert correlation(R5_TWO_FIFTHS, i, j) == 1
        assert correlation(R9_TWO_FIFTHS, i, j) == F(-1, 4)


def test_correlation_matches_moment_formula():
    p = F(2, 5)
    for f in closed_form_extremals(p).vertices:
        for i, j in [(1, 2), (1, 3), (2, 3)]:
            assert correlation(f, i, j) == (second_moment(f, i, j) - p * p) / (p * (1 - p))


def test_correlation_errors():
    with pytest.raises(DegenerateMargin):
        correlation(point_mass(3, (0, 0, 0)), 1, 2)
    unequal = make_pmf(3, [F(1, 2), 0, F(1, 4), 0, 0, 0, 0, F(1, 4)])
    with pytest.raises(UnequalMargins):
        correlation(unequal, 1, 2)


def test_class_parameter():
    assert class_parameter(R4_QUARTER) == MarginParam(1, 4)
    unequal = make_pmf(3, [F(1, 2), 0, 0, 0, F(1, 4), F(1, 4), 0, 0])
    with pytest.raises(UnequalMargins):
        class_parameter(unequal)
    with pytest.raises(OutOfRange):
        class_parameter(point_mass(3, (1, 1, 1)))


# ==========================================================
# Sum distribution
# ==========================================================

def test_sum_distribution_examples():
    assert sum_distribution(R6_HIGH_TWO_FIFTHS).masses == (0, F(4, 5), F(1, 5), 0)
    assert sum_distribution(R5_TWO_FIFTHS).masses == (F(3, 5), 0, 0, F(2, 5))
    assert sum_distribution(R4_QUARTER).masses == (F(5, 8), 0, F(3, 8), 0)


def test_sum_distribution_preserves_mean():
    law = sum_distribution(R9_TWO_FIFTHS)
    assert sum(law.masses) == 1
    assert law.mean == 3 * F(2, 5)


def test_variance_of_sum_examples():
    assert variance_of_sum(R6_HIGH_TWO_FIFTHS) == F(4, 25)
    assert variance_of_sum(R6_LOW_QUARTER) == F(3, 16)
    assert variance_of_sum(point_mass(3, (1, 1, 1))) == 0


def test_sum_support():
    assert sum_support(R6_HIGH_TWO_FIFTHS) == {1, 2}
    assert sum_support(R9_TWO_FIFTHS) == {1, 3}


# ==========================================================
# Transformations
# ==========================================================

def test_mix_is_exact():
    f = mix([R5_TWO_FIFTHS, R6_HIGH_TWO_FIFTHS], [F(1, 2), F(1, 2)])
    assert f.values[0] == F(3, 10)
    assert f.values[7] == F(1, 5)
    assert margins(f) == (F(2, 5),) * 3


def test_mix_rejects_bad_weights():
    with pytest.raises(InvalidWeights):
        mix([R5_TWO_FIFTHS, R6_HIGH_TWO_FIFTHS], [F(1, 2), F(1, 3)])
    with pytest.raises(InvalidWeights):
        mix([R5_TWO_FIFTHS, R6_HIGH_TWO_FIFTHS], [F(3, 2), F(-1, 2)])
    with pytest.raises(InvalidWeights):
        mix([R5_TWO_FIFTHS], [F(1, 2), F(1, 2)])


def test_permute_swaps_coordinates():
    es = closed_form_extremals(F(2, 5))
    assert permute(es.vertex("r6"), (1, 3, 2)) == es.vertex("r7")
    with pytest.raises(DimensionMismatch):
        permute(UNIFORM, (1, 1, 2))


# ==========================================================
# Properties
# ==========================================================

@seed(1)
@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([F(1, 5), F(1, 4), F(1, 3), F(2, 5), F(9, 20), F(1, 2)]),
    raw=st.lists(st.integers(min_value=0, max_value=20), min_size=9, max_size=9),
)
def test_second_moment_within_bivariate_frechet_bounds(p, raw):
    es = closed_form_extremals(p)
    raw = raw[:len(es)]
    if sum(raw) == 0:
        raw[0] = 1
    f = mix(es.vertices, [F(w, sum(raw)) for w in raw])
    assert margins(f) == (p, p, p)
    law = sum_distribution(f)
    assert law.mean == 3 * p
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert max(2 * p - 1, 0) <= second_moment(f, i, j) <= p
