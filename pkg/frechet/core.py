"""
Exact pmf representation for multivariate Bernoulli Frechet classes.

Atoms of {0,1}^d are indexed in reverse-lexicographic order: the atom x sits
at index x1 + 2*x2 + ... + 2^(d-1)*xd, so for d=3 the order is
000, 100, 010, 110, 001, 101, 011, 111.

All probabilities are ``fractions.Fraction``; nothing in this module ever
touches floating point.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from .exceptions import (
    DegenerateMargin, DimensionMismatch, InvalidWeights, MalformedRational,
    NegativeMass, NotNormalized, OutOfRange, UnequalMargins, UnsupportedDimension,
)

logger = logging.getLogger(__name__)

Rational = Fraction
Atom = Tuple[int, ...]

SUPPORTED_DIMENSIONS = (2, 3, 4)
HALF = Fraction(1, 2)

_CANONICAL_RATIONAL = re.compile(r"^(-?)(0|[1-9][0-9]*)/([1-9][0-9]*)$")


# -------------------------
# Rationals
# -------------------------
def parse_rational(text: str) -> Fraction:
    """
    Parse a canonical "num/den" string.

    Only lowest-terms forms with a positive denominator are accepted, zero is
    written "0/1", and "-0/1" is rejected.
    """
    if not isinstance(text, str):
        raise MalformedRational(f"Expected a 'num/den' string, got {text!r}.")
    match = _CANONICAL_RATIONAL.fullmatch(text)
    if not match:
        raise MalformedRational(f"'{text}' is not a canonical 'num/den' rational.")
    sign, num, den = match.groups()
    num, den = int(num), int(den)
    if num == 0 and (sign or den != 1):
        raise MalformedRational(f"Zero must be written '0/1', got '{text}'.")
    value = Fraction(num, den)
    if value.numerator != num or value.denominator != den:
        raise MalformedRational(f"'{text}' is not in lowest terms.")
    return -value if sign else value


def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# -------------------------
# Margin parameter
# -------------------------
@dataclass(frozen=True)
class MarginParam:
    """Common Bernoulli margin p = s/t of a Frechet class, restricted to (0, 1/2]."""
    s: int
    t: int

    def __post_init__(self):
        if self.t <= 0:
            raise OutOfRange(f"Denominator t must be positive, got {self.t}.")
        if self.s <= 0:
            raise OutOfRange(f"p = {self.s}/{self.t} must be strictly positive.")
        if Fraction(self.s, self.t) > HALF:
            raise OutOfRange(
                f"p = {format_rational(Fraction(self.s, self.t))} exceeds 1/2. "
                f"Classes with p > 1/2 are mirror images of F_d(1 - p) under x -> 1 - x; "
                f"use p = {format_rational(1 - Fraction(self.s, self.t))} instead."
            )

    @property
    def p(self) -> Fraction:
        return Fraction(self.s, self.t)

    @property
    def c(self) -> Fraction:
        return Fraction(2 * self.s - self.t, self.s)

    @classmethod
    def of(cls, value) -> "MarginParam":
        if isinstance(value, MarginParam):
            return value
        if isinstance(value, str):
            value = parse_rational(value)
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    def __str__(self):
        return format_rational(self.p)


# -------------------------
# Atoms
# -------------------------
def check_dimension(d: int):
    if d not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimension(
            f"Dimension d={d} is not supported (expected one of {SUPPORTED_DIMENSIONS})."
        )


@lru_cache(maxsize=None)
def atoms(d: int) -> Tuple[Atom, ...]:
    return tuple(tuple((index >> k) & 1 for k in range(d)) for index in range(2 ** d))


def atom_index(x: Sequence[int]) -> int:
    return sum(bit << k for k, bit in enumerate(x))


def atom_label(x: Sequence[int]) -> str:
    return "".join(str(bit) for bit in x)


# -------------------------
# Distributions
# -------------------------
@dataclass(frozen=True)
class BernoulliPmf:
    """A pmf on {0,1}^d stored as 2^d exact masses in reverse-lex order."""
    d: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        check_dimension(self.d)
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != 2 ** self.d:
            raise DimensionMismatch(
                f"A pmf on {{0,1}}^{self.d} needs {2 ** self.d} values, got {len(values)}."
            )
        negative = [atom_label(x) for x, v in zip(atoms(self.d), values) if v < 0]
        if negative:
            raise NegativeMass(f"Negative mass at atoms {', '.join(negative)}.")
        total = sum(values, Fraction(0))
        if total != 1:
            raise NotNormalized(f"Masses sum to {format_rational(total)}, not 1.")
        object.__setattr__(self, "values", values)

    def __getitem__(self, x: Sequence[int]) -> Fraction:
        return self.values[atom_index(x)]

    def items(self):
        return zip(atoms(self.d), self.values)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, v in enumerate(self.values) if v > 0)


@dataclass(frozen=True)
class SumPmf:
    """Law of S = X1 + ... + Xd on {0, ..., d}."""
    d: int
    masses: Tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(Fraction(m) for m in self.masses)
        if len(masses) != self.d + 1:
            raise DimensionMismatch(
                f"A sum law for d={self.d} needs {self.d + 1} masses, got {len(masses)}."
            )
        if any(m < 0 for m in masses):
            raise NegativeMass("Sum law has a negative mass.")
        if sum(masses, Fraction(0)) != 1:
            raise NotNormalized("Sum law masses do not sum to 1.")
        object.__setattr__(self, "masses", masses)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, m in enumerate(self.masses) if m > 0)

    @property
    def mean(self) -> Fraction:
        return sum((k * m for k, m in enumerate(self.masses)), Fraction(0))

    @property
    def variance(self) -> Fraction:
        second = sum((k * k * m for k, m in enumerate(self.masses)), Fraction(0))
        return second - self.mean ** 2

    def stop_loss(self, threshold: int) -> Fraction:
        return sum((max(k - threshold, 0) * m for k, m in enumerate(self.masses)), Fraction(0))


def make_pmf(d: int, values: Iterable) -> BernoulliPmf:
    return BernoulliPmf(d, tuple(values))


def point_mass(d: int, x: Sequence[int]) -> BernoulliPmf:
    values = [Fraction(0)] * (2 ** d)
    values[atom_index(x)] = Fraction(1)
    return BernoulliPmf(d, tuple(values))


# -------------------------
# Moments
# -------------------------
def _check_coordinate(f: BernoulliPmf, i: int):
    if not 1 <= i <= f.d:
        raise DimensionMismatch(f"Coordinate {i} is outside 1..{f.d}.")


def margin(f: BernoulliPmf, i: int) -> Fraction:
    _check_coordinate(f, i)
    return sum((v for x, v in f.items() if x[i - 1] == 1), Fraction(0))


def margins(f: BernoulliPmf) -> Tuple[Fraction, ...]:
    return tuple(margin(f, i) for i in range(1, f.d + 1))


def second_moment(f: BernoulliPmf, i: int, j: int) -> Fraction:
    """E[X_i X_j]."""
    _check_coordinate(f, i)
    _check_coordinate(f, j)
    if i == j:
        return margin(f, i)
    return sum((v for x, v in f.items() if x[i - 1] == 1 and x[j - 1] == 1), Fraction(0))


def covariance(f: BernoulliPmf, i: int, j: int) -> Fraction:
    return second_moment(f, i, j) - margin(f, i) * margin(f, j)


def correlation(f: BernoulliPmf, i: int, j: int) -> Fraction:
    """
    Pearson correlation of X_i and X_j for equal margins p in (0, 1).

    With equal margins the standard deviations coincide, so the value
    (mu_ij - p^2) / (p (1 - p)) stays rational.
    """
    p_i, p_j = margin(f, i), margin(f, j)
    if p_i != p_j:
        raise UnequalMargins(
            f"Correlation needs equal margins, got {format_rational(p_i)} and {format_rational(p_j)}."
        )
    if p_i in (0, 1):
        raise DegenerateMargin(f"Margin {format_rational(p_i)} has zero variance.")
    if i == j:
        return Fraction(1)
    return (second_moment(f, i, j) - p_i * p_i) / (p_i * (1 - p_i))


def class_parameter(f: BernoulliPmf) -> MarginParam:
    """The common margin of ``f`` as a class parameter."""
    values = margins(f)
    if len(set(values)) != 1:
        raise UnequalMargins(
            "Margins differ: " + ", ".join(format_rational(v) for v in values) + "."
        )
    return MarginParam.of(values[0])


# -------------------------
# Sum distribution
# -------------------------
def sum_distribution(f: BernoulliPmf) -> SumPmf:
    masses = [Fraction(0)] * (f.d + 1)
    for x, v in f.items():
        masses[sum(x)] += v
    return SumPmf(f.d, tuple(masses))


def variance_of_sum(f: BernoulliPmf) -> Fraction:
    return sum_distribution(f).variance


def sum_support(f: BernoulliPmf) -> frozenset:
    return frozenset(sum_distribution(f).support)


# -------------------------
# Transformations
# -------------------------
def check_weights(weights: Sequence, expected: int) -> List[Fraction]:
    weights = [Fraction(w) for w in weights]
    if len(weights) != expected:
        raise InvalidWeights(f"Expected {expected} weights, got {len(weights)}.")
    if any(w < 0 for w in weights):
        raise InvalidWeights("Convex weights must be nonnegative.")
    if sum(weights, Fraction(0)) != 1:
        raise InvalidWeights("Convex weights must sum to 1.")
    return weights


def mix(pmfs: Sequence[BernoulliPmf], weights: Sequence) -> BernoulliPmf:
    """Exact convex combination sum_k w_k f_k."""
    if not pmfs:
        raise InvalidWeights("Cannot mix an empty list of pmfs.")
    weights = check_weights(weights, len(pmfs))
    d = pmfs[0].d
    if any(f.d != d for f in pmfs):
        raise DimensionMismatch("All mixed pmfs must share the same dimension.")
    values = [Fraction(0)] * (2 ** d)
    for f, w in zip(pmfs, weights):
        if w == 0:
            continue
        for k, v in enumerate(f.values):
            values[k] += w * v
    return BernoulliPmf(d, tuple(values))


def permute(f: BernoulliPmf, sigma: Sequence[int]) -> BernoulliPmf:
    """Law of (X_sigma(1), ..., X_sigma(d)); ``sigma`` is a 1-based permutation."""
    if sorted(sigma) != list(range(1, f.d + 1)):
        raise DimensionMismatch(f"{tuple(sigma)} is not a permutation of 1..{f.d}.")
    values = [Fraction(0)] * (2 ** f.d)
    for x, v in f.items():
        y = tuple(x[sigma[k] - 1] for k in range(f.d))
        values[atom_index(y)] += v
    return BernoulliPmf(f.d, tuple(values))
