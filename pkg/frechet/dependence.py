"""
Extremal dependence inside F_3(p): pairwise correlation patterns of the
vertices, (Sigma-)countermonotonicity, convex order of the component sum and
the sub-polytope of Sigma-countermonotone pmfs.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .choices import DependenceClass
from .core import (
    BernoulliPmf, MarginParam, SumPmf, atoms, class_parameter, correlation,
    format_rational, mix, second_moment, sum_distribution,
)
from .exceptions import (
    NegativeMass, NotAMember, NotNormalized, OutOfRange, UnequalMargins, UnsupportedDimension,
)
from .polytope import ExtremalSet, ConvexWeights, closed_form_extremals

logger = logging.getLogger(__name__)

ONE_THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


# -------------------------
# Helpers
# -------------------------
def require_class_member(f: BernoulliPmf, d: Optional[int] = 3) -> MarginParam:
    """The class parameter of ``f``, raising NotAMember when it has none."""
    if d is not None and f.d != d:
        raise UnsupportedDimension(f"Expected a pmf on {{0,1}}^{d}, got d={f.d}.")
    try:
        return class_parameter(f)
    except (UnequalMargins, OutOfRange) as exc:
        raise NotAMember(f"pmf is not in any class F_{f.d}(p): {exc.message}")


# -------------------------
# Correlations
# -------------------------
@dataclass(frozen=True)
class CorrelationProfile:
    pairwise: Tuple[Tuple[Fraction, ...], ...]
    classification: str

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> "CorrelationProfile":
        rows = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        return cls(rows, classify_correlations(rows))

    def pair(self, i: int, j: int) -> Fraction:
        return self.pairwise[i - 1][j - 1]

    @property
    def off_diagonal(self) -> Tuple[Fraction, ...]:
        n = len(self.pairwise)
        return tuple(self.pairwise[i][j] for i, j in combinations(range(n), 2))


def classify_correlations(matrix: Sequence[Sequence[Fraction]]) -> str:
    n = len(matrix)
    values = [matrix[i][j] for i, j in combinations(range(n), 2)]
    if all(v >= 0 for v in values):
        return str(DependenceClass.PPC)
    if all(v <= 0 for v in values):
        return str(DependenceClass.PNC)
    return str(DependenceClass.MIXED)


def correlation_profile(f: BernoulliPmf) -> CorrelationProfile:
    n = f.d
    matrix = [[correlation(f, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    return CorrelationProfile.from_matrix(matrix)


def mean_pairwise_correlation(f: BernoulliPmf) -> Fraction:
    values = correlation_profile(f).off_diagonal
    return sum(values, Fraction(0)) / len(values)


def classify_extremal_correlations(p) -> Dict[str, CorrelationProfile]:
    """Correlation profile of every vertex of F_3(p), keyed by column label."""
    es = closed_form_extremals(p)
    return {label: correlation_profile(f) for label, f, _ in es}


def _negative_kernel_value(p: Fraction) -> Fraction:
    return -p / (1 - p)


def closed_form_correlations(p, label: str) -> CorrelationProfile:
    """
    Correlation matrix of a vertex from its closed form.

    Kernel vertices pair one block at correlation 1 with -p/(1-p) across; the
    positive type-0 vertex r4 is equicorrelated at (1-2p)/(2(1-p)); the
    negative type-0 vertex is equicorrelated; the vertices with sum on {1, 2}
    carry one positive pair.
    """
    q = MarginParam.of(p).p
    low = q <= ONE_THIRD
    minus = _negative_kernel_value(q)
    one = Fraction(1)

    def matrix(r12, r13, r23):
        return [[one, r12, r13], [r12, one, r23], [r13, r23, one]]

    if label == "r1":
        rows = matrix(one, minus, minus)
    elif label == "r2":
        rows = matrix(minus, one, minus)
    elif label == "r3":
        rows = matrix(minus, minus, one)
    elif label == "r4":
        v = (1 - 2 * q) / (2 * (1 - q))
        rows = matrix(v, v, v)
    elif label == "r5":
        rows = matrix(one, one, one)
    elif label == "r6" and low:
        rows = matrix(minus, minus, minus)
    elif label in ("r6", "r7", "r8") and not low:
        positive = (3 * q - 1 - q * q) / (q * (1 - q))
        rows = {
            "r6": matrix(positive, minus, minus),
            "r7": matrix(minus, positive, minus),
            "r8": matrix(minus, minus, positive),
        }[label]
    elif label == "r9" and not low:
        v = (3 * q - 1 - 2 * q * q) / (2 * q * (1 - q))
        rows = matrix(v, v, v)
    else:
        raise KeyError(f"No vertex {label} in F_3({format_rational(q)}).")
    return CorrelationProfile.from_matrix(rows)


def correlation_from_decomposition(es: ExtremalSet, weights: ConvexWeights, i: int, j: int) -> Fraction:
    """sum_k lambda_k rho_ij(r_k); correlations are affine in f once the margins are fixed."""
    return sum(
        (w * correlation(f, i, j) for w, f in zip(weights.weights, es.vertices) if w != 0),
        Fraction(0),
    )


def correlation_bounds(p, i: int, j: int) -> Tuple[Fraction, Fraction]:
    """(min, max) of rho_ij over F_3(p), attained at vertices."""
    values = [correlation(f, i, j) for f in closed_form_extremals(p).vertices]
    return min(values), max(values)


# -------------------------
# Countermonotonicity
# -------------------------
def _validated_joint(joint: Mapping) -> Dict[Tuple[Fraction, Fraction], Fraction]:
    masses = {(Fraction(a), Fraction(b)): Fraction(m) for (a, b), m in joint.items()}
    if any(m < 0 for m in masses.values()):
        raise NegativeMass("Joint pmf has a negative mass.")
    if sum(masses.values(), Fraction(0)) != 1:
        raise NotNormalized("Joint pmf masses do not sum to 1.")
    return masses


def is_countermonotone_pair(joint: Mapping) -> bool:
    """
    True iff every two support points (a, b), (a', b') satisfy (a - a')(b - b') <= 0.

    ``joint`` maps (a, b) to its probability.
    """
    support = [point for point, m in _validated_joint(joint).items() if m > 0]
    return all((a - c) * (b - e) <= 0 for (a, b), (c, e) in combinations(support, 2))


def joint_split(f: BernoulliPmf, coalition: Iterable[int]) -> Dict[Tuple[int, int], Fraction]:
    """Joint pmf of (sum over J, sum over the complement of J)."""
    inside = {k - 1 for k in coalition}
    joint: Dict[Tuple[int, int], Fraction] = {}
    for x, v in f.items():
        if v == 0:
            continue
        a = sum(x[k] for k in inside)
        b = sum(x) - a
        joint[(a, b)] = joint.get((a, b), Fraction(0)) + v
    return joint


def _coalitions(n: int):
    for size in range(n + 1):
        yield from combinations(range(1, n + 1), size)


def is_sigma_countermonotone(f: BernoulliPmf) -> bool:
    require_class_member(f)
    return all(is_countermonotone_pair(joint_split(f, coalition)) for coalition in _coalitions(f.d))


# -------------------------
# Convex order
# -------------------------
def convex_order_leq(a: SumPmf, b: SumPmf) -> bool:
    """a <=_cx b via stop-loss transforms at every integer threshold."""
    if a.mean != b.mean:
        return False
    top = max(a.d, b.d)
    return all(a.stop_loss(m) <= b.stop_loss(m) for m in range(top + 1))


def minimal_sum_law(d: int, p) -> SumPmf:
    """Convex-order minimal law on {0..d} with mean d p: two points around d p."""
    mean = d * MarginParam.of(p).p
    low, high = floor(mean), ceil(mean)
    masses = [Fraction(0)] * (d + 1)
    if low == high:
        masses[low] = Fraction(1)
    else:
        masses[high] = mean - low
        masses[low] = 1 - masses[high]
    return SumPmf(d, tuple(masses))


def is_sigma_cx_smallest(f: BernoulliPmf) -> bool:
    param = require_class_member(f)
    return sum_distribution(f) == minimal_sum_law(f.d, param)


def lower_frechet_bound(d: int, p) -> Optional[BernoulliPmf]:
    """
    Masses of W(x) = max(sum_k F(x_k) - (d - 1), 0), or None when W is not a cdf.
    """
    q = MarginParam.of(p).p

    def w(y):
        total = sum(((1 - q) if bit == 0 else Fraction(1)) for bit in y) - (d - 1)
        return max(total, Fraction(0))

    values = []
    for x in atoms(d):
        ones = [k for k in range(d) if x[k] == 1]
        mass = Fraction(0)
        for size in range(len(ones) + 1):
            for lowered in combinations(ones, size):
                y = tuple(0 if k in lowered else x[k] for k in range(d))
                mass += (-1) ** size * w(y)
        values.append(mass)
    if any(v < 0 for v in values):
        return None
    return BernoulliPmf(d, tuple(values))


# -------------------------
# Sigma-countermonotone polytope
# -------------------------
@dataclass(frozen=True)
class SigmaCmPolytope:
    param: MarginParam
    generators: Tuple[BernoulliPmf, ...]
    labels: Tuple[str, ...]

    @property
    def p(self) -> Fraction:
        return self.param.p

    @property
    def is_joint_mix(self) -> bool:
        return self.param.p == ONE_THIRD

    def member(self, weights: Sequence) -> BernoulliPmf:
        return mix(self.generators, weights)


def sigma_cm_polytope(p) -> SigmaCmPolytope:
    """
    Generators of the Sigma-countermonotone pmfs of F_3(p).

    One generator for p <= 1/3 (a joint mix at p = 1/3), the three vertices
    with sum supported on {1, 2} for 1/3 < p < 1/2, and the same three, which
    coincide with r1, r2, r3, at p = 1/2.
    """
    param = MarginParam.of(p)
    es = closed_form_extremals(param)
    if param.p <= ONE_THIRD:
        labels = ("r6",)
    elif param.p < HALF:
        labels = ("r6", "r7", "r8")
    else:
        labels = ("r1", "r2", "r3")
    generators = tuple(es.vertex(label) for label in labels)
    logger.debug("Sigma-cm polytope at p=%s: generators %s", param, ", ".join(labels))
    return SigmaCmPolytope(param, generators, labels)


def mu2_plus(f: BernoulliPmf) -> Fraction:
    """Sum of E[X_i X_j] over unordered pairs i < j."""
    return sum(
        (second_moment(f, i, j) for i, j in combinations(range(1, f.d + 1), 2)),
        Fraction(0),
    )


def exchangeable_member(p) -> BernoulliPmf:
    param = MarginParam.of(p)
    if param.p <= ONE_THIRD:
        raise OutOfRange(
            f"The exchangeable Sigma-countermonotone member needs p > 1/3, got {param}."
        )
    polytope = sigma_cm_polytope(param)
    third = Fraction(1, 3)
    return polytope.member((third, third, third))


def exchangeable_correlation(p) -> Fraction:
    """Equicorrelation (3p - 1 - 3p^2) / (3p(1 - p)) of the exchangeable member."""
    q = MarginParam.of(p).p
    return (3 * q - 1 - 3 * q * q) / (3 * q * (1 - q))
