"""
The Frechet class F_d(p) as a convex polytope.

A pmf f on {0,1}^d belongs to F_d(p) iff f >= 0, sum(f) = 1 and H f = 0,
where row k of H holds 1 - p on atoms with x_k = 1 and -p elsewhere.

Two independent routes to the vertex set are provided: the closed-form
columns for d = 3 and a brute-force enumeration of basic feasible solutions
for any supported d.
"""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Tuple

from .choices import Provenance
from .core import (
    BernoulliPmf, MarginParam, atoms, check_dimension, check_weights, mix,
)
from .exceptions import DimensionMismatch, NotAMember, UnsupportedDimension
from .linalg import columns, feasible_point, has_full_column_rank, mat_vec, rank, solve_unique

logger = logging.getLogger(__name__)

ONE_THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


# -------------------------
# Types
# -------------------------
@dataclass(frozen=True)
class ConstraintSystem:
    d: int
    param: MarginParam
    h: Tuple[Tuple[Fraction, ...], ...]

    @property
    def p(self) -> Fraction:
        return self.param.p

    @property
    def stacked(self) -> List[List[Fraction]]:
        """H with the all-ones normalization row appended."""
        return [list(row) for row in self.h] + [[Fraction(1)] * (2 ** self.d)]

    @property
    def rhs(self) -> List[Fraction]:
        return [Fraction(0)] * self.d + [Fraction(1)]


@dataclass(frozen=True)
class ExtremalSet:
    d: int
    param: MarginParam
    vertices: Tuple[BernoulliPmf, ...]
    tags: Tuple[str, ...]
    labels: Tuple[str, ...]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(zip(self.labels, self.vertices, self.tags))

    @property
    def p(self) -> Fraction:
        return self.param.p

    def vertex(self, label: str) -> BernoulliPmf:
        try:
            return self.vertices[self.labels.index(label)]
        except ValueError:
            raise KeyError(label)

    def tag_of(self, label: str) -> str:
        return self.tags[self.labels.index(label)]

    def value_set(self) -> frozenset:
        return frozenset(v.values for v in self.vertices)


@dataclass(frozen=True)
class ConvexWeights:
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(check_weights(self.weights, len(self.weights))))

    def remix(self, es: ExtremalSet) -> BernoulliPmf:
        return mix(es.vertices, self.weights)


# -------------------------
# Constraints
# -------------------------
def build_constraints(d: int, p) -> ConstraintSystem:
    check_dimension(d)
    param = MarginParam.of(p)
    q = param.p
    h = tuple(
        tuple((1 - q) if x[k] == 1 else -q for x in atoms(d))
        for k in range(d)
    )
    return ConstraintSystem(d, param, h)


def is_member(cs: ConstraintSystem, f: BernoulliPmf) -> bool:
    if f.d != cs.d:
        raise DimensionMismatch(f"pmf has d={f.d}, constraint system has d={cs.d}.")
    return all(v == 0 for v in mat_vec(cs.h, f.values))


def require_member(cs: ConstraintSystem, f: BernoulliPmf):
    if not is_member(cs, f):
        raise NotAMember(f"pmf is not a member of F_{cs.d}({cs.param}).")


def is_vertex(cs: ConstraintSystem, f: BernoulliPmf) -> bool:
    """True iff f is the only solution of the equality system on its own support."""
    require_member(cs, f)
    return has_full_column_rank(columns(cs.stacked, f.support))


# -------------------------
# Closed-form vertices (d = 3)
# -------------------------
# atom indices: 000=0, 100=1, 010=2, 110=3, 001=4, 101=5, 011=6, 111=7
def _column(entries: Dict[int, Fraction]) -> BernoulliPmf:
    values = [Fraction(0)] * 8
    for index, value in entries.items():
        values[index] = value
    return BernoulliPmf(3, tuple(values))


def _shared_columns(p: Fraction) -> List[Tuple[str, BernoulliPmf, str]]:
    return [
        ("r1", _column({0: 1 - 2 * p, 3: p, 4: p}), Provenance.KERNEL),
        ("r2", _column({0: 1 - 2 * p, 2: p, 5: p}), Provenance.KERNEL),
        ("r3", _column({0: 1 - 2 * p, 1: p, 6: p}), Provenance.KERNEL),
        ("r4", _column({0: 1 - 3 * p / 2, 3: p / 2, 5: p / 2, 6: p / 2}), Provenance.TYPE0_PLUS),
        ("r5", _column({0: 1 - p, 7: p}), Provenance.KERNEL),
    ]


def _low_margin_columns(p: Fraction) -> List[Tuple[str, BernoulliPmf, str]]:
    """Columns for p <= 1/3."""
    return _shared_columns(p) + [
        ("r6", _column({0: 1 - 3 * p, 1: p, 2: p, 4: p}), Provenance.TYPE0_MINUS),
    ]


def _high_margin_columns(p: Fraction) -> List[Tuple[str, BernoulliPmf, str]]:
    """Columns for 1/3 < p <= 1/2."""
    return _shared_columns(p) + [
        ("r6", _column({1: 1 - 2 * p, 2: 1 - 2 * p, 3: 3 * p - 1, 4: p}), Provenance.SUPPORT_X1X2),
        ("r7", _column({1: 1 - 2 * p, 2: p, 4: 1 - 2 * p, 5: 3 * p - 1}), Provenance.SUPPORT_X1X2),
        ("r8", _column({1: p, 2: 1 - 2 * p, 4: 1 - 2 * p, 6: 3 * p - 1}), Provenance.SUPPORT_X1X2),
        ("r9", _column({1: (1 - p) / 2, 2: (1 - p) / 2, 4: (1 - p) / 2, 7: (3 * p - 1) / 2}), Provenance.TYPE0_MINUS),
    ]


def _deduplicated(d: int, param: MarginParam, rows) -> ExtremalSet:
    seen = set()
    kept = []
    for label, f, tag in rows:
        if f.values in seen:
            continue
        seen.add(f.values)
        kept.append((label, f, str(tag)))
    return ExtremalSet(
        d=d,
        param=param,
        vertices=tuple(f for _, f, _ in kept),
        tags=tuple(tag for _, _, tag in kept),
        labels=tuple(label for label, _, _ in kept),
    )


def closed_form_extremals(p) -> ExtremalSet:
    """
    Vertices of F_3(p) from the closed-form tables.

    Six columns for p <= 1/3, nine for 1/3 < p < 1/2. At p = 1/2 the
    columns r6, r7, r8 coincide with r1, r2, r3 and are merged, keeping the
    first label.
    """
    param = MarginParam.of(p)
    q = param.p
    rows = _low_margin_columns(q) if q <= ONE_THIRD else _high_margin_columns(q)
    es = _deduplicated(3, param, rows)
    logger.debug("Closed-form F_3(%s): %d vertices", param, len(es))
    return es


def expected_vertex_count(p) -> int:
    q = MarginParam.of(p).p
    return 6 if q <= ONE_THIRD or q == HALF else 9


# -------------------------
# Oracle
# -------------------------
def _canonical_order(values: Tuple[Fraction, ...]):
    # heavier mass on low atoms first, so the comonotone-like pmfs lead
    return tuple(-v for v in values)


def enumerate_vertices_oracle(cs: ConstraintSystem) -> ExtremalSet:
    """
    All vertices of F_d(p) by brute force over supports.

    A vertex is a basic feasible solution: its support columns in the
    stacked system [H; 1] are linearly independent, so the support has at
    most rank([H; 1]) atoms. Every such support is solved exactly and the
    unique strictly positive solutions are kept.
    """
    if cs.d not in (2, 3, 4):
        raise UnsupportedDimension(f"Oracle supports d in 2..4, got d={cs.d}.")
    a = cs.stacked
    b = cs.rhs
    n = 2 ** cs.d
    max_support = rank(a)
    found = set()
    tried = 0
    for size in range(1, max_support + 1):
        for support in combinations(range(n), size):
            tried += 1
            solution = solve_unique(columns(a, support), b)
            if solution is None or any(v <= 0 for v in solution):
                continue
            values = [Fraction(0)] * n
            for index, value in zip(support, solution):
                values[index] = value
            found.add(tuple(values))
    logger.debug("Oracle F_%d(%s): %d supports tried", cs.d, cs.param, tried)

    ordered = sorted(found, key=_canonical_order)
    vertices = tuple(BernoulliPmf(cs.d, values) for values in ordered)
    logger.info("Oracle F_%d(%s): %d vertices", cs.d, cs.param, len(vertices))
    return ExtremalSet(
        d=cs.d,
        param=cs.param,
        vertices=vertices,
        tags=tuple(str(Provenance.ORACLE) for _ in vertices),
        labels=tuple(f"v{k}" for k in range(1, len(vertices) + 1)),
    )


def annotate_oracle(es: ExtremalSet) -> ExtremalSet:
    """Re-tag oracle vertices that are the upper Frechet pmf or kernel-basis elements."""
    from .algebra import kernel_basis

    basis = kernel_basis(es.d, es.param)
    upper = basis[0].values
    kernel = {f.values for f in basis[1:]}
    tags = []
    for f, tag in zip(es.vertices, es.tags):
        if f.values == upper:
            tags.append(str(Provenance.UPPER_FRECHET))
        elif f.values in kernel:
            tags.append(str(Provenance.KERNEL))
        else:
            tags.append(tag)
    return ExtremalSet(es.d, es.param, es.vertices, tuple(tags), es.labels)


# -------------------------
# Decomposition
# -------------------------
def decompose(es: ExtremalSet, f: BernoulliPmf) -> ConvexWeights:
    """
    Convex weights lambda with sum_k lambda_k r_k = f.

    Weights are not unique in general; the basic feasible solution reached
    by phase-one simplex under Bland's rule is returned.
    """
    require_member(build_constraints(es.d, es.param), f)
    n = 2 ** es.d
    a = [[v.values[row] for v in es.vertices] for row in range(n)]
    a.append([Fraction(1)] * len(es.vertices))
    b = list(f.values) + [Fraction(1)]
    weights = feasible_point(a, b)
    if weights is None:
        raise NotAMember(f"pmf is not in the convex hull of the {len(es)} given vertices.")
    return ConvexWeights(tuple(weights))


# -------------------------
# Sweep
# -------------------------
@dataclass(frozen=True)
class SweepPoint:
    s: int
    t: int
    d: int
    vertex_count: int
    elapsed_ms: int
    sane: bool

    @property
    def p(self) -> Fraction:
        return Fraction(self.s, self.t)


def sweep_point(s: int, t: int, d: int = 4) -> SweepPoint:
    """
    Oracle vertex count at p = s/t with a sanity check of every vertex.

    Module-level and free of Django state so process-pool workers can run it.
    """
    started = time.perf_counter()
    cs = build_constraints(d, MarginParam(s, t))
    es = enumerate_vertices_oracle(cs)
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    sane = all(
        is_member(cs, f) and len(f.support) <= d + 1 and is_vertex(cs, f)
        for f in es.vertices
    )
    if not sane:
        logger.error("Sweep point %s/%s failed the vertex sanity check", s, t)
    return SweepPoint(s=s, t=t, d=d, vertex_count=len(es), elapsed_ms=elapsed_ms, sane=sane)


def same_vertices(a: ExtremalSet, b: ExtremalSet) -> bool:
    return a.value_set() == b.value_set()
