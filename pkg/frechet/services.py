import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import repeat
from typing import Dict, List, Optional, Sequence, Tuple

from django.conf import settings
from django.core.cache import cache
from django.db import transaction

from .algebra import apply_map, express_in_fundamentals, is_in_kernel, type0_sign
from .choices import Provenance
from .core import (
    BernoulliPmf, MarginParam, class_parameter, format_rational, sum_distribution, sum_support,
    variance_of_sum,
)
from .dependence import (
    correlation_profile, exchangeable_correlation, exchangeable_member, is_sigma_countermonotone,
    is_sigma_cx_smallest, lower_frechet_bound, mean_pairwise_correlation, mu2_plus, sigma_cm_polytope,
)
from .games import classify_modularity, shapley_covariance, variance_game
from .models import SweepRecord
from .polytope import (
    ExtremalSet, SweepPoint, annotate_oracle, build_constraints, closed_form_extremals, decompose,
    enumerate_vertices_oracle, expected_vertex_count, is_member, is_vertex, sweep_point,
)
from .serializers import (
    AllocationSerializer, CorrelationProfileSerializer, ExtremalSetSerializer, PmfSerializer,
    SweepRecordSerializer,
)

logger = logging.getLogger(__name__)

# -------------------------
# Constants
# -------------------------
EXTREMAL_CACHE_TTL = getattr(settings, "EXTREMAL_CACHE_TTL_SECONDS", 3600)
VERIFY_MAX_DENOMINATOR = getattr(settings, "VERIFY_MAX_DENOMINATOR", 12)
SWEEP_DENOMINATOR = getattr(settings, "SWEEP_DENOMINATOR", 100)
BP_THREADS = getattr(settings, "BP_THREADS", 0)

SWEEP_CSV_COLUMNS = ("s", "p", "nr", "elapsed_ms")
ALLOCATION_CSV_COLUMNS = ("pmf", "player", "phi", "grand_value", "modularity")


# -------------------------
# Extremal Service
# -------------------------
@dataclass
class VerificationResult:
    p: Fraction
    expected_count: int
    closed_count: int
    oracle_count: int
    failures: List[str] = field(default_factory=list)
    missing: List[Tuple[Fraction, ...]] = field(default_factory=list)
    extra: List[Tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class ExtremalService:
    """
    Retrieval and cross-checking of vertex sets.

    d = 3 uses the closed-form tables, every other dimension the oracle.
    Both are cached under ``extremals:<d>:<p>``.
    """

    @staticmethod
    def cache_key(d: int, p) -> str:
        return f"extremals:{d}:{format_rational(MarginParam.of(p).p)}"

    @classmethod
    def get_extremals(cls, p, d: int = 3) -> ExtremalSet:
        param = MarginParam.of(p)
        key = cls.cache_key(d, param)
        cached = cache.get(key)
        if cached is not None:
            return cached
        if d == 3:
            es = closed_form_extremals(param)
        else:
            es = annotate_oracle(enumerate_vertices_oracle(build_constraints(d, param)))
        cache.set(key, es, EXTREMAL_CACHE_TTL)
        logger.info("Computed %d vertices of F_%d(%s)", len(es), d, param)
        return es

    @staticmethod
    def default_grid(max_denominator: int = VERIFY_MAX_DENOMINATOR) -> List[Fraction]:
        """Every p = s/t in (0, 1/2] with 2 <= t <= max_denominator, ascending."""
        grid = {
            Fraction(s, t)
            for t in range(2, max_denominator + 1)
            for s in range(1, t // 2 + 1)
        }
        return sorted(grid)

    # -------------------------
    # Verification
    # -------------------------
    @staticmethod
    def _check_tags(es: ExtremalSet) -> List[str]:
        failures = []
        for label, f, tag in es:
            gamma = express_in_fundamentals(apply_map(es.param, f))
            if gamma is None:
                failures.append(f"{label}: image is not a multiple of F+")
                continue
            if tag == Provenance.KERNEL and not is_in_kernel(es.param, f):
                failures.append(f"{label}: tagged kernel but maps to {format_rational(gamma)}*F+")
            elif tag == Provenance.TYPE0_PLUS and type0_sign(es.param, f) != 1:
                failures.append(f"{label}: tagged type0-plus but gamma = {format_rational(gamma)}")
            elif tag == Provenance.TYPE0_MINUS and type0_sign(es.param, f) != -1:
                failures.append(f"{label}: tagged type0-minus but gamma = {format_rational(gamma)}")
            elif tag == Provenance.SUPPORT_X1X2 and sum_support(f) != frozenset({1, 2}):
                failures.append(f"{label}: tagged supportX1X2 but sum support is {sorted(sum_support(f))}")
        return failures

    @classmethod
    def verify_parameter(cls, p, perturb: Optional[Tuple[str, int, Fraction]] = None) -> VerificationResult:
        """
        Compare the closed-form vertex set with the oracle at p.

        ``perturb`` = (label, index, delta) adds delta to one closed-form entry
        before the comparison.
        """
        param = MarginParam.of(p)
        closed = closed_form_extremals(param)
        oracle = enumerate_vertices_oracle(build_constraints(3, param))

        closed_values = {label: list(f.values) for label, f, _ in closed}
        if perturb is not None:
            label, index, delta = perturb
            if label not in closed_values:
                raise KeyError(f"No column {label} at p={param}.")
            closed_values[label][index] += Fraction(delta)
        closed_set = {tuple(v) for v in closed_values.values()}
        oracle_set = oracle.value_set()

        result = VerificationResult(
            p=param.p,
            expected_count=expected_vertex_count(param),
            closed_count=len(closed_set),
            oracle_count=len(oracle_set),
        )
        result.missing = sorted(oracle_set - closed_set)
        result.extra = sorted(closed_set - oracle_set)
        if result.missing or result.extra:
            result.failures.append(
                f"vertex sets differ: {len(result.missing)} missing, {len(result.extra)} extra"
            )
        if result.oracle_count != result.expected_count:
            result.failures.append(
                f"oracle found {result.oracle_count} vertices, expected {result.expected_count}"
            )
        if result.closed_count != result.expected_count:
            result.failures.append(
                f"closed form has {result.closed_count} vertices, expected {result.expected_count}"
            )
        result.failures.extend(cls._check_tags(closed))

        if result.passed:
            logger.info("Verified F_3(%s): %d vertices", param, result.oracle_count)
        else:
            logger.warning("Verification failed at p=%s: %s", param, "; ".join(result.failures))
        return result

    @classmethod
    def verify_grid(cls, grid: Sequence, perturb=None) -> List[VerificationResult]:
        return [cls.verify_parameter(p, perturb=perturb) for p in grid]


# -------------------------
# Report Service
# -------------------------
class ReportService:
    """Everything known about a single pmf, as a JSON-ready dict."""

    @staticmethod
    def load_document(data: Dict) -> List[Tuple[str, BernoulliPmf]]:
        """
        Parse a pmf document or an extremal-set document.

        Raises rest_framework ValidationError on malformed input.
        """
        if isinstance(data, dict) and "vertices" in data:
            serializer = ExtremalSetSerializer(data=data)
            serializer.is_valid(raise_exception=True)
            labels = serializer.validated_data["labels"]
            return [(label, v["pmf"]) for label, v in zip(labels, serializer.validated_data["vertices"])]
        serializer = PmfSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return [("f", serializer.validated_data["pmf"])]

    @classmethod
    def build_report(cls, f: BernoulliPmf, label: str = "f") -> Dict:
        """
        Raises UnequalMargins when f lies in no Frechet class and OutOfRange
        when its common margin exceeds 1/2.
        """
        param = class_parameter(f)
        cs = build_constraints(f.d, param)
        law = sum_distribution(f)
        report = {
            "label": label,
            "d": f.d,
            "p": format_rational(param.p),
            "values": [format_rational(v) for v in f.values],
            "member": is_member(cs, f),
            "is_vertex": is_vertex(cs, f),
            "correlation": CorrelationProfileSerializer(correlation_profile(f)).data,
            "mean_correlation": format_rational(mean_pairwise_correlation(f)),
            "sum_law": [format_rational(m) for m in law.masses],
            "variance_of_sum": format_rational(variance_of_sum(f)),
            "mu2_plus": format_rational(mu2_plus(f)),
        }
        if f.d == 3:
            es = ExtremalService.get_extremals(param, d=3)
            weights = decompose(es, f)
            report["decomposition"] = {
                vertex_label: format_rational(w)
                for vertex_label, w in zip(es.labels, weights.weights) if w != 0
            }
            report["sigma_countermonotone"] = is_sigma_countermonotone(f)
            report["sigma_cx_smallest"] = is_sigma_cx_smallest(f)
            report["shapley"] = AllocationService.allocation_data(f)
        return report


# -------------------------
# Allocation Service
# -------------------------
class AllocationService:
    """Shapley allocation of Var(S) as serialized data, and its CSV form."""

    @staticmethod
    def allocation_data(f: BernoulliPmf) -> Dict:
        game = variance_game(f)
        allocation = shapley_covariance(f)
        return AllocationSerializer({
            "phis": list(allocation.phis),
            "grand_value": game.grand_value,
            "modularity": classify_modularity(game),
        }).data

    @staticmethod
    def write_csv(allocations: Sequence[Tuple[str, Dict]], stream):
        """One row per (pmf, player) from ``(label, allocation_data)`` pairs."""
        writer = csv.DictWriter(stream, fieldnames=ALLOCATION_CSV_COLUMNS)
        writer.writeheader()
        for label, data in allocations:
            for player, phi in enumerate(data["phis"], start=1):
                writer.writerow({
                    "pmf": label,
                    "player": player,
                    "phi": phi,
                    "grand_value": data["grand_value"],
                    "modularity": data["modularity"],
                })


# -------------------------
# Sigma-countermonotone Service
# -------------------------
class SigmaCmService:

    @staticmethod
    def allocations(p) -> List[Tuple[str, Dict]]:
        """Allocation data of every generator, then of the exchangeable member when p > 1/3."""
        param = MarginParam.of(p)
        polytope = sigma_cm_polytope(param)
        rows = [
            (label, AllocationService.allocation_data(g))
            for label, g in zip(polytope.labels, polytope.generators)
        ]
        if param.p > Fraction(1, 3):
            rows.append(("fe", AllocationService.allocation_data(exchangeable_member(param))))
        return rows

    @staticmethod
    def build(p) -> Dict:
        param = MarginParam.of(p)
        polytope = sigma_cm_polytope(param)
        first = polytope.generators[0]
        report = {
            "p": format_rational(param.p),
            "joint_mix": polytope.is_joint_mix,
            "generators": [
                {"label": label, "values": [format_rational(v) for v in g.values]}
                for label, g in zip(polytope.labels, polytope.generators)
            ],
            "mu2_plus": format_rational(mu2_plus(first)),
            "variance_of_sum": format_rational(variance_of_sum(first)),
            "sum_law": [format_rational(m) for m in sum_distribution(first).masses],
            "shapley": {
                label: [format_rational(phi) for phi in shapley_covariance(g).phis]
                for label, g in zip(polytope.labels, polytope.generators)
            },
            "exchangeable": None,
            "lower_frechet_bound": None,
        }
        if param.p > Fraction(1, 3):
            fe = exchangeable_member(param)
            report["exchangeable"] = {
                "values": [format_rational(v) for v in fe.values],
                "equi_correlation": format_rational(exchangeable_correlation(param)),
                "shapley": [format_rational(phi) for phi in shapley_covariance(fe).phis],
                "modularity": classify_modularity(variance_game(fe)),
            }
        elif param.p < Fraction(1, 3):
            bound = lower_frechet_bound(3, param)
            report["lower_frechet_bound"] = [format_rational(v) for v in bound.values]
        return report


# -------------------------
# Sweep Service
# -------------------------
class SweepService:
    """Oracle vertex counts of F_d(s/t) over a range of s, optionally persisted."""

    @staticmethod
    def worker_count(workers: Optional[int] = None) -> int:
        return workers or BP_THREADS or os.cpu_count() or 1

    @classmethod
    def run(cls, s_values: Sequence[int], t: int = SWEEP_DENOMINATOR, d: int = 4,
            workers: Optional[int] = None) -> List[SweepPoint]:
        workers = cls.worker_count(workers)
        s_values = sorted(s_values)
        logger.info("Sweeping F_%d(s/%d) for %d values of s on %d workers", d, t, len(s_values), workers)
        if workers == 1:
            points = [sweep_point(s, t, d) for s in s_values]
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                points = list(executor.map(sweep_point, s_values, repeat(t), repeat(d)))
        for point in points:
            logger.info("s=%d p=%s: %d vertices in %d ms", point.s, format_rational(point.p),
                        point.vertex_count, point.elapsed_ms)
        return sorted(points, key=lambda point: point.s)

    @staticmethod
    def write_csv(points: Sequence[SweepPoint], stream):
        writer = csv.DictWriter(stream, fieldnames=SWEEP_CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for point in points:
            writer.writerow(SweepRecordSerializer(point).data)

    @staticmethod
    def record(points: Sequence[SweepPoint]) -> List[SweepPoint]:
        """
        Upsert sweep rows. Points whose stored count differs are not
        overwritten and are returned as conflicts.
        """
        conflicts = []
        with transaction.atomic():
            for point in points:
                existing = SweepRecord.objects.filter(d=point.d, s=point.s, t=point.t).first()
                if existing and existing.vertex_count != point.vertex_count:
                    logger.warning(
                        "Non-reproducible count at s=%d: stored %d, computed %d",
                        point.s, existing.vertex_count, point.vertex_count,
                    )
                    conflicts.append(point)
                    continue
                SweepRecord.objects.update_or_create(
                    d=point.d, s=point.s, t=point.t,
                    defaults={
                        "p": format_rational(point.p),
                        "vertex_count": point.vertex_count,
                        "elapsed_ms": point.elapsed_ms,
                    },
                )
        return conflicts
