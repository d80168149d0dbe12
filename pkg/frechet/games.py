"""
Variance games and their Shapley values.

For a random vector X the variance game is nu(J) = Var(sum_{j in J} X_j).
Its Shapley value is phi_i = Cov(X_i, S), which is the production route;
the combinatorial formula is kept as the independent check.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

from .choices import Modularity
from .core import BernoulliPmf, MarginParam, check_weights, covariance, second_moment
from .dependence import is_sigma_countermonotone, require_class_member, sigma_cm_polytope
from .exceptions import DimensionMismatch, InvalidGame, NotSigmaCm, OutOfRange

logger = logging.getLogger(__name__)

ONE_THIRD = Fraction(1, 3)


# -------------------------
# Games
# -------------------------
@dataclass(frozen=True, eq=False)
class CoalitionGame:
    """Transferable-utility game with every coalition valued and nu(empty) = 0."""
    players: Tuple[Hashable, ...]
    values: Dict[FrozenSet, Fraction]

    def __post_init__(self):
        values = {frozenset(k): Fraction(v) for k, v in self.values.items()}
        expected = {frozenset(c) for c in all_coalitions(self.players)}
        missing = expected - set(values)
        if missing:
            raise InvalidGame(f"Game is missing {len(missing)} coalition values.")
        if values[frozenset()] != 0:
            raise InvalidGame("The empty coalition must have value 0.")
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "values", {k: values[k] for k in expected})

    @classmethod
    def from_function(cls, players: Iterable[Hashable], fn: Callable[[FrozenSet], Fraction]) -> "CoalitionGame":
        players = tuple(players)
        return cls(players, {frozenset(c): fn(frozenset(c)) for c in all_coalitions(players)})

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def grand_value(self) -> Fraction:
        return self.values[frozenset(self.players)]

    def value(self, coalition: Iterable[Hashable]) -> Fraction:
        return self.values[frozenset(coalition)]

    def coalitions(self) -> List[FrozenSet]:
        return [frozenset(c) for c in all_coalitions(self.players)]

    def __eq__(self, other):
        if not isinstance(other, CoalitionGame):
            return NotImplemented
        return self.players == other.players and self.values == other.values

    def __add__(self, other: "CoalitionGame") -> "CoalitionGame":
        if set(self.players) != set(other.players):
            raise InvalidGame("Games must share the player set to be added.")
        return CoalitionGame(self.players, {k: v + other.values[k] for k, v in self.values.items()})

    def __mul__(self, factor) -> "CoalitionGame":
        factor = Fraction(factor)
        return CoalitionGame(self.players, {k: factor * v for k, v in self.values.items()})

    __rmul__ = __mul__


@dataclass(frozen=True)
class ShapleyAllocation:
    players: Tuple[Hashable, ...]
    phis: Tuple[Fraction, ...]

    def __getitem__(self, player) -> Fraction:
        return self.phis[self.players.index(player)]

    @property
    def total(self) -> Fraction:
        return sum(self.phis, Fraction(0))

    def as_dict(self) -> Dict[Hashable, Fraction]:
        return dict(zip(self.players, self.phis))


def all_coalitions(players: Sequence[Hashable]):
    for size in range(len(players) + 1):
        yield from combinations(players, size)


# -------------------------
# Variance game
# -------------------------
def covariance_matrix(f: BernoulliPmf) -> List[List[Fraction]]:
    n = f.d
    return [[covariance(f, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def variance_game(f: BernoulliPmf) -> CoalitionGame:
    require_class_member(f)
    cov = covariance_matrix(f)

    def variance(coalition):
        return sum((cov[i - 1][j - 1] for i in coalition for j in coalition), Fraction(0))

    return CoalitionGame.from_function(range(1, f.d + 1), variance)


# -------------------------
# Shapley value
# -------------------------
def shapley_formula(game: CoalitionGame) -> ShapleyAllocation:
    """phi_i = sum_{J not containing i} |J|! (n - |J| - 1)! / n! (nu(J + i) - nu(J))."""
    n = game.n
    weights = [Fraction(factorial(k) * factorial(n - k - 1), factorial(n)) for k in range(n)]
    phis = []
    for player in game.players:
        others = [q for q in game.players if q != player]
        phi = Fraction(0)
        for coalition in all_coalitions(others):
            base = frozenset(coalition)
            phi += weights[len(base)] * (game.values[base | {player}] - game.values[base])
        phis.append(phi)
    return ShapleyAllocation(game.players, tuple(phis))


def shapley_covariance(f: BernoulliPmf) -> ShapleyAllocation:
    """phi_i = Cov(X_i, X_1 + ... + X_d)."""
    require_class_member(f)
    cov = covariance_matrix(f)
    return ShapleyAllocation(tuple(range(1, f.d + 1)), tuple(sum(row, Fraction(0)) for row in cov))


def marginal_contribution_closed_form(f: BernoulliPmf, i: int) -> Fraction:
    """
    Shapley value of player i on a Sigma-countermonotone member with p > 1/3:
    4p - 1 - 3p^2 - E[X_k X_l] with {i, k, l} = {1, 2, 3}.
    """
    if i not in (1, 2, 3):
        raise DimensionMismatch(f"Player must be 1, 2 or 3, got {i!r}.")
    param = require_class_member(f)
    p = param.p
    if p <= ONE_THIRD:
        raise OutOfRange(f"The closed-form contribution needs p > 1/3, got {param}.")
    if not is_sigma_countermonotone(f):
        raise NotSigmaCm("pmf is not Sigma-countermonotone.")
    k, l = (j for j in (1, 2, 3) if j != i)
    return 4 * p - 1 - 3 * p * p - second_moment(f, k, l)


def shapley_mixture(p, weights: Sequence) -> ShapleyAllocation:
    """Shapley value of the mixture sum_j lambda_j g_j of the Sigma-cm generators."""
    param = MarginParam.of(p)
    if param.p <= ONE_THIRD:
        raise OutOfRange(f"Mixtures of three Sigma-cm generators need p > 1/3, got {param}.")
    weights = check_weights(weights, 3)
    allocations = [shapley_covariance(g) for g in sigma_cm_polytope(param).generators]
    phis = tuple(
        sum((w * a.phis[k] for w, a in zip(weights, allocations)), Fraction(0))
        for k in range(3)
    )
    return ShapleyAllocation((1, 2, 3), phis)


# -------------------------
# Structure
# -------------------------
def classify_modularity(game: CoalitionGame) -> str:
    """Sign of nu(I | J) + nu(I & J) - nu(I) - nu(J) over all pairs of coalitions."""
    signs = set()
    coalitions = game.coalitions()
    for a, b in combinations(coalitions, 2):
        gap = game.values[a | b] + game.values[a & b] - game.values[a] - game.values[b]
        if gap > 0:
            signs.add(1)
        elif gap < 0:
            signs.add(-1)
    if not signs:
        return str(Modularity.MODULAR)
    if signs == {1}:
        return str(Modularity.SUPERMODULAR)
    if signs == {-1}:
        return str(Modularity.SUBMODULAR)
    return str(Modularity.NEITHER)


def fuse(game: CoalitionGame, block: Iterable[Hashable]) -> CoalitionGame:
    """Quotient game in which the players of ``block`` act as one player."""
    block = frozenset(block)
    if not block or not block <= set(game.players):
        raise InvalidGame("Fused block must be a nonempty set of existing players.")
    players = (block,) + tuple(q for q in game.players if q not in block)

    def members(player):
        return player if player == block else frozenset([player])

    def value(coalition):
        union = frozenset().union(*(members(q) for q in coalition)) if coalition else frozenset()
        return game.values[union]

    return CoalitionGame.from_function(players, value)


def shapley_fusion_check(f: BernoulliPmf, coalition: Iterable[int]) -> bool:
    """The fused player's Shapley value equals the sum over its members."""
    coalition = frozenset(coalition)
    game = variance_game(f)
    original = shapley_formula(game)
    fused = shapley_formula(fuse(game, coalition))
    expected = sum((original[j] for j in coalition), Fraction(0))
    holds = fused[coalition] == expected
    if not holds:
        logger.warning("Shapley fusion fails for block %s", sorted(coalition))
    return holds
