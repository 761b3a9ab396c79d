from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING, List, Optional, Union

import numpy as np
from pydantic import field_serializer, field_validator, model_validator

from advicegame._error import (
    AdviceGameDomainError,
    AdviceGameInternalError,
    AdviceGameValueError,
)
from advicegame._service import AdviceGameService
from advicegame._tolerance import (
    BOUND_TOLERANCE,
    GAIN_TOLERANCE,
    LP_TOLERANCE,
    NORMALIZATION_TOLERANCE,
)
from advicegame.resources._game import (
    Correlation,
    Epsilon,
    PayoffPair,
    Player,
    UtilityTable,
    average_payoffs,
    build_game,
    check_epsilon,
)
from advicegame.resources._model import BaseModel, frozen_array
from advicegame.resources._simplex import solve_lp, solve_lp_lexicographic
from advicegame.resources._strategy import (
    PURE_STRATEGIES,
    profile_arrays,
    pure_payoff_matrices,
)

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

CLASSICAL_SUM_BOUND = 9.0 / 8.0


class CorrelatedStrategy(BaseModel):
    """Adviser's distribution over pure-strategy recommendations.

    ``p[i, j]`` is the probability of recommending ``S_{i+1}`` to Alice and
    ``S_{j+1}`` to Bob.
    """

    p: np.ndarray

    @field_validator("p", mode="before")
    @classmethod
    def convert_probabilities(cls, value) -> np.ndarray:
        return frozen_array(value, (4, 4))

    @model_validator(mode="after")
    def check_distribution(self) -> CorrelatedStrategy:
        if not np.all(np.isfinite(self.p)):
            raise AdviceGameValueError(
                "recommendation probabilities must be finite numbers"
            )
        if np.any(self.p < -NORMALIZATION_TOLERANCE):
            raise AdviceGameValueError(
                f"recommendation probabilities must be nonnegative, got {self.p.min()!r}"
            )
        if abs(self.p.sum() - 1.0) > NORMALIZATION_TOLERANCE:
            raise AdviceGameValueError(
                f"recommendation probabilities sum to {self.p.sum()!r}, not 1"
            )
        return self

    @field_serializer("p")
    def serialize_probabilities(self, value: np.ndarray) -> List[List[float]]:
        return value.tolist()

    @classmethod
    def point_mass(cls, i: int, j: int) -> CorrelatedStrategy:
        p = np.zeros((4, 4))
        p[i, j] = 1.0
        return cls(p=p)

    @property
    def alice_marginal(self) -> np.ndarray:
        return self.p.sum(axis=1)

    @property
    def bob_marginal(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def correlation(self) -> Correlation:
        """The conditional distribution induced by following the recommendations."""
        return Correlation(p=np.einsum("ij,ijxy->xy", self.p, profile_arrays()))


class BoundRegime(enum.Enum):
    LOW = "0<=eps<=1/4"
    MID = "1/4<eps<=1/2"
    HIGH = "1/2<eps<=3/4"


class CeBounds(BaseModel):
    alice_bound: float
    bob_bound: float
    regime: BoundRegime


class ObedienceViolation(BaseModel):
    label: str
    slack: float


class ObedienceSystem(BaseModel):
    """Correlated-equilibrium constraints over the 16 flattened ``p[i, j]``.

    Rows of ``a_ub @ p <= 0`` are the obedience inequalities, Alice's 12
    first, then Bob's 12. ``a_eq @ p == 1`` is normalization; nonnegativity
    is implicit.
    """

    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    labels: List[str]

    @field_serializer("a_ub", "b_ub", "a_eq", "b_eq")
    def serialize_arrays(self, value: np.ndarray) -> list:
        return value.tolist()

    def slacks(self, strategy: CorrelatedStrategy) -> np.ndarray:
        """Obedience margins ``sum_j p_ij (u(i, j) - u(i', j))``; negative means violated."""
        return self.b_ub - self.a_ub @ strategy.p.reshape(-1)

    def violations(
        self, strategy: CorrelatedStrategy, tolerance: float = LP_TOLERANCE
    ) -> List[ObedienceViolation]:
        return [
            ObedienceViolation(label=label, slack=float(slack))
            for label, slack in zip(self.labels, self.slacks(strategy))
            if slack < -tolerance
        ]

    def is_satisfied(
        self, strategy: CorrelatedStrategy, tolerance: float = LP_TOLERANCE
    ) -> bool:
        return not self.violations(strategy, tolerance)


class CeMaximum(BaseModel):
    value: float
    witness: CorrelatedStrategy


def classical_payoff_bounds(eps: Union[float, Epsilon]) -> CeBounds:
    """Closed-form upper bounds on each player's correlated-equilibrium payoff.

    Parameters
    ----------
    eps: float
        The family parameter.

    Returns
    -------
    CeBounds
        The piecewise bounds together with the regime they come from.

    """
    eps = check_epsilon(eps)
    if eps <= 0.25:
        return CeBounds(
            alice_bound=0.75 * (1.0 - eps), bob_bound=0.75, regime=BoundRegime.LOW
        )
    if eps <= 0.5:
        return CeBounds(
            alice_bound=11.0 / 16.0 - eps / 2.0,
            bob_bound=11.0 / 16.0 + eps / 4.0,
            regime=BoundRegime.MID,
        )
    return CeBounds(
        alice_bound=7.0 / 16.0,
        bob_bound=7.0 / 16.0 + 0.75 * eps,
        regime=BoundRegime.HIGH,
    )


def tightened_alice_bound(eps: Union[float, Epsilon]) -> float:
    """Alice's bound ``max(7/16, 3/4 - 3*eps/4)``, valid once Bob never plays S3.

    Raises
    ------
    AdviceGameDomainError
        If ``eps`` lies outside [1/4, 1/2].

    """
    eps = check_epsilon(eps)
    if not 0.25 <= eps <= 0.5:
        raise AdviceGameDomainError(
            f"the tightened bound holds for epsilon in [0.25, 0.5], got {eps}"
        )
    return max(7.0 / 16.0, 0.75 - 0.75 * eps)


def ce_constraints(game: UtilityTable) -> ObedienceSystem:
    alice, bob = pure_payoff_matrices(game)
    rows, labels = [], []
    for i, recommended in enumerate(PURE_STRATEGIES):
        for k, deviation in enumerate(PURE_STRATEGIES):
            if k == i:
                continue
            row = np.zeros((4, 4))
            row[i, :] = alice[k, :] - alice[i, :]
            rows.append(row.reshape(-1))
            labels.append(f"alice {recommended.label}->{deviation.label}")
    for j, recommended in enumerate(PURE_STRATEGIES):
        for k, deviation in enumerate(PURE_STRATEGIES):
            if k == j:
                continue
            row = np.zeros((4, 4))
            row[:, j] = bob[:, k] - bob[:, j]
            rows.append(row.reshape(-1))
            labels.append(f"bob {recommended.label}->{deviation.label}")
    return ObedienceSystem(
        a_ub=np.array(rows),
        b_ub=np.zeros(len(rows)),
        a_eq=np.ones((1, 16)),
        b_eq=np.ones(1),
        labels=labels,
    )


def _to_strategy(x: np.ndarray) -> CorrelatedStrategy:
    if x.min() < -NORMALIZATION_TOLERANCE:
        logger.warning("clipping LP solution entry %g to zero", x.min())
    p = np.clip(x, 0.0, None)
    return CorrelatedStrategy(p=(p / p.sum()).reshape(4, 4))


def _maximize_over_ce(
    game: UtilityTable, objective: np.ndarray, lexicographic: bool
) -> CeMaximum:
    system = ce_constraints(game)
    solve = solve_lp_lexicographic if lexicographic else solve_lp
    result = solve(objective, system.a_ub, system.b_ub, system.a_eq, system.b_eq)
    if not result.is_optimal:
        # every game has a pure or mixed equilibrium, so the polytope is never empty
        raise AdviceGameInternalError(
            f"correlated-equilibrium LP ended {result.status.value}",
            details={"status": result.status.value},
        )
    return CeMaximum(value=result.value, witness=_to_strategy(result.x))


def max_ce_payoff(
    game: UtilityTable, player: Player, lexicographic: bool = True
) -> CeMaximum:
    """Maximizes a player's average payoff over all correlated equilibria.

    Parameters
    ----------
    game: UtilityTable
        The game whose equilibria are searched.
    player: Player
        Whose payoff is maximized.
    lexicographic: bool, default True
        Return the lexicographically smallest optimal witness. Slower, but
        reproducible when the optimum is degenerate.

    Returns
    -------
    CeMaximum
        The optimal value and a witness strategy satisfying every obedience
        inequality within ``LP_TOLERANCE``.

    Raises
    ------
    AdviceGameInternalError
        If the LP turns out infeasible or unbounded.

    """
    alice, bob = pure_payoff_matrices(game)
    objective = (alice if player is Player.ALICE else bob).reshape(-1)
    return _maximize_over_ce(game, objective, lexicographic)


def identity_exclusion_check(eps: Union[float, Epsilon]) -> bool:
    """Whether no correlated equilibrium recommends S3 to Bob with positive probability.

    Maximizes Bob's S3 marginal over the correlated-equilibrium polytope.

    Raises
    ------
    AdviceGameDomainError
        If ``eps`` lies outside [1/4, 1/2].

    """
    eps = check_epsilon(eps)
    if not 0.25 <= eps <= 0.5:
        raise AdviceGameDomainError(
            f"the S3 exclusion check applies to epsilon in [0.25, 0.5], got {eps}"
        )
    objective = np.zeros((4, 4))
    objective[:, 2] = 1.0
    maximum = _maximize_over_ce(build_game(eps), objective.reshape(-1), False)
    logger.debug("max S3 weight for bob at eps=%g is %g", eps, maximum.value)
    return maximum.value <= GAIN_TOLERANCE


def classical_sum_bound_check(
    strategy: CorrelatedStrategy, eps: Union[float, Epsilon]
) -> bool:
    payoffs = average_payoffs(build_game(eps), strategy.correlation())
    return payoffs.total <= CLASSICAL_SUM_BOUND + BOUND_TOLERANCE


class CorrelatedService(AdviceGameService):
    """Service layer for correlated strategies and correlated equilibria.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="correlated")

    def bounds(self, epsilon: Optional[float] = None) -> CeBounds:
        """Closed-form payoff bounds of the family member ``epsilon``.

        Raises
        ------
        AdviceGameDomainError
            If ``epsilon`` is omitted and the client game is not a family member.

        """
        return self.client._call(
            classical_payoff_bounds, self._family_epsilon(epsilon)
        )

    def tightened_alice_bound(self, epsilon: Optional[float] = None) -> float:
        return self.client._call(tightened_alice_bound, self._family_epsilon(epsilon))

    def constraints(self, game: Optional[UtilityTable] = None) -> ObedienceSystem:
        return self.client._call(ce_constraints, self._resolve_game(game))

    def max_payoff(
        self,
        player: Player,
        game: Optional[UtilityTable] = None,
        lexicographic: bool = True,
    ) -> CeMaximum:
        """Maximizes ``player``'s payoff over the correlated equilibria of ``game``.

        Parameters
        ----------
        player: Player
            Whose payoff to maximize.
        game: UtilityTable, optional
            Defaults to the client game.
        lexicographic: bool, default True
            Whether to return the lexicographically smallest witness.

        Returns
        -------
        CeMaximum

        """
        return self.client._call(
            max_ce_payoff, self._resolve_game(game), player, lexicographic
        )

    def identity_exclusion(self, epsilon: Optional[float] = None) -> bool:
        """Checks that Bob's S3 is never recommended in equilibrium.

        Raises
        ------
        AdviceGameDomainError
            If epsilon lies outside [1/4, 1/2].

        """
        return self.client._call(
            identity_exclusion_check, self._family_epsilon(epsilon)
        )

    def sum_bound(
        self, strategy: CorrelatedStrategy, epsilon: Optional[float] = None
    ) -> bool:
        return self.client._call(
            classical_sum_bound_check, strategy, self._family_epsilon(epsilon)
        )

    def payoffs(
        self, strategy: CorrelatedStrategy, game: Optional[UtilityTable] = None
    ) -> PayoffPair:
        return self.client._call(
            average_payoffs, self._resolve_game(game), strategy.correlation()
        )
