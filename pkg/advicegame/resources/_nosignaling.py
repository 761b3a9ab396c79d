from __future__ import annotations

import enum
import functools
import logging
from typing import TYPE_CHECKING, List, Optional, Tuple, Union

import numpy as np

from advicegame._error import AdviceGameOracleError, AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame._tolerance import NORMALIZATION_TOLERANCE, VERTEX_TOLERANCE
from advicegame.resources._game import (
    JOINT_ACTIONS,
    JOINT_TYPES,
    Correlation,
    Epsilon,
    PayoffPair,
    Player,
    UtilityTable,
    as_game,
    average_payoffs,
    build_game,
    check_epsilon,
    chsh_functional,
    payoff_functional,
)
from advicegame.resources._model import BaseModel
from advicegame.resources._simplex import solve_lp
from advicegame.resources._strategy import (
    PURE_STRATEGIES,
    EquilibriumReport,
    profile_arrays,
)

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

# largest epsilon at which the PR box stays an equilibrium
PR_NASH_LIMIT = 5.0 / 8.0


class NsVertexKind(enum.Enum):
    LOCAL = "local"
    PR_BOX = "pr_box"


class NsVertex(BaseModel):
    """Extreme point of the two-input two-output no-signaling polytope.

    Local vertices have ``index = 4*f + g`` with ``f`` and ``g`` the pure
    strategies of Alice and Bob (constant 0, constant 1, identity, flip).
    PR-box vertices have ``index = 4*alpha + 2*beta + gamma``.
    """

    kind: NsVertexKind
    index: int
    correlation: Correlation

    @property
    def label(self) -> str:
        if self.kind is NsVertexKind.LOCAL:
            f, g = divmod(self.index, 4)
            return f"local({PURE_STRATEGIES[f].label},{PURE_STRATEGIES[g].label})"
        alpha, beta, gamma = self.index >> 2, (self.index >> 1) & 1, self.index & 1
        return f"pr({alpha},{beta},{gamma})"


class NsMaximum(BaseModel):
    value: float
    argmax: List[NsVertex]


def pr_box(alpha: int = 0, beta: int = 0, gamma: int = 0) -> Correlation:
    """The PR box with ``y_A XOR y_B = x_A*x_B XOR alpha*x_A XOR beta*x_B XOR gamma``."""
    if any(bit not in (0, 1) for bit in (alpha, beta, gamma)):
        raise AdviceGameValueError(
            f"PR-box labels must be bits, got {(alpha, beta, gamma)}"
        )
    p = np.zeros((4, 4))
    for joint_type in JOINT_TYPES:
        x_a, x_b = joint_type.x_a, joint_type.x_b
        parity = (x_a & x_b) ^ (alpha & x_a) ^ (beta & x_b) ^ gamma
        for joint_action in JOINT_ACTIONS:
            if joint_action.y_a ^ joint_action.y_b == parity:
                p[joint_type.index, joint_action.index] = 0.5
    return Correlation(p=p)


@functools.lru_cache(maxsize=None)
def ns_vertices() -> Tuple[NsVertex, ...]:
    """All 24 vertices: the 16 local ones first, then the 8 PR boxes."""
    local = profile_arrays().reshape(16, 4, 4)
    vertices = [
        NsVertex(kind=NsVertexKind.LOCAL, index=k, correlation=Correlation(p=local[k]))
        for k in range(16)
    ]
    for k in range(8):
        vertices.append(
            NsVertex(
                kind=NsVertexKind.PR_BOX,
                index=k,
                correlation=pr_box(k >> 2, (k >> 1) & 1, k & 1),
            )
        )
    return tuple(vertices)


def _vertex_stack() -> np.ndarray:
    return np.stack([vertex.correlation.p for vertex in ns_vertices()])


def is_extreme_point(vertex: NsVertex) -> bool:
    """Whether ``vertex`` is not a convex combination of the other 23 vertices."""
    others = np.array(
        [
            other.correlation.p.reshape(-1)
            for other in ns_vertices()
            if (other.kind, other.index) != (vertex.kind, vertex.index)
        ]
    )
    # weights w >= 0 with sum(w) == 1 and others.T @ w == vertex
    a_eq = np.vstack([others.T, np.ones((1, others.shape[0]))])
    b_eq = np.concatenate([vertex.correlation.p.reshape(-1), [1.0]])
    result = solve_lp(np.zeros(others.shape[0]), a_eq=a_eq, b_eq=b_eq)
    return not result.is_optimal


def maximize_over_ns(objective: np.ndarray) -> NsMaximum:
    """Maximizes a linear functional of ``P(y|x)`` over the no-signaling polytope.

    Parameters
    ----------
    objective: array_like
        16 coefficients, as a 4x4 array ``[x_index, y_index]`` or flattened.

    Returns
    -------
    NsMaximum
        The maximum and every vertex attaining it within ``VERTEX_TOLERANCE``,
        in vertex order.

    """
    objective = np.asarray(objective, dtype=float)
    if objective.size != 16:
        raise AdviceGameValueError(
            f"a functional on correlations has 16 coefficients, got {objective.size}"
        )
    values = np.einsum("kxy,xy->k", _vertex_stack(), objective.reshape(4, 4))
    best = float(values.max())
    vertices = ns_vertices()
    argmax = [vertices[k] for k in np.flatnonzero(values >= best - VERTEX_TOLERANCE)]
    return NsMaximum(value=best, argmax=argmax)


def pr_star_payoffs(eps: Union[float, Epsilon]) -> PayoffPair:
    eps = check_epsilon(eps)
    closed_form = PayoffPair(alice=0.5 * (1.5 - eps), bob=0.5 * (1.5 + eps))
    computed = average_payoffs(build_game(eps), pr_box())
    if (
        abs(computed.alice - closed_form.alice) > NORMALIZATION_TOLERANCE
        or abs(computed.bob - closed_form.bob) > NORMALIZATION_TOLERANCE
    ):
        raise AdviceGameOracleError(
            "PR-box payoffs disagree with their closed form",
            details={
                "closed_form": closed_form.model_dump(),
                "computed": computed.model_dump(),
            },
        )
    return closed_form


def pr_box_payoffs(game: Union[float, Epsilon, UtilityTable]) -> PayoffPair:
    """Payoffs under PR-box advice; family members go through ``pr_star_payoffs``."""
    game = as_game(game)
    if game.epsilon is not None:
        return pr_star_payoffs(game.epsilon)
    return average_payoffs(game, pr_box())


def ns_equilibrium_report(game: UtilityTable, corr: Correlation) -> EquilibriumReport:
    """Certifies ``corr`` against every no-signaling deviation, vertex by vertex."""
    current = average_payoffs(game, corr)
    alice = maximize_over_ns(payoff_functional(game, Player.ALICE))
    bob = maximize_over_ns(payoff_functional(game, Player.BOB))
    return EquilibriumReport.from_gains(
        alice_gain=alice.value - current.alice,
        bob_gain=bob.value - current.bob,
        alice_deviation=alice.argmax[0].label,
        bob_deviation=bob.argmax[0].label,
    )


def verify_pr_nash(game: Union[float, Epsilon, UtilityTable]) -> EquilibriumReport:
    """Checks whether the PR box is a Nash equilibrium of ``game``.

    An epsilon selects the family member.

    Each player's payoff is linear in the correlation, so the best
    no-signaling deviation is attained at one of the 24 vertices. Gains
    within ``GAIN_TOLERANCE`` count as no deviation.
    """
    game = as_game(game)
    report = ns_equilibrium_report(game, pr_box())
    logger.debug("PR box at eps=%s: %s", game.epsilon, report.model_dump())
    return report


def chsh_maximum() -> NsMaximum:
    return maximize_over_ns(chsh_functional())


class NoSignalingService(AdviceGameService):
    """Service layer for the no-signaling polytope and the PR box.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="nosignaling")

    def vertices(self) -> Tuple[NsVertex, ...]:
        return self.client._call(ns_vertices)

    def maximize(self, objective: np.ndarray) -> NsMaximum:
        return self.client._call(maximize_over_ns, objective)

    def maximize_payoff(
        self, player: Player, game: Optional[UtilityTable] = None
    ) -> NsMaximum:
        """Best payoff ``player`` can get from any no-signaling correlation."""
        game = self._resolve_game(game)
        return self.client._call(maximize_over_ns, payoff_functional(game, player))

    def pr_star_payoffs(self, epsilon: Optional[float] = None) -> PayoffPair:
        """PR-box payoffs on the client game, or on the family member ``epsilon``."""
        return self.client._call(pr_box_payoffs, self._game_for(epsilon))

    def certify(self, epsilon: Optional[float] = None) -> EquilibriumReport:
        """Certifies the PR box as a Nash equilibrium, or reports the best deviation.

        Parameters
        ----------
        epsilon: float, optional
            Certifies on this family member instead of the client game.

        Returns
        -------
        EquilibriumReport

        """
        return self.client._call(verify_pr_nash, self._game_for(epsilon))

    def is_extreme_point(self, vertex: NsVertex) -> bool:
        return self.client._call(is_extreme_point, vertex)
