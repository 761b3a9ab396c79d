from __future__ import annotations

import enum
import json
import logging
import os
from typing import TYPE_CHECKING, List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import Field, field_serializer, field_validator, model_validator

from advicegame._error import AdviceGameDomainError, AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame._tolerance import BOUND_TOLERANCE, NORMALIZATION_TOLERANCE
from advicegame.resources._model import BaseModel, frozen_array

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

EPSILON_MIN = 0.0
EPSILON_MAX = 0.75

Bit = Literal[0, 1]


class Player(enum.Enum):
    ALICE = "alice"
    BOB = "bob"


class Epsilon(BaseModel):
    value: float

    @field_validator("value")
    @classmethod
    def check_domain(cls, value: float) -> float:
        if not EPSILON_MIN <= value <= EPSILON_MAX:
            raise AdviceGameDomainError(
                f"epsilon must lie in the interval [{EPSILON_MIN}, {EPSILON_MAX}], got {value}"
            )
        return value


def check_epsilon(eps: Union[float, Epsilon]) -> float:
    if isinstance(eps, Epsilon):
        return eps.value
    try:
        value = float(eps)
    except (TypeError, ValueError):
        raise AdviceGameDomainError(f"epsilon must be a real number, got {eps!r}")
    return Epsilon(value=value).value


class JointType(BaseModel):
    x_a: Bit
    x_b: Bit

    @property
    def index(self) -> int:
        return 2 * self.x_a + self.x_b

    @classmethod
    def from_index(cls, index: int) -> JointType:
        return cls(x_a=index >> 1, x_b=index & 1)

    def __str__(self) -> str:
        return f"x=({self.x_a},{self.x_b})"


class JointAction(BaseModel):
    y_a: Bit
    y_b: Bit

    @property
    def index(self) -> int:
        return 2 * self.y_a + self.y_b

    @classmethod
    def from_index(cls, index: int) -> JointAction:
        return cls(y_a=index >> 1, y_b=index & 1)

    def __str__(self) -> str:
        return f"y=({self.y_a},{self.y_b})"


JOINT_TYPES: Tuple[JointType, ...] = tuple(JointType.from_index(i) for i in range(4))
JOINT_ACTIONS: Tuple[JointAction, ...] = tuple(
    JointAction.from_index(i) for i in range(4)
)


class UtilityTable(BaseModel):
    """Utilities of both players over the 16 (joint type, joint action) pairs.

    Arrays are indexed ``[x_index][y_index]`` with ``x_index = 2*x_A + x_B``
    and ``y_index = 2*y_A + y_B``. ``epsilon`` is set only for members of
    the built-in family and is not part of the JSON game format.
    """

    players: Literal[2] = 2
    types: Tuple[Literal[2], Literal[2]] = (2, 2)
    actions: Tuple[Literal[2], Literal[2]] = (2, 2)
    u_a: np.ndarray = Field(alias="u_A")
    u_b: np.ndarray = Field(alias="u_B")
    epsilon: Optional[float] = Field(default=None, exclude=True)

    @field_validator("u_a", "u_b", mode="before")
    @classmethod
    def convert_utilities(cls, value) -> np.ndarray:
        array = frozen_array(value, (4, 4))
        if not np.all(np.isfinite(array)):
            raise AdviceGameValueError("utilities must be finite numbers")
        return array

    @field_serializer("u_a", "u_b")
    def serialize_utilities(self, value: np.ndarray) -> List[List[float]]:
        return value.tolist()

    def for_player(self, player: Player) -> np.ndarray:
        return self.u_a if player is Player.ALICE else self.u_b

    def utility(
        self, player: Player, joint_type: JointType, joint_action: JointAction
    ) -> float:
        return float(self.for_player(player)[joint_type.index, joint_action.index])

    def to_json_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)

    def to_df(self, player: Player) -> pd.DataFrame:
        return pd.DataFrame(
            self.for_player(player),
            index=[str(t) for t in JOINT_TYPES],
            columns=[str(a) for a in JOINT_ACTIONS],
        )


class Correlation(BaseModel):
    """Conditional distribution ``P(y_A, y_B | x_A, x_B)`` stored as ``p[x_index, y_index]``."""

    p: np.ndarray

    @field_validator("p", mode="before")
    @classmethod
    def convert_probabilities(cls, value) -> np.ndarray:
        return frozen_array(value, (4, 4))

    @model_validator(mode="after")
    def check_normalized(self) -> Correlation:
        for joint_type in JOINT_TYPES:
            row = self.p[joint_type.index]
            if not np.all(np.isfinite(row)):
                raise AdviceGameValueError(
                    f"non-finite probability for joint type {joint_type}: {row.tolist()}"
                )
            if np.any(row < -NORMALIZATION_TOLERANCE):
                raise AdviceGameValueError(
                    f"negative probability for joint type {joint_type}: {row.tolist()}"
                )
            if abs(row.sum() - 1.0) > NORMALIZATION_TOLERANCE:
                raise AdviceGameValueError(
                    f"probabilities for joint type {joint_type} sum to {row.sum()!r}, not 1"
                )
        return self

    @field_serializer("p")
    def serialize_probabilities(self, value: np.ndarray) -> List[List[float]]:
        return value.tolist()

    def prob(self, joint_type: JointType, joint_action: JointAction) -> float:
        return float(self.p[joint_type.index, joint_action.index])

    def marginals(self) -> Tuple[np.ndarray, np.ndarray]:
        """Returns ``P(y_A=0 | x)`` and ``P(y_B=0 | x)`` for the four joint types."""
        return self.p[:, 0] + self.p[:, 1], self.p[:, 0] + self.p[:, 2]

    @property
    def no_signaling(self) -> bool:
        return is_no_signaling(self)

    @classmethod
    def mixture(
        cls, correlations: List[Correlation], weights: List[float]
    ) -> Correlation:
        stacked = np.stack([c.p for c in correlations])
        return cls(p=np.tensordot(np.asarray(weights, dtype=float), stacked, axes=1))


class PayoffPair(BaseModel):
    alice: float
    bob: float

    def for_player(self, player: Player) -> float:
        return self.alice if player is Player.ALICE else self.bob

    @property
    def total(self) -> float:
        return self.alice + self.bob


def is_no_signaling(
    corr: Correlation, tolerance: float = NORMALIZATION_TOLERANCE
) -> bool:
    alice, bob = corr.marginals()
    # alice's marginal may not depend on x_B, bob's may not depend on x_A
    return bool(
        abs(alice[0] - alice[1]) <= tolerance
        and abs(alice[2] - alice[3]) <= tolerance
        and abs(bob[0] - bob[2]) <= tolerance
        and abs(bob[1] - bob[3]) <= tolerance
    )


def build_game(eps: Union[float, Epsilon]) -> UtilityTable:
    """Builds the member of the conflicting-interest family with parameter ``eps``.

    Parameters
    ----------
    eps: float
        The asymmetry parameter, within [0, 3/4].

    Returns
    -------
    UtilityTable
        The 16-entry-per-player utility table.

    Raises
    ------
    AdviceGameDomainError
        If ``eps`` is outside [0, 3/4].

    """
    eps = check_epsilon(eps)
    # columns are y=00, 01, 10, 11
    coordinate_a = [1.0 - eps, 0.0, 0.0, 0.5]
    coordinate_b = [0.5 + eps, 0.0, 0.0, 1.0]
    # x_A AND x_B = 1 rewards anticorrelated actions
    anti_a = [0.0, 0.75, 0.75 - eps, 0.0]
    anti_b = [0.0, 0.75, 0.75 + eps, 0.0]
    return UtilityTable(
        u_a=[coordinate_a, coordinate_a, coordinate_a, anti_a],
        u_b=[coordinate_b, coordinate_b, coordinate_b, anti_b],
        epsilon=eps,
    )


def as_game(game: Union[float, Epsilon, UtilityTable]) -> UtilityTable:
    """Passes a game through and builds the family member for an epsilon."""
    if isinstance(game, UtilityTable):
        return game
    return build_game(game)


def load_game(path: Union[str, os.PathLike]) -> UtilityTable:
    """Reads a game in the JSON game format."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as ex:
            raise AdviceGameValueError(f"{path} is not valid JSON: {ex}")
    if not isinstance(raw, dict):
        raise AdviceGameValueError(f"{path} must contain a JSON object")
    # a loaded game never counts as a family member
    raw.pop("epsilon", None)
    return UtilityTable.model_validate(raw)


def average_payoffs(game: UtilityTable, corr: Correlation) -> PayoffPair:
    """Average payoffs under uniformly drawn joint types."""
    corr.check_normalized()
    return PayoffPair(
        alice=float(np.sum(game.u_a * corr.p)) / 4.0,
        bob=float(np.sum(game.u_b * corr.p)) / 4.0,
    )


def payoff_functional(game: UtilityTable, player: Player) -> np.ndarray:
    """Coefficients ``c`` with ``<u_player> = sum(c * P)``."""
    return game.for_player(player) / 4.0


# sign of y_A * y_B after relabeling 0 -> -1, 1 -> +1, per y index
_PARITY = np.array([1.0, -1.0, -1.0, 1.0])


def correlators(corr: Correlation) -> np.ndarray:
    """The four correlators ``<A_{x_A} B_{x_B}>`` indexed by joint type."""
    return corr.p @ _PARITY


def chsh_functional() -> np.ndarray:
    signs = np.array([1.0, 1.0, 1.0, -1.0])
    return np.outer(signs, _PARITY)


def chsh_value(corr: Correlation) -> float:
    corr.check_normalized()
    return float(np.sum(chsh_functional() * corr.p))


def payoff_sum_from_chsh(b: float) -> float:
    if not -4.0 - BOUND_TOLERANCE <= b <= 4.0 + BOUND_TOLERANCE:
        logger.warning("CHSH value %r lies outside the algebraic range [-4, 4]", b)
    return 3.0 / 16.0 * (b + 4.0)


class GameService(AdviceGameService):
    """Service layer for games, correlations and payoffs.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="game")

    def build(self, epsilon: Optional[float] = None) -> UtilityTable:
        """Builds the family member for ``epsilon`` (client default if omitted)."""
        return self.client._call(build_game, self._resolve_epsilon(epsilon))

    def load(self, path: Union[str, os.PathLike]) -> UtilityTable:
        """Loads a user game from a JSON game file.

        Raises
        ------
        AdviceGameNotFoundError
            If the file does not exist.
        AdviceGameValueError
            If the file is not a valid game.

        """
        return self.client._call(load_game, path)

    def payoffs(
        self, correlation: Correlation, game: Optional[UtilityTable] = None
    ) -> PayoffPair:
        return self.client._call(
            average_payoffs, self._resolve_game(game), correlation
        )

    def chsh(self, correlation: Correlation) -> float:
        return self.client._call(chsh_value, correlation)

    def to_json(self, game: Optional[UtilityTable] = None) -> dict:
        return self._resolve_game(game).to_json_dict()
