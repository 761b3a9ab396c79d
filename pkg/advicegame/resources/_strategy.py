from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from advicegame._error import AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame._tolerance import GAIN_TOLERANCE, NORMALIZATION_TOLERANCE
from advicegame.resources._game import (
    JOINT_TYPES,
    Correlation,
    Epsilon,
    PayoffPair,
    UtilityTable,
    as_game,
)
from advicegame.resources._model import BaseModel
from advicegame.resources._record import Records

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)


class PureStrategy(enum.Enum):
    """Deterministic response of one player to its own type bit."""

    CONST0 = 0
    CONST1 = 1
    IDENTITY = 2
    FLIP = 3

    def apply(self, bit: int) -> int:
        if self is PureStrategy.CONST0:
            return 0
        if self is PureStrategy.CONST1:
            return 1
        if self is PureStrategy.IDENTITY:
            return bit
        return bit ^ 1

    @property
    def label(self) -> str:
        return f"S{self.value + 1}"


PURE_STRATEGIES: Tuple[PureStrategy, ...] = tuple(PureStrategy)


class PureProfile(BaseModel):
    alice: PureStrategy
    bob: PureStrategy

    @classmethod
    def from_indices(cls, i: int, j: int) -> PureProfile:
        return cls(alice=PureStrategy(i), bob=PureStrategy(j))

    @property
    def indices(self) -> Tuple[int, int]:
        return self.alice.value, self.bob.value

    def __str__(self) -> str:
        return f"({self.alice.label},{self.bob.label})"


class EquilibriumReport(BaseModel):
    """Certificate of a Nash-equilibrium check.

    Gains are the best unilateral improvement available to each player,
    clipped at zero. The deviation fields describe the improving deviation
    and are only set when the gain exceeds the gain tolerance.
    """

    is_equilibrium: bool
    alice_gain: float
    bob_gain: float
    best_alice_deviation: Optional[str] = None
    best_bob_deviation: Optional[str] = None

    @classmethod
    def from_gains(
        cls,
        alice_gain: float,
        bob_gain: float,
        alice_deviation: Optional[str] = None,
        bob_deviation: Optional[str] = None,
    ) -> EquilibriumReport:
        alice_gain = max(float(alice_gain), 0.0)
        bob_gain = max(float(bob_gain), 0.0)
        return cls(
            is_equilibrium=max(alice_gain, bob_gain) <= GAIN_TOLERANCE,
            alice_gain=alice_gain,
            bob_gain=bob_gain,
            best_alice_deviation=(
                alice_deviation if alice_gain > GAIN_TOLERANCE else None
            ),
            best_bob_deviation=bob_deviation if bob_gain > GAIN_TOLERANCE else None,
        )


def _deterministic_array(alice: PureStrategy, bob: PureStrategy) -> np.ndarray:
    p = np.zeros((4, 4))
    for joint_type in JOINT_TYPES:
        y_a = alice.apply(joint_type.x_a)
        y_b = bob.apply(joint_type.x_b)
        p[joint_type.index, 2 * y_a + y_b] = 1.0
    return p


# [i, j, x_index, y_index]
_PROFILE_ARRAYS = np.array(
    [[_deterministic_array(a, b) for b in PURE_STRATEGIES] for a in PURE_STRATEGIES]
)
_PROFILE_ARRAYS.setflags(write=False)


def profile_to_correlation(profile: PureProfile) -> Correlation:
    """The deterministic correlation induced by a pure strategy profile."""
    i, j = profile.indices
    return Correlation(p=_PROFILE_ARRAYS[i, j])


def profile_arrays() -> np.ndarray:
    """Deterministic correlations of all 16 profiles, indexed ``[i, j, x, y]``."""
    return _PROFILE_ARRAYS


def pure_payoff_matrices(game: UtilityTable) -> Tuple[np.ndarray, np.ndarray]:
    """Average payoffs of the 16 pure profiles as two 4x4 arrays ``(alice, bob)``.

    Row ``i`` is Alice's strategy ``S_{i+1}``, column ``j`` is Bob's.
    """
    alice = np.einsum("ijxy,xy->ij", _PROFILE_ARRAYS, game.u_a) / 4.0
    bob = np.einsum("ijxy,xy->ij", _PROFILE_ARRAYS, game.u_b) / 4.0
    return alice, bob


def pure_payoff_table(
    game: Union[float, Epsilon, UtilityTable]
) -> List[List[PayoffPair]]:
    alice, bob = pure_payoff_matrices(as_game(game))
    return [
        [PayoffPair(alice=alice[i, j], bob=bob[i, j]) for j in range(4)]
        for i in range(4)
    ]


def pure_payoff_records(game: UtilityTable) -> Records:
    """The 16-profile table in record form, ready for ``Records.to_df``."""
    alice, bob = pure_payoff_matrices(game)
    nash = set(pure_nash_profiles(game))
    data = []
    for i, j in np.ndindex(4, 4):
        profile = PureProfile.from_indices(i, j)
        data.append(
            {
                "alice_strategy": profile.alice.label,
                "bob_strategy": profile.bob.label,
                "alice": float(alice[i, j]),
                "bob": float(bob[i, j]),
                "nash": (i, j) in nash,
            }
        )
    return Records.model_validate(data)


def pure_nash_profiles(game: UtilityTable) -> List[Tuple[int, int]]:
    alice, bob = pure_payoff_matrices(game)
    best_alice = alice.max(axis=0)
    best_bob = bob.max(axis=1)
    return [
        (i, j)
        for i, j in np.ndindex(4, 4)
        if alice[i, j] >= best_alice[j] - GAIN_TOLERANCE
        and bob[i, j] >= best_bob[i] - GAIN_TOLERANCE
    ]


def enumerate_pure_nash(
    game: Union[float, Epsilon, UtilityTable]
) -> List[PureProfile]:
    """Pure Nash equilibria of ``game`` in canonical order; an epsilon selects a family member.

    A profile is an equilibrium when no unilateral pure deviation gains more
    than the gain tolerance, so at the breakpoints 1/4 and 1/2 the sets of
    both adjacent ranges are returned.
    """
    game = as_game(game)
    return [PureProfile.from_indices(i, j) for i, j in pure_nash_profiles(game)]


def preferred_equilibria(
    game: Union[float, Epsilon, UtilityTable]
) -> Tuple[PureProfile, PureProfile]:
    """The pure equilibrium each player likes best, as ``(alice's, bob's)``.

    Raises
    ------
    AdviceGameValueError
        If the game has no pure Nash equilibrium.

    """
    game = as_game(game)
    alice, bob = pure_payoff_matrices(game)
    profiles = pure_nash_profiles(game)
    if not profiles:
        raise AdviceGameValueError("the game has no pure Nash equilibrium")
    alice_best = max(profiles, key=lambda ij: alice[ij])
    bob_best = max(profiles, key=lambda ij: bob[ij])
    return PureProfile.from_indices(*alice_best), PureProfile.from_indices(*bob_best)


def _check_mixture(mix: Sequence[float], player: str) -> np.ndarray:
    mix = np.asarray(mix, dtype=float)
    if mix.shape != (4,):
        raise AdviceGameValueError(
            f"{player}'s mixture must weight the 4 pure strategies, got shape {mix.shape}"
        )
    if (
        np.any(mix < -NORMALIZATION_TOLERANCE)
        or abs(mix.sum() - 1.0) > NORMALIZATION_TOLERANCE
    ):
        raise AdviceGameValueError(
            f"{player}'s mixture is not a probability distribution: {mix.tolist()}"
        )
    return mix


def check_profile_nash(
    game: UtilityTable, alice_mix: Sequence[float], bob_mix: Sequence[float]
) -> EquilibriumReport:
    """Checks whether independent mixtures over pure strategies form a Nash equilibrium.

    Parameters
    ----------
    game: UtilityTable
        The game to check.
    alice_mix: sequence of float
        Probabilities of Alice's S1..S4.
    bob_mix: sequence of float
        Probabilities of Bob's S1..S4.

    Returns
    -------
    EquilibriumReport
        The report, with the best pure deviation of each player.

    Raises
    ------
    AdviceGameValueError
        If a mixture is not a probability distribution over four strategies.

    """
    alice_mix = _check_mixture(alice_mix, "alice")
    bob_mix = _check_mixture(bob_mix, "bob")
    alice, bob = pure_payoff_matrices(game)

    alice_responses = alice @ bob_mix
    bob_responses = alice_mix @ bob
    alice_current = float(alice_mix @ alice_responses)
    bob_current = float(bob_responses @ bob_mix)

    alice_best = int(np.argmax(alice_responses))
    bob_best = int(np.argmax(bob_responses))
    return EquilibriumReport.from_gains(
        alice_gain=alice_responses[alice_best] - alice_current,
        bob_gain=bob_responses[bob_best] - bob_current,
        alice_deviation=PureStrategy(alice_best).label,
        bob_deviation=PureStrategy(bob_best).label,
    )


def point_mass(strategy: PureStrategy) -> np.ndarray:
    mix = np.zeros(4)
    mix[strategy.value] = 1.0
    return mix


class PureStrategyService(AdviceGameService):
    """Service layer for pure strategies and pure Nash equilibria.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="pure")

    def table(self, epsilon: Optional[float] = None) -> List[List[PayoffPair]]:
        """The 4x4 table of pure-profile average payoffs."""
        return self.client._call(pure_payoff_table, self._game_for(epsilon))

    def records(self, game: Optional[UtilityTable] = None) -> pd.DataFrame:
        """The pure-profile payoff table as a DataFrame, with a Nash column."""
        return self.client._call(pure_payoff_records, self._resolve_game(game)).to_df()

    def nash(self, epsilon: Optional[float] = None) -> List[PureProfile]:
        """Lists the pure Nash equilibria of the client game, or of the family member ``epsilon``."""
        return self.client._call(enumerate_pure_nash, self._game_for(epsilon))

    def preferred(
        self, epsilon: Optional[float] = None
    ) -> Tuple[PureProfile, PureProfile]:
        return self.client._call(preferred_equilibria, self._game_for(epsilon))

    def check(
        self,
        alice_mix: Sequence[float],
        bob_mix: Sequence[float],
        game: Optional[UtilityTable] = None,
    ) -> EquilibriumReport:
        """Certifies independent mixtures against all pure deviations.

        Raises
        ------
        AdviceGameValueError
            If a mixture is not normalized.

        """
        return self.client._call(
            check_profile_nash, self._resolve_game(game), alice_mix, bob_mix
        )
