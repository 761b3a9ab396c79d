from __future__ import annotations

from typing import TYPE_CHECKING, Optional

from advicegame._error import AdviceGameDomainError

if TYPE_CHECKING:
    from advicegame._client import AdviceGame
    from advicegame.resources._game import UtilityTable


class AdviceGameService:
    def __init__(self, client: AdviceGame, tag: str = "") -> None:
        self.client: AdviceGame = client
        self.tag: str = tag

    def _resolve_epsilon(self, epsilon: Optional[float]) -> float:
        if epsilon is None:
            return self.client.epsilon
        return epsilon

    def _resolve_game(self, game: Optional[UtilityTable]) -> UtilityTable:
        if game is None:
            return self.client.utilities
        return game

    def _game_for(self, epsilon: Optional[float]) -> UtilityTable:
        """The family member for ``epsilon``, or the client game when omitted."""
        if epsilon is None:
            return self.client.utilities
        return self.client.game.build(epsilon)

    def _family_epsilon(self, epsilon: Optional[float]) -> float:
        """The family parameter of an operation only defined on the family.

        Raises
        ------
        AdviceGameDomainError
            If ``epsilon`` is omitted and the client game is not a member
            of the family.

        """
        if epsilon is not None:
            return epsilon
        if self.client.utilities.epsilon is None:
            raise AdviceGameDomainError(
                f"{self.tag}: this operation is defined only for the epsilon family "
                "and the client game is not a family member; pass an epsilon to "
                "evaluate a family member instead"
            )
        return self.client.utilities.epsilon
