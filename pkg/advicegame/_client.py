from __future__ import annotations

import logging
import os
from typing import Optional, Union

from advicegame._base_client import AdviceGameBaseClient
from advicegame._error import AdviceGameDomainError, AdviceGameValueError
from advicegame.resources import (
    CorrelatedService,
    GameService,
    NoSignalingService,
    PureStrategyService,
    QuantumService,
    ScanService,
    SimulationService,
)
from advicegame.resources._game import (
    UtilityTable,
    build_game,
    check_epsilon,
    load_game,
)

logger = logging.getLogger(__name__)

EPSILON_ENV = "ADVICEGAME_EPSILON"


class AdviceGame(AdviceGameBaseClient):
    """Client for analysing a conflicting-interest Bayesian game.

    Parameters
    ----------
    epsilon: float, optional
        The family parameter, within [0, 3/4]. If not supplied, will be
        retrieved from the ADVICEGAME_EPSILON environment variable, and
        defaults to 0.
    game: UtilityTable, optional
        A game to analyse instead of the family member for ``epsilon``.
    game_file: str or os.PathLike, optional
        A JSON game file to load instead of the family member.

    Attributes
    ----------
    epsilon: float
        The default family parameter of every service.
    utilities: UtilityTable
        The default game of every service.
    game: GameService
        The service layer for games and payoffs.
    pure: PureStrategyService
        The service layer for pure strategies.
    correlated: CorrelatedService
        The service layer for correlated equilibria.
    nosignaling: NoSignalingService
        The service layer for no-signaling advice.
    quantum: QuantumService
        The service layer for entangled advice.
    simulation: SimulationService
        The service layer for Monte Carlo play.
    scan: ScanService
        The service layer for epsilon scans.

    Raises
    ------
    AdviceGameDomainError
        If epsilon, passed in or read from the environment, is not a number
        in [0, 3/4].
    AdviceGameValueError
        If both ``game`` and ``game_file`` are given, or the game file is
        invalid.

    """

    def __init__(
        self,
        epsilon: Optional[float] = None,
        game: Optional[UtilityTable] = None,
        game_file: Optional[Union[str, os.PathLike]] = None,
    ) -> None:
        if epsilon is None:
            raw = os.environ.get(EPSILON_ENV, "")
            try:
                epsilon = float(raw) if raw else 0.0
            except ValueError:
                raise AdviceGameDomainError(
                    f"Please set {EPSILON_ENV} to a number in [0, 0.75], got {raw!r}."
                )
        self.epsilon: float = self._call(check_epsilon, epsilon)

        if game is not None and game_file is not None:
            raise AdviceGameValueError(
                "Please pass either a game or a game file, not both."
            )
        if game_file is not None:
            game = self._call(load_game, game_file)
            logger.info("loaded game from %s", game_file)
        self.utilities: UtilityTable = (
            game if game is not None else self._call(build_game, self.epsilon)
        )

    @property
    def game(self) -> GameService:
        """Access the GameService."""
        return GameService(self)

    @property
    def pure(self) -> PureStrategyService:
        """Access the PureStrategyService."""
        return PureStrategyService(self)

    @property
    def correlated(self) -> CorrelatedService:
        """Access the CorrelatedService."""
        return CorrelatedService(self)

    @property
    def nosignaling(self) -> NoSignalingService:
        """Access the NoSignalingService."""
        return NoSignalingService(self)

    @property
    def quantum(self) -> QuantumService:
        """Access the QuantumService."""
        return QuantumService(self)

    @property
    def simulation(self) -> SimulationService:
        """Access the SimulationService."""
        return SimulationService(self)

    @property
    def scan(self) -> ScanService:
        """Access the ScanService."""
        return ScanService(self)
