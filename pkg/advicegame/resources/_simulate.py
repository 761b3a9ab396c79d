from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING, List, Optional

import numpy as np
from pydantic import field_serializer, model_validator
from tqdm import tqdm

from advicegame._error import AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame.resources._correlated import CorrelatedStrategy
from advicegame.resources._game import (
    Correlation,
    JointAction,
    JointType,
    PayoffPair,
    UtilityTable,
    average_payoffs,
)
from advicegame.resources._model import BaseModel
from advicegame.resources._nosignaling import pr_box
from advicegame.resources._quantum import (
    PlayerMeasurements,
    TwoQubitState,
    born_correlation,
    q_star_setup,
)
from advicegame.resources._rng import SeededRNG
from advicegame.resources._strategy import PURE_STRATEGIES

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

CHUNK_ROUNDS = 65_536

# _RESPONSES[i, x] is the action of pure strategy S_{i+1} on type bit x
_RESPONSES = np.array([[s.apply(0), s.apply(1)] for s in PURE_STRATEGIES])


class AdviceKind(enum.Enum):
    CLASSICAL = "classical"
    PR_BOX = "pr"
    QUANTUM = "quantum"
    RAW = "raw"


class AdviceSource(BaseModel):
    """What the adviser hands out before the players learn their types."""

    kind: AdviceKind
    strategy: Optional[CorrelatedStrategy] = None
    state: Optional[TwoQubitState] = None
    alice: Optional[PlayerMeasurements] = None
    bob: Optional[PlayerMeasurements] = None
    correlation: Optional[Correlation] = None

    @model_validator(mode="after")
    def check_payload(self) -> AdviceSource:
        required = {
            AdviceKind.CLASSICAL: ("strategy",),
            AdviceKind.PR_BOX: (),
            AdviceKind.QUANTUM: ("state", "alice", "bob"),
            AdviceKind.RAW: ("correlation",),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise AdviceGameValueError(
                f"{self.kind.value} advice needs {', '.join(missing)}"
            )
        return self

    @classmethod
    def classical(cls, strategy: CorrelatedStrategy) -> AdviceSource:
        return cls(kind=AdviceKind.CLASSICAL, strategy=strategy)

    @classmethod
    def pr(cls) -> AdviceSource:
        return cls(kind=AdviceKind.PR_BOX)

    @classmethod
    def quantum(
        cls,
        state: Optional[TwoQubitState] = None,
        alice: Optional[PlayerMeasurements] = None,
        bob: Optional[PlayerMeasurements] = None,
    ) -> AdviceSource:
        """Entangled advice; omitted parts come from the optimal strategy."""
        default_state, default_alice, default_bob = q_star_setup()
        return cls(
            kind=AdviceKind.QUANTUM,
            state=default_state if state is None else state,
            alice=default_alice if alice is None else alice,
            bob=default_bob if bob is None else bob,
        )

    @classmethod
    def raw(cls, correlation: Correlation) -> AdviceSource:
        return cls(kind=AdviceKind.RAW, correlation=correlation)

    def conditional(self) -> Correlation:
        """The distribution ``P(y | x)`` the players end up sampling."""
        if self.kind is AdviceKind.CLASSICAL:
            return self.strategy.correlation()
        if self.kind is AdviceKind.PR_BOX:
            return pr_box()
        if self.kind is AdviceKind.QUANTUM:
            return born_correlation(self.state, self.alice, self.bob)
        return self.correlation


class RunReport(BaseModel):
    rounds: int
    seed: int
    empirical: PayoffPair
    analytic: PayoffPair
    abs_error: PayoffPair
    counts: np.ndarray

    @field_serializer("counts")
    def serialize_counts(self, value: np.ndarray) -> List[List[int]]:
        return value.tolist()


class _Sampler:
    """Turns uniform draws into joint actions for one advice source.

    ``commit`` consumes the advice draw of a round before the type is known;
    ``respond`` then produces the action from the committed advice and the
    type.
    """

    def __init__(self, source: AdviceSource) -> None:
        self.classical = source.kind is AdviceKind.CLASSICAL
        if self.classical:
            self.cdf = np.cumsum(source.strategy.p.reshape(-1))
        else:
            self.cdf = np.cumsum(source.conditional().p, axis=1)
        # rounding must not leave a gap below 1
        self.cdf[..., -1] = 1.0

    def commit(self, advice: np.ndarray) -> np.ndarray:
        if self.classical:
            # recommendation k = 4*i + j, fixed before the types exist
            return np.minimum(np.searchsorted(self.cdf, advice, side="right"), 15)
        return advice

    def respond(self, committed: np.ndarray, types: np.ndarray) -> np.ndarray:
        if self.classical:
            i, j = np.divmod(committed, 4)
            y_a = _RESPONSES[i, types >> 1]
            y_b = _RESPONSES[j, types & 1]
            return 2 * y_a + y_b
        rows = self.cdf[types]
        return np.minimum((rows <= committed[:, None]).sum(axis=1), 3)


def sample_action(
    source: AdviceSource, joint_type: JointType, rng: SeededRNG
) -> JointAction:
    """Plays one round for a given joint type.

    The advice draw is taken before the type is looked at, as in ``run``.
    """
    sampler = _Sampler(source)
    committed = sampler.commit(rng.random(1))
    action = sampler.respond(committed, np.array([joint_type.index]))
    return JointAction.from_index(int(action[0]))


def run(
    game: UtilityTable,
    source: AdviceSource,
    rounds: int,
    seed: int,
    progress: bool = False,
) -> RunReport:
    """Plays ``rounds`` rounds with advice from ``source`` and averages the payoffs.

    Each round first draws the advice, then the uniformly random joint type,
    then the players' actions. Rounds are processed in fixed-size chunks,
    so the result depends only on ``(seed, rounds, source)``.

    Parameters
    ----------
    game: UtilityTable
        The game being played.
    source: AdviceSource
        The adviser.
    rounds: int
        Number of rounds, at least 1.
    seed: int
        Seed of the random stream.
    progress: bool, default False
        Show a progress bar over chunks.

    Returns
    -------
    RunReport
        Empirical and analytic payoffs together with the counts of each
        (joint type, joint action) pair.

    Raises
    ------
    AdviceGameValueError
        If ``rounds`` is not positive or the seed is invalid.

    """
    if rounds < 1:
        raise AdviceGameValueError(f"rounds must be at least 1, got {rounds}")
    rng = SeededRNG(seed)
    sampler = _Sampler(source)
    counts = np.zeros(16, dtype=np.int64)
    starts = range(0, rounds, CHUNK_ROUNDS)
    for start in tqdm(starts, desc="simulating", unit="chunk", disable=not progress):
        size = min(CHUNK_ROUNDS, rounds - start)
        committed = sampler.commit(rng.random(size))
        types = rng.integers(4, size)
        actions = sampler.respond(committed, types)
        counts += np.bincount(4 * types + actions, minlength=16)
    counts = counts.reshape(4, 4)

    empirical = PayoffPair(
        alice=float(np.sum(counts * game.u_a)) / rounds,
        bob=float(np.sum(counts * game.u_b)) / rounds,
    )
    analytic = average_payoffs(game, source.conditional())
    report = RunReport(
        rounds=rounds,
        seed=seed,
        empirical=empirical,
        analytic=analytic,
        abs_error=PayoffPair(
            alice=abs(empirical.alice - analytic.alice),
            bob=abs(empirical.bob - analytic.bob),
        ),
        counts=counts,
    )
    logger.info(
        "%s advice, %d rounds: empirical (%.6f, %.6f), analytic (%.6f, %.6f)",
        source.kind.value,
        rounds,
        empirical.alice,
        empirical.bob,
        analytic.alice,
        analytic.bob,
    )
    return report


class SimulationService(AdviceGameService):
    """Service layer for Monte Carlo play.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="simulation")

    def run(
        self,
        source: AdviceSource,
        rounds: int,
        seed: int,
        game: Optional[UtilityTable] = None,
        progress: bool = False,
    ) -> RunReport:
        """Simulates ``rounds`` rounds on the client game unless ``game`` is given.

        Returns
        -------
        RunReport

        Raises
        ------
        AdviceGameValueError
            If ``rounds`` or ``seed`` is invalid.

        """
        return self.client._call(
            run, self._resolve_game(game), source, rounds, seed, progress
        )

    def sample_action(
        self, source: AdviceSource, joint_type: JointType, seed: int
    ) -> JointAction:
        return self.client._call(sample_action, source, joint_type, SeededRNG(seed))
