from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Callable, List, Optional, Tuple, Union

import numpy as np
from pydantic import field_serializer, field_validator, model_validator

from advicegame._error import AdviceGameOracleError, AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame._tolerance import (
    GAIN_TOLERANCE,
    HERMITIAN_TOLERANCE,
    NORMALIZATION_TOLERANCE,
    ORACLE_TOLERANCE,
    POSITIVITY_TOLERANCE,
)
from advicegame.resources._correlated import (
    classical_payoff_bounds,
    tightened_alice_bound,
)
from advicegame.resources._game import (
    Correlation,
    Epsilon,
    PayoffPair,
    Player,
    UtilityTable,
    as_game,
    average_payoffs,
    build_game,
    check_epsilon,
)
from advicegame.resources._model import BaseModel, frozen_array
from advicegame.resources._strategy import EquilibriumReport

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
# singlet P(00|00) under the optimal measurements, (1 + 1/sqrt(2)) / 4
Q_STAR_WEIGHT = (1.0 + 1.0 / SQRT2) / 4.0

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# I, sigma_x, sigma_y, sigma_z
_PAULI_BASIS = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])

GRID_POINTS = 9
ASCENT_ITERATIONS = 200
# per measurement: radius, sheet, polar angle, azimuth
_BOX_LOW = np.zeros(4)
_BOX_HIGH = np.array([1.0, 1.0, np.pi, 2.0 * np.pi])


def _complex_array(value, shape: tuple) -> np.ndarray:
    array = np.asarray(value)
    # JSON form stores [re, im] pairs
    if array.shape == shape + (2,) and not np.iscomplexobj(array):
        array = array[..., 0] + 1j * array[..., 1]
    return frozen_array(array, shape, dtype=complex)


def _serialize_complex(value: np.ndarray) -> list:
    return np.stack([value.real, value.imag], axis=-1).tolist()


class TwoQubitState(BaseModel):
    """Pure two-qubit state in the basis ``|00>, |01>, |10>, |11>``; Alice holds the first qubit."""

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def convert_amplitudes(cls, value) -> np.ndarray:
        amplitudes = _complex_array(value, (4,))
        if not np.all(np.isfinite(amplitudes)):
            raise AdviceGameValueError("state amplitudes must be finite numbers")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise AdviceGameValueError(f"state must have unit norm, got {norm!r}")
        return amplitudes

    @field_serializer("amplitudes")
    def serialize_amplitudes(self, value: np.ndarray) -> list:
        return _serialize_complex(value)


class BinaryMeasurement(BaseModel):
    """Two-outcome POVM given by its outcome-0 effect; the outcome-1 effect is ``I - effect0``."""

    effect0: np.ndarray

    @field_validator("effect0", mode="before")
    @classmethod
    def convert_effect(cls, value) -> np.ndarray:
        effect = _complex_array(value, (2, 2))
        if not np.all(np.isfinite(effect)):
            raise AdviceGameValueError("effect entries must be finite numbers")
        skew = np.abs(effect - effect.conj().T).max()
        if skew > HERMITIAN_TOLERANCE:
            raise AdviceGameValueError(f"effect must be Hermitian, deviation {skew!r}")
        effect = 0.5 * (effect + effect.conj().T)
        eigenvalues = np.linalg.eigvalsh(effect)
        if (
            eigenvalues[0] < -POSITIVITY_TOLERANCE
            or eigenvalues[1] > 1.0 + POSITIVITY_TOLERANCE
        ):
            raise AdviceGameValueError(
                f"effect eigenvalues must lie in [0, 1], got {eigenvalues.tolist()}"
            )
        effect.setflags(write=False)
        return effect

    @field_serializer("effect0")
    def serialize_effect(self, value: np.ndarray) -> list:
        return _serialize_complex(value)

    @property
    def effect1(self) -> np.ndarray:
        return IDENTITY - self.effect0

    @property
    def is_projective(self) -> bool:
        return bool(
            np.abs(self.effect0 @ self.effect0 - self.effect0).max()
            <= POSITIVITY_TOLERANCE
        )

    def effects(self) -> np.ndarray:
        return np.stack([self.effect0, self.effect1])


class PlayerMeasurements(BaseModel):
    on_type0: BinaryMeasurement
    on_type1: BinaryMeasurement

    def effects(self) -> np.ndarray:
        """Effects indexed ``[type, outcome]``, shape (2, 2, 2, 2)."""
        return np.stack([self.on_type0.effects(), self.on_type1.effects()])


class PovmParams(BaseModel):
    """Parameters of a player's two binary measurements.

    The outcome-0 effect of the measurement for type 0 is
    ``(a0*I + a[0]*sigma_x + a[1]*sigma_y + a[2]*sigma_z) / 2``; ``b0`` and
    ``b`` describe the measurement for type 1 the same way. Valid
    parameters satisfy ``|a| <= a0 <= 2 - |a|``.
    """

    a0: float
    a: np.ndarray
    b0: float
    b: np.ndarray

    @field_validator("a", "b", mode="before")
    @classmethod
    def convert_vector(cls, value) -> np.ndarray:
        return frozen_array(value, (3,))

    @model_validator(mode="after")
    def check_chain(self) -> PovmParams:
        for name, scalar, vector in (("a", self.a0, self.a), ("b", self.b0, self.b)):
            if not (np.isfinite(scalar) and np.all(np.isfinite(vector))):
                raise AdviceGameValueError(
                    f"{name}0 and {name} must be finite numbers, got {name}0={scalar!r}"
                )
            norm = float(np.linalg.norm(vector))
            if norm > scalar + POSITIVITY_TOLERANCE:
                raise AdviceGameValueError(
                    f"|{name}| <= {name}0 violated: |{name}|={norm!r}, {name}0={scalar!r}"
                )
            if scalar > 2.0 - norm + POSITIVITY_TOLERANCE:
                raise AdviceGameValueError(
                    f"{name}0 <= 2 - |{name}| violated: |{name}|={norm!r}, {name}0={scalar!r}"
                )
        return self

    @field_serializer("a", "b")
    def serialize_vector(self, value: np.ndarray) -> List[float]:
        return value.tolist()

    def to_vector(self) -> np.ndarray:
        return np.concatenate([[self.a0], self.a, [self.b0], self.b])

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> PovmParams:
        vector = np.asarray(vector, dtype=float)
        return cls(a0=vector[0], a=vector[1:4], b0=vector[4], b=vector[5:8])

    def __str__(self) -> str:
        return "a0={:.6g} a={} b0={:.6g} b={}".format(
            self.a0,
            np.array2string(self.a, precision=6),
            self.b0,
            np.array2string(self.b, precision=6),
        )


class DeviationCoefficients(BaseModel):
    """A deviating player's payoff as an affine function of its ``PovmParams``."""

    constant: float
    a0: float
    a: np.ndarray
    b0: float
    b: np.ndarray

    @field_serializer("a", "b")
    def serialize_vector(self, value: np.ndarray) -> List[float]:
        return value.tolist()

    def value(self, params: PovmParams) -> float:
        return float(
            self.constant
            + self.a0 * params.a0
            + self.a @ params.a
            + self.b0 * params.b0
            + self.b @ params.b
        )

    def maximum(self) -> Tuple[float, PovmParams]:
        """Exact maximum over all valid parameters.

        The feasible set of each measurement is a double cone whose extreme
        points are ``a0 = 0``, ``a0 = 2`` (both with ``a = 0``) and the unit
        sphere at ``a0 = 1``, so each block maximum is
        ``max(0, 2*c0, c0 + |c|)``.
        """
        a_value, a0, a = _block_maximum(self.a0, self.a)
        b_value, b0, b = _block_maximum(self.b0, self.b)
        return self.constant + a_value + b_value, PovmParams(a0=a0, a=a, b0=b0, b=b)


class BestResponse(BaseModel):
    value: float
    argmax: PovmParams
    numeric_value: Optional[float] = None
    numeric_argmax: Optional[PovmParams] = None


class AdvantageWindow(BaseModel):
    c1: float
    c2: float

    def contains(self, eps: float) -> bool:
        return self.c1 <= eps <= self.c2


def _block_maximum(c0: float, c: np.ndarray) -> Tuple[float, float, np.ndarray]:
    norm = float(np.linalg.norm(c))
    unit = c / norm if norm > 0.0 else np.array([0.0, 0.0, 1.0])
    # ties go to the unit sphere
    best = (c0 + norm, 1.0, unit)
    for option in ((2.0 * c0, 2.0, np.zeros(3)), (0.0, 0.0, np.zeros(3))):
        if option[0] > best[0] + GAIN_TOLERANCE:
            best = option
    return best


def singlet() -> TwoQubitState:
    return TwoQubitState(amplitudes=[0.0, 1.0 / SQRT2, -1.0 / SQRT2, 0.0])


def _projector(observable: np.ndarray) -> BinaryMeasurement:
    """Measurement answering 0 on the +1 eigenspace of a Pauli-type observable."""
    return BinaryMeasurement(effect0=0.5 * (IDENTITY + observable))


def q_star_setup() -> Tuple[TwoQubitState, PlayerMeasurements, PlayerMeasurements]:
    """The singlet with the measurements that maximally violate CHSH.

    Returns
    -------
    tuple
        ``(state, alice, bob)``. Alice measures sigma_z on type 0 and sigma_x
        on type 1; Bob measures ``-(sigma_x + sigma_z)/sqrt(2)`` and
        ``(sigma_x - sigma_z)/sqrt(2)``.

    """
    alice = PlayerMeasurements(
        on_type0=_projector(SIGMA_Z), on_type1=_projector(SIGMA_X)
    )
    bob = PlayerMeasurements(
        on_type0=_projector(-(SIGMA_X + SIGMA_Z) / SQRT2),
        on_type1=_projector((SIGMA_X - SIGMA_Z) / SQRT2),
    )
    return singlet(), alice, bob


def _born(
    state: np.ndarray, alice_effects: np.ndarray, bob_effects: np.ndarray
) -> np.ndarray:
    """Born-rule probabilities for stacks of effects, shape ``(..., 4, 4)``."""
    lead = np.broadcast_shapes(alice_effects.shape[:-4], bob_effects.shape[:-4])
    alice_effects = np.broadcast_to(alice_effects, lead + alice_effects.shape[-4:])
    bob_effects = np.broadcast_to(bob_effects, lead + bob_effects.shape[-4:])
    psi = state.reshape(2, 2)
    p = np.einsum(
        "ab,...xuac,...yvbd,cd->...xyuv", psi.conj(), alice_effects, bob_effects, psi
    )
    return p.real.reshape(lead + (4, 4))


def born_correlation(
    state: TwoQubitState, alice: PlayerMeasurements, bob: PlayerMeasurements
) -> Correlation:
    """The correlation produced when both players measure their half of ``state``.

    Raises
    ------
    AdviceGameValueError
        If the resulting probabilities are not normalized.

    """
    return Correlation(p=_born(state.amplitudes, alice.effects(), bob.effects()))


def params_to_measurements(p: PovmParams) -> PlayerMeasurements:
    effects = _effects_from_vectors(p.to_vector())
    return PlayerMeasurements(
        on_type0=BinaryMeasurement(effect0=effects[0, 0]),
        on_type1=BinaryMeasurement(effect0=effects[1, 0]),
    )


def measurements_to_params(m: PlayerMeasurements) -> PovmParams:
    """Inverse of ``params_to_measurements``: ``a0 = tr(E)``, ``a_k = tr(E sigma_k)``."""
    blocks = [
        np.einsum("kij,ji->k", _PAULI_BASIS, measurement.effect0).real
        for measurement in (m.on_type0, m.on_type1)
    ]
    return PovmParams(
        a0=blocks[0][0], a=blocks[0][1:], b0=blocks[1][0], b=blocks[1][1:]
    )


def _effects_from_vectors(vectors: np.ndarray) -> np.ndarray:
    """Maps parameter vectors ``(..., 8)`` to effects ``(..., type, outcome, 2, 2)``."""
    vectors = np.asarray(vectors, dtype=float)
    blocks = vectors.reshape(vectors.shape[:-1] + (2, 4))
    effect0 = 0.5 * np.einsum("...k,kij->...ij", blocks, _PAULI_BASIS)
    return np.stack([effect0, IDENTITY - effect0], axis=-3)


def _deviation_payoffs(
    vectors: np.ndarray,
    game: UtilityTable,
    player: Player,
    opponent: PlayerMeasurements,
    state: TwoQubitState,
) -> np.ndarray:
    """Payoffs of ``player`` for a stack of parameter vectors, without validation."""
    own = _effects_from_vectors(vectors)
    other = opponent.effects()
    if player is Player.ALICE:
        p = _born(state.amplitudes, own, other)
    else:
        p = _born(state.amplitudes, other, own)
    return np.einsum("...xy,xy->...", p, game.for_player(player)) / 4.0


def deviation_payoff(
    game: UtilityTable,
    player: Player,
    params: PovmParams,
    opponent: PlayerMeasurements,
    state: TwoQubitState,
) -> float:
    """Average payoff of ``player`` measuring with ``params`` against a fixed opponent."""
    own = params_to_measurements(params)
    if player is Player.ALICE:
        corr = born_correlation(state, own, opponent)
        return average_payoffs(game, corr).alice
    return average_payoffs(game, born_correlation(state, opponent, own)).bob


def deviation_coefficients(
    game: UtilityTable,
    player: Player,
    opponent: PlayerMeasurements,
    state: TwoQubitState,
) -> DeviationCoefficients:
    """Reads the affine payoff coefficients off the Born-rule pipeline.

    The payoff is affine in the parameters, so it is evaluated at zero and
    at the eight unit vectors.
    """
    points = np.vstack([np.zeros(8), np.eye(8)])
    values = _deviation_payoffs(points, game, player, opponent, state)
    slopes = values[1:] - values[0]
    return DeviationCoefficients(
        constant=values[0], a0=slopes[0], a=slopes[1:4], b0=slopes[4], b=slopes[5:8]
    )


def _coordinates_to_vectors(coordinates: np.ndarray) -> np.ndarray:
    """Maps box coordinates ``(..., 8)`` to parameter vectors ``(..., 8)``."""
    blocks = coordinates.reshape(coordinates.shape[:-1] + (2, 4))
    r, t, theta, phi = np.moveaxis(blocks, -1, 0)
    scalar = r + t * (2.0 - 2.0 * r)
    direction = np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
        axis=-1,
    )
    vectors = np.concatenate([scalar[..., None], r[..., None] * direction], axis=-1)
    return vectors.reshape(coordinates.shape)


def numeric_best_response(
    objective: Callable[[np.ndarray], np.ndarray]
) -> Tuple[float, np.ndarray]:
    """Maximizes ``objective`` over valid parameter vectors by grid search and coordinate ascent.

    Every box coordinate maps to a valid measurement, so the search never
    leaves the feasible set. Each measurement is first searched on a
    ``GRID_POINTS``-per-coordinate grid with the other one held at the fair
    coin, then all eight coordinates are refined with step halving.

    Parameters
    ----------
    objective: callable
        Maps parameter vectors of shape (n, 8) to n payoffs.

    Returns
    -------
    tuple
        The best value found and its parameter vector.

    """
    axes = [
        np.linspace(low, high, GRID_POINTS) for low, high in zip(_BOX_LOW, _BOX_HIGH)
    ]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    coin = np.broadcast_to([0.0, 0.5, 0.0, 0.0], grid.shape)

    values = objective(_coordinates_to_vectors(np.hstack([grid, coin])))
    best_a = grid[int(np.argmax(values))]
    values = objective(
        _coordinates_to_vectors(np.hstack([np.broadcast_to(best_a, grid.shape), grid]))
    )
    best_b = grid[int(np.argmax(values))]

    low, high = np.tile(_BOX_LOW, 2), np.tile(_BOX_HIGH, 2)
    point = np.concatenate([best_a, best_b])
    value = float(objective(_coordinates_to_vectors(point[None]))[0])
    steps = (high - low) / (GRID_POINTS - 1)
    for _ in range(ASCENT_ITERATIONS):
        moves = np.vstack([np.diag(steps), -np.diag(steps)])
        candidates = np.clip(point + moves, low, high)
        candidate_values = objective(_coordinates_to_vectors(candidates))
        k = int(np.argmax(candidate_values))
        if candidate_values[k] > value:
            point, value = candidates[k], float(candidate_values[k])
        else:
            steps = steps / 2.0
    return value, _coordinates_to_vectors(point)


def best_response(
    game: UtilityTable,
    player: Player,
    opponent: PlayerMeasurements,
    state: TwoQubitState,
    numeric: bool = True,
) -> BestResponse:
    """Best payoff ``player`` can reach by changing its measurements.

    Parameters
    ----------
    game: UtilityTable
        The game being played.
    player: Player
        The deviating player.
    opponent: PlayerMeasurements
        The other player's fixed measurements.
    state: TwoQubitState
        The shared state.
    numeric: bool, default True
        Also run the numerical search and require it to agree with the
        exact maximum.

    Returns
    -------
    BestResponse

    Raises
    ------
    AdviceGameOracleError
        If the numerical and exact maxima differ by more than
        ``ORACLE_TOLERANCE``.

    """
    coefficients = deviation_coefficients(game, player, opponent, state)
    value, argmax = coefficients.maximum()
    if not numeric:
        return BestResponse(value=value, argmax=argmax)

    numeric_value, numeric_vector = numeric_best_response(
        lambda vectors: _deviation_payoffs(vectors, game, player, opponent, state)
    )
    if abs(numeric_value - value) > ORACLE_TOLERANCE:
        raise AdviceGameOracleError(
            f"numerical best response {numeric_value!r} disagrees with exact maximum {value!r}",
            details={"analytic": value, "numeric": numeric_value},
        )
    return BestResponse(
        value=value,
        argmax=argmax,
        numeric_value=numeric_value,
        numeric_argmax=PovmParams.from_vector(numeric_vector),
    )


def q_star_payoffs(eps: Union[float, Epsilon]) -> PayoffPair:
    eps = check_epsilon(eps)
    closed_form = PayoffPair(
        alice=Q_STAR_WEIGHT * (1.5 - eps), bob=Q_STAR_WEIGHT * (1.5 + eps)
    )
    state, alice, bob = q_star_setup()
    computed = average_payoffs(build_game(eps), born_correlation(state, alice, bob))
    if (
        abs(computed.alice - closed_form.alice) > NORMALIZATION_TOLERANCE
        or abs(computed.bob - closed_form.bob) > NORMALIZATION_TOLERANCE
    ):
        raise AdviceGameOracleError(
            "entangled-strategy payoffs disagree with their closed form",
            details={
                "closed_form": closed_form.model_dump(),
                "computed": computed.model_dump(),
            },
        )
    return closed_form


def entangled_payoffs(game: Union[float, Epsilon, UtilityTable]) -> PayoffPair:
    """Payoffs of the optimal entangled strategy on ``game``.

    Family members go through ``q_star_payoffs`` and its closed-form check.
    """
    game = as_game(game)
    if game.epsilon is not None:
        return q_star_payoffs(game.epsilon)
    state, alice, bob = q_star_setup()
    return average_payoffs(game, born_correlation(state, alice, bob))


def alice_deviation_payoff(p: PovmParams, eps: Union[float, Epsilon]) -> float:
    """Alice's payoff for measurements ``p`` while Bob keeps his optimal measurements."""
    eps = check_epsilon(eps)
    slope = 3.0 * SQRT2 - 2.0 * SQRT2 * eps
    return (
        (9.0 - 4.0 * eps)
        + (2.0 - 4.0 * eps) * p.a0
        + slope * p.a[2]
        + p.b0
        + slope * p.b[0]
    ) / 32.0


def bob_deviation_payoff(p: PovmParams, eps: Union[float, Epsilon]) -> float:
    """Bob's payoff for measurements ``p`` while Alice keeps her optimal measurements."""
    eps = check_epsilon(eps)
    slope = 3.0 + 2.0 * eps
    return (
        15.0
        + (-2.0 + 4.0 * eps) * p.a0
        - slope * p.a[0]
        - slope * p.a[2]
        + (-1.0 + 4.0 * eps) * p.b0
        + slope * p.b[0]
        - slope * p.b[2]
    ) / 32.0


def best_response_max(
    player: Player, game: Union[float, Epsilon, UtilityTable], numeric: bool = True
) -> BestResponse:
    """Best deviation payoff of ``player`` against the optimal entangled strategy.

    The exact maximum comes from the affine payoff coefficients (on the
    family, Alice's ``a0`` coefficient changes sign at ``eps = 1/2``); the
    numerical search must reproduce it within ``ORACLE_TOLERANCE``.
    """
    state, alice, bob = q_star_setup()
    opponent = bob if player is Player.ALICE else alice
    return best_response(as_game(game), player, opponent, state, numeric)


def verify_q_nash(
    game: Union[float, Epsilon, UtilityTable], numeric: bool = True
) -> EquilibriumReport:
    """Certifies the entangled strategy against every measurement deviation on ``game``."""
    game = as_game(game)
    payoffs = entangled_payoffs(game)
    alice_best = best_response_max(Player.ALICE, game, numeric)
    bob_best = best_response_max(Player.BOB, game, numeric)
    return EquilibriumReport.from_gains(
        alice_gain=alice_best.value - payoffs.alice,
        bob_gain=bob_best.value - payoffs.bob,
        alice_deviation=str(alice_best.argmax),
        bob_deviation=str(bob_best.argmax),
    )


def _beats_classical(eps: float, strict: bool) -> bool:
    payoffs = q_star_payoffs(eps)
    margin = -GAIN_TOLERANCE if not strict else GAIN_TOLERANCE
    return (
        payoffs.alice - tightened_alice_bound(eps) > margin
        and payoffs.bob - classical_payoff_bounds(eps).bob_bound > margin
    )


def advantage_window() -> AdvantageWindow:
    """Range of epsilon where the entangled strategy beats every classical equilibrium for both players.

    The lower end solves ``Q_STAR_WEIGHT*(3/2 - eps) = 3/4 - 3*eps/4``, the
    upper end ``Q_STAR_WEIGHT*(3/2 - eps) = 7/16``. Both ends are verified
    by direct comparison, along with points just outside.

    Raises
    ------
    AdviceGameOracleError
        If the comparisons contradict the computed endpoints.

    """
    k = Q_STAR_WEIGHT
    c1 = (0.75 - 1.5 * k) / (0.75 - k)
    c2 = 1.5 - 7.0 / (16.0 * k)
    checks = {
        "c1": _beats_classical(c1, strict=False),
        "midpoint": _beats_classical(0.5 * (c1 + c2), strict=True),
        "c2": _beats_classical(c2, strict=False),
        "below": not _beats_classical(c1 - 1e-3, strict=False),
        "above": not _beats_classical(c2 + 1e-3, strict=False),
    }
    if not all(checks.values()):
        raise AdviceGameOracleError(
            "advantage window endpoints fail their direct comparison", details=checks
        )
    return AdvantageWindow(c1=c1, c2=c2)


class QuantumService(AdviceGameService):
    """Service layer for entangled advice and measurement deviations.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="quantum")

    def setup(self) -> Tuple[TwoQubitState, PlayerMeasurements, PlayerMeasurements]:
        return q_star_setup()

    def correlation(
        self,
        state: Optional[TwoQubitState] = None,
        alice: Optional[PlayerMeasurements] = None,
        bob: Optional[PlayerMeasurements] = None,
    ) -> Correlation:
        """Born-rule correlation; omitted arguments come from the optimal strategy."""
        default_state, default_alice, default_bob = q_star_setup()
        return self.client._call(
            born_correlation,
            default_state if state is None else state,
            default_alice if alice is None else alice,
            default_bob if bob is None else bob,
        )

    def payoffs(self, epsilon: Optional[float] = None) -> PayoffPair:
        """Entangled payoffs on the client game, or on the family member ``epsilon``."""
        return self.client._call(entangled_payoffs, self._game_for(epsilon))

    def best_response(
        self, player: Player, epsilon: Optional[float] = None
    ) -> BestResponse:
        """Best deviation of ``player``, checked numerically.

        Raises
        ------
        AdviceGameOracleError
            If the exact and numerical maxima disagree.

        """
        return self.client._call(best_response_max, player, self._game_for(epsilon))

    def certify(self, epsilon: Optional[float] = None) -> EquilibriumReport:
        return self.client._call(verify_q_nash, self._game_for(epsilon))

    def window(self) -> AdvantageWindow:
        return self.client._call(advantage_window)

    def to_measurements(self, params: PovmParams) -> PlayerMeasurements:
        return self.client._call(params_to_measurements, params)

    def to_params(self, measurements: PlayerMeasurements) -> PovmParams:
        return self.client._call(measurements_to_params, measurements)
