from __future__ import annotations

import json
import logging
from typing import TYPE_CHECKING

import numpy as np
import pytest

from advicegame._error import (
    AdviceGameDomainError,
    AdviceGameNotFoundError,
    AdviceGameValueError,
)
from advicegame.resources import (
    Correlation,
    JointAction,
    JointType,
    Player,
    UtilityTable,
    average_payoffs,
    build_game,
    chsh_functional,
    chsh_value,
    correlators,
    is_no_signaling,
    load_game,
    ns_vertices,
    payoff_functional,
    payoff_sum_from_chsh,
    pr_box,
)
from advicegame.resources._quantum import Q_STAR_WEIGHT, born_correlation, q_star_setup
from tests.faker import random_json_name
from tests.utils.oracle import random_correlation

if TYPE_CHECKING:
    from advicegame._client import AdviceGame


def test_build_game_entries():
    eps = 0.3
    game = build_game(eps)
    # coordination for every joint type but (1, 1)
    for x in range(3):
        np.testing.assert_allclose(game.u_a[x], [1 - eps, 0, 0, 0.5])
        np.testing.assert_allclose(game.u_b[x], [0.5 + eps, 0, 0, 1])
    np.testing.assert_allclose(game.u_a[3], [0, 0.75, 0.75 - eps, 0])
    np.testing.assert_allclose(game.u_b[3], [0, 0.75, 0.75 + eps, 0])
    assert game.epsilon == eps

    x = JointType(x_a=1, x_b=1)
    y = JointAction(y_a=1, y_b=0)
    assert game.utility(Player.BOB, x, y) == pytest.approx(0.75 + eps)


@pytest.mark.parametrize("eps", [-0.01, 0.76, float("nan"), "abc"])
def test_build_game_out_of_domain(eps):
    with pytest.raises(AdviceGameDomainError) as excinfo:
        build_game(eps)
    assert "epsilon" in str(excinfo.value)


def test_build_game_endpoints():
    assert build_game(0.0).u_a[0, 0] == 1.0
    assert build_game(0.75).u_b[3, 2] == 1.5


def test_joint_indices():
    for index in range(4):
        assert JointType.from_index(index).index == index
        assert JointAction.from_index(index).index == index
    assert str(JointType(x_a=1, x_b=0)) == "x=(1,0)"


def test_game_is_read_only():
    game = build_game(0.2)
    with pytest.raises(ValueError):
        game.u_a[0, 0] = 2.0


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_correlation_rejects_non_finite(bad: float):
    with pytest.raises(AdviceGameValueError):
        Correlation(p=np.full((4, 4), bad))

    p = np.full((4, 4), 0.25)
    p[2] = [bad, 0.5, 0.5, 0.0]
    with pytest.raises(AdviceGameValueError) as excinfo:
        Correlation(p=p)
    assert "x=(1,0)" in str(excinfo.value)


def test_correlation_invalid():
    # a row for x=(1,0) that sums to 0.9
    p = np.full((4, 4), 0.25)
    p[2] = [0.3, 0.3, 0.2, 0.1]
    with pytest.raises(AdviceGameValueError) as excinfo:
        Correlation(p=p)
    assert "x=(1,0)" in str(excinfo.value)

    # negative entries are rejected even when the row sums to 1
    p = np.full((4, 4), 0.25)
    p[0] = [0.5, 0.5, 0.5, -0.5]
    with pytest.raises(AdviceGameValueError):
        Correlation(p=p)

    # wrong shape
    with pytest.raises(ValueError):
        Correlation(p=np.full((4, 3), 1 / 3))


def test_average_payoffs_pr_box():
    eps = 0.35
    payoffs = average_payoffs(build_game(eps), pr_box())
    assert payoffs.alice == pytest.approx(0.5 * (1.5 - eps), abs=1e-15)
    assert payoffs.bob == pytest.approx(0.5 * (1.5 + eps), abs=1e-15)
    assert payoffs.total == pytest.approx(1.5)


def test_payoff_functional_matches_average(rng: np.random.Generator):
    game = build_game(0.6)
    corr = random_correlation(rng)
    payoffs = average_payoffs(game, corr)
    for player in Player:
        value = float(np.sum(payoff_functional(game, player) * corr.p))
        assert value == pytest.approx(payoffs.for_player(player), abs=1e-15)


def test_chsh_identity(rng: np.random.Generator, epsilon_grid: np.ndarray):
    # holds for every normalized correlation, signaling or not
    correlations = [random_correlation(rng) for _ in range(1000)]
    worst = 0.0
    for eps in epsilon_grid:
        game = build_game(eps)
        for corr in correlations:
            payoffs = average_payoffs(game, corr)
            expected = payoff_sum_from_chsh(chsh_value(corr))
            worst = max(worst, abs(payoffs.total - expected))
    assert worst <= 1e-10


def test_chsh_values():
    assert chsh_value(pr_box()) == pytest.approx(4.0)
    np.testing.assert_allclose(correlators(pr_box()), [1, 1, 1, -1])
    functional = chsh_functional()
    assert functional.shape == (4, 4)
    # every coefficient is +1 or -1
    np.testing.assert_array_equal(np.abs(functional), np.ones((4, 4)))
    assert float(np.sum(functional * pr_box().p)) == pytest.approx(4.0)

    state, alice, bob = q_star_setup()
    assert chsh_value(born_correlation(state, alice, bob)) == pytest.approx(
        2 * np.sqrt(2), abs=1e-12
    )
    assert payoff_sum_from_chsh(2 * np.sqrt(2)) == pytest.approx(3 * Q_STAR_WEIGHT)

    local = [v.correlation for v in ns_vertices()[:16]]
    assert max(abs(chsh_value(c)) for c in local) == pytest.approx(2.0)
    assert payoff_sum_from_chsh(2.0) == pytest.approx(9 / 8)


def test_payoff_sum_from_chsh_out_of_range(caplog: pytest.LogCaptureFixture):
    with caplog.at_level(logging.WARNING, logger="advicegame.resources._game"):
        assert payoff_sum_from_chsh(5.0) == pytest.approx(27 / 16)
    assert "outside the algebraic range" in caplog.text


def test_no_signaling():
    assert is_no_signaling(pr_box())
    assert pr_box().no_signaling

    # bob answers with alice's type bit
    p = np.zeros((4, 4))
    for x in range(4):
        p[x, x >> 1] = 1.0
    assert not is_no_signaling(Correlation(p=p))


def test_mixture():
    mixed = Correlation.mixture([pr_box(0, 0, 0), pr_box(0, 0, 1)], [0.5, 0.5])
    np.testing.assert_allclose(mixed.p, np.full((4, 4), 0.25))
    assert chsh_value(mixed) == pytest.approx(0.0)


def test_game_json(tmp_path):
    game = build_game(0.45)
    dumped = game.to_json_dict()
    assert set(dumped) == {"players", "types", "actions", "u_A", "u_B"}

    path = tmp_path / "game.json"
    path.write_text(json.dumps({**dumped, "epsilon": 0.45}))
    loaded = load_game(path)
    assert isinstance(loaded, UtilityTable)
    np.testing.assert_array_equal(loaded.u_a, game.u_a)
    np.testing.assert_array_equal(loaded.u_b, game.u_b)
    # a file never identifies a family member
    assert loaded.epsilon is None


def test_game_load_invalid(client: AdviceGame, tmp_path):
    with pytest.raises(AdviceGameNotFoundError):
        client.game.load(tmp_path / random_json_name())

    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(AdviceGameValueError):
        client.game.load(path)

    path = tmp_path / "short.json"
    path.write_text(json.dumps({"u_A": [[0.0] * 4] * 3, "u_B": [[0.0] * 4] * 4}))
    with pytest.raises(AdviceGameValueError):
        client.game.load(path)


def test_game_to_df():
    df = build_game(0.1).to_df(Player.ALICE)
    assert df.shape == (4, 4)
    assert list(df.index) == ["x=(0,0)", "x=(0,1)", "x=(1,0)", "x=(1,1)"]
    assert list(df.columns) == ["y=(0,0)", "y=(0,1)", "y=(1,0)", "y=(1,1)"]
    assert df.loc["x=(1,1)", "y=(0,1)"] == 0.75


def test_game_service(client: AdviceGame):
    assert client.game.build().epsilon == client.epsilon
    payoffs = client.game.payoffs(pr_box())
    assert payoffs.alice == pytest.approx(0.5 * (1.5 - client.epsilon))
    assert client.game.chsh(pr_box()) == pytest.approx(4.0)
    assert client.game.to_json()["u_A"][0][0] == pytest.approx(1 - client.epsilon)

    with pytest.raises(AdviceGameDomainError):
        client.game.build(epsilon=1.0)
