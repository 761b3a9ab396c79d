from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pytest

from advicegame._error import AdviceGameValueError
from advicegame.resources import (
    AdviceKind,
    AdviceSource,
    CorrelatedStrategy,
    JointType,
    RunReport,
    SeededRNG,
    build_game,
    pr_box,
    run_simulation,
    sample_action,
)
from advicegame.resources._simulate import CHUNK_ROUNDS

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

ROUNDS = 1_000_000
SAMPLING_SEED = 20_240_611
REFERENCE_STREAM = Path(__file__).parent / "pcg64_reference.csv"


def _sources():
    return [
        AdviceSource.classical(CorrelatedStrategy.point_mass(0, 0)),
        AdviceSource.pr(),
        AdviceSource.quantum(),
    ]


def test_pcg64_reference_stream():
    # first ten raw outputs of PCG64 published alongside numpy
    with open(REFERENCE_STREAM) as handle:
        header, *lines = handle.read().splitlines()
    seed = int(header.split(",")[1], 0)
    expected = [int(line.split(",")[1], 0) for line in lines]
    assert seed == 0xDEADBEAF
    assert len(expected) == 10
    raw = SeededRNG(seed).raw(10)
    assert [int(value) for value in raw] == expected


def test_seeded_rng(seed: int):
    first, second = SeededRNG(seed), SeededRNG(seed)
    np.testing.assert_array_equal(first.random(100), second.random(100))
    np.testing.assert_array_equal(first.integers(4, 100), second.integers(4, 100))
    assert first.seed == seed

    for bad in (-1, 2**64, 1.5):
        with pytest.raises(AdviceGameValueError):
            SeededRNG(bad)


def test_advice_source_payload():
    with pytest.raises(AdviceGameValueError):
        AdviceSource(kind=AdviceKind.CLASSICAL)
    with pytest.raises(AdviceGameValueError):
        AdviceSource(kind=AdviceKind.RAW)
    source = AdviceSource.raw(pr_box())
    np.testing.assert_array_equal(source.conditional().p, pr_box().p)

    # a NaN strategy never reaches the simulation
    with pytest.raises(AdviceGameValueError):
        AdviceSource.classical(CorrelatedStrategy(p=np.full((4, 4), np.nan)))


@pytest.mark.parametrize("eps", [0.0, 0.4, 0.7])
@pytest.mark.parametrize("source", _sources(), ids=lambda s: s.kind.value)
def test_run_converges(eps: float, source: AdviceSource, seed: int):
    game = build_game(eps)
    report = run_simulation(game, source, ROUNDS, seed)
    assert isinstance(report, RunReport)
    assert report.rounds == ROUNDS
    assert report.counts.sum() == ROUNDS
    assert report.abs_error.alice <= 5e-3
    assert report.abs_error.bob <= 5e-3


def test_run_is_deterministic(seed: int):
    game = build_game(0.4)
    source = AdviceSource.quantum()
    first = run_simulation(game, source, 3 * CHUNK_ROUNDS + 17, seed)
    second = run_simulation(game, source, 3 * CHUNK_ROUNDS + 17, seed)
    np.testing.assert_array_equal(first.counts, second.counts)
    assert first.empirical == second.empirical

    other = run_simulation(game, source, 3 * CHUNK_ROUNDS + 17, seed + 1)
    assert not np.array_equal(first.counts, other.counts)


def test_run_respects_support(seed: int):
    # a deterministic profile never produces another action
    source = AdviceSource.classical(CorrelatedStrategy.point_mass(2, 3))
    report = run_simulation(build_game(0.2), source, 10_000, seed)
    expected = source.conditional().p > 0
    assert np.all(report.counts[~expected] == 0)

    # the PR box only produces pairs with the right parity
    report = run_simulation(build_game(0.2), AdviceSource.pr(), 10_000, seed)
    assert np.all(report.counts[pr_box().p == 0] == 0)


def test_run_distribution():
    # empirical frequencies follow the conditional distribution
    source = AdviceSource.quantum()
    report = run_simulation(build_game(0.3), source, 400_000, SAMPLING_SEED)
    frequencies = report.counts / report.counts.sum(axis=1, keepdims=True)
    np.testing.assert_allclose(frequencies, source.conditional().p, atol=1e-2)


def test_run_chi_square():
    # a fixed seed keeps the statistic reproducible across runs
    stats = pytest.importorskip("scipy.stats")
    source = AdviceSource.quantum()
    report = run_simulation(build_game(0.4), source, 100_000, SAMPLING_SEED)
    p = source.conditional().p
    expected = report.counts.sum(axis=1, keepdims=True) * p
    support = p > 0
    assert np.all(report.counts[~support] == 0)
    residual = report.counts[support] - expected[support]
    statistic = np.sum(residual**2 / expected[support])
    dof = int(support.sum()) - 4
    assert stats.chi2.sf(statistic, dof) > 1e-3


def test_run_invalid(seed: int):
    with pytest.raises(AdviceGameValueError):
        run_simulation(build_game(0.1), AdviceSource.pr(), 0, seed)
    with pytest.raises(AdviceGameValueError):
        run_simulation(build_game(0.1), AdviceSource.pr(), 10, -3)


def test_run_logs_summary(seed: int, caplog: pytest.LogCaptureFixture):
    with caplog.at_level(logging.INFO, logger="advicegame.resources._simulate"):
        run_simulation(build_game(0.1), AdviceSource.pr(), 100, seed)
    assert "pr advice, 100 rounds" in caplog.text


def test_sample_action(seed: int):
    source = AdviceSource.classical(CorrelatedStrategy.point_mass(3, 1))
    rng = SeededRNG(seed)
    for index in range(4):
        joint_type = JointType.from_index(index)
        action = sample_action(source, joint_type, rng)
        # alice flips her type bit, bob always answers 1
        assert action.y_a == 1 - joint_type.x_a
        assert action.y_b == 1

    rng = SeededRNG(seed)
    for _ in range(20):
        action = sample_action(AdviceSource.pr(), JointType(x_a=1, x_b=1), rng)
        assert action.y_a ^ action.y_b == 1


def test_simulation_service(client: AdviceGame, seed: int):
    report = client.simulation.run(AdviceSource.pr(), rounds=50_000, seed=seed)
    assert report.analytic.alice == pytest.approx(0.5 * (1.5 - client.epsilon))
    assert report.abs_error.alice <= 2e-2

    action = client.simulation.sample_action(
        AdviceSource.classical(CorrelatedStrategy.point_mass(0, 1)),
        JointType(x_a=1, x_b=0),
        seed,
    )
    assert (action.y_a, action.y_b) == (0, 1)

    dumped = report.model_dump(mode="json")
    assert len(dumped["counts"]) == 4

    with pytest.raises(AdviceGameValueError):
        client.simulation.run(AdviceSource.pr(), rounds=-1, seed=seed)
