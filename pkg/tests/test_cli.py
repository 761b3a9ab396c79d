from __future__ import annotations

import json

import numpy as np
import pytest

import advicegame._cli as cli_module
from advicegame._cli import (
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from advicegame._client import EPSILON_ENV
from advicegame.resources import build_game
from advicegame.resources._scan import read_scan
from tests.utils.game import answer_one_game, unlabelled_family_game, write_game


@pytest.fixture(autouse=True)
def no_epsilon_env(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv(EPSILON_ENV, raising=False)


def _run_json(capsys: pytest.CaptureFixture, argv: list) -> dict:
    assert main(argv + ["--json"]) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_table(capsys: pytest.CaptureFixture):
    assert main(["table", "--epsilon", "0.4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "u_alice" in out
    assert "u_bob" in out

    dumped = _run_json(capsys, ["table", "--epsilon", "0.4"])
    np.testing.assert_allclose(dumped["u_A"], build_game(0.4).u_a)
    assert dumped["players"] == 2
    assert "epsilon" not in dumped


def test_table_from_game_file(capsys: pytest.CaptureFixture, tmp_path):
    dumped = _run_json(capsys, ["table", "--epsilon", "0.7"])
    path = tmp_path / "game.json"
    path.write_text(json.dumps(dumped))

    loaded = _run_json(capsys, ["table", "--game-file", str(path)])
    assert loaded == dumped

    assert main(["equilibria", "--game-file", str(path)]) == EXIT_OK
    assert "(S1,S1), (S2,S4), (S4,S3)" in capsys.readouterr().out


def test_equilibria_pure(capsys: pytest.CaptureFixture):
    assert main(["equilibria", "--epsilon", "0.4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "pure Nash equilibria: (S1,S1), (S3,S4), (S4,S2)" in out

    dumped = _run_json(capsys, ["equilibria", "--epsilon", "0.1"])
    assert dumped["equilibria"] == ["(S1,S3)", "(S3,S4)", "(S4,S2)"]
    assert len(dumped["table"]) == 16


def test_equilibria_correlated(capsys: pytest.CaptureFixture):
    dumped = _run_json(
        capsys, ["equilibria", "--class", "correlated", "--epsilon", "0.4"]
    )
    assert set(dumped) == {"alice", "bob"}
    witness = np.array(dumped["bob"]["witness"]["p"])
    assert witness.shape == (4, 4)
    assert witness.sum() == pytest.approx(1.0)

    assert main(["equilibria", "--class", "correlated"]) == EXIT_OK
    assert "best correlated equilibrium for alice" in capsys.readouterr().out


def test_bound(capsys: pytest.CaptureFixture):
    dumped = _run_json(capsys, ["bound", "--epsilon", "0.4"])
    assert dumped["bound_alice"] == pytest.approx(11 / 16 - 0.2)
    assert dumped["tightened_alice_bound"] == pytest.approx(0.45)
    assert dumped["bob_never_plays_s3"] is True
    assert dumped["ce_alice_lp"] <= dumped["tightened_alice_bound"] + 1e-9

    dumped = _run_json(capsys, ["bound", "--epsilon", "0.1"])
    assert dumped["tightened_alice_bound"] is None
    assert dumped["bob_never_plays_s3"] is None

    assert main(["bound", "--epsilon", "0.6"]) == EXIT_OK
    assert "n/a" in capsys.readouterr().out


def test_certify_pr(capsys: pytest.CaptureFixture):
    dumped = _run_json(capsys, ["certify", "--advice", "pr", "--epsilon", "0.4"])
    assert dumped["payoffs"]["alice"] == pytest.approx(0.55)
    assert dumped["report"]["is_equilibrium"] is True

    assert main(["certify", "--advice", "pr", "--epsilon", "0.75"]) == EXIT_NEGATIVE
    out = capsys.readouterr().out
    assert "not a Nash equilibrium" in out
    assert "alice deviates to local" in out


def test_certify_quantum(capsys: pytest.CaptureFixture):
    dumped = _run_json(capsys, ["certify", "--advice", "quantum", "--epsilon", "0.4"])
    assert dumped["payoffs"]["alice"] == pytest.approx(0.469454, abs=1e-6)
    assert dumped["payoffs"]["bob"] == pytest.approx(0.810876, abs=1e-6)
    assert dumped["in_advantage_window"] is True
    assert dumped["advantage_window"][0] == pytest.approx(0.339811, abs=1e-6)

    assert main(["certify", "--advice", "quantum", "--epsilon", "0.1"]) == EXIT_OK
    assert "in_advantage_window: False" in capsys.readouterr().out


def test_certify_custom_game(capsys: pytest.CaptureFixture, tmp_path):
    path = write_game(tmp_path / "answer_one.json", answer_one_game())
    argv = ["--game-file", path]

    assert main(["certify", "--advice", "pr", "--json"] + argv) == EXIT_NEGATIVE
    dumped = json.loads(capsys.readouterr().out)
    assert dumped["epsilon"] is None
    assert dumped["payoffs"] == pytest.approx({"alice": 0.5, "bob": 0.5})
    assert dumped["report"]["alice_gain"] == pytest.approx(0.5)
    assert dumped["report"]["best_alice_deviation"].startswith("local(S2")

    assert main(["certify", "--advice", "quantum", "--json"] + argv) == EXIT_NEGATIVE
    dumped = json.loads(capsys.readouterr().out)
    assert dumped["alice_best_response"] == pytest.approx(1.0, abs=1e-9)
    assert "advantage_window" not in dumped

    assert main(["certify", "--advice", "pr"] + argv) == EXIT_NEGATIVE
    assert "pr advice on the loaded game" in capsys.readouterr().out


def test_certify_loaded_family_game(capsys: pytest.CaptureFixture, tmp_path):
    # loaded games are judged on their own utilities
    above = write_game(tmp_path / "above.json", unlabelled_family_game(0.7))
    assert main(["certify", "--advice", "pr", "--game-file", above]) == EXIT_NEGATIVE
    below = write_game(tmp_path / "below.json", unlabelled_family_game(0.4))
    assert main(["certify", "--advice", "pr", "--game-file", below]) == EXIT_OK
    capsys.readouterr()


def test_bound_rejects_custom_game(capsys: pytest.CaptureFixture, tmp_path):
    path = write_game(tmp_path / "answer_one.json", answer_one_game())
    assert main(["bound", "--game-file", path]) == EXIT_USAGE
    assert "epsilon family" in capsys.readouterr().err


def test_simulate(capsys: pytest.CaptureFixture):
    argv = ["simulate", "--advice", "pr", "--rounds", "2000", "--seed", "11"]
    first = _run_json(capsys, argv + ["--epsilon", "0.2"])
    second = _run_json(capsys, argv + ["--epsilon", "0.2"])
    assert first == second
    assert first["rounds"] == 2000
    assert first["seed"] == 11

    assert main(argv) == EXIT_OK
    assert "pr advice, 2000 rounds, seed 11" in capsys.readouterr().out


def test_simulate_classical(capsys: pytest.CaptureFixture, tmp_path):
    path = tmp_path / "strategy.json"
    p = np.zeros((4, 4))
    p[0, 0] = 1.0
    path.write_text(json.dumps(p.tolist()))
    argv = ["simulate", "--advice", "classical", "--rounds", "500"]
    dumped = _run_json(capsys, argv + ["--strategy-file", str(path)])
    # (S1, S1) always plays (0, 0)
    assert sum(row[0] for row in dumped["counts"]) == 500

    assert main(argv) == EXIT_USAGE
    assert "--strategy-file" in capsys.readouterr().err

    path.write_text("not json")
    assert main(argv + ["--strategy-file", str(path)]) == EXIT_USAGE
    missing = str(tmp_path / "missing.json")
    assert main(argv + ["--strategy-file", missing]) == EXIT_IO


def test_vertices(capsys: pytest.CaptureFixture):
    assert main(["vertices"]) == EXIT_OK
    vertices = json.loads(capsys.readouterr().out)
    assert len(vertices) == 24
    assert vertices[16]["label"] == "pr(0,0,0)"
    assert vertices[0]["kind"] == "local"


def test_scan(capsys: pytest.CaptureFixture, tmp_path):
    out = tmp_path / "scan.csv"
    argv = ["scan", "--from", "0.3", "--to", "0.5", "--step", "0.1"]
    assert main(argv + ["--out", str(out)]) == EXIT_OK
    assert "wrote 3 rows" in capsys.readouterr().out
    rows = read_scan(out)
    assert [row.in_advantage_window for row in rows] == [False, True, False]

    json_out = tmp_path / "scan.json"
    assert main(argv + ["--out", str(json_out), "--format", "json"]) == EXIT_OK
    assert len(json.loads(json_out.read_text())) == 3

    missing_dir = tmp_path / "missing" / "scan.csv"
    assert main(argv + ["--out", str(missing_dir)]) == EXIT_IO
    assert main(["scan", "--from", "0.5", "--to", "0.3", "--out", str(out)]) == (
        EXIT_USAGE
    )


def test_errors(capsys: pytest.CaptureFixture, tmp_path, monkeypatch):
    assert main(["table", "--epsilon", "0.9"]) == EXIT_USAGE
    assert "epsilon" in capsys.readouterr().err

    missing = str(tmp_path / "missing.json")
    assert main(["table", "--game-file", missing]) == EXIT_IO

    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"u_A": [[0.0] * 4] * 4}))
    assert main(["table", "--game-file", str(broken)]) == EXIT_USAGE

    monkeypatch.setenv(EPSILON_ENV, "abc")
    assert main(["table"]) == EXIT_USAGE

    with pytest.raises(SystemExit) as excinfo:
        main(["certify"])
    assert excinfo.value.code == 2


def test_unexpected_errors_are_internal(capsys: pytest.CaptureFixture, monkeypatch):
    def fail(client, args):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli_module, "cmd_table", fail)
    assert main(["table"]) == EXIT_INTERNAL
    assert "internal error" in capsys.readouterr().err


def test_epsilon_from_environment(capsys: pytest.CaptureFixture, monkeypatch):
    monkeypatch.setenv(EPSILON_ENV, "0.7")
    dumped = _run_json(capsys, ["equilibria"])
    assert dumped["equilibria"] == ["(S1,S1)", "(S2,S4)", "(S4,S3)"]
