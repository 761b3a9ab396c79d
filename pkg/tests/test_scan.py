from __future__ import annotations

import json
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
import pytest

from advicegame._error import (
    AdviceGameDomainError,
    AdviceGameNotFoundError,
    AdviceGameValueError,
)
from advicegame.resources import Records, ScanFormat, ScanRow
from advicegame.resources._quantum import Q_STAR_WEIGHT
from advicegame.resources._scan import (
    SCAN_COLUMNS,
    read_scan,
    scan,
    scan_grid,
    scan_row,
    write_scan,
)

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

EXPECTED_COLUMNS = [
    "epsilon",
    "pure_alice_max",
    "pure_bob_max",
    "bound_alice_eq5",
    "bound_bob_eq6",
    "ce_alice_lp",
    "ce_bob_lp",
    "pr_alice",
    "pr_bob",
    "pr_nash",
    "q_alice",
    "q_bob",
    "q_nash",
    "in_theorem2_window",
]


@pytest.fixture(scope="module")
def full_scan():
    return scan(0.0, 0.75, 0.01)


def test_scan_columns():
    assert SCAN_COLUMNS == EXPECTED_COLUMNS


def test_scan_grid():
    grid = scan_grid(0.0, 0.75, 0.01)
    assert len(grid) == 76
    assert grid[0] == 0.0
    assert grid[-1] == 0.75
    assert grid[40] == 0.4
    assert scan_grid(0.1, 0.2, 0.05) == [0.1, 0.15, 0.2]

    with pytest.raises(AdviceGameDomainError):
        scan_grid(0.5, 0.2, 0.01)
    with pytest.raises(AdviceGameDomainError):
        scan_grid(0.0, 0.8, 0.01)
    with pytest.raises(AdviceGameDomainError):
        scan_grid(0.0, 0.5, 0.0)


def test_scan_row_values():
    row = scan_row(0.4)
    assert row.epsilon == 0.4
    # best pure equilibria are (S1, S1) for alice and (S3, S4) for bob
    assert row.pure_alice_max == pytest.approx(0.75 * 0.6)
    assert row.pure_bob_max == pytest.approx(9 / 16 + 0.2)
    assert row.bound_alice == pytest.approx(11 / 16 - 0.2)
    assert row.pr_alice == pytest.approx(0.55)
    assert row.q_alice == pytest.approx(0.469454, abs=1e-6)
    assert row.pr_nash
    assert row.q_nash
    assert row.in_advantage_window


def test_scan_row_rejects_non_finite():
    values = scan_row(0.1).model_dump()
    values["q_bob"] = float("nan")
    with pytest.raises(AdviceGameValueError):
        ScanRow.model_validate(values)


def test_scan_invariants(full_scan):
    assert len(full_scan) == 76
    for row in full_scan:
        # pure equilibria are correlated equilibria; bounds cap every one of them
        assert row.pure_alice_max <= row.ce_alice_lp + 1e-9
        assert row.pure_bob_max <= row.ce_bob_lp + 1e-9
        assert row.ce_alice_lp <= row.bound_alice + 1e-9
        assert row.ce_bob_lp <= row.bound_bob + 1e-9
        q_sum = row.q_alice + row.q_bob
        assert q_sum == pytest.approx(3 * Q_STAR_WEIGHT, abs=1e-12)
        assert row.pr_alice + row.pr_bob == pytest.approx(1.5, abs=1e-10)
        assert row.q_nash
        assert row.pr_nash == (row.epsilon <= 0.625)


def test_scan_window_rows(full_scan):
    inside = [row.epsilon for row in full_scan if row.in_advantage_window]
    assert inside == [round(0.34 + 0.01 * k, 2) for k in range(14)]
    for row in full_scan:
        if row.in_advantage_window:
            assert row.q_alice > row.ce_alice_lp
            assert row.q_bob > row.ce_bob_lp


def test_scan_csv_round_trip(full_scan, tmp_path):
    path = tmp_path / "scan.csv"
    write_scan(full_scan, path)
    comment, header = path.read_text().splitlines()[:2]
    assert comment == "# advicegame scan v1: " + ",".join(EXPECTED_COLUMNS)
    assert header == ",".join(EXPECTED_COLUMNS)

    df = pd.read_csv(path, comment="#")
    assert list(df.columns) == EXPECTED_COLUMNS
    assert len(df) == 76

    restored = read_scan(path)
    assert restored == full_scan


def test_scan_json(full_scan, tmp_path):
    path = tmp_path / "scan.json"
    write_scan(full_scan[:3], path, ScanFormat.JSON)
    rows = json.loads(path.read_text())
    assert [row["epsilon"] for row in rows] == [0.0, 0.01, 0.02]
    assert list(rows[0]) == EXPECTED_COLUMNS


def test_records_round_trip(tmp_path):
    records = Records(
        data=[{"a": 0.1, "b": True}, {"a": 1 / 3, "b": False}], columns=["a", "b"]
    )
    assert records.total == 2
    path = tmp_path / "records.csv"
    records.to_csv(path, comment="two rows")
    restored = Records.read_csv(path)
    assert restored.columns == ["a", "b"]
    assert restored.data[1]["b"] is False
    assert restored.data[1]["a"] == pytest.approx(1 / 3, rel=1e-11)
    assert Records.model_validate([{"a": 1}]).total == 1


def test_scan_service(client: AdviceGame, tmp_path):
    rows = client.scan.run(0.3, 0.5, 0.1)
    assert [row.epsilon for row in rows] == [0.3, 0.4, 0.5]
    df = client.scan.to_df(rows)
    assert list(df.columns) == EXPECTED_COLUMNS
    assert df["in_theorem2_window"].tolist() == [False, True, False]
    assert client.scan.row().epsilon == client.epsilon

    path = tmp_path / "service.csv"
    client.scan.write(rows, path)
    assert client.scan.read(path) == rows

    with pytest.raises(AdviceGameNotFoundError):
        client.scan.read(tmp_path / "missing.csv")
    with pytest.raises(AdviceGameDomainError):
        client.scan.run(0.5, 0.3, 0.1)
    assert np.isclose(df["epsilon"].max(), 0.5)
