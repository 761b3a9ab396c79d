from __future__ import annotations

import enum
import logging
import math
import os
from typing import TYPE_CHECKING, Any, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import Field, model_validator
from tqdm import tqdm

from advicegame._error import AdviceGameDomainError, AdviceGameValueError
from advicegame._service import AdviceGameService
from advicegame.resources._correlated import classical_payoff_bounds, max_ce_payoff
from advicegame.resources._game import EPSILON_MAX, EPSILON_MIN, Player, build_game
from advicegame.resources._model import BaseModel
from advicegame.resources._nosignaling import pr_star_payoffs, verify_pr_nash
from advicegame.resources._quantum import (
    AdvantageWindow,
    advantage_window,
    q_star_payoffs,
    verify_q_nash,
)
from advicegame.resources._record import Records
from advicegame.resources._strategy import pure_nash_profiles, pure_payoff_matrices

if TYPE_CHECKING:
    from advicegame._client import AdviceGame

logger = logging.getLogger(__name__)

SCAN_FORMAT_VERSION = 1
SIGNIFICANT_DIGITS = 12


class ScanFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


def _round(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


class ScanRow(BaseModel):
    """Every headline quantity of one family member, rounded to 12 significant digits.

    Files use the column aliases; attributes keep the field names.
    """

    epsilon: float
    pure_alice_max: float
    pure_bob_max: float
    bound_alice: float = Field(alias="bound_alice_eq5")
    bound_bob: float = Field(alias="bound_bob_eq6")
    ce_alice_lp: float
    ce_bob_lp: float
    pr_alice: float
    pr_bob: float
    pr_nash: bool
    q_alice: float
    q_bob: float
    q_nash: bool
    in_advantage_window: bool = Field(alias="in_theorem2_window")

    @model_validator(mode="before")
    @classmethod
    def round_floats(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        rounded = {}
        for key, value in data.items():
            if hasattr(value, "item"):
                value = value.item()
            if isinstance(value, float):
                if not math.isfinite(value):
                    raise AdviceGameValueError(
                        f"scan value {key} is not finite: {value}"
                    )
                value = _round(value)
            rounded[key] = value
        return rounded


SCAN_COLUMNS: List[str] = [
    field.alias or name for name, field in ScanRow.model_fields.items()
]


def scan_grid(start: float, stop: float, step: float) -> List[float]:
    """Grid points ``start, start + step, ...`` up to ``stop`` inclusive."""
    if not (EPSILON_MIN <= start < stop <= EPSILON_MAX):
        raise AdviceGameDomainError(
            f"scan range must satisfy {EPSILON_MIN} <= from < to <= {EPSILON_MAX}, "
            f"got [{start}, {stop}]"
        )
    if not step > 0:
        raise AdviceGameDomainError(f"scan step must be positive, got {step}")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [
        min(round(start + k * step, SIGNIFICANT_DIGITS), stop) for k in range(count)
    ]


def scan_row(eps: float, window: Optional[AdvantageWindow] = None) -> ScanRow:
    """Computes one scan row; pass ``window`` to avoid recomputing it per row."""
    if window is None:
        window = advantage_window()
    game = build_game(eps)
    alice, bob = pure_payoff_matrices(game)
    nash = tuple(np.array(pure_nash_profiles(game)).T)
    bounds = classical_payoff_bounds(eps)
    pr = pr_star_payoffs(eps)
    q = q_star_payoffs(eps)
    return ScanRow(
        epsilon=eps,
        pure_alice_max=alice[nash].max(),
        pure_bob_max=bob[nash].max(),
        bound_alice=bounds.alice_bound,
        bound_bob=bounds.bob_bound,
        ce_alice_lp=max_ce_payoff(game, Player.ALICE, lexicographic=False).value,
        ce_bob_lp=max_ce_payoff(game, Player.BOB, lexicographic=False).value,
        pr_alice=pr.alice,
        pr_bob=pr.bob,
        pr_nash=verify_pr_nash(eps).is_equilibrium,
        q_alice=q.alice,
        q_bob=q.bob,
        q_nash=verify_q_nash(eps, numeric=False).is_equilibrium,
        in_advantage_window=window.contains(eps),
    )


def scan(
    start: float, stop: float, step: float, progress: bool = False
) -> List[ScanRow]:
    """Computes one row per grid point over ``[start, stop]``.

    Best responses use the exact maximum only; the numerical search is left
    to single-point certification.
    """
    grid = scan_grid(start, stop, step)
    window = advantage_window()
    rows = [
        scan_row(eps, window)
        for eps in tqdm(grid, desc="scanning", unit="eps", disable=not progress)
    ]
    logger.info("scanned %d values of epsilon in [%g, %g]", len(rows), start, stop)
    return rows


def scan_records(rows: List[ScanRow]) -> Records:
    return Records(
        data=[row.model_dump(by_alias=True) for row in rows], columns=SCAN_COLUMNS
    )


def write_scan(
    rows: List[ScanRow],
    path: Union[str, os.PathLike],
    fmt: ScanFormat = ScanFormat.CSV,
) -> None:
    """Writes rows as CSV with a versioned ``#`` header line, or as JSON."""
    records = scan_records(rows)
    if fmt is ScanFormat.CSV:
        records.to_csv(
            path,
            comment=f"advicegame scan v{SCAN_FORMAT_VERSION}: {','.join(SCAN_COLUMNS)}",
        )
    else:
        records.to_json(path)
    logger.info("wrote %d scan rows to %s", len(rows), path)


def read_scan(path: Union[str, os.PathLike]) -> List[ScanRow]:
    return [ScanRow.model_validate(row) for row in Records.read_csv(path).data]


class ScanService(AdviceGameService):
    """Service layer for epsilon scans.

    Attributes
    ----------
    client: AdviceGame
        The client holding the default epsilon and game.

    """

    def __init__(self, client: AdviceGame) -> None:
        super().__init__(client=client, tag="scan")

    def row(self, epsilon: Optional[float] = None) -> ScanRow:
        return self.client._call(scan_row, self._family_epsilon(epsilon))

    def run(
        self, start: float, stop: float, step: float, progress: bool = False
    ) -> List[ScanRow]:
        """Scans ``[start, stop]`` with the given step.

        Raises
        ------
        AdviceGameDomainError
            If the range or step is invalid.

        """
        return self.client._call(scan, start, stop, step, progress)

    def to_df(self, rows: List[ScanRow]) -> pd.DataFrame:
        return scan_records(rows).to_df()

    def write(
        self,
        rows: List[ScanRow],
        path: Union[str, os.PathLike],
        fmt: ScanFormat = ScanFormat.CSV,
    ) -> None:
        """Writes scan rows to ``path``.

        Raises
        ------
        AdviceGamePermissionError
            If ``path`` is not writable.
        AdviceGameIOError
            If writing fails otherwise.

        """
        return self.client._call(write_scan, rows, path, fmt)

    def read(self, path: Union[str, os.PathLike]) -> List[ScanRow]:
        return self.client._call(read_scan, path)
