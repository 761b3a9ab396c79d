"""Dense two-phase simplex for the small linear programs of this package.

Problems have the form ``optimize c @ x`` subject to ``a_ub @ x <= b_ub``,
``a_eq @ x == b_eq`` and ``x >= 0``. Pivoting follows Bland's rule, so the
method terminates on degenerate problems.
"""

from __future__ import annotations

import enum
import logging
from typing import List, Optional

import numpy as np
from pydantic import field_serializer

from advicegame._error import AdviceGameInternalError, AdviceGameValueError
from advicegame._tolerance import LP_TOLERANCE
from advicegame.resources._model import BaseModel

logger = logging.getLogger(__name__)

MAX_PIVOTS = 10_000


class LinearProgramStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LinearProgramResult(BaseModel):
    status: LinearProgramStatus
    value: Optional[float] = None
    x: Optional[np.ndarray] = None
    pivots: int = 0

    @field_serializer("x")
    def serialize_solution(self, value: Optional[np.ndarray]) -> Optional[List[float]]:
        return None if value is None else value.tolist()

    @property
    def is_optimal(self) -> bool:
        return self.status is LinearProgramStatus.OPTIMAL


class _Tableau:
    """Constraint rows ``table @ z == rhs`` with one basic column per row."""

    def __init__(self, table: np.ndarray, rhs: np.ndarray, basis: List[int]) -> None:
        self.table = table
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, row: int, column: int) -> None:
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise AdviceGameInternalError(
                f"simplex did not terminate within {MAX_PIVOTS} pivots"
            )
        scale = self.table[row, column]
        self.table[row] /= scale
        self.rhs[row] /= scale
        for other in range(self.table.shape[0]):
            if other != row and self.table[other, column] != 0.0:
                factor = self.table[other, column]
                self.table[other] -= factor * self.table[row]
                self.rhs[other] -= factor * self.rhs[row]
        self.basis[row] = column

    def minimize(self, cost: np.ndarray, columns: np.ndarray) -> LinearProgramStatus:
        """Runs simplex iterations over the allowed ``columns`` for ``min cost @ z``."""
        while True:
            reduced = cost[columns] - cost[self.basis] @ self.table[:, columns]
            entering = np.flatnonzero(reduced < -LP_TOLERANCE)
            if entering.size == 0:
                return LinearProgramStatus.OPTIMAL
            # smallest index enters
            column = int(columns[entering[0]])

            candidates = np.flatnonzero(self.table[:, column] > LP_TOLERANCE)
            if candidates.size == 0:
                return LinearProgramStatus.UNBOUNDED
            ratios = self.rhs[candidates] / self.table[candidates, column]
            ties = candidates[ratios <= ratios.min() + LP_TOLERANCE]
            # smallest basic index leaves
            row = int(min(ties, key=lambda r: self.basis[r]))
            self.pivot(row, column)

    def drop_row(self, row: int) -> None:
        self.table = np.delete(self.table, row, axis=0)
        self.rhs = np.delete(self.rhs, row)
        del self.basis[row]


def _as_matrix(a: Optional[np.ndarray], n: int, name: str) -> np.ndarray:
    if a is None:
        return np.zeros((0, n))
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.shape[1] != n:
        raise AdviceGameValueError(
            f"{name} has {a.shape[1]} columns but the objective has {n} variables"
        )
    return a


def _as_vector(b: Optional[np.ndarray], m: int, name: str) -> np.ndarray:
    if b is None:
        b = np.zeros(0)
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape != (m,):
        raise AdviceGameValueError(f"{name} must have {m} entries, got {b.shape[0]}")
    return b


def solve_lp(
    c: np.ndarray,
    a_ub: Optional[np.ndarray] = None,
    b_ub: Optional[np.ndarray] = None,
    a_eq: Optional[np.ndarray] = None,
    b_eq: Optional[np.ndarray] = None,
    maximize: bool = True,
) -> LinearProgramResult:
    """Solves a linear program over nonnegative variables.

    Parameters
    ----------
    c: array_like
        Objective coefficients.
    a_ub, b_ub: array_like, optional
        Inequality constraints ``a_ub @ x <= b_ub``.
    a_eq, b_eq: array_like, optional
        Equality constraints ``a_eq @ x == b_eq``.
    maximize: bool, default True
        Whether to maximize instead of minimize the objective.

    Returns
    -------
    LinearProgramResult
        Status, optimal value and solution. Value and solution are only set
        when the status is ``OPTIMAL``.

    Raises
    ------
    AdviceGameValueError
        If the constraint shapes do not match the objective.
    AdviceGameInternalError
        If the pivot limit is exceeded.

    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n = c.shape[0]
    a_ub = _as_matrix(a_ub, n, "a_ub")
    b_ub = _as_vector(b_ub, a_ub.shape[0], "b_ub")
    a_eq = _as_matrix(a_eq, n, "a_eq")
    b_eq = _as_vector(b_eq, a_eq.shape[0], "b_eq")
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq

    # columns: original variables, one slack per inequality, then artificials
    rows = np.zeros((m, n + m_ub))
    rows[:m_ub, :n] = a_ub
    rows[:m_ub, n:] = np.eye(m_ub)
    rows[m_ub:, :n] = a_eq
    rhs = np.concatenate([b_ub, b_eq])
    negative = rhs < 0
    rows[negative] *= -1.0
    rhs[negative] *= -1.0

    needs_artificial = [i for i in range(m) if i >= m_ub or negative[i]]
    artificial = np.zeros((m, len(needs_artificial)))
    basis = []
    for i in range(m):
        if i in needs_artificial:
            k = needs_artificial.index(i)
            artificial[i, k] = 1.0
            basis.append(n + m_ub + k)
        else:
            basis.append(n + i)
    tableau = _Tableau(np.hstack([rows, artificial]), rhs, basis)
    total = tableau.table.shape[1]
    first_artificial = n + m_ub

    if needs_artificial:
        phase_one_cost = np.zeros(total)
        phase_one_cost[first_artificial:] = 1.0
        tableau.minimize(phase_one_cost, np.arange(total))
        infeasibility = float(phase_one_cost[tableau.basis] @ tableau.rhs)
        logger.debug(
            "phase one finished after %d pivots, infeasibility %g",
            tableau.pivots,
            infeasibility,
        )
        if infeasibility > LP_TOLERANCE:
            return LinearProgramResult(
                status=LinearProgramStatus.INFEASIBLE, pivots=tableau.pivots
            )
        # pivot artificials out of the basis; rows without a pivot are redundant
        row = 0
        while row < len(tableau.basis):
            if tableau.basis[row] >= first_artificial:
                pivots = np.flatnonzero(
                    np.abs(tableau.table[row, :first_artificial]) > LP_TOLERANCE
                )
                if pivots.size == 0:
                    tableau.drop_row(row)
                    continue
                tableau.pivot(row, int(pivots[0]))
            row += 1

    cost = np.zeros(total)
    cost[:n] = -c if maximize else c
    status = tableau.minimize(cost, np.arange(first_artificial))
    logger.debug("phase two finished with %s after %d pivots", status, tableau.pivots)
    if status is not LinearProgramStatus.OPTIMAL:
        return LinearProgramResult(status=status, pivots=tableau.pivots)

    z = np.zeros(total)
    z[tableau.basis] = tableau.rhs
    x = z[:n]
    x.setflags(write=False)
    return LinearProgramResult(
        status=status, value=float(c @ x), x=x, pivots=tableau.pivots
    )


def solve_lp_lexicographic(
    c: np.ndarray,
    a_ub: Optional[np.ndarray] = None,
    b_ub: Optional[np.ndarray] = None,
    a_eq: Optional[np.ndarray] = None,
    b_eq: Optional[np.ndarray] = None,
) -> LinearProgramResult:
    """Maximizes ``c @ x`` and returns the lexicographically smallest optimal ``x``.

    The optimal face is narrowed one coordinate at a time: each coordinate
    is minimized with the objective and all earlier coordinates pinned to
    their optimal values within ``LP_TOLERANCE``.
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n = c.shape[0]
    first = solve_lp(c, a_ub, b_ub, a_eq, b_eq, maximize=True)
    if not first.is_optimal:
        return first

    extra_rows = [-c]
    extra_rhs = [-(first.value - LP_TOLERANCE)]
    a_ub = _as_matrix(a_ub, n, "a_ub")
    b_ub = _as_vector(b_ub, a_ub.shape[0], "b_ub")
    x = first.x
    pivots = first.pivots
    for k in range(n):
        unit = np.zeros(n)
        unit[k] = 1.0
        step = solve_lp(
            unit,
            np.vstack([a_ub, *extra_rows]),
            np.concatenate([b_ub, extra_rhs]),
            a_eq,
            b_eq,
            maximize=False,
        )
        pivots += step.pivots
        if not step.is_optimal:
            raise AdviceGameInternalError(
                f"optimal face became {step.status.value} while fixing coordinate {k}"
            )
        x = step.x
        extra_rows.append(unit)
        extra_rhs.append(step.value + LP_TOLERANCE)
    return LinearProgramResult(
        status=LinearProgramStatus.OPTIMAL, value=first.value, x=x, pivots=pivots
    )
