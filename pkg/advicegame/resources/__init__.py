from __future__ import annotations

from ._correlated import (
    CeBounds,
    CeMaximum,
    CorrelatedService,
    CorrelatedStrategy,
    ObedienceSystem,
    ObedienceViolation,
    classical_payoff_bounds,
    classical_sum_bound_check,
    ce_constraints,
    identity_exclusion_check,
    max_ce_payoff,
    tightened_alice_bound,
)
from ._game import (
    Correlation,
    Epsilon,
    GameService,
    JointAction,
    JointType,
    PayoffPair,
    Player,
    UtilityTable,
    as_game,
    average_payoffs,
    build_game,
    chsh_functional,
    chsh_value,
    correlators,
    is_no_signaling,
    load_game,
    payoff_functional,
    payoff_sum_from_chsh,
)
from ._nosignaling import (
    NoSignalingService,
    NsMaximum,
    NsVertex,
    NsVertexKind,
    is_extreme_point,
    maximize_over_ns,
    ns_vertices,
    pr_box,
    pr_box_payoffs,
    pr_star_payoffs,
    verify_pr_nash,
)
from ._quantum import (
    AdvantageWindow,
    BestResponse,
    BinaryMeasurement,
    DeviationCoefficients,
    PlayerMeasurements,
    PovmParams,
    QuantumService,
    TwoQubitState,
    advantage_window,
    alice_deviation_payoff,
    best_response_max,
    bob_deviation_payoff,
    born_correlation,
    deviation_coefficients,
    entangled_payoffs,
    measurements_to_params,
    params_to_measurements,
    q_star_payoffs,
    q_star_setup,
    verify_q_nash,
)
from ._record import Records
from ._rng import SeededRNG
from ._scan import ScanFormat, ScanRow, ScanService
from ._simplex import LinearProgramResult, LinearProgramStatus, solve_lp
from ._simulate import AdviceKind, AdviceSource, RunReport, SimulationService
from ._simulate import run as run_simulation
from ._simulate import sample_action
from ._strategy import (
    EquilibriumReport,
    PureProfile,
    PureStrategy,
    PureStrategyService,
    check_profile_nash,
    enumerate_pure_nash,
    preferred_equilibria,
    profile_to_correlation,
    pure_payoff_matrices,
    pure_payoff_table,
)

__all__ = [
    "GameService",
    "PureStrategyService",
    "CorrelatedService",
    "NoSignalingService",
    "QuantumService",
    "SimulationService",
    "ScanService",
]
