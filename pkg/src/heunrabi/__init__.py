"""Confluent Heun solution of the linearly driven two-level system."""
from .evolution import PhaseTime, evolution_matrix, state_any, state_first_quarter, trace
from .floquet import (
    FloquetResult,
    MonodromyData,
    QuarterData,
    Quasienergy,
    SeriesBreakdown,
    analyze,
    branch_energies,
    full_monodromy,
    half_monodromy,
    quarter_data,
    quasienergy,
    quasienergy_of,
    r_alpha,
)
from .heun import (
    MU_MP,
    MU_PP,
    QUASI_CONTROL,
    TRACE_CONTROL,
    DimensionalParams,
    HeunParams,
    MuPair,
    PhysicalParams,
    SeriesControl,
    SeriesEval,
    che_params,
    eta0,
    eta_at_half,
    recurrence_step,
)
from .states import T_SWAP, EvolutionMatrix, SpinorState

__version__ = "0.1.0"
