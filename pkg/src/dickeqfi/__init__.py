"""Metrological figure of merit of multimode photon-number wavepackets.

The package computes the quantum Fisher information, and hence the
achievable phase sensitivity, of interferometry with photon wavepackets
emitted by collectively decaying emitter ladders: a polynomial-cost
table recurrence evaluates the controlling exchange overlap, an exact
factorial-cost oracle validates it at small photon numbers, cascade
rate equations quantify the collection probability under residual
emission, and an error-budget layer turns platform parameters into
feasibility verdicts.
"""

from .ladder import (
    DecayLadder,
    TwinConfiguration,
    build_anharmonic,
    build_dicke,
    build_harmonic,
)
from .oracle import (
    DelayCheck,
    ExchangeIntegral,
    OracleTooLargeError,
    oracle_delay_check,
    oracle_integral,
    oracle_integral_exact,
)
from .exchange import (
    InvalidLadderError,
    LadderFamily,
    RecurrenceState,
    SWEEP_COLUMNS,
    exchange_integral,
    exchange_integral_mixed_rates,
    mixed_rate_factor,
    qfi_vs_n_sweep,
)
from .metrology import (
    ParityCurve,
    QfiReport,
    parity_curve,
    parity_expectation,
    parity_phase_variance,
    qfi_general,
    qfi_lossy_lower_bound,
    qfi_mixed_number,
    qfi_twin,
)
from .dickesim import (
    CollectionEstimate,
    LossModel,
    PopulationTrace,
    SuperradianceTime,
    collection_probability_product,
    collective_rates,
    dicke_collection_probability,
    dicke_populations,
    superradiance_timescale,
)
from .budget import (
    BudgetEntry,
    DelayCorrection,
    ErrorBudget,
    LossCorrection,
    MixedRateCorrection,
    PlatformParams,
    PropagationCheck,
    PulseErrorEstimate,
    RetardationCheck,
    SPEED_OF_LIGHT,
    delay_correction,
    full_budget,
    interferometer_loss_correction,
    mixed_rate_correction,
    propagation_length_check,
    pulse_error,
    retardation_check,
)

__version__ = "0.1.0"
