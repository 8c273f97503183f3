"""Experimental error budget for a superradiant metrology run.

Each imperfection of a candidate platform maps onto either a feasibility
inequality (waveguide propagation length, retardation), a multiplicative
penalty on the exchange integral (unequal couplings, arrival delay), an
additive correction to the Fisher information (detection-arm photon
loss), or a preparation-fidelity estimate (pulse-area error, emission
into unguided modes).  ``full_budget`` composes them into a single
lower bound; the composition multiplies the overlap penalties and
applies the loss correction at first order, which is a heuristic
estimate rather than a joint theorem, and is labelled as such.

Hard "much greater than" requirements are operationalised with a
default margin factor of ten; raw ratios are always reported next to
the verdicts so a different threshold can be applied downstream.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict, field

from .exchange import mixed_rate_factor
from .oracle import ExchangeIntegral

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
DEFAULT_MARGIN_FACTOR = 10.0


@dataclass(frozen=True)
class PlatformParams:
    """Physical description of one experimental platform.

    Rates are angular (rad/s), lengths in meters, the delay in seconds;
    ``pulse_error`` and ``delta_gamma`` are relative (dimensionless) and
    ``interferometer_loss`` is a probability.
    """

    quality_factor: float
    group_index: float
    wavelength: float
    gamma_1d: float
    gamma_star: float
    n_photons: int
    pulse_error: float = 0.0
    delta_gamma: float = 0.0
    delay: float = 0.0
    interferometer_loss: float = 0.0

    def __post_init__(self):
        positive = {
            "quality_factor": self.quality_factor,
            "group_index": self.group_index,
            "wavelength": self.wavelength,
            "gamma_1d": self.gamma_1d,
        }
        for name, value in positive.items():
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        nonnegative = {
            "gamma_star": self.gamma_star,
            "pulse_error": self.pulse_error,
            "delay": self.delay,
            "interferometer_loss": self.interferometer_loss,
        }
        for name, value in nonnegative.items():
            if value < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.interferometer_loss > 1.0:
            raise ValueError("interferometer_loss is a probability, must be <= 1")
        if self.n_photons < 2 or self.n_photons % 2:
            raise ValueError(
                f"n_photons must be an even total >= 2, got {self.n_photons}"
            )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PropagationCheck:
    l_prop_over_lambda: float
    feasible: bool
    margin: float  # propagation length in units of the system size


@dataclass(frozen=True)
class RetardationCheck:
    n_max: int
    feasible: bool
    n_cubed_bound: float  # raw bound on N^3 before the margin factor


@dataclass(frozen=True)
class PulseErrorEstimate:
    infidelity: float
    in_regime: bool  # perturbative treatment valid


@dataclass(frozen=True)
class MixedRateCorrection:
    exact: float
    expansion: float
    relative_gap: float


@dataclass(frozen=True)
class DelayCorrection:
    bound_factor: float
    first_order: float
    single_mode_factor: float


@dataclass(frozen=True)
class LossCorrection:
    corrected_qfi: float
    qfi_decrease: float
    p_no_loss: float
    eta_threshold: float
    heisenberg_ok: bool
    perturbative: bool  # flag is False once eta > 0.1


def propagation_length_check(
    quality_factor: float,
    group_index: float,
    n_photons: int,
    margin_factor: float = DEFAULT_MARGIN_FACTOR,
) -> PropagationCheck:
    """Collective coupling needs the guided modes to outlive the array.

    The propagation length in units of the emitter wavelength is the
    quality factor over twice the group index; it must exceed the photon
    number by the margin factor.
    """
    if not quality_factor > 0.0 or not group_index > 0.0:
        raise ValueError("quality factor and group index must be positive")
    ratio = quality_factor / (2.0 * group_index)
    margin = ratio / n_photons
    return PropagationCheck(
        l_prop_over_lambda=ratio,
        feasible=margin >= margin_factor,
        margin=margin,
    )


def retardation_check(
    group_index: float,
    wavelength: float,
    gamma_1d: float,
    n_photons: int,
    margin_factor: float = DEFAULT_MARGIN_FACTOR,
) -> RetardationCheck:
    """Photon transit across the array must beat the superradiant burst.

    The fastest collective rate grows as N^2/4 while the transit time
    grows as N, capping N^3 at 4c/(n_g lambda gamma); the usable ceiling
    divides that bound by the margin factor before the cube root.
    """
    if not group_index > 0.0 or not wavelength > 0.0 or not gamma_1d > 0.0:
        raise ValueError("group index, wavelength and gamma_1d must be positive")
    bound = 4.0 * SPEED_OF_LIGHT / (group_index * wavelength * gamma_1d)
    n_max = int(math.floor((bound / margin_factor) ** (1.0 / 3.0)))
    return RetardationCheck(
        n_max=n_max,
        feasible=n_photons <= n_max,
        n_cubed_bound=bound,
    )


def pulse_error(delta_omega_t: float, n_photons: int) -> PulseErrorEstimate:
    """Preparation infidelity from an imperfect inversion pulse.

    A relative pulse-area error d leaves an admixture of one collective
    flip whose weight scales as d^2 N; the estimate is perturbative and
    is flagged out of regime once d sqrt(N) reaches one.
    """
    if delta_omega_t < 0.0:
        raise ValueError("pulse error must be nonnegative")
    return PulseErrorEstimate(
        infidelity=delta_omega_t**2 * n_photons,
        in_regime=delta_omega_t * math.sqrt(n_photons) < 1.0,
    )


def mixed_rate_correction(delta_gamma_rel: float, n_photons: int) -> MixedRateCorrection:
    """Overlap penalty when the two ensembles couple unequally.

    ``delta_gamma_rel`` is the relative coupling mismatch (gamma minus
    gamma-prime over gamma).  Returns the exact per-step product factor,
    its quadratic expansion 1 - N d^2 / 8, and their relative gap.
    """
    r = 1.0 - delta_gamma_rel
    if not r > 0.0:
        raise ValueError(
            f"relative mismatch {delta_gamma_rel} implies a nonpositive coupling"
        )
    exact = mixed_rate_factor(r, n_photons)
    expansion = 1.0 - n_photons / 8.0 * delta_gamma_rel**2
    gap = abs(exact - expansion) / exact if exact else math.inf
    return MixedRateCorrection(exact=exact, expansion=expansion, relative_gap=gap)


def delay_correction(n_photons: int, gamma_1d: float, tau: float) -> DelayCorrection:
    """Lower bound on the overlap when one wavepacket arrives late.

    The bound multiplies the overlap by exp(-N gamma tau): twice the
    top-rung rate of the half-array ladder acting over the delay.  The
    single-mode comparison exp(-N gamma tau / 2) is reported alongside;
    multimode wavepackets pay at most twice the single-mode exponent.
    """
    if tau < 0.0:
        raise ValueError(f"delay must be nonnegative, got {tau}")
    if not gamma_1d > 0.0:
        raise ValueError(f"gamma_1d must be positive, got {gamma_1d}")
    x = n_photons * gamma_1d * tau
    return DelayCorrection(
        bound_factor=math.exp(-x),
        first_order=1.0 - x,
        single_mode_factor=math.exp(-x / 2.0),
    )


def interferometer_loss_correction(
    qfi: float, n_photons: int, i_n: ExchangeIntegral | float, eta: float
) -> LossCorrection:
    """First-order Fisher-information penalty for photon loss of rate eta.

    The no-loss component survives with probability 1 - N eta / 2 and its
    information drops by N^2 eta I / 4; Heisenberg scaling demands that
    the drop stays below one information unit, i.e. eta below 4/(I N^2).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"loss probability must lie in [0, 1], got {eta}")
    value = i_n.value if isinstance(i_n, ExchangeIntegral) else float(i_n)
    decrease = n_photons**2 * eta * value / 4.0
    threshold = 4.0 / (value * n_photons**2) if value > 0.0 else math.inf
    return LossCorrection(
        corrected_qfi=qfi - decrease,
        qfi_decrease=decrease,
        p_no_loss=1.0 - n_photons * eta / 2.0,
        eta_threshold=threshold,
        heisenberg_ok=eta <= threshold,
        perturbative=eta <= 0.1,
    )


@dataclass(frozen=True)
class BudgetEntry:
    """One imperfection channel of the consolidated budget."""

    channel: str
    kind: str  # feasibility | multiplicative | additive | probability
    value: float
    feasible: bool
    note: str = ""


@dataclass(frozen=True)
class ErrorBudget:
    """Itemised corrections and the combined Fisher-information bound."""

    entries: tuple[BudgetEntry, ...] = field(default_factory=tuple)
    ideal_qfi: float = 0.0
    combined_qfi_lower_bound: float = 0.0
    effective_exchange_integral: float = 0.0
    collection_probability: float = 1.0

    def to_dict(self) -> dict:
        return {
            "entries": [asdict(e) for e in self.entries],
            "ideal_qfi": self.ideal_qfi,
            "combined_qfi_lower_bound": self.combined_qfi_lower_bound,
            "effective_exchange_integral": self.effective_exchange_integral,
            "collection_probability": self.collection_probability,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def full_budget(
    params: PlatformParams,
    i_n: ExchangeIntegral | float,
    p: float,
    margin_factor: float = DEFAULT_MARGIN_FACTOR,
) -> ErrorBudget:
    """Compose every channel into one Fisher-information lower bound.

    Overlap penalties multiply onto the exchange integral, the collected
    fraction enters squared, and the detection-loss correction is
    subtracted at first order.  The channels are derived separately, so
    the combined number is a first-order estimate, not a joint theorem.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"collection probability must lie in [0, 1], got {p}")
    n = params.n_photons
    value = i_n.value if isinstance(i_n, ExchangeIntegral) else float(i_n)

    prop = propagation_length_check(
        params.quality_factor, params.group_index, n, margin_factor
    )
    ret = retardation_check(
        params.group_index, params.wavelength, params.gamma_1d, n, margin_factor
    )
    pulse = pulse_error(params.pulse_error, n)
    mixed = mixed_rate_correction(params.delta_gamma, n)
    delayed = delay_correction(n, params.gamma_1d, params.delay)

    i_eff = value * mixed.exact * delayed.bound_factor
    ideal = n * (value * n + 2.0) / 2.0
    degraded = n * (i_eff * n + 2.0) / 2.0
    loss = interferometer_loss_correction(
        degraded, n, i_eff, params.interferometer_loss
    )
    combined = p * p * degraded - loss.qfi_decrease

    entries = (
        BudgetEntry(
            "propagation_length",
            "feasibility",
            prop.l_prop_over_lambda,
            prop.feasible,
            f"length covers {prop.margin:.3g} array sizes (margin factor {margin_factor:g})",
        ),
        BudgetEntry(
            "retardation",
            "feasibility",
            float(ret.n_max),
            ret.feasible,
            f"photon-number ceiling from transit time (raw N^3 bound {ret.n_cubed_bound:.3g})",
        ),
        BudgetEntry(
            "pulse_area",
            "probability",
            1.0 - pulse.infidelity,
            pulse.in_regime,
            "preparation fidelity estimate; flag drops once the error is nonperturbative",
        ),
        BudgetEntry(
            "mixed_coupling",
            "multiplicative",
            mixed.exact,
            True,
            f"overlap penalty; quadratic expansion {mixed.expansion:.6g}",
        ),
        BudgetEntry(
            "arrival_delay",
            "multiplicative",
            delayed.bound_factor,
            True,
            f"lower-bound overlap penalty; first order {delayed.first_order:.6g}",
        ),
        BudgetEntry(
            "collection",
            "probability",
            p,
            p >= 0.9,
            "guided-mode collection probability; enters the bound squared",
        ),
        BudgetEntry(
            "interferometer_loss",
            "additive",
            -loss.qfi_decrease,
            loss.heisenberg_ok,
            f"first-order correction; Heisenberg scaling needs eta below {loss.eta_threshold:.3g}",
        ),
    )
    return ErrorBudget(
        entries=entries,
        ideal_qfi=ideal,
        combined_qfi_lower_bound=combined,
        effective_exchange_integral=i_eff,
        collection_probability=p,
    )
