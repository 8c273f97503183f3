"""Decay-ladder descriptions of emission cascades.

An m-excitation cascade is fully characterised by the decay rate and the
level frequency of every rung: the emitted m-photon wavepacket is the
nested exponential amplitude generated by the chain, so a ladder object
is all that downstream integrals ever need (no momentum-space tensor is
materialised anywhere).

Unit conventions: all rates are expressed in units of a reference rate
(the collective waveguide rate for emitter ensembles, the single-photon
loss rate for cavities) and all frequencies use the same unit, measured
in the frame rotating at the bare transition frequency.  Level 0 sits at
frequency 0 by definition.
"""
from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class DecayLadder:
    """Spectral description of one emission cascade.

    ``rates[j-1]`` is the decay rate of level j to level j-1 and
    ``frequencies[j-1]`` the energy of level j (level 0 is at 0).  Every
    rate must be strictly positive; this is what guarantees convergence
    of all exchange integrals built from the ladder.
    """

    levels: int
    rates: tuple[float, ...]
    frequencies: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        object.__setattr__(
            self, "frequencies", tuple(float(w) for w in self.frequencies)
        )
        if self.levels < 1:
            raise ValueError(f"ladder needs at least one level, got {self.levels}")
        if len(self.rates) != self.levels:
            raise ValueError(
                f"expected {self.levels} rates, got {len(self.rates)}"
            )
        if len(self.frequencies) != self.levels:
            raise ValueError(
                f"expected {self.levels} frequencies, got {len(self.frequencies)}"
            )
        for j, rate in enumerate(self.rates, start=1):
            if not rate > 0.0:
                raise ValueError(f"rate of level {j} must be positive, got {rate}")

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "rates": list(self.rates),
            "frequencies": list(self.frequencies),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DecayLadder":
        return cls(
            levels=int(data["levels"]),
            rates=tuple(data["rates"]),
            frequencies=tuple(data["frequencies"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "DecayLadder":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TwinConfiguration:
    """Pair of input-arm wavepackets entering the interferometer.

    ``delay`` is the relative arrival delay of the two wavefronts in
    units of one over the reference rate; 0 is the ideal case.
    """

    ladder_a: DecayLadder
    ladder_b: DecayLadder
    delay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "delay", float(self.delay))
        if self.ladder_a.levels != self.ladder_b.levels:
            raise ValueError(
                "twin configuration requires equal photon numbers per arm; "
                f"got {self.ladder_a.levels} and {self.ladder_b.levels}"
            )
        if self.delay < 0.0:
            raise ValueError(f"delay must be nonnegative, got {self.delay}")

    @property
    def photons_per_arm(self) -> int:
        return self.ladder_a.levels

    @property
    def total_photons(self) -> int:
        return self.ladder_a.levels + self.ladder_b.levels


def build_dicke(n_emitters: int, gamma_1d: float) -> DecayLadder:
    """Ladder of N fully excited emitters decaying through a common mode.

    The rate of the m-th rung is m(N-m+1) times the single-emitter rate,
    peaking at mid-ladder (superradiant burst).  Levels are equispaced,
    so all frequencies vanish in the rotating frame.
    """
    if n_emitters < 1:
        raise ValueError(f"need at least one emitter, got {n_emitters}")
    if not gamma_1d > 0.0:
        raise ValueError(f"gamma_1d must be positive, got {gamma_1d}")
    n = int(n_emitters)
    rates = tuple(m * (n - m + 1) * gamma_1d for m in range(1, n + 1))
    return DecayLadder(levels=n, rates=rates, frequencies=(0.0,) * n)


def build_anharmonic(n_photons: int, gamma_1: float, u: float) -> DecayLadder:
    """Kerr-type cavity ladder: linear decay, quadratic level shift.

    Level n decays at n*gamma_1 and sits at n(n-1)*u, which makes the
    emitted photons spectrally distinguishable once u exceeds the
    linewidth.
    """
    if n_photons < 1:
        raise ValueError(f"need at least one photon, got {n_photons}")
    if not gamma_1 > 0.0:
        raise ValueError(f"gamma_1 must be positive, got {gamma_1}")
    n = int(n_photons)
    rates = tuple(k * gamma_1 for k in range(1, n + 1))
    freqs = tuple(k * (k - 1) * u for k in range(1, n + 1))
    return DecayLadder(levels=n, rates=rates, frequencies=freqs)


def build_harmonic(n_photons: int, gamma_1: float) -> DecayLadder:
    """Linear cavity ladder (anharmonic ladder with zero level shift).

    Serves as the single-mode reference: its exchange integral is exactly
    one, reproducing the benchmark phase sensitivity of photon-number
    states.
    """
    return build_anharmonic(n_photons, gamma_1, 0.0)
