"""Spontaneous Raman noise and signal counts at Bob's gated detector.

The four in-band Raman contributions are named after the detector terms
they feed:

====  ==========================================================  ======
term  origin                                                      span
====  ==========================================================  ======
d1    1490 nm downstream pump, co-propagating scatter             fiber1
d2    1490 nm downstream pump, co-propagating scatter             fiber2
d3    1310 nm upstream pump, counter-propagating scatter          fiber2
d4    1310 nm upstream pump, counter-propagating scatter          fiber1
====  ==========================================================  ======

``d0`` is the gated dark count. Light generated in ``fiber1`` reaches Bob
through the splitting point, so ``d1`` and ``d4`` are the only terms that
change with the architecture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError, InvalidQuantityError, TopologyError
from .quantities import (
    DOWNSTREAM_NM,
    QUANTUM_NM,
    UPSTREAM_NM,
    CountRate,
    OpticalPower,
    Wavelength,
    db_to_linear,
    dbm_to_watts,
    photon_rate,
)
from .topology import Architecture, Topology, quantum_path_loss, splitter_transmittance, validate

# W of scattered power per W of pump, per km, per GHz of detection bandwidth.
DEFAULT_RAMAN_COEFFICIENT = 5e-12
DEFAULT_DOWNSTREAM_DBM = 3.0
DEFAULT_UPSTREAM_DBM = 0.5


@dataclass(frozen=True)
class ClassicalSource:
    """A GPON transmitter acting as a Raman pump.

    ``duty_factor`` scales the launch power to its time average (1 for a
    continuous transmitter).
    """

    wavelength: Wavelength
    launch_power: OpticalPower
    raman_coefficient: float = DEFAULT_RAMAN_COEFFICIENT
    duty_factor: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "wavelength", Wavelength(self.wavelength))
        object.__setattr__(self, "launch_power", OpticalPower(self.launch_power))
        if not math.isfinite(self.raman_coefficient) or self.raman_coefficient < 0:
            raise InvalidQuantityError(f"raman_coefficient must be >= 0, got {self.raman_coefficient}")
        if not (0.0 <= self.duty_factor <= 1.0):
            raise InvalidQuantityError(f"duty_factor must be in [0, 1], got {self.duty_factor}")

    @property
    def average_power(self) -> float:
        return float(self.launch_power) * self.duty_factor


def default_sources() -> tuple[ClassicalSource, ClassicalSource]:
    return (
        ClassicalSource(DOWNSTREAM_NM, dbm_to_watts(DEFAULT_DOWNSTREAM_DBM)),
        ClassicalSource(UPSTREAM_NM, dbm_to_watts(DEFAULT_UPSTREAM_DBM)),
    )


@dataclass(frozen=True)
class DetectorSpec:
    efficiency: float = 0.10
    dark_rate_hz: float = 1000.0
    gate_width_s: float = 180e-12
    clock_hz: float = 625e6
    filter_bandwidth_ghz: float = 100.0
    # polarisation analyser passes half of unpolarised Raman light
    noise_acceptance: float = 0.5

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise InvalidQuantityError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        if not (0.0 < self.efficiency <= 1.0):
            out.append(f"detector.efficiency in (0, 1] (got {self.efficiency})")
        if not math.isfinite(self.dark_rate_hz) or self.dark_rate_hz < 0:
            out.append(f"detector.dark_rate_hz >= 0 (got {self.dark_rate_hz})")
        if not math.isfinite(self.gate_width_s) or self.gate_width_s <= 0:
            out.append(f"detector.gate_width_s > 0 (got {self.gate_width_s})")
        if not math.isfinite(self.clock_hz) or self.clock_hz <= 0:
            out.append(f"detector.clock_hz > 0 (got {self.clock_hz})")
        elif self.gate_width_s * self.clock_hz > 1.0:
            out.append("detector: gate_width_s * clock_hz <= 1")
        if not math.isfinite(self.filter_bandwidth_ghz) or self.filter_bandwidth_ghz <= 0:
            out.append(f"detector.filter_bandwidth_ghz > 0 (got {self.filter_bandwidth_ghz})")
        if not (0.0 <= self.noise_acceptance <= 1.0):
            out.append(f"detector.noise_acceptance in [0, 1] (got {self.noise_acceptance})")
        return out

    @property
    def duty_cycle(self) -> float:
        return self.gate_width_s * self.clock_hz


@dataclass(frozen=True)
class NoiseBudget:
    d0: CountRate
    d1: CountRate
    d2: CountRate
    d3: CountRate
    d4: CountRate
    q_signal: CountRate
    architecture: Architecture | None = None

    def __post_init__(self):
        for name in ("d0", "d1", "d2", "d3", "d4", "q_signal"):
            object.__setattr__(self, name, CountRate(getattr(self, name)))

    @property
    def total_noise(self) -> float:
        return self.d0 + self.d1 + self.d2 + self.d3 + self.d4


def _check_span(P: float, rho: float, B: float, L: float, alpha: float) -> None:
    for name, v in (("power", P), ("raman coefficient", rho), ("bandwidth", B), ("length", L)):
        if not math.isfinite(v) or v < 0:
            raise InvalidQuantityError(f"{name} must be finite and >= 0, got {v!r}")
    if not math.isfinite(alpha) or alpha <= 0:
        raise InvalidQuantityError(f"attenuation coefficient must be > 0, got {alpha!r}")


def forward_raman_power(P: float, rho: float, B: float, L: float, alpha: float) -> OpticalPower:
    """Co-propagating Raman power leaving the far end of a span.

    Parameters
    ----------
    P : pump power entering the span, W
    rho : scattering coefficient, 1/(km GHz)
    B : detection bandwidth, GHz
    L : span length, km
    alpha : linear attenuation, 1/km (shared by pump and scattered light)
    """
    _check_span(P, rho, B, L, alpha)
    return OpticalPower(P * rho * B * L * math.exp(-alpha * L))


def backward_raman_power(P: float, rho: float, B: float, L: float, alpha: float) -> OpticalPower:
    """Counter-propagating Raman power leaving the pump-input end of a span."""
    _check_span(P, rho, B, L, alpha)
    # -expm1 keeps precision for short spans
    return OpticalPower(P * rho * B * -math.expm1(-2.0 * alpha * L) / (2.0 * alpha))


def _pick_sources(sources: Sequence[ClassicalSource]) -> tuple[ClassicalSource, ClassicalSource]:
    down = [s for s in sources if float(s.wavelength) == float(DOWNSTREAM_NM)]
    up = [s for s in sources if float(s.wavelength) == float(UPSTREAM_NM)]
    problems = []
    if len(down) != 1:
        problems.append(f"need exactly one 1490 nm downstream source, got {len(down)}")
    if len(up) != 1:
        problems.append(f"need exactly one 1310 nm upstream source, got {len(up)}")
    if len(down) + len(up) != len(sources):
        problems.append("sources must be at 1490 nm or 1310 nm")
    if problems:
        raise ConfigurationError(problems)
    return down[0], up[0]


def noise_budget(
    t: Topology,
    sources: Sequence[ClassicalSource],
    det: DetectorSpec,
    mu: float,
    signal_fraction: float = 6 / 8,
) -> NoiseBudget:
    """Detector-referenced dark, Raman and signal count rates for ``t``.

    Every Raman power is carried to Bob through the passive elements that
    follow its generating span and converted to gated detections with
    ``photon_rate * efficiency * duty_cycle * noise_acceptance``.
    """
    problems = validate(t)
    if problems:
        raise TopologyError(problems)
    if not math.isfinite(mu) or mu < 0:
        raise InvalidQuantityError(f"mean photon number must be >= 0, got {mu}")
    down, up = _pick_sources(sources)
    B = det.filter_bandwidth_ghz
    L1, L2 = t.fiber1.length_km, t.fiber2.length_km
    a1 = t.fiber1.alpha_per_km(QUANTUM_NM)
    a2 = t.fiber2.alpha_per_km(QUANTUM_NM)

    # quantum-band path from a span exit to the detector
    to_bob_from_f1 = t.split_point_transmittance() * t.fiber2.transmittance(QUANTUM_NM) * t.receiver_transmittance()
    to_bob_from_f2 = t.receiver_transmittance()

    # pumps always cross the splitter
    t_split = splitter_transmittance(t.splitter)
    p_down_f1 = down.average_power
    p_down_f2 = p_down_f1 * t.fiber1.transmittance(DOWNSTREAM_NM) * t_split
    p_up_f2 = up.average_power
    p_up_f1 = p_up_f2 * t.fiber2.transmittance(UPSTREAM_NM) * t_split

    powers = (
        forward_raman_power(p_down_f1, down.raman_coefficient, B, L1, a1) * to_bob_from_f1,
        forward_raman_power(p_down_f2, down.raman_coefficient, B, L2, a2) * to_bob_from_f2,
        backward_raman_power(p_up_f2, up.raman_coefficient, B, L2, a2) * to_bob_from_f2,
        backward_raman_power(p_up_f1, up.raman_coefficient, B, L1, a1) * to_bob_from_f1,
    )
    gate = det.efficiency * det.duty_cycle * det.noise_acceptance
    d1, d2, d3, d4 = (photon_rate(p, QUANTUM_NM) * gate for p in powers)
    d0 = det.dark_rate_hz * det.duty_cycle
    q = mu * db_to_linear(quantum_path_loss(t)) * det.efficiency * det.clock_hz * signal_fraction
    return NoiseBudget(d0=d0, d1=d1, d2=d2, d3=d3, d4=d4, q_signal=q, architecture=t.architecture)
