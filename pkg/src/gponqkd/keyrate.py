"""Asymptotic decoy-state BB84 key rate (signal, weak decoy, vacuum).

Channel model: an ``n``-photon pulse clicks with probability
``Y_n = y0 + 1 - (1 - eta)**n`` and errs with probability
``(e0*y0 + e_detector*(1 - (1 - eta)**n)) / Y_n``. Single-photon yield
and error are bounded from the signal and decoy statistics, then combined
into the GLLP rate ``q * (Q1 (1 - H2(e1)) - Q_mu f H2(E_mu))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidQuantityError, SaturationError
from .noise import DetectorSpec, NoiseBudget
from .quantities import db_to_linear
from .topology import Topology, quantum_path_loss


@dataclass(frozen=True)
class DecoyParams:
    mu: float = 0.6
    nu: float = 0.2
    vacuum: bool = True
    state_ratio: tuple[float, float, float] = (6.0, 1.0, 1.0)
    clock_hz: float = 625e6
    sifting: float = 0.5
    ec_efficiency: float = 1.16
    qber_cap: float = 0.03
    qber_max: float = 0.11

    def __post_init__(self):
        object.__setattr__(self, "state_ratio", tuple(float(x) for x in self.state_ratio))
        problems = self.violations()
        if problems:
            raise InvalidQuantityError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        if not (0 < self.nu < self.mu) or not math.isfinite(self.mu):
            out.append(f"decoy: 0 < nu < mu (got nu={self.nu}, mu={self.mu})")
        if len(self.state_ratio) != 3:
            out.append("decoy.state_ratio needs three entries (signal, decoy, vacuum)")
        else:
            s, d, v = self.state_ratio
            if s <= 0 or d <= 0:
                out.append(f"decoy.state_ratio signal and decoy shares > 0 (got {self.state_ratio})")
            if self.vacuum and v <= 0:
                out.append("decoy.state_ratio vacuum share > 0 when vacuum is used")
            if not self.vacuum and v != 0:
                out.append("decoy.state_ratio vacuum share must be 0 when vacuum is disabled")
        if not math.isfinite(self.clock_hz) or self.clock_hz <= 0:
            out.append(f"decoy.clock_hz > 0 (got {self.clock_hz})")
        if not (0 < self.sifting <= 1):
            out.append(f"decoy.sifting in (0, 1] (got {self.sifting})")
        if not math.isfinite(self.ec_efficiency) or self.ec_efficiency < 1:
            out.append(f"decoy.ec_efficiency >= 1 (got {self.ec_efficiency})")
        if not (0 < self.qber_cap <= self.qber_max < 0.5):
            out.append(
                f"decoy: 0 < qber_cap <= qber_max < 0.5 (got {self.qber_cap}, {self.qber_max})"
            )
        return out

    @property
    def signal_fraction(self) -> float:
        return self.state_ratio[0] / sum(self.state_ratio)


@dataclass(frozen=True)
class ChannelModel:
    eta: float
    y0: float
    e_detector: float = 0.01
    e0: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0):
            raise InvalidQuantityError(f"eta must be in [0, 1], got {self.eta}")
        if not (0.0 <= self.y0 < 1.0):
            raise InvalidQuantityError(f"y0 must be in [0, 1), got {self.y0}")
        if not (0.0 <= self.e_detector <= 0.5):
            raise InvalidQuantityError(f"e_detector must be in [0, 0.5], got {self.e_detector}")


@dataclass(frozen=True)
class GainQber:
    gain: float
    qber: float  # nan when the gain is zero

    @property
    def qber_defined(self) -> bool:
        return not math.isnan(self.qber)


@dataclass(frozen=True)
class DecoyBounds:
    y1_lower: float
    e1_upper: float
    q1: float
    feasible: bool
    reason: str = ""


@dataclass(frozen=True)
class KeyRateResult:
    q_mu: float
    q_nu: float
    e_mu: float
    e_nu: float
    y1_lower: float
    e1_upper: float
    q1: float
    rate_per_pulse: float
    rate_bps: float
    feasible: bool
    reason: str = ""


def binary_entropy(x: float) -> float:
    if not (0.0 <= x <= 1.0):
        raise InvalidQuantityError(f"probability must be in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def gain_and_qber(ch: ChannelModel, m: float) -> GainQber:
    if not math.isfinite(m) or m < 0:
        raise InvalidQuantityError(f"mean photon number must be >= 0, got {m!r}")
    detected = -math.expm1(-ch.eta * m)
    gain = ch.y0 + detected
    if gain == 0.0:
        return GainQber(0.0, math.nan)
    return GainQber(gain, (ch.e0 * ch.y0 + ch.e_detector * detected) / gain)


def decoy_bounds(
    q_mu: float, e_mu: float, q_nu: float, e_nu: float, y0: float, p: DecoyParams
) -> DecoyBounds:
    """Lower bound on the single-photon yield, upper bound on its error.

    ``y0`` is the vacuum-state yield. Without vacuum decoys it is unknown;
    the yield bound then uses ``y0 <= E_mu Q_mu e^mu / e0`` and the error
    bound uses ``y0 >= 0``, and the argument is ignored.
    """
    mu, nu = p.mu, p.nu
    if not (0 < nu < mu):
        raise InvalidQuantityError(f"need 0 < nu < mu, got nu={nu}, mu={mu}")
    for name, v in (("q_mu", q_mu), ("q_nu", q_nu), ("y0", y0)):
        if not (0.0 <= v <= 1.0):
            raise InvalidQuantityError(f"{name} must be in [0, 1], got {v!r}")
    if p.vacuum:
        y0_yield = y0_error = y0
    else:
        y0_yield = min(e_mu * q_mu * math.exp(mu) / 0.5, 1.0)
        y0_error = 0.0
    y1 = (mu / (mu * nu - nu * nu)) * (
        q_nu * math.exp(nu)
        - q_mu * math.exp(mu) * (nu * nu) / (mu * mu)
        - ((mu * mu - nu * nu) / (mu * mu)) * y0_yield
    )
    if not y1 > 0:
        return DecoyBounds(y1, math.nan, 0.0, False, "single-photon yield bound is not positive")
    e1 = (e_nu * q_nu * math.exp(nu) - 0.5 * y0_error) / (y1 * nu)
    q1 = y1 * mu * math.exp(-mu)
    if not (0.0 <= e1 <= 0.5):
        return DecoyBounds(y1, e1, q1, False, "single-photon error bound outside [0, 0.5]")
    return DecoyBounds(y1, e1, q1, True)


def secure_key_rate(ch: ChannelModel, p: DecoyParams) -> KeyRateResult:
    g_mu = gain_and_qber(ch, p.mu)
    g_nu = gain_and_qber(ch, p.nu)
    # vacuum pulses measure the background directly
    y0 = gain_and_qber(ch, 0.0).gain

    def infeasible(reason: str, b: DecoyBounds | None = None) -> KeyRateResult:
        return KeyRateResult(
            q_mu=g_mu.gain,
            q_nu=g_nu.gain,
            e_mu=g_mu.qber,
            e_nu=g_nu.qber,
            y1_lower=b.y1_lower if b else math.nan,
            e1_upper=b.e1_upper if b else math.nan,
            q1=b.q1 if b else 0.0,
            rate_per_pulse=0.0,
            rate_bps=0.0,
            feasible=False,
            reason=reason,
        )

    if not g_mu.qber_defined or not g_nu.qber_defined:
        return infeasible("no detections")
    if g_mu.qber >= p.qber_max:
        return infeasible("QBER above hard bound")
    if g_mu.qber > p.qber_cap:
        return infeasible("QBER above operating cap")
    b = decoy_bounds(g_mu.gain, g_mu.qber, g_nu.gain, g_nu.qber, y0, p)
    if not b.feasible:
        return infeasible(b.reason, b)
    per_pulse = p.sifting * (
        b.q1 * (1.0 - binary_entropy(b.e1_upper))
        - g_mu.gain * p.ec_efficiency * binary_entropy(g_mu.qber)
    )
    if per_pulse <= 0:
        return infeasible("no positive key after error correction", b)
    return KeyRateResult(
        q_mu=g_mu.gain,
        q_nu=g_nu.gain,
        e_mu=g_mu.qber,
        e_nu=g_nu.qber,
        y1_lower=b.y1_lower,
        e1_upper=b.e1_upper,
        q1=b.q1,
        rate_per_pulse=per_pulse,
        rate_bps=per_pulse * p.clock_hz * p.signal_fraction,
        feasible=True,
    )


def budget_to_channel(
    b: NoiseBudget, t: Topology, det: DetectorSpec, e_detector: float = 0.01
) -> ChannelModel:
    """Per-pulse channel seen by the decoy analysis for budget ``b``."""
    y0 = b.total_noise / det.clock_hz
    if y0 >= 1.0:
        raise SaturationError(
            f"background {b.total_noise:.6g} counts/s fills every gate at {det.clock_hz:.6g} Hz"
        )
    eta = db_to_linear(quantum_path_loss(t)) * det.efficiency
    return ChannelModel(eta=eta, y0=y0, e_detector=e_detector)
