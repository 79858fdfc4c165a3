"""Single-fiber QKD + GPON network description and path-loss budgets.

Two architectures share one physical layout: Alice co-located with the OLT,
``fiber1`` to the splitting point, ``fiber2`` onward to Bob and the ONU.
In ``THROUGH`` the quantum channel crosses the power splitter like the
classical traffic; in ``BYPASS`` a pair of filters at the splitting point
steers the 1550 nm band around the splitter.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import TopologyError, WrongChannelError
from .quantities import (
    CHANNEL_WAVELENGTHS,
    CLASSICAL_WAVELENGTHS,
    QUANTUM_NM,
    DecibelLoss,
    db_to_linear,
)

DEFAULT_ATTENUATION_DB_PER_KM = 0.25
DEFAULT_WDM_TOTAL_QUANTUM_DB = 1.0
DEFAULT_WDM_TOTAL_CLASSICAL_DB = 1.0
DEFAULT_BYPASS_WDM_EXTRA_DB = 1.0
DEFAULT_RECEIVER_WDM_SHARE = 0.5


class Architecture(str, enum.Enum):
    THROUGH = "through"
    BYPASS = "bypass"


class Direction(str, enum.Enum):
    DOWNSTREAM = "downstream"
    UPSTREAM = "upstream"


def flat_attenuation(db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM) -> dict[float, float]:
    return {float(wl): float(db_per_km) for wl in CHANNEL_WAVELENGTHS}


@dataclass(frozen=True)
class FiberSpan:
    length_km: float
    attenuation_db_per_km: Mapping[float, float] = field(default_factory=flat_attenuation)

    def attenuation_at(self, wavelength_nm: float) -> float:
        try:
            return self.attenuation_db_per_km[float(wavelength_nm)]
        except KeyError:
            raise WrongChannelError(
                f"no attenuation defined at {float(wavelength_nm)} nm"
            ) from None

    def loss_db(self, wavelength_nm: float) -> float:
        return self.length_km * self.attenuation_at(wavelength_nm)

    def transmittance(self, wavelength_nm: float) -> float:
        return db_to_linear(self.loss_db(wavelength_nm))

    def alpha_per_km(self, wavelength_nm: float) -> float:
        """Linear power attenuation coefficient (1/km) at ``wavelength_nm``."""
        return self.attenuation_at(wavelength_nm) * math.log(10.0) / 10.0

    def violations(self, label: str) -> list[str]:
        out = []
        if not math.isfinite(self.length_km) or self.length_km < 0:
            out.append(f"{label}: length >= 0 (got {self.length_km})")
        for wl in CHANNEL_WAVELENGTHS:
            a = self.attenuation_db_per_km.get(float(wl))
            if a is None:
                out.append(f"{label}: attenuation missing at {float(wl):g} nm")
            elif not math.isfinite(a) or a <= 0:
                out.append(f"{label}: attenuation > 0 at {float(wl):g} nm (got {a})")
        return out


@dataclass(frozen=True)
class SplitterSpec:
    ratio: int
    excess_loss_db: float = 0.0

    def violations(self) -> list[str]:
        out = []
        if not isinstance(self.ratio, int) or isinstance(self.ratio, bool) or self.ratio < 1:
            out.append(f"splitter: ratio >= 1 (got {self.ratio!r})")
        if not math.isfinite(self.excess_loss_db) or self.excess_loss_db < 0:
            out.append(f"splitter: excess_loss >= 0 (got {self.excess_loss_db})")
        return out


@dataclass(frozen=True)
class WdmElement:
    """One FWDM/CWDM filter; only insertion loss and isolation are modelled."""

    name: str
    insertion_loss_db: float
    isolation_db: float = 0.0

    def violations(self) -> list[str]:
        out = []
        if not math.isfinite(self.insertion_loss_db) or self.insertion_loss_db < 0:
            out.append(f"{self.name}: insertion_loss >= 0 (got {self.insertion_loss_db})")
        if not math.isfinite(self.isolation_db) or self.isolation_db < 0:
            out.append(f"{self.name}: isolation >= 0 (got {self.isolation_db})")
        return out


def total_insertion_loss(elements: Sequence[WdmElement]) -> DecibelLoss:
    return DecibelLoss(sum(e.insertion_loss_db for e in elements))


@dataclass(frozen=True)
class Topology:
    """Fiber spans, splitter and WDM losses between Alice/OLT and Bob/ONU.

    ``fiber2`` is the Bob-side span ("Fiber 3" of the bypass drawing).
    ``receiver_wdm_share`` is the part of ``wdm_total_quantum_db`` located at
    Bob, i.e. the only WDM loss that in-fiber Raman noise still sees.
    ``user_drop`` lengthens the classical path only.
    """

    architecture: Architecture
    fiber1: FiberSpan
    fiber2: FiberSpan
    splitter: SplitterSpec
    wdm_total_quantum_db: float = DEFAULT_WDM_TOTAL_QUANTUM_DB
    bypass_wdm_extra_db: float = DEFAULT_BYPASS_WDM_EXTRA_DB
    wdm_total_classical_db: float = DEFAULT_WDM_TOTAL_CLASSICAL_DB
    receiver_wdm_share: float = DEFAULT_RECEIVER_WDM_SHARE
    user_drop: FiberSpan | None = None

    @classmethod
    def build(
        cls,
        fiber1_km: float,
        fiber2_km: float,
        ratio: int,
        architecture: Architecture | str = Architecture.THROUGH,
        attenuation_db_per_km: Mapping[float, float] | float = DEFAULT_ATTENUATION_DB_PER_KM,
        splitter_excess_db: float = 0.0,
        **kwargs,
    ) -> "Topology":
        """Construct and validate a topology from plain numbers."""
        if isinstance(attenuation_db_per_km, Mapping):
            att = {float(k): float(v) for k, v in attenuation_db_per_km.items()}
        else:
            att = flat_attenuation(attenuation_db_per_km)
        topo = cls(
            architecture=Architecture(architecture),
            fiber1=FiberSpan(float(fiber1_km), dict(att)),
            fiber2=FiberSpan(float(fiber2_km), dict(att)),
            splitter=SplitterSpec(ratio, float(splitter_excess_db)),
            **kwargs,
        )
        return topo.validated()

    def validated(self) -> "Topology":
        problems = validate(self)
        if problems:
            raise TopologyError(problems)
        return self

    def with_architecture(self, architecture: Architecture | str) -> "Topology":
        return replace(self, architecture=Architecture(architecture))

    @property
    def ratio(self) -> int:
        return self.splitter.ratio

    def split_point_loss_db(self) -> float:
        """Loss the quantum band sees at the splitting point."""
        if self.architecture is Architecture.THROUGH:
            return float(splitter_loss(self.splitter))
        return self.bypass_wdm_extra_db

    def split_point_transmittance(self) -> float:
        if self.architecture is Architecture.THROUGH:
            return splitter_transmittance(self.splitter)
        return db_to_linear(self.bypass_wdm_extra_db)

    def receiver_transmittance(self) -> float:
        return db_to_linear(self.wdm_total_quantum_db * self.receiver_wdm_share)


def splitter_loss(s: SplitterSpec) -> DecibelLoss:
    """Ideal ``10*log10(N)`` split loss plus the configured excess."""
    problems = s.violations()
    if problems:
        raise TopologyError(problems)
    return DecibelLoss(10.0 * math.log10(s.ratio) + s.excess_loss_db)


def splitter_transmittance(s: SplitterSpec) -> float:
    # 1/N is exact, so architecture ratios stay exactly N
    problems = s.violations()
    if problems:
        raise TopologyError(problems)
    return (1.0 / s.ratio) * db_to_linear(s.excess_loss_db)


def quantum_path_loss(t: Topology) -> DecibelLoss:
    """End-to-end 1550 nm loss from Alice to Bob."""
    return DecibelLoss(
        t.fiber1.loss_db(QUANTUM_NM)
        + t.split_point_loss_db()
        + t.fiber2.loss_db(QUANTUM_NM)
        + t.wdm_total_quantum_db
    )


def classical_path_loss(t: Topology, wavelength_nm: float, direction: Direction | str) -> DecibelLoss:
    """Loss of a GPON wavelength between OLT and ONU.

    Classical traffic always crosses the splitter, so the result does not
    depend on the architecture. The loss is reciprocal, hence ``direction``
    only selects the traversal order.
    """
    Direction(direction)
    if float(wavelength_nm) not in {float(w) for w in CLASSICAL_WAVELENGTHS}:
        raise WrongChannelError(
            f"{float(wavelength_nm):g} nm is not a classical GPON channel (1310/1490 nm)"
        )
    loss = (
        t.fiber1.loss_db(wavelength_nm)
        + float(splitter_loss(t.splitter))
        + t.fiber2.loss_db(wavelength_nm)
        + t.wdm_total_classical_db
    )
    if t.user_drop is not None:
        loss += t.user_drop.loss_db(wavelength_nm)
    return DecibelLoss(loss)


def validate(t: Topology) -> list[str]:
    """Return every invariant violation of ``t``; an empty list means valid."""
    problems: list[str] = []
    try:
        Architecture(t.architecture)
    except ValueError:
        problems.append(f"architecture must be through or bypass (got {t.architecture!r})")
    problems += t.fiber1.violations("fiber1")
    problems += t.fiber2.violations("fiber2")
    problems += t.splitter.violations()
    for name in ("wdm_total_quantum_db", "bypass_wdm_extra_db", "wdm_total_classical_db"):
        value = getattr(t, name)
        if not math.isfinite(value) or value < 0:
            problems.append(f"{name} >= 0 (got {value})")
    if not (0.0 <= t.receiver_wdm_share <= 1.0):
        problems.append(f"receiver_wdm_share in [0, 1] (got {t.receiver_wdm_share})")
    if t.user_drop is not None:
        problems += t.user_drop.violations("user_drop")
    return problems
