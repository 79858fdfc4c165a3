"""Unit-carrying scalar types and the conversions between them.

Each type is a ``float`` subclass, so arithmetic keeps working, but the
constructor rejects values outside the physical domain and the class name
documents the unit at every API boundary.
"""

from __future__ import annotations

import math

from .errors import InvalidQuantityError

# Planck constant times speed of light, J*m.
HC_J_M = 1.98645e-25


def _finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidQuantityError(f"{what} must be finite, got {value!r}")
    return value


class DecibelLoss(float):
    """Attenuation in dB. Passive elements carry non-negative values."""

    __slots__ = ()

    def __new__(cls, db: float) -> "DecibelLoss":
        return super().__new__(cls, _finite(db, "loss in dB"))

    @property
    def transmittance(self) -> float:
        return db_to_linear(self)

    def __repr__(self) -> str:
        return f"DecibelLoss({float(self)!r} dB)"


class OpticalPower(float):
    """Optical power in watts."""

    __slots__ = ()

    def __new__(cls, watts: float) -> "OpticalPower":
        watts = _finite(watts, "optical power")
        if watts < 0:
            raise InvalidQuantityError(f"optical power must be >= 0 W, got {watts!r}")
        return super().__new__(cls, watts)

    @classmethod
    def from_dbm(cls, dbm: float) -> "OpticalPower":
        return dbm_to_watts(dbm)

    @property
    def dbm(self) -> float:
        return watts_to_dbm(self)

    def __repr__(self) -> str:
        return f"OpticalPower({float(self)!r} W)"


class Wavelength(float):
    """Vacuum wavelength in nanometres."""

    __slots__ = ()

    def __new__(cls, nm: float) -> "Wavelength":
        nm = _finite(nm, "wavelength")
        if nm <= 0:
            raise InvalidQuantityError(f"wavelength must be > 0 nm, got {nm!r}")
        return super().__new__(cls, nm)

    @property
    def meters(self) -> float:
        return float(self) * 1e-9

    def __repr__(self) -> str:
        return f"Wavelength({float(self)!r} nm)"


class CountRate(float):
    """Detector events per second."""

    __slots__ = ()

    def __new__(cls, hz: float) -> "CountRate":
        hz = _finite(hz, "count rate")
        if hz < 0:
            raise InvalidQuantityError(f"count rate must be >= 0 Hz, got {hz!r}")
        return super().__new__(cls, hz)

    def __repr__(self) -> str:
        return f"CountRate({float(self)!r} Hz)"


UPSTREAM_NM = Wavelength(1310.0)
DOWNSTREAM_NM = Wavelength(1490.0)
QUANTUM_NM = Wavelength(1550.0)
CLOCK_NM = Wavelength(1570.0)
CHANNEL_WAVELENGTHS = (UPSTREAM_NM, DOWNSTREAM_NM, QUANTUM_NM, CLOCK_NM)
CLASSICAL_WAVELENGTHS = (UPSTREAM_NM, DOWNSTREAM_NM)


def db_to_linear(loss_db: float) -> float:
    """Return the power transmittance ``10**(-loss_db/10)``."""
    return 10.0 ** (-_finite(loss_db, "loss in dB") / 10.0)


def linear_to_db(transmittance: float) -> DecibelLoss:
    transmittance = _finite(transmittance, "transmittance")
    if transmittance <= 0:
        raise InvalidQuantityError(f"transmittance must be > 0, got {transmittance!r}")
    return DecibelLoss(-10.0 * math.log10(transmittance))


def dbm_to_watts(power_dbm: float) -> OpticalPower:
    return OpticalPower(1e-3 * 10.0 ** (_finite(power_dbm, "power in dBm") / 10.0))


def watts_to_dbm(power_w: float) -> float:
    power_w = _finite(power_w, "optical power")
    if power_w <= 0:
        raise InvalidQuantityError(f"power must be > 0 W to express in dBm, got {power_w!r}")
    return 10.0 * math.log10(power_w / 1e-3)


def photon_rate(power: float, wavelength_nm: float) -> CountRate:
    """Photons per second carried by ``power`` watts at ``wavelength_nm``.

    The photon energy is ``hc/lambda`` with ``hc`` fixed at :data:`HC_J_M`.
    """
    power = OpticalPower(power)
    wavelength = Wavelength(wavelength_nm)
    return CountRate(float(power) * wavelength.meters / HC_J_M)
