"""SNR of both architectures, the SNR multiplier K and its inversion.

All functions take the through-splitter budget as the reference: moving
the quantum channel around the splitter multiplies the signal and the two
fiber1 noise terms (d1, d4) by the splitting ratio N and leaves d0, d2
and d3 unchanged. Grouping the noise as ``r = (d1 + d4) / (d0 + d2 + d3)``
gives ``K = N (1 + r) / (1 + N r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError, InvalidQuantityError, OutOfModelError
from .noise import NoiseBudget
from .topology import Architecture


@dataclass(frozen=True)
class SnrReport:
    snr_through: float
    snr_bypass: float
    k: float
    ratio: float


def _check_ratio(N: float) -> None:
    if not math.isfinite(N) or N < 1:
        raise InvalidQuantityError(f"splitting ratio must be >= 1, got {N!r}")


def _check_reference(b: NoiseBudget) -> None:
    if b.architecture is Architecture.BYPASS:
        raise InvalidQuantityError("expected a through-splitter reference budget, got a bypass one")


def snr_through(b: NoiseBudget) -> float:
    noise = b.d0 + b.d1 + b.d2 + b.d3 + b.d4
    if noise <= 0:
        raise DegenerateInputError("total noise is zero; SNR undefined")
    return b.q_signal / noise


def snr_bypass(b: NoiseBudget, N: float) -> float:
    """SNR after the quantum channel bypasses an N-way splitter."""
    _check_reference(b)
    _check_ratio(N)
    noise = b.d0 + N * b.d1 + b.d2 + b.d3 + N * b.d4
    if noise <= 0:
        raise DegenerateInputError("total noise is zero; SNR undefined")
    return N * b.q_signal / noise


def noise_ratio(b: NoiseBudget) -> float:
    """``(d1 + d4) / (d0 + d2 + d3)``; infinite when only fiber1 noise exists."""
    fixed = b.d0 + b.d2 + b.d3
    scaled = b.d1 + b.d4
    if fixed == 0:
        if scaled == 0:
            raise DegenerateInputError("all noise terms are zero")
        return math.inf
    return scaled / fixed


def multiplier_k(b: NoiseBudget, N: float) -> float:
    """SNR enhancement of the bypass architecture, in [1, N]."""
    _check_reference(b)
    _check_ratio(N)
    fixed = b.d0 + b.d2 + b.d3
    scaled = b.d1 + b.d4
    if fixed == 0 and scaled == 0:
        raise DegenerateInputError("all noise terms are zero; K undefined")
    # the two ends of the range are exact, not rounded
    if scaled == 0:
        return float(N)
    if fixed == 0:
        return 1.0
    total = b.d0 + b.d1 + b.d2 + b.d3 + b.d4
    return N * total / (b.d0 + N * b.d1 + b.d2 + b.d3 + N * b.d4)


def k_from_ratio(r: float, N: float) -> float:
    if math.isnan(r) or r < 0:
        raise InvalidQuantityError(f"noise ratio must be >= 0, got {r!r}")
    _check_ratio(N)
    if math.isinf(r):
        return 1.0
    return N * (1.0 + r) / (1.0 + N * r)


def calibrate_ratio(K: float, N: float) -> float:
    """Noise ratio ``r`` that reproduces a measured multiplier ``K``.

    Raises :class:`OutOfModelError` unless ``1 < K <= N``; measured values
    are never clamped into range.
    """
    _check_ratio(N)
    if not math.isfinite(K) or K <= 1 or K > N:
        raise OutOfModelError(f"K={K!r} outside the model range (1, {N}]")
    return (N - K) / (N * (K - 1.0))


def snr_report(b: NoiseBudget, N: float) -> SnrReport:
    s1 = snr_through(b)
    return SnrReport(
        snr_through=s1,
        snr_bypass=snr_bypass(b, N),
        k=multiplier_k(b, N),
        ratio=noise_ratio(b),
    )
