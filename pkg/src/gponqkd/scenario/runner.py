"""Sweep over fiber lengths x splitting ratios x architectures."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..analysis import SnrReport, snr_report, snr_through
from ..errors import GponQkdError
from ..keyrate import KeyRateResult, budget_to_channel, secure_key_rate
from ..noise import NoiseBudget, noise_budget
from ..topology import Architecture, quantum_path_loss
from .config import ScenarioConfig
from .reference import TABLE_I, TABLE_II

log = logging.getLogger(__name__)

LOSS_INFEASIBLE = "loss-infeasible"


@dataclass(frozen=True)
class ScenarioResult:
    """One (fiber config, ratio, architecture) cell.

    ``snr`` is the SNR of this architecture's own budget. ``report`` holds
    the multiplier computed from the through-splitter budget of the cell,
    shared by both architectures.
    """

    fiber1_km: float
    fiber2_km: float
    ratio: int
    architecture: Architecture
    loss_db: float | None = None
    budget: NoiseBudget | None = None
    snr: float | None = None
    report: SnrReport | None = None
    keyrate: KeyRateResult | None = None
    annotations: tuple[str, ...] = ()
    error: str | None = None
    reference_k: float | None = None
    reference_rate_bps: float | None = None

    @property
    def key(self) -> tuple[tuple[float, float], int]:
        return (self.fiber1_km, self.fiber2_km), self.ratio

    @property
    def feasible(self) -> bool:
        return self.keyrate is not None and self.keyrate.feasible

    @property
    def k(self) -> float | None:
        return self.report.k if self.report else None

    @property
    def qber(self) -> float | None:
        return self.keyrate.e_mu if self.keyrate else None

    @property
    def rate_bps(self) -> float | None:
        return self.keyrate.rate_bps if self.keyrate else None


def _evaluate_cell(cfg: ScenarioConfig, f1: float, f2: float, n: int) -> list[ScenarioResult]:
    key = ((f1, f2), n)
    mu = cfg.decoy.mu
    frac = cfg.decoy.signal_fraction
    try:
        through = cfg.topology_for(f1, f2, n, Architecture.THROUGH)
        ref_budget = noise_budget(through, cfg.sources, cfg.detector, mu, frac)
        report = snr_report(ref_budget, n)
    except GponQkdError as exc:
        log.debug("cell %s failed: %s", key, exc)
        return [
            ScenarioResult(f1, f2, n, arch, error=f"{type(exc).__name__}: {exc}")
            for arch in cfg.architectures
        ]

    out = []
    for arch in cfg.architectures:
        refs = {}
        if arch is Architecture.BYPASS:
            refs = {
                "reference_k": TABLE_I.cells.get(key),
                "reference_rate_bps": TABLE_II.cells.get(key),
            }
        try:
            topo = through.with_architecture(arch)
            loss = float(quantum_path_loss(topo))
            budget = ref_budget if arch is Architecture.THROUGH else noise_budget(
                topo, cfg.sources, cfg.detector, mu, frac
            )
            channel = budget_to_channel(budget, topo, cfg.detector, cfg.misalignment_error)
            rate = secure_key_rate(channel, cfg.decoy)
            notes = ()
            if arch is Architecture.THROUGH and loss > cfg.topology.loss_budget_db:
                notes = (LOSS_INFEASIBLE,)
            out.append(
                ScenarioResult(
                    f1, f2, n, arch,
                    loss_db=loss,
                    budget=budget,
                    snr=snr_through(budget),
                    report=report,
                    keyrate=rate,
                    annotations=notes,
                    **refs,
                )
            )
        except GponQkdError as exc:
            log.debug("cell %s/%s failed: %s", key, arch.value, exc)
            out.append(
                ScenarioResult(f1, f2, n, arch, report=report,
                               error=f"{type(exc).__name__}: {exc}", **refs)
            )
    return out


def run_sweep(cfg: ScenarioConfig) -> list[ScenarioResult]:
    """Evaluate every cell; failures are recorded on the cell, not raised.

    Records come back ordered by fiber config, ratio, then architecture
    (through before bypass), following the order given in ``cfg``.
    """
    results: list[ScenarioResult] = []
    for f1, f2 in cfg.fiber_configs:
        for n in cfg.ratios:
            results.extend(_evaluate_cell(cfg, f1, f2, n))
    return results
