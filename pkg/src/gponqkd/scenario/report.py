"""Calibration against Table-I-style data, reference comparison, file output.

CSV columns of a sweep, in order::

    fiber1_km, fiber2_km, ratio, architecture, loss_db,
    d0, d1, d2, d3, d4, q_signal, snr, k, qber, rate_bps, feasible

Count rates are in Hz, losses in dB, rates in bit/s. Numbers are written
with 9 significant digits; empty fields mean "not computed" (see the JSON
``error`` field for the reason).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..analysis import calibrate_ratio, k_from_ratio
from ..errors import OutOfModelError, ReferenceMismatchError
from ..topology import Architecture
from .reference import CellKey, ReferenceTable
from .runner import ScenarioResult

CSV_COLUMNS = (
    "fiber1_km", "fiber2_km", "ratio", "architecture", "loss_db",
    "d0", "d1", "d2", "d3", "d4", "q_signal",
    "snr", "k", "qber", "rate_bps", "feasible",
)
CALIBRATION_COLUMNS = (
    "fiber1_km", "fiber2_km", "ratio", "k_reference", "r", "k_roundtrip",
    "roundtrip_rel_error", "status",
)
PLOT_COLUMNS = ("series", "fiber1_km", "fiber2_km", "architecture", "ratio", "snr", "rate_bps")


def fmt(value: Any) -> str:
    """Canonical text form used by every writer."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".9g")
    return str(value)


def _json_number(value: Any) -> Any:
    if isinstance(value, float) and not isinstance(value, bool):
        if not math.isfinite(value):
            return None
        return float(format(value, ".9g"))
    return value


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return path


def _csv_text(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# -- sweep records ---------------------------------------------------------

def record_fields(r: ScenarioResult) -> dict[str, Any]:
    b = r.budget
    return {
        "fiber1_km": r.fiber1_km,
        "fiber2_km": r.fiber2_km,
        "ratio": r.ratio,
        "architecture": r.architecture.value,
        "loss_db": r.loss_db,
        "d0": float(b.d0) if b else None,
        "d1": float(b.d1) if b else None,
        "d2": float(b.d2) if b else None,
        "d3": float(b.d3) if b else None,
        "d4": float(b.d4) if b else None,
        "q_signal": float(b.q_signal) if b else None,
        "snr": r.snr,
        "k": r.k,
        "qber": r.qber,
        "rate_bps": r.rate_bps,
        "feasible": r.feasible,
    }


def sweep_csv(results: Sequence[ScenarioResult]) -> str:
    return _csv_text(CSV_COLUMNS, ([record_fields(r)[c] for c in CSV_COLUMNS] for r in results))


def sweep_json(results: Sequence[ScenarioResult]) -> str:
    records = []
    for r in results:
        rec = {k: _json_number(v) for k, v in record_fields(r).items()}
        rec["annotations"] = list(r.annotations)
        rec["infeasible_reason"] = r.keyrate.reason if r.keyrate and not r.keyrate.feasible else None
        rec["error"] = r.error
        rec["reference_k"] = _json_number(r.reference_k)
        rec["reference_rate_bps"] = _json_number(r.reference_rate_bps)
        records.append(rec)
    return json.dumps(records, indent=2) + "\n"


def emit(results: Sequence[ScenarioResult], path: str | Path, format: str = "csv") -> Path:
    """Write sweep records as ``csv`` or ``json``."""
    if format == "csv":
        return atomic_write_text(path, sweep_csv(results))
    if format == "json":
        return atomic_write_text(path, sweep_json(results))
    raise ValueError(f"unknown output format {format!r}")


def plot_data_csv(results: Sequence[ScenarioResult]) -> str:
    """Long-format series for SNR / key rate versus splitting ratio."""
    rows = []
    for r in results:
        series = f"{fmt(r.fiber1_km)}km+{fmt(r.fiber2_km)}km/{r.architecture.value}"
        rows.append((series, r.fiber1_km, r.fiber2_km, r.architecture.value, r.ratio, r.snr, r.rate_bps))
    rows.sort(key=lambda row: (row[1], row[2], row[3], row[4]))
    return _csv_text(PLOT_COLUMNS, rows)


def emit_plot_data(results: Sequence[ScenarioResult], path: str | Path) -> Path:
    return atomic_write_text(path, plot_data_csv(results))


# -- calibration -----------------------------------------------------------

@dataclass(frozen=True)
class CalibrationCell:
    key: CellKey
    k_reference: float
    r: float | None
    k_roundtrip: float | None
    status: str = "ok"

    @property
    def roundtrip_rel_error(self) -> float | None:
        if self.k_roundtrip is None:
            return None
        return abs(self.k_roundtrip - self.k_reference) / self.k_reference


def calibration_report(table: ReferenceTable) -> dict[CellKey, CalibrationCell]:
    """Noise ratio r for each measured multiplier, with a round-trip check.

    Out-of-range multipliers are kept in the report with their error status.
    """
    out = {}
    for key, k in table.cells.items():
        n = key[1]
        try:
            r = calibrate_ratio(k, n)
        except OutOfModelError as exc:
            out[key] = CalibrationCell(key, k, None, None, f"out-of-model: {exc}")
            continue
        out[key] = CalibrationCell(key, k, r, k_from_ratio(r, n))
    return out


def calibration_csv(report: dict[CellKey, CalibrationCell]) -> str:
    rows = (
        (fc[0], fc[1], n, c.k_reference, c.r, c.k_roundtrip, c.roundtrip_rel_error, c.status)
        for (fc, n), c in report.items()
    )
    return _csv_text(CALIBRATION_COLUMNS, rows)


def calibration_json(report: dict[CellKey, CalibrationCell]) -> list[dict[str, Any]]:
    return [
        {
            "fiber1_km": fc[0],
            "fiber2_km": fc[1],
            "ratio": n,
            "k_reference": c.k_reference,
            "r": _json_number(c.r),
            "k_roundtrip": _json_number(c.k_roundtrip),
            "roundtrip_rel_error": c.roundtrip_rel_error,
            "status": c.status,
        }
        for (fc, n), c in report.items()
    ]


# -- comparison ------------------------------------------------------------

@dataclass(frozen=True)
class CellDeviation:
    key: CellKey
    model: float | None
    reference: float
    abs_deviation: float | None
    rel_deviation: float | None
    model_feasible: bool
    reference_feasible: bool
    note: str = ""

    @property
    def feasibility_agrees(self) -> bool:
        return self.model_feasible == self.reference_feasible


@dataclass(frozen=True)
class ComparisonReport:
    table_id: str
    cells: tuple[CellDeviation, ...]

    @property
    def feasibility_agreement(self) -> float:
        """Fraction of cells whose zero/non-zero status matches the reference."""
        return sum(c.feasibility_agrees for c in self.cells) / len(self.cells)

    def to_json(self) -> dict[str, Any]:
        return {
            "table": self.table_id,
            "feasibility_agreement": self.feasibility_agreement,
            "cells": [
                {
                    "fiber1_km": c.key[0][0],
                    "fiber2_km": c.key[0][1],
                    "ratio": c.key[1],
                    "model": _json_number(c.model),
                    "reference": c.reference,
                    "abs_deviation": _json_number(c.abs_deviation),
                    "rel_deviation": _json_number(c.rel_deviation),
                    "model_feasible": c.model_feasible,
                    "reference_feasible": c.reference_feasible,
                    "note": c.note,
                }
                for c in self.cells
            ],
        }


def compare_with_reference(
    results: Sequence[ScenarioResult], table: ReferenceTable
) -> ComparisonReport:
    """Per-cell deviation of bypass-architecture results from ``table``.

    Table I cells compare the multiplier K; Table II cells compare the key
    rate, with the zero / non-zero pattern reported separately.
    """
    model = {r.key: r for r in results if r.architecture is Architecture.BYPASS}
    missing = [k for k in table.cells if k not in model]
    extra = [k for k in model if k not in table.cells]
    if missing or extra:
        raise ReferenceMismatchError(missing, extra)
    notes = table.anomalies()
    cells = []
    for key, ref in table.cells.items():
        rec = model[key]
        value = rec.k if table.quantity == "k" else rec.rate_bps
        if table.quantity == "k":
            model_ok, ref_ok = value is not None, True
        else:
            model_ok, ref_ok = rec.feasible, ref > 0
        dev = None if value is None else value - ref
        rel = None if dev is None or ref == 0 else abs(dev) / abs(ref)
        cells.append(CellDeviation(key, value, ref, dev, rel, model_ok, ref_ok, notes.get(key, "")))
    return ComparisonReport(table.table_id, tuple(cells))
