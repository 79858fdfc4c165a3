"""Published SNR multipliers and key rates for the bypass architecture.

Cells are keyed by ``((fiber1_km, fiber2_km), N)``. In the key-rate table a
zero marks a configuration where no key could be produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .config import REFERENCE_FIBER_CONFIGS, REFERENCE_RATIOS

CellKey = tuple[tuple[float, float], int]

_K_ROWS = (
    (2.09, 3.89, 6.03, 8.46, 10.24, 11.84),
    (2.06, 3.68, 5.16, 6.90, 7.92, 8.55),
    (2.24, 3.41, 4.15, 6.49, 7.22, 8.22),
    (3.86, 6.40, 11.08, 24.04, 24.04, 34.73),
)

_BPS_ROWS = (
    (10900, 10600, 10400, 10300, 35000, 0),
    (5130, 4400, 4300, 0, 0, 0),
    (4200, 3700, 1900, 0, 0, 0),
    (2700, 0, 0, 0, 0, 0),
)


@dataclass(frozen=True)
class ReferenceTable:
    table_id: str
    quantity: str
    cells: Mapping[CellKey, float]

    @property
    def fiber_configs(self) -> tuple[tuple[float, float], ...]:
        return tuple(dict.fromkeys(fc for fc, _ in self.cells))

    @property
    def ratios(self) -> tuple[int, ...]:
        return tuple(dict.fromkeys(n for _, n in self.cells))

    def row(self, fiber_config: tuple[float, float]) -> dict[int, float]:
        return {n: v for (fc, n), v in self.cells.items() if fc == fiber_config}

    def anomalies(self) -> dict[CellKey, str]:
        """Key-rate cells that exceed the smallest-ratio value of their row."""
        if self.table_id != "II":
            return {}
        notes = {}
        for fc in self.fiber_configs:
            row = self.row(fc)
            first_n = min(row)
            for n, v in row.items():
                if n != first_n and v > row[first_n]:
                    notes[(fc, n)] = f"anomalous: exceeds same-row 1:{first_n} value"
        return notes


def _table(table_id: str, quantity: str, rows) -> ReferenceTable:
    cells = {
        (fc, n): float(v)
        for fc, values in zip(REFERENCE_FIBER_CONFIGS, rows)
        for n, v in zip(REFERENCE_RATIOS, values)
    }
    return ReferenceTable(table_id, quantity, MappingProxyType(cells))


TABLE_I = _table("I", "k", _K_ROWS)
TABLE_II = _table("II", "rate_bps", _BPS_ROWS)
