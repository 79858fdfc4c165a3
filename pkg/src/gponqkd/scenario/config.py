"""Scenario configuration: JSON schema, defaults, dotted-path overrides.

Every physical key carries its unit as a suffix. A configuration file only
needs the keys it changes; everything else falls back to
:func:`default_config_dict`. Unknown keys are errors.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from ..errors import ConfigurationError, GponQkdError
from ..keyrate import DecoyParams
from ..noise import (
    DEFAULT_DOWNSTREAM_DBM,
    DEFAULT_RAMAN_COEFFICIENT,
    DEFAULT_UPSTREAM_DBM,
    ClassicalSource,
    DetectorSpec,
)
from ..quantities import DOWNSTREAM_NM, UPSTREAM_NM, dbm_to_watts
from ..topology import (
    DEFAULT_ATTENUATION_DB_PER_KM,
    DEFAULT_BYPASS_WDM_EXTRA_DB,
    DEFAULT_RECEIVER_WDM_SHARE,
    DEFAULT_WDM_TOTAL_CLASSICAL_DB,
    DEFAULT_WDM_TOTAL_QUANTUM_DB,
    Architecture,
    FiberSpan,
    Topology,
    flat_attenuation,
)

CONFIG_ENV_VAR = "GPONQKD_CONFIG"

REFERENCE_FIBER_CONFIGS = ((12.0, 2.0), (15.0, 2.0), (20.0, 2.0), (12.0, 12.0))
REFERENCE_RATIOS = (4, 8, 16, 32, 64, 128)

_DEFAULTS: dict[str, Any] = {
    "fiber_configs": [{"fiber1_km": f1, "fiber2_km": f2} for f1, f2 in REFERENCE_FIBER_CONFIGS],
    "ratios": list(REFERENCE_RATIOS),
    "architectures": "both",
    "topology": {
        "attenuation_db_per_km": DEFAULT_ATTENUATION_DB_PER_KM,
        "splitter_excess_db": 0.0,
        "wdm_total_quantum_db": DEFAULT_WDM_TOTAL_QUANTUM_DB,
        "bypass_wdm_extra_db": DEFAULT_BYPASS_WDM_EXTRA_DB,
        "wdm_total_classical_db": DEFAULT_WDM_TOTAL_CLASSICAL_DB,
        "receiver_wdm_share": DEFAULT_RECEIVER_WDM_SHARE,
        "user_drop_km": None,
        "loss_budget_db": 20.0,
    },
    "sources": {
        "downstream": {
            "power_dbm": DEFAULT_DOWNSTREAM_DBM,
            "raman_coefficient_per_km_ghz": DEFAULT_RAMAN_COEFFICIENT,
            "duty_factor": 1.0,
        },
        "upstream": {
            "power_dbm": DEFAULT_UPSTREAM_DBM,
            "raman_coefficient_per_km_ghz": DEFAULT_RAMAN_COEFFICIENT,
            "duty_factor": 1.0,
        },
    },
    "detector": {
        "efficiency": 0.10,
        "dark_rate_hz": 1000.0,
        "gate_width_s": 180e-12,
        "clock_hz": 625e6,
        "filter_bandwidth_ghz": 100.0,
        "noise_acceptance": 0.5,
    },
    "decoy": {
        "mu": 0.6,
        "nu": 0.2,
        "vacuum": True,
        "state_ratio": [6, 1, 1],
        "sifting": 0.5,
        "ec_efficiency": 1.16,
        "qber_cap": 0.03,
        "qber_max": 0.11,
        "misalignment_error": 0.01,
    },
    "point": {"fiber1_km": 12.0, "fiber2_km": 2.0, "ratio": 32},
    "budget": {
        "d0_hz": None,
        "d1_hz": None,
        "d2_hz": None,
        "d3_hz": None,
        "d4_hz": None,
        "q_signal_hz": None,
    },
    "channel": {"eta": None, "y0": None},
    "output": {"csv_path": None, "json_path": None, "plot_data_path": None},
}

# keys whose value may be a JSON object rather than a nested section
_FREEFORM = {("topology", "attenuation_db_per_km")}


def default_config_dict() -> dict[str, Any]:
    return copy.deepcopy(_DEFAULTS)


@dataclass(frozen=True)
class TopologySettings:
    attenuation_db_per_km: Mapping[float, float]
    splitter_excess_db: float
    wdm_total_quantum_db: float
    bypass_wdm_extra_db: float
    wdm_total_classical_db: float
    receiver_wdm_share: float
    user_drop_km: float | None
    loss_budget_db: float


@dataclass(frozen=True)
class ScenarioConfig:
    fiber_configs: tuple[tuple[float, float], ...]
    ratios: tuple[int, ...]
    architectures: tuple[Architecture, ...]
    topology: TopologySettings
    sources: tuple[ClassicalSource, ClassicalSource]
    detector: DetectorSpec
    decoy: DecoyParams
    misalignment_error: float
    point: tuple[float, float, int]
    budget: Mapping[str, float | None]
    channel: Mapping[str, float | None]
    output: Mapping[str, str | None]

    def topology_for(
        self, fiber1_km: float, fiber2_km: float, ratio: int, architecture: Architecture | str
    ) -> Topology:
        s = self.topology
        drop = None
        if s.user_drop_km is not None:
            drop = FiberSpan(s.user_drop_km, dict(s.attenuation_db_per_km))
        return Topology.build(
            fiber1_km,
            fiber2_km,
            ratio,
            architecture,
            attenuation_db_per_km=s.attenuation_db_per_km,
            splitter_excess_db=s.splitter_excess_db,
            wdm_total_quantum_db=s.wdm_total_quantum_db,
            bypass_wdm_extra_db=s.bypass_wdm_extra_db,
            wdm_total_classical_db=s.wdm_total_classical_db,
            receiver_wdm_share=s.receiver_wdm_share,
            user_drop=drop,
        )


def _merge(base: dict, update: Mapping, path: tuple[str, ...], problems: list[str]) -> None:
    for key, value in update.items():
        here = path + (key,)
        dotted = ".".join(here)
        if key not in base:
            problems.append(f"unknown field '{dotted}'")
        elif isinstance(base[key], dict) and here not in _FREEFORM:
            if not isinstance(value, Mapping):
                problems.append(f"'{dotted}' must be an object")
            else:
                _merge(base[key], value, here, problems)
        else:
            base[key] = copy.deepcopy(value)


def _number(d: Mapping, key: str, where: str, problems: list[str], optional: bool = False):
    value = d.get(key)
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        problems.append(f"'{where}.{key}' must be a finite number (got {value!r})")
        return math.nan
    return float(value)


def _collect(build, problems: list[str]):
    try:
        return build()
    except (GponQkdError, ValueError, TypeError) as exc:
        problems.extend(getattr(exc, "violations", None) or [str(exc)])
        return None


def config_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    """Validate ``data`` on top of the defaults; report every violation at once."""
    problems: list[str] = []
    if not isinstance(data, Mapping):
        raise ConfigurationError("configuration must be a JSON object")
    merged = default_config_dict()
    _merge(merged, data, (), problems)

    fibers = []
    raw_fibers = merged["fiber_configs"]
    if not isinstance(raw_fibers, list) or not raw_fibers:
        problems.append("'fiber_configs' must be a non-empty list")
        raw_fibers = []
    for i, fc in enumerate(raw_fibers):
        where = f"fiber_configs[{i}]"
        if isinstance(fc, Mapping):
            extra = set(fc) - {"fiber1_km", "fiber2_km"}
            if extra:
                problems.append(f"unknown field(s) {sorted(extra)} in {where}")
            f1 = _number(fc, "fiber1_km", where, problems)
            f2 = _number(fc, "fiber2_km", where, problems)
        elif isinstance(fc, (list, tuple)) and len(fc) == 2:
            f1 = _number({"fiber1_km": fc[0]}, "fiber1_km", where, problems)
            f2 = _number({"fiber2_km": fc[1]}, "fiber2_km", where, problems)
        else:
            problems.append(f"{where} must be {{fiber1_km, fiber2_km}}")
            continue
        for name, v in (("fiber1_km", f1), ("fiber2_km", f2)):
            if v == v and v < 0:
                problems.append(f"{where}.{name} >= 0 (got {v})")
        fibers.append((f1, f2))

    ratios = merged["ratios"]
    if not isinstance(ratios, list) or not ratios:
        problems.append("'ratios' must be a non-empty list")
        ratios = []
    for n in ratios:
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            problems.append(f"'ratios' entries must be integers >= 1 (got {n!r})")

    arch = merged["architectures"]
    archs: tuple[Architecture, ...] = ()
    if arch == "both":
        archs = (Architecture.THROUGH, Architecture.BYPASS)
    elif arch in ("through", "bypass"):
        archs = (Architecture(arch),)
    else:
        problems.append(f"'architectures' must be through, bypass or both (got {arch!r})")

    topo = merged["topology"]
    att = topo["attenuation_db_per_km"]
    if isinstance(att, Mapping):
        try:
            att_map = {float(k): float(v) for k, v in att.items()}
        except (TypeError, ValueError):
            problems.append("'topology.attenuation_db_per_km' keys must be wavelengths in nm")
            att_map = flat_attenuation()
        else:
            att_map = {**flat_attenuation(), **att_map}
    else:
        a = _number(topo, "attenuation_db_per_km", "topology", problems)
        att_map = flat_attenuation(a)
    settings = TopologySettings(
        attenuation_db_per_km=att_map,
        splitter_excess_db=_number(topo, "splitter_excess_db", "topology", problems),
        wdm_total_quantum_db=_number(topo, "wdm_total_quantum_db", "topology", problems),
        bypass_wdm_extra_db=_number(topo, "bypass_wdm_extra_db", "topology", problems),
        wdm_total_classical_db=_number(topo, "wdm_total_classical_db", "topology", problems),
        receiver_wdm_share=_number(topo, "receiver_wdm_share", "topology", problems),
        user_drop_km=_number(topo, "user_drop_km", "topology", problems, optional=True),
        loss_budget_db=_number(topo, "loss_budget_db", "topology", problems),
    )

    sources = []
    for name, wl in (("downstream", DOWNSTREAM_NM), ("upstream", UPSTREAM_NM)):
        src = merged["sources"][name]
        where = f"sources.{name}"
        dbm = _number(src, "power_dbm", where, problems)
        rho = _number(src, "raman_coefficient_per_km_ghz", where, problems)
        duty = _number(src, "duty_factor", where, problems)
        built = _collect(
            lambda: ClassicalSource(wl, dbm_to_watts(dbm), rho, duty), problems
        )
        if built is not None:
            sources.append(built)

    det_raw = merged["detector"]
    det_values = {k: _number(det_raw, k, "detector", problems) for k in det_raw}
    detector = _collect(lambda: DetectorSpec(**det_values), problems)

    dec = merged["decoy"]
    if not isinstance(dec["vacuum"], bool):
        problems.append(f"'decoy.vacuum' must be true or false (got {dec['vacuum']!r})")
    sr = dec["state_ratio"]
    if not isinstance(sr, list) or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in sr):
        problems.append(f"'decoy.state_ratio' must be a list of numbers (got {sr!r})")
        sr = [6, 1, 1]
    dec_values = {
        k: _number(dec, k, "decoy", problems)
        for k in ("mu", "nu", "sifting", "ec_efficiency", "qber_cap", "qber_max")
    }
    misalignment = _number(dec, "misalignment_error", "decoy", problems)
    if misalignment == misalignment and not (0 <= misalignment <= 0.5):
        problems.append(f"'decoy.misalignment_error' in [0, 0.5] (got {misalignment})")
    clock = det_values.get("clock_hz", math.nan)
    decoy = _collect(
        lambda: DecoyParams(
            vacuum=bool(dec["vacuum"]), state_ratio=tuple(sr), clock_hz=clock, **dec_values
        ),
        problems,
    )

    pt = merged["point"]
    point_ratio = pt.get("ratio")
    if isinstance(point_ratio, bool) or not isinstance(point_ratio, int) or point_ratio < 1:
        problems.append(f"'point.ratio' must be an integer >= 1 (got {point_ratio!r})")
    point = (
        _number(pt, "fiber1_km", "point", problems),
        _number(pt, "fiber2_km", "point", problems),
        point_ratio,
    )
    budget = {k: _number(merged["budget"], k, "budget", problems, optional=True) for k in merged["budget"]}
    for k, v in budget.items():
        if v is not None and v == v and v < 0:
            problems.append(f"'budget.{k}' >= 0 (got {v})")
    channel = {k: _number(merged["channel"], k, "channel", problems, optional=True) for k in merged["channel"]}
    output = dict(merged["output"])
    for k, v in output.items():
        if v is not None and not isinstance(v, str):
            problems.append(f"'output.{k}' must be a path string or null")

    cfg = None
    if not problems:
        cfg = ScenarioConfig(
            fiber_configs=tuple(fibers),
            ratios=tuple(ratios),
            architectures=archs,
            topology=settings,
            sources=tuple(sources),
            detector=detector,
            decoy=decoy,
            misalignment_error=misalignment,
            point=point,
            budget=budget,
            channel=channel,
            output=output,
        )
        # one probe topology catches range errors in the shared settings
        f1, f2 = cfg.fiber_configs[0]
        _collect(lambda: cfg.topology_for(f1, f2, cfg.ratios[0], Architecture.THROUGH), problems)
    if problems:
        raise ConfigurationError(problems)
    return cfg


def parse_override(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigurationError(f"override '{text}' is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(
    data: Mapping[str, Any],
    overrides: Iterable[str],
    aliases: Mapping[str, str] | None = None,
    problems: list[str] | None = None,
) -> dict[str, Any]:
    """Return a copy of ``data`` with ``path.to.key=value`` overrides applied.

    Paths are checked against the default schema, so a typo is an error.
    When ``problems`` is given, bad overrides are appended to it and skipped
    instead of raising.
    """
    out = copy.deepcopy(dict(data))
    collect = problems is not None
    problems = problems if collect else []
    for text in overrides:
        try:
            key, value = parse_override(text)
        except ConfigurationError as exc:
            problems.extend(exc.violations)
            continue
        if aliases and key in aliases:
            key = aliases[key]
        parts = key.split(".")
        schema: Any = _DEFAULTS
        ok = True
        for i, part in enumerate(parts):
            if not isinstance(schema, dict) or part not in schema or (
                i < len(parts) - 1 and tuple(parts[: i + 1]) in _FREEFORM
            ):
                ok = False
                break
            schema = schema[part]
        if not ok:
            problems.append(f"unknown override path '{key}'")
            continue
        node = out
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                problems.append(f"cannot override inside non-object '{key}'")
                break
        else:
            node[parts[-1]] = value
    if problems and not collect:
        raise ConfigurationError(problems)
    return out


def read_config_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a JSON object")
    return data


def load_config(path: str | Path | None = None, overrides: Iterable[str] = ()) -> ScenarioConfig:
    data = read_config_file(path) if path is not None else {}
    return config_from_dict(apply_overrides(data, overrides))
