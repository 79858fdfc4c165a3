from .config import (
    CONFIG_ENV_VAR,
    ScenarioConfig,
    apply_overrides,
    config_from_dict,
    default_config_dict,
    load_config,
)
from .reference import TABLE_I, TABLE_II, ReferenceTable
from .report import (
    calibration_report,
    compare_with_reference,
    emit,
    emit_plot_data,
)
from .runner import ScenarioResult, run_sweep

__all__ = [
    "CONFIG_ENV_VAR",
    "ReferenceTable",
    "ScenarioConfig",
    "ScenarioResult",
    "TABLE_I",
    "TABLE_II",
    "apply_overrides",
    "calibration_report",
    "compare_with_reference",
    "config_from_dict",
    "default_config_dict",
    "emit",
    "emit_plot_data",
    "load_config",
    "run_sweep",
]
