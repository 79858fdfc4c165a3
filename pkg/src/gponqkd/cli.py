"""Command-line front end.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Sequence

from .analysis import snr_report
from .errors import ConfigurationError, GponQkdError, InvalidQuantityError, TopologyError
from .keyrate import ChannelModel, budget_to_channel, secure_key_rate
from .noise import NoiseBudget, noise_budget
from .scenario import config as config_mod
from .scenario.reference import TABLE_I, TABLE_II
from .scenario.report import (
    _json_number,
    calibration_csv,
    calibration_json,
    calibration_report,
    compare_with_reference,
    emit,
    emit_plot_data,
    atomic_write_text,
    fmt,
    sweep_csv,
    sweep_json,
)
from .scenario.runner import run_sweep
from .topology import Architecture, quantum_path_loss

# short names accepted by --override
ALIASES = {
    "d0": "budget.d0_hz",
    "d1": "budget.d1_hz",
    "d2": "budget.d2_hz",
    "d3": "budget.d3_hz",
    "d4": "budget.d4_hz",
    "q": "budget.q_signal_hz",
    "N": "point.ratio",
    "eta": "channel.eta",
    "y0": "channel.y0",
}


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=os.environ.get(config_mod.CONFIG_ENV_VAR),
        help=f"JSON scenario file (default: ${config_mod.CONFIG_ENV_VAR}, else built-in defaults)",
    )
    common.add_argument(
        "-o", "--override", action="append", default=[], metavar="PATH=VALUE",
        help="override a config field, e.g. detector.efficiency=0.2 (repeatable)",
    )
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", help="write the result to this file instead of stdout")

    p = argparse.ArgumentParser(prog="gponqkd", description="QKD over GPON: splitter bypass analysis")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("tables", parents=[common], help="print the embedded reference tables")
    sub.add_parser("calibrate", parents=[common], help="noise ratio r for each Table I cell")
    sub.add_parser("snr", parents=[common], help="SNR of both architectures and the multiplier K")
    sub.add_parser("keyrate", parents=[common], help="decoy-state key rate at one operating point")
    sw = sub.add_parser("sweep", parents=[common], help="fiber length x splitting ratio sweep")
    sw.add_argument("--plot-data", help="write SNR / rate series versus ratio to this CSV")
    sw.add_argument("--compare", action="store_true", help="append a reference comparison (json only)")
    return p


def _emit_text(args, text: str) -> None:
    if args.output:
        atomic_write_text(args.output, text)
    else:
        sys.stdout.write(text)


def _emit_json(args, doc: Any) -> None:
    _emit_text(args, json.dumps(doc, indent=2, allow_nan=False) + "\n")


def _cmd_tables(args, cfg) -> int:
    tables = (TABLE_I, TABLE_II)
    if args.format == "json":
        _emit_json(args, {
            f"table_{t.table_id.lower()}": [
                {"fiber1_km": fc[0], "fiber2_km": fc[1], "ratio": n, t.quantity: v}
                for (fc, n), v in t.cells.items()
            ]
            for t in tables
        })
        return 0
    if args.format == "csv":
        rows = ["table,fiber1_km,fiber2_km,ratio,value\n"]
        for t in tables:
            rows += [f"{t.table_id},{fmt(fc[0])},{fmt(fc[1])},{n},{fmt(v)}\n" for (fc, n), v in t.cells.items()]
        _emit_text(args, "".join(rows))
        return 0
    lines = []
    for t, title in ((TABLE_I, "Table I: SNR multiplier K"), (TABLE_II, "Table II: key rate (bps)")):
        lines.append(title)
        lines.append("fiber".ljust(12) + "".join(f"1:{n}".rjust(10) for n in t.ratios))
        for fc in t.fiber_configs:
            row = t.row(fc)
            label = f"{fmt(fc[0])}km+{fmt(fc[1])}km"
            lines.append(label.ljust(12) + "".join(fmt(row[n]).rjust(10) for n in t.ratios))
        lines.append("")
    _emit_text(args, "\n".join(lines))
    return 0


def _cmd_calibrate(args, cfg) -> int:
    report = calibration_report(TABLE_I)
    if args.format == "json":
        _emit_json(args, calibration_json(report))
    elif args.format == "csv" or args.output:
        _emit_text(args, calibration_csv(report))
    else:
        lines = [f"{'fiber':<12}{'ratio':>7}{'K':>9}{'r':>14}{'K(r)':>12}  status"]
        for (fc, n), c in report.items():
            lines.append(
                f"{fmt(fc[0]) + 'km+' + fmt(fc[1]) + 'km':<12}{n:>7}{c.k_reference:>9.2f}"
                f"{fmt(c.r):>14}{fmt(c.k_roundtrip):>12}  {c.status}"
            )
        _emit_text(args, "\n".join(lines) + "\n")
    return 0


def _point_budget(cfg) -> tuple[NoiseBudget, int]:
    f1, f2, n = cfg.point
    manual = {k: v for k, v in cfg.budget.items() if v is not None}
    if manual:
        return NoiseBudget(
            d0=manual.get("d0_hz", 0.0),
            d1=manual.get("d1_hz", 0.0),
            d2=manual.get("d2_hz", 0.0),
            d3=manual.get("d3_hz", 0.0),
            d4=manual.get("d4_hz", 0.0),
            q_signal=manual.get("q_signal_hz", 1.0),
        ), n
    topo = cfg.topology_for(f1, f2, n, Architecture.THROUGH)
    return noise_budget(topo, cfg.sources, cfg.detector, cfg.decoy.mu, cfg.decoy.signal_fraction), n


def _cmd_snr(args, cfg) -> int:
    budget, n = _point_budget(cfg)
    rep = snr_report(budget, n)
    doc = {
        "ratio": n,
        "budget_hz": {
            "d0": float(budget.d0), "d1": float(budget.d1), "d2": float(budget.d2),
            "d3": float(budget.d3), "d4": float(budget.d4), "q_signal": float(budget.q_signal),
        },
        "snr_through": rep.snr_through,
        "snr_bypass": rep.snr_bypass,
        "k": rep.k,
        "r": rep.ratio,
    }
    if args.format == "json":
        doc["budget_hz"] = {k: _json_number(v) for k, v in doc["budget_hz"].items()}
        _emit_json(args, {k: _json_number(v) for k, v in doc.items()})
    else:
        lines = [f"N            {n}"]
        lines += [f"{k:<12} {fmt(v)} Hz" for k, v in doc["budget_hz"].items()]
        lines += [f"{k:<12} {fmt(doc[k])}" for k in ("snr_through", "snr_bypass", "k", "r")]
        _emit_text(args, "\n".join(lines) + "\n")
    return 0


def _cmd_keyrate(args, cfg) -> int:
    eta, y0 = cfg.channel.get("eta"), cfg.channel.get("y0")
    results = {}
    if eta is not None or y0 is not None:
        ch = ChannelModel(eta=eta if eta is not None else 1.0, y0=y0 or 0.0,
                          e_detector=cfg.misalignment_error)
        results["channel"] = secure_key_rate(ch, cfg.decoy)
    else:
        f1, f2, n = cfg.point
        for arch in Architecture:
            topo = cfg.topology_for(f1, f2, n, arch)
            b = noise_budget(topo, cfg.sources, cfg.detector, cfg.decoy.mu, cfg.decoy.signal_fraction)
            ch = budget_to_channel(b, topo, cfg.detector, cfg.misalignment_error)
            results[arch.value] = secure_key_rate(ch, cfg.decoy)
    if args.format == "json":
        _emit_json(args, {name: {k: _json_number(v) for k, v in asdict(r).items()} for name, r in results.items()})
    else:
        lines = []
        for name, r in results.items():
            status = "ok" if r.feasible else f"infeasible ({r.reason})"
            lines.append(f"{name:<8} rate {fmt(r.rate_bps)} bps  QBER {fmt(r.e_mu)}  "
                         f"gain {fmt(r.q_mu)}  Y1>= {fmt(r.y1_lower)}  e1<= {fmt(r.e1_upper)}  {status}")
        _emit_text(args, "\n".join(lines) + "\n")
    return 0


def _cmd_sweep(args, cfg) -> int:
    results = run_sweep(cfg)
    fmt_name = "json" if args.format == "json" else "csv"
    out = args.output or cfg.output.get(f"{fmt_name}_path")
    if args.format == "json":
        doc: Any = json.loads(sweep_json(results))
        if args.compare:
            doc = {"records": doc, "comparison": [
                compare_with_reference(results, t).to_json() for t in (TABLE_I, TABLE_II)
            ]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = sweep_csv(results)
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)
    plot = args.plot_data or cfg.output.get("plot_data_path")
    if plot is None and out:
        plot = str(Path(out).with_suffix("")) + "_plot.csv"
    if plot:
        emit_plot_data(results, plot)
    failed = [r for r in results if r.error]
    for r in failed:
        print(f"cell {fmt(r.fiber1_km)}+{fmt(r.fiber2_km)} km 1:{r.ratio} {r.architecture.value}: {r.error}",
              file=sys.stderr)
    return 0


_COMMANDS = {
    "tables": _cmd_tables,
    "calibrate": _cmd_calibrate,
    "snr": _cmd_snr,
    "keyrate": _cmd_keyrate,
    "sweep": _cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    problems: list[str] = []
    cfg = None
    try:
        data = config_mod.read_config_file(args.config) if args.config else {}
        data = config_mod.apply_overrides(data, args.override, ALIASES, problems)
        cfg = config_mod.config_from_dict(data)
    except (ConfigurationError, TopologyError) as exc:
        problems.extend(exc.violations)
    if problems or cfg is None:
        print("configuration error:", file=sys.stderr)
        for v in problems:
            print(f"  - {v}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, cfg)
    except (TopologyError, InvalidQuantityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GponQkdError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
