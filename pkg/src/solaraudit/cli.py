"""Command-line entry point.

    solaraudit <command> [--config FILE] [--key value ...]
                         [--format csv|json] [--out PATH]

Commands evaluate one model and print its audit table. Parameters layer
as shipped defaults, then the --config file, then --key flags. Exit code
2 flags configuration problems, 3 numerical failures.
"""

import sys

import numpy as np

from . import config as cfg
from .errors import ConfigError, NumericsError
from .fmo import FmoConfig, sigma_trace
from .models import (
    DonorAcceptorParams,
    PhotocellParams,
    ThreeLevelParams,
    decay_report,
    donor_acceptor_report,
    hamiltonian_transfer_report,
    photocell_report,
)
from .output import emit_csv, emit_json, format_number, write_output
from .sweeps import SweepSpec, power_comparison, run_sweep

COMMANDS = (
    "toy-decay",
    "toy-ham",
    "donor-acceptor",
    "photocell",
    "fmo-trace",
    "sweep",
    "compare-power",
)

COMMAND_SECTIONS = {
    "toy-decay": "toy",
    "toy-ham": "toy",
    "donor-acceptor": "donor_acceptor",
    "photocell": "photocell",
    "fmo-trace": "fmo",
    "compare-power": "compare_power",
}

REPORT_HEADER = ("j_abs", "j_loss", "power", "ratio", "sigma", "verdict")

MODEL_UNITS = {
    "energy": "model units",
    "time": "1/energy",
    "power": "energy per time, positive into the system",
}

TRACE_UNITS = {
    "time": "ps",
    "current": "cm^-1 per ps",
    "sigma": "nat per ps",
}

USAGE = (
    __doc__
    + "\nCommands: "
    + ", ".join(COMMANDS)
    + "\nSweep models: "
    + ", ".join(cfg.SWEEP_MODELS)
    + "\n"
)


def _parse_argv(argv):
    if not argv or argv[0] in ("-h", "--help", "help"):
        return None
    command = argv[0]
    if command not in COMMANDS:
        raise ConfigError(
            f"unknown command {command!r}; commands: " + ", ".join(COMMANDS)
        )
    config_path = None
    fmt = "csv"
    out = None
    overrides = {}
    i = 1
    while i < len(argv):
        arg = argv[i]
        if not arg.startswith("--") or len(arg) <= 2:
            raise ConfigError(f"unexpected argument {arg!r}; flags look like --key value")
        key = arg[2:]
        if key == "help":
            return None
        i += 1
        if i >= len(argv):
            raise ConfigError(f"flag --{key} needs a value")
        value = argv[i]
        i += 1
        if key == "config":
            config_path = value
        elif key == "format":
            if value not in ("csv", "json"):
                raise ConfigError(f"--format must be csv or json, got {value!r}")
            fmt = value
        elif key == "out":
            out = value
        else:
            overrides[key] = value
    return command, config_path, fmt, out, overrides


def _file_sections(config_path):
    if config_path is None:
        return {}
    raw = cfg.parse_config_file(config_path)
    return cfg.validate_sections(raw, where=config_path)


def _section_params(section, file_sections, overrides):
    params = dict(cfg.default_section(section))
    params.update(file_sections.get(section, {}))
    params.update(cfg.convert_section(section, overrides, where="flags"))
    return params


def _sweep_params(file_sections, overrides):
    """Sweep settings come from [sweep]; the swept model's fixed values
    come from its own section. Flags may touch either namespace, with the
    model chosen first so the flag namespace is well defined."""
    sweep_params = dict(cfg.default_section("sweep"))
    sweep_params.update(file_sections.get("sweep", {}))
    if "model" in overrides:
        chosen = cfg.convert_section("sweep", {"model": overrides["model"]}, where="flags")
        sweep_params["model"] = chosen["model"]
    model = sweep_params["model"]
    model_section = cfg.MODEL_SECTIONS[model]

    fixed = dict(cfg.default_section(model_section))
    fixed.update(file_sections.get(model_section, {}))

    sweep_schema = cfg.SCHEMAS["sweep"]
    model_schema = cfg.SCHEMAS[model_section]
    sweep_flags = {}
    model_flags = {}
    unknown = []
    for key, value in overrides.items():
        if key in sweep_schema:
            sweep_flags[key] = value
        elif key in model_schema:
            model_flags[key] = value
        else:
            unknown.append("--" + key)
    if unknown:
        raise ConfigError(
            f"unknown flags for a sweep over {model}: " + ", ".join(sorted(unknown))
        )
    sweep_params.update(cfg.convert_section("sweep", sweep_flags, where="flags"))
    fixed.update(cfg.convert_section(model_section, model_flags, where="flags"))
    return sweep_params, fixed


def _build(params_cls, params):
    try:
        return params_cls(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _report_output(command, params, report, fmt):
    rows = [
        (report.j_abs, report.j_loss, report.power, report.ratio, report.sigma, report.verdict)
    ]
    if fmt == "csv":
        return emit_csv(REPORT_HEADER, rows)
    return emit_json(
        {
            "model": command,
            "params": params,
            "units": MODEL_UNITS,
            "rows": rows,
            "violations": [],
        }
    )


def _linspace(start, stop, points, what):
    if points < 2:
        raise ConfigError(f"{what} needs at least 2 points, got {points}")
    if not stop > start:
        raise ConfigError(f"{what} needs stop > start, got {start} .. {stop}")
    return np.linspace(start, stop, points)


def _run_command(command, config_path, fmt, out, overrides):
    file_sections = _file_sections(config_path)

    if command == "sweep":
        sweep_params, fixed = _sweep_params(file_sections, overrides)
        grid = _linspace(
            sweep_params["axis_start"],
            sweep_params["axis_stop"],
            sweep_params["axis_points"],
            "sweep grid",
        )
        spec = SweepSpec(
            model=sweep_params["model"],
            axis=sweep_params["axis"],
            grid=grid,
            fixed=fixed,
        )
        table = run_sweep(spec)
        rows = table.rows()
        if fmt == "csv":
            footers = [
                f"# violation: {format_number(lo)}..{format_number(hi)}"
                for lo, hi in table.violations
            ]
            text = emit_csv(("axis",) + REPORT_HEADER, rows, footers)
        else:
            text = emit_json(
                {
                    "model": sweep_params["model"],
                    "params": {**sweep_params, **fixed},
                    "units": MODEL_UNITS,
                    "rows": rows,
                    "violations": [list(v) for v in table.violations],
                }
            )
        write_output(text, out)
        return

    if command == "compare-power":
        params = _section_params("compare_power", file_sections, overrides)
        grid = _linspace(
            params["ratio_start"], params["ratio_stop"], params["ratio_points"], "ratio grid"
        )
        result = power_comparison(
            omega_abs=params["omega_abs"],
            omega_rc=params["omega_rc"],
            gamma=params["gamma"],
            t_abs=params["t_abs"],
            ratio_grid=grid,
        )
        rows = result.rows()
        if fmt == "csv":
            text = emit_csv(("ratio", "p_dec", "p_ham"), rows)
        else:
            text = emit_json(
                {
                    "model": "compare_power",
                    "params": params,
                    "units": MODEL_UNITS,
                    "rows": rows,
                    "violations": [],
                }
            )
        write_output(text, out)
        return

    if command == "fmo-trace":
        params = _section_params("fmo", file_sections, overrides)
        grid = _linspace(0.0, params["t_max_ps"], params["n_times"], "time grid")
        try:
            trace_cfg = FmoConfig.from_mapping(params)
        except ValueError as exc:
            raise ConfigError(str(exc))
        trace = sigma_trace(trace_cfg, grid)
        rows = list(
            zip(trace.t_ps, trace.j_abs, trace.j_loss, trace.sink_flow, trace.sigma)
        )
        if fmt == "csv":
            text = emit_csv(("t_ps", "j_abs", "j_loss", "sink_flow", "sigma"), rows)
        else:
            text = emit_json(
                {
                    "model": "fmo",
                    "params": params,
                    "units": TRACE_UNITS,
                    "rows": rows,
                    "violations": [],
                }
            )
        write_output(text, out)
        return

    section = COMMAND_SECTIONS[command]
    params = _section_params(section, file_sections, overrides)
    if command == "toy-decay":
        report = decay_report(_build(ThreeLevelParams, params))
    elif command == "toy-ham":
        report = hamiltonian_transfer_report(_build(ThreeLevelParams, params))
    elif command == "donor-acceptor":
        report = donor_acceptor_report(_build(DonorAcceptorParams, params))
    else:
        report = photocell_report(_build(PhotocellParams, params))
    write_output(_report_output(command, params, report, fmt), out)


def main(argv):
    try:
        parsed = _parse_argv(argv)
        if parsed is None:
            sys.stdout.write(USAGE)
            return 0
        _run_command(*parsed)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entry():
    sys.exit(main(sys.argv[1:]))
