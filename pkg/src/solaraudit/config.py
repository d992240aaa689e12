"""Layered run parameters: shipped defaults, then a user file, then flags.

Config files use a minimal dialect: [section] headers, key = value lines,
'#' comments. Every key a command accepts lives in the shipped defaults
file, so the code itself carries no parameter values. Unknown sections or
keys are errors rather than silent no-ops, and duplicates are rejected.
"""

from functools import lru_cache
from importlib import resources

from .errors import ConfigError

DEFAULTS_RESOURCE = "data/defaults.cfg"

SWEEP_MODELS = ("toy_decay", "toy_ham", "donor_acceptor", "photocell")

# Section holding the fixed parameters for each sweepable model.
MODEL_SECTIONS = {
    "toy_decay": "toy",
    "toy_ham": "toy",
    "donor_acceptor": "donor_acceptor",
    "photocell": "photocell",
}


def parse_config_text(text, where="config"):
    """Parse config text into {section: {key: raw string}}."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError(f"{where} line {lineno}: empty section name")
            if name in sections:
                raise ConfigError(f"{where} line {lineno}: duplicate section [{name}]")
            current = sections.setdefault(name, {})
            continue
        key, eq, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not eq or not key or not value:
            raise ConfigError(
                f"{where} line {lineno}: expected '[section]' or 'key = value', got {line!r}"
            )
        if current is None:
            raise ConfigError(f"{where} line {lineno}: key {key!r} outside any [section]")
        if key in current:
            raise ConfigError(f"{where} line {lineno}: duplicate key {key!r}")
        current[key] = value
    return sections


def parse_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    return parse_config_text(text, where=str(path))


def _to_float(raw):
    return float(raw)


def _to_int(raw):
    return int(raw)


def _to_auto_float(raw):
    if raw == "auto":
        return None
    return float(raw)


def _to_str(raw):
    return raw


def _choice(*options):
    def convert(raw):
        if raw not in options:
            raise ValueError(f"must be one of: {', '.join(options)}")
        return raw

    convert.options = options
    return convert


SCHEMAS = {
    "toy": {
        "omega_abs": _to_float,
        "omega_rc": _to_float,
        "gamma": _to_float,
        "gamma_h": _to_auto_float,
        "gamma_c": _to_auto_float,
        "t_abs": _to_float,
        "t_loss": _to_float,
    },
    "donor_acceptor": {
        key: _to_float
        for key in (
            "omega_b",
            "omega_a",
            "omega_alpha",
            "omega_beta",
            "gamma_h",
            "gamma_c",
            "gamma_cb",
            "gamma_load",
            "t_abs",
            "t_loss",
        )
    },
    "photocell": {
        key: _to_float
        for key in (
            "omega_b",
            "omega_x1",
            "omega_x2",
            "omega_alpha",
            "omega_beta",
            "gamma_h",
            "gamma_x",
            "gamma_c",
            "gamma_cb",
            "gamma_load",
            "t_abs",
            "t_loss",
        )
    },
    "fmo": {
        "data_file": _to_str,
        "omega_ant": _to_float,
        "n_pigments": _to_int,
        "mu_ant_ind": _to_float,
        "mu_fmo": _to_float,
        "lambda_geo": _to_float,
        "t_sun": _to_float,
        "t_loss_k": _to_float,
        "gamma_rad": _to_float,
        "gamma_sink": _to_float,
        "gamma_ant_fmo": _to_auto_float,
        "vib_reorganization": _to_float,
        "vib_cutoff": _to_float,
        "t_max_ps": _to_float,
        "n_times": _to_int,
    },
    "sweep": {
        "model": _choice(*SWEEP_MODELS),
        "axis": _to_str,
        "axis_start": _to_float,
        "axis_stop": _to_float,
        "axis_points": _to_int,
    },
    "compare_power": {
        "omega_abs": _to_float,
        "omega_rc": _to_float,
        "gamma": _to_float,
        "t_abs": _to_float,
        "ratio_start": _to_float,
        "ratio_stop": _to_float,
        "ratio_points": _to_int,
    },
}


def convert_section(name, raw_map, where="config"):
    """Type-check one section's raw strings against its schema."""
    if name not in SCHEMAS:
        raise ConfigError(
            f"{where}: unknown section [{name}]; known sections: "
            + ", ".join(sorted(SCHEMAS))
        )
    schema = SCHEMAS[name]
    unknown = sorted(set(raw_map) - set(schema))
    if unknown:
        raise ConfigError(
            f"{where}: unknown keys in [{name}]: " + ", ".join(unknown)
        )
    typed = {}
    for key, raw in raw_map.items():
        try:
            typed[key] = schema[key](raw)
        except ValueError as exc:
            detail = str(exc) or "malformed value"
            raise ConfigError(f"{where}: key {key!r} in [{name}]: {detail} (got {raw!r})")
    return typed


def validate_sections(raw_sections, where="config"):
    """Type-check every section of a parsed file, catching typos early."""
    return {
        name: convert_section(name, raw_map, where=where)
        for name, raw_map in raw_sections.items()
    }


@lru_cache(maxsize=1)
def _default_sections():
    text = resources.files("solaraudit").joinpath(DEFAULTS_RESOURCE).read_text()
    return parse_config_text(text, where="defaults")


def default_section(name):
    """Typed copy of one section of the shipped defaults."""
    defaults = _default_sections()
    if name not in defaults:
        raise ConfigError(f"defaults have no section [{name}]")
    return convert_section(name, defaults[name], where="defaults")


def _format_value(value):
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(sections):
    """Render typed sections back to config text.

    Floats are written with repr so that parsing the emitted text
    reproduces the typed values exactly; None renders as 'auto'.
    """
    lines = []
    for name, mapping in sections.items():
        lines.append(f"[{name}]")
        for key, value in mapping.items():
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)
