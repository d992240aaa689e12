"""Deterministic CSV and JSON emission.

Numbers are rendered at 12 significant digits so that repeated runs with
identical inputs produce byte-identical output. Non-finite values become
'nan'/'inf' cells in CSV and null in JSON.
"""

import json
import math
import sys

import numpy as np

from .errors import ConfigError


def format_number(value):
    return "%.12g" % value


def _format_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean cells are not part of any output schema")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(float(value))
    raise TypeError(f"cannot format {type(value).__name__} as a CSV cell")


def emit_csv(header, rows, footers=()):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    lines.extend(footers)
    return "\n".join(lines) + "\n"


def sanitize_json(obj):
    """Recursively convert to plain JSON types with rounded floats."""
    if obj is None or isinstance(obj, (str, bool)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(format_number(x))
    if isinstance(obj, dict):
        return {str(k): sanitize_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [sanitize_json(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def emit_json(payload):
    return json.dumps(sanitize_json(payload), indent=2, sort_keys=True) + "\n"


def write_output(text, path=None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write output file {path}: {exc}")
