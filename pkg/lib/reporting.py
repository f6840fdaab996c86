"""JSON rendering of run reports.

Floats are written with 12 significant digits so repeated runs diff cleanly.
"""

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "run_report.schema.json"
SIGNIFICANT_DIGITS = 12


def to_plain(value):
    """Recursively convert numpy / Fraction values to JSON-ready Python values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating, Fraction)):
        x = float(value)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, Path):
        return str(value)
    return value


@dataclass
class RunReport:
    command: str
    input: str
    parameters: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_json(self):
        params = {"seed": None, "m": None}
        params.update(self.parameters)
        return to_plain({
            "command": self.command,
            "input": self.input,
            "parameters": params,
            "outputs": self.outputs,
            "wall_time_s": self.wall_time_s,
        })


def dumps(report):
    return json.dumps(report.to_json() if isinstance(report, RunReport) else to_plain(report), indent=2)


def write_report(report, output=None):
    """Write the JSON report to a file, or to stdout."""
    text = dumps(report) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def load_schema():
    with open(SCHEMA_PATH, "r") as f:
        return json.load(f)


def format_summary(report):
    """Flat 'key: value' lines for non-JSON output."""
    data = report.to_json()
    lines = [f"command: {data['command']}", f"input: {data['input']}"]
    for section in ("parameters", "outputs"):
        for key, value in data[section].items():
            if isinstance(value, (list, dict)):
                continue
            lines.append(f"{key}: {value}")
    lines.append(f"wall_time_s: {data['wall_time_s']}")
    return "\n".join(lines) + "\n"
