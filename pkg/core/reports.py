"""Deterministic report rendering (text, CSV, JSON).

Every float is printed with ``FLOAT_FORMAT`` (15 significant digits, scientific),
so identical inputs give byte-identical output. JSON reports carry floats as
strings in the same format.

``None`` (an undefined ratio, for instance) prints as ``undefined``.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "{:.14e}"
UNDEFINED = "undefined"


def format_float(value: float) -> str:
    value = float(value)
    if value == 0.0:
        value = 0.0  # drop the sign of -0.0
    return FLOAT_FORMAT.format(value)


def _plain(value):
    """Numpy scalars/arrays to plain Python, floats to fixed-format strings."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if value is None:
        return UNDEFINED
    return str(value)


@dataclass
class Table:
    header: list[str]
    rows: list[list] = field(default_factory=list)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(_plain(row))
        return out.getvalue()


@dataclass
class Report:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, object] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    table: Table | None = None

    def as_dict(self) -> dict:
        body = {
            "command": self.command,
            "inputs": dict(self.inputs),
            "outputs": _plain(self.outputs),
            "tolerances": _plain(self.tolerances),
        }
        if self.table is not None:
            body["table"] = {"header": list(self.table.header), "rows": _plain(self.table.rows)}
        return body


def _text_value(value) -> list[str]:
    plain = _plain(value)
    if isinstance(plain, list) and plain and all(isinstance(r, list) for r in plain):
        return ["  " + "  ".join(str(v) for v in row) for row in plain]
    if isinstance(plain, list):
        return ["  " + ", ".join(str(v) for v in plain)] if plain else ["  (empty)"]
    if isinstance(plain, dict):
        return [f"  {k}: {v}" for k, v in sorted(plain.items())]
    return [f"  {plain}"]


def render_text(report: Report) -> str:
    lines = [f"command: {report.command}"]
    for name, digest in sorted(report.inputs.items()):
        lines.append(f"input {name} sha256: {digest}")
    lines.append("[outputs]")
    for key, value in report.outputs.items():
        rendered = _text_value(value)
        if len(rendered) == 1 and not isinstance(value, (list, tuple, dict, np.ndarray)):
            lines.append(f"{key}: {rendered[0].strip()}")
        else:
            lines.append(f"{key}:")
            lines.extend(rendered)
    lines.append("[tolerances]")
    for key, value in sorted(report.tolerances.items()):
        lines.append(f"{key}: {format_float(value)}")
    if report.table is not None:
        lines.append("[table]")
        lines.append(report.table.to_csv().rstrip("\n"))
    return "\n".join(lines) + "\n"


def render_json(report: Report) -> str:
    return json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"


def render_csv(report: Report) -> str:
    """The report's table when it has one, otherwise ``key,value`` rows of scalar outputs."""
    if report.table is not None:
        return report.table.to_csv()
    table = Table(["key", "value"])
    for key, value in report.outputs.items():
        if isinstance(value, (list, tuple, dict, np.ndarray)):
            continue
        table.rows.append([key, value])
    return table.to_csv()


RENDERERS = {"text": render_text, "json": render_json, "csv": render_csv}


def render(report: Report, fmt: str = "text") -> str:
    try:
        renderer = RENDERERS[fmt]
    except KeyError as e:
        raise ValueError(f"Unknown report format {fmt!r}") from e
    return renderer(report)
