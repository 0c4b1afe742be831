# cli/report.py

import json
from typing import Any

import numpy as np
import pandas as pd

# Keys that change from run to run and never go into the JSON report.
VOLATILE_KEYS = ("elapsed_seconds",)


def _jsonable(o: Any):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def stable_view(response: dict) -> dict:
    return {k: v for k, v in response.items() if k not in VOLATILE_KEYS}


def to_json(response: dict) -> str:
    """
    Deterministic JSON: floats use the shortest repr that round-trips, so
    json.loads(to_json(r)) reproduces every number bit for bit.
    """
    return json.dumps(stable_view(response), indent=2, default=_jsonable, allow_nan=False) + "\n"


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, dict) and "bits" in value:
        return f"{value['bits']} (mask {value['mask']}, W on {value['w_indices']})"
    return str(value)


def _render_block(title: str, data: dict, lines: list, indent: str = "") -> None:
    lines.append(f"{indent}{title}:")
    for key, value in data.items():
        if key in ("per_pattern_bounds", "per_pattern"):
            continue
        if isinstance(value, dict) and "bits" not in value:
            _render_block(key, value, lines, indent + "  ")
        else:
            lines.append(f"{indent}  {key}: {_fmt(value)}")
    table = data.get("per_pattern_bounds") or data.get("per_pattern")
    if table:
        rows = [t if isinstance(t, dict) else t.to_dict() for t in table]
        frame = pd.DataFrame(rows)
        lines.append(f"{indent}  per-pattern bounds:")
        for row in frame.to_string(index=False, float_format=lambda x: repr(float(x))).splitlines():
            lines.append(f"{indent}    {row}")


def render_text(response: dict) -> str:
    lines = [
        f"command: {response['command']}",
        f"source: {response['source']}",
        f"exit code: {response['exit_code']}",
    ]
    if response.get("error"):
        lines.append(f"error: {response['error']}")
    if response.get("property") is not None:
        lines.append(f"property: {response['property']}")
    _render_block("options", response["options"], lines)
    if response.get("results"):
        _render_block("results", response["results"], lines)
    if response.get("checks"):
        _render_block("checks", response["checks"], lines)
    if "elapsed_seconds" in response:
        lines.append(f"elapsed: {response['elapsed_seconds']:.3f}s")
    return "\n".join(lines) + "\n"
