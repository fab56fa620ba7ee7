# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass, field
import io
import json
import math
from pathlib import Path
import re
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from gt_multinomial import __version__, settings


def _plain(value):
    """JSON-safe scalar; nan and infinities become null"""
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _float17(value):
    """Fixed 17 significant digits, always readable back as a float"""
    text = f"{value:.17g}"
    return text if "." in text or "e" in text else f"{text}.0"


def _display(value, precision):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return f"{value:.{precision}f}" if math.isfinite(value) else ""
    if value is None:
        return ""
    return str(value)


@dataclass
class OutputRecord:
    """
    Rows of one subcommand or reproduction target, plus a metadata block.
    Every row of a record has the same columns, in first-row order.
    """

    command: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.metadata = {"version": __version__, "command": self.command, **self.metadata}

    def add(self, row):
        self.rows.append(dict(row))
        return self

    @property
    def columns(self):
        columns = []
        for row in self.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        return columns

    def to_json(self):
        """
        JSON with a top-level {metadata, rows} object; finite floats carry 17
        significant digits
        """
        floats = []

        def mark(value):
            value = _plain(value)
            if isinstance(value, float):
                floats.append(value)
                return f"\x00{len(floats) - 1}"
            return value

        payload = {
            "metadata": {key: mark(value) for key, value in self.metadata.items()},
            "rows": [{key: mark(value) for key, value in row.items()} for row in self.rows],
        }
        text = json.dumps(payload, indent=2)
        # json escapes the NUL marker as \u0000
        return re.sub(r'"\\u0000(\d+)"', lambda match: _float17(floats[int(match.group(1))]), text) + "\n"

    def to_frame(self, precision=None):
        """Rows as strings formatted at the display precision"""
        precision = settings.csv_precision if precision is None else precision
        columns = self.columns
        formatted = [[_display(row.get(column), precision) for column in columns] for row in self.rows]
        return pd.DataFrame(formatted, columns=columns, dtype=str)

    def to_csv(self, precision=None):
        return self.to_frame(precision).to_csv(index=False, lineterminator="\n")

    def render(self, fmt="csv", precision=None):
        if fmt == "json":
            return self.to_json()
        return self.to_csv(precision)

    def write(self, directory, fmt="csv", precision=None):
        """
        Write <command>.<fmt> and <command>.metadata.json under directory
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        data_path = directory / f"{self.command}.{fmt}"
        data_path.write_text(self.render(fmt, precision), encoding="utf-8")
        metadata_path = directory / f"{self.command}.metadata.json"
        metadata = {key: _plain(value) for key, value in self.metadata.items()}
        metadata_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return data_path, metadata_path


def read_csv_text(text):
    """Parse CSV output back into string columns without type inference"""
    return pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)


def frame_to_csv(frame):
    return frame.to_csv(index=False, lineterminator="\n")
