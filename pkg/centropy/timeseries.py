"""
CSV ingestion and emission of time-series matrices.

The first row names the variables; every following row is one time step.
Values are written with the shortest representation that reads back to the
same float, so a written series reads back bit-exactly.
"""
import io
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import MalformedInput

logger = logging.getLogger(__name__)

PARSER_LINE = re.compile(r"line (\d+)")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    values: np.ndarray
    names: tuple

    @property
    def n_steps(self):
        return self.values.shape[0]


def round_trip(value):
    return repr(float(value))


def _read_cells(stream):
    # Every cell stays text here; numbers are converted once the layout is known.
    try:
        return pd.read_csv(
            stream, header=None, dtype=str, keep_default_na=False, skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise MalformedInput("Missing header row", row=1)
    except pd.errors.ParserError as e:
        match = PARSER_LINE.search(str(e))
        raise MalformedInput(str(e).strip().splitlines()[-1], row=int(match.group(1)) if match else None)


def parse_csv(stream):
    """Parse an open text stream; rows and columns in errors are 1-based, the header being row 1."""
    cells = _read_cells(stream)
    names = tuple("" if pd.isna(name) else str(name).strip() for name in cells.iloc[0])
    for column, name in enumerate(names, start=1):
        if not name:
            raise MalformedInput("Empty column name", row=1, column=column)
    if len(set(names)) != len(names):
        raise MalformedInput("Column names must be unique", row=1)

    body = cells.iloc[1:]
    blank = body.isna().all(axis=1) | (body == "").all(axis=1)
    body = body[~blank]
    if body.empty:
        raise MalformedInput("No data rows", row=2)
    # Frame index i is file line i + 1.
    lines = body.index.to_numpy() + 1

    missing = body.isna().to_numpy()
    if missing.any():
        row = np.flatnonzero(missing.any(axis=1))[0]
        fields = int((~missing[row]).sum())
        raise MalformedInput(f"Expected {len(names)} fields, got {fields}", row=int(lines[row]))

    try:
        values = body.to_numpy(dtype=float)
    except ValueError:
        values = body.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    invalid = ~np.isfinite(values)
    if invalid.any():
        row, column = np.argwhere(invalid)[0]
        raise MalformedInput(
            f"'{body.iat[row, column]}' is not a finite number", row=int(lines[row]), column=int(column) + 1
        )
    return TimeSeries(values, names)


def read_csv(path):
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as stream:
            series = parse_csv(stream)
    except (OSError, UnicodeDecodeError) as e:
        raise MalformedInput(f"Cannot read {path}: {str(e)}")
    logger.info(f"Read {series.n_steps} time steps of {len(series.names)} variables from {path}")
    return series


def to_frame(values, names=None):
    values = np.asarray(values)
    if names is None:
        names = [f"X{i}" for i in range(values.shape[1])]
    return pd.DataFrame(values, columns=list(names))


def format_csv(values, names=None):
    buffer = io.StringIO()
    to_frame(values, names).to_csv(buffer, index=False, lineterminator="\n", float_format=round_trip)
    return buffer.getvalue()


def write_csv(path, values, names=None):
    Path(path).write_text(format_csv(values, names), encoding="utf-8")
