"""Measurement-file ingestion.

Expected CSV layout (comma separated, one header row, ``.`` decimals)::

    label,probe_db,conjugate_db,squeezed_db,antisqueezed_db,v_p,v_c[,electronic_floor_db][,shot_noise_db]

The ``*_db`` noise columns are powers in dB relative to the recorded
shot-noise reference; ``shot_noise_db`` (default 0) is that reference's
own reading on the same scale, and ``v_p``/``v_c`` are the homodyne
fringe visibilities.  Optional cells may be left empty.

When ``electronic_floor_db`` is present, the detector's electronic
floor is subtracted in linear units from both the measured noise and
the shot-noise reference, then renormalized so vacuum stays at exactly
1::

    corrected = (10**(x/10) - F) / (10**(shot/10) - F),   F = 10**(floor/10)

Example: a 6.02 dB reading with a -10 dB floor corrects to
(4.0 - 0.1) / (1 - 0.1) = 4.333 in linear units.

Structural problems (missing or unknown header columns) raise
``MeasurementFormatError``.  Value problems -- non-numeric cells,
visibilities outside [0, 1], a floor at or above a measured noise or
the shot reference -- are returned as ``RowProblem`` entries with their
data row number; such rows produce no measurement point but are never
dropped silently.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .estimate import MeasurementPoint
from .model import from_db, to_db

__all__ = [
    "REQUIRED_COLUMNS",
    "OPTIONAL_COLUMNS",
    "MeasurementFormatError",
    "RowProblem",
    "load_measurements",
]

REQUIRED_COLUMNS = (
    "label",
    "probe_db",
    "conjugate_db",
    "squeezed_db",
    "antisqueezed_db",
    "v_p",
    "v_c",
)
OPTIONAL_COLUMNS = ("electronic_floor_db", "shot_noise_db")

_NOISE_COLUMNS = ("probe_db", "conjugate_db", "squeezed_db", "antisqueezed_db")


class MeasurementFormatError(Exception):
    """The file cannot be interpreted as a measurement table at all."""


@dataclass(frozen=True)
class RowProblem:
    """A data row that cannot become a measurement point."""

    row: int  # 1-based data row number, header excluded
    label: str
    message: str


def _parse_float(text: str | None, column: str) -> float:
    if text is None or not text.strip():
        raise ValueError(f"{column} is empty")
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"{column} must be numeric, got {text!r}") from None


def load_measurements(path: str | Path) -> tuple[list[MeasurementPoint], list[RowProblem]]:
    """Read a measurement CSV into points plus per-row problems."""
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames
        if header is None:
            raise MeasurementFormatError(f"{path}: empty file, expected a CSV header")
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise MeasurementFormatError(
                f"{path}: missing required column(s): {', '.join(missing)}"
            )
        unknown = [
            c for c in header if c not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS
        ]
        if unknown:
            raise MeasurementFormatError(
                f"{path}: unknown column(s): {', '.join(unknown)}"
            )

        points: list[MeasurementPoint] = []
        problems: list[RowProblem] = []
        for row_number, row in enumerate(reader, start=1):
            label = (row.get("label") or "").strip()
            try:
                point = _row_to_point(row, label)
            except ValueError as exc:
                problems.append(RowProblem(row_number, label, str(exc)))
                continue
            points.append(point)
    return points, problems


def _row_to_point(row: dict[str, str], label: str) -> MeasurementPoint:
    raw_db = {c: _parse_float(row[c], c) for c in _NOISE_COLUMNS}
    v_p = _parse_float(row["v_p"], "v_p")
    v_c = _parse_float(row["v_c"], "v_c")
    for name, value in (("v_p", v_p), ("v_c", v_c)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")

    shot_text = (row.get("shot_noise_db") or "").strip()
    shot_db = _parse_float(shot_text, "shot_noise_db") if shot_text else 0.0
    shot_lin = from_db(shot_db)

    floor_text = (row.get("electronic_floor_db") or "").strip()
    floor_db: float | None = None
    floor_lin = 0.0
    if floor_text:
        floor_db = _parse_float(floor_text, "electronic_floor_db")
        floor_lin = from_db(floor_db)
        if floor_lin >= shot_lin:
            raise ValueError(
                f"electronic floor ({floor_db} dB) at or above the shot-noise "
                f"reference ({shot_db} dB)"
            )

    corrected: dict[str, float] = {}
    for column in _NOISE_COLUMNS:
        lin = from_db(raw_db[column])
        if floor_lin >= lin:
            raise ValueError(
                f"electronic floor ({floor_db} dB) at or above {column} "
                f"({raw_db[column]} dB)"
            )
        corrected[column] = (lin - floor_lin) / (shot_lin - floor_lin)

    return MeasurementPoint(
        probe_db=to_db(corrected["probe_db"]),
        conjugate_db=to_db(corrected["conjugate_db"]),
        squeezed_db=to_db(corrected["squeezed_db"]),
        antisqueezed_db=to_db(corrected["antisqueezed_db"]),
        v_p=v_p,
        v_c=v_c,
        electronic_floor_db=floor_db,
        label=label,
    )
