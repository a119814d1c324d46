"""Strict readers for the simulator's CSV outputs.

These loaders are deliberately unforgiving: the plotting layer never
recomputes physics, so any schema drift in the files must fail loudly
instead of being silently tolerated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

ROUNDS_HEADER = ("trial", "round", "theta", "r", "r_perp", "response", "term", "strategy")
SWEEP_HEADER = (
    "t",
    "u",
    "region",
    "entropy_gap_bits",
    "honest_accept",
    "attack_accept",
    "attack_kind",
)
REGIONS = ("Insecure", "Secure", "Unknown")


class TableFormatError(Exception):
    """Schema violation in an input file; carries the offending row number."""

    def __init__(self, path, row_number, message):
        self.path = str(path)
        self.row_number = row_number
        super().__init__(f"{path}, row {row_number}: {message}")


def _read_rows(path, expected_header):
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise TableFormatError(path, 0, f"cannot open file ({exc})")
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise TableFormatError(path, 0, "file is empty")
        if tuple(header) != expected_header:
            raise TableFormatError(
                path, 0, f"header {header!r} does not match {list(expected_header)!r}"
            )
        rows = []
        for number, row in enumerate(reader, start=1):
            if len(row) != len(expected_header):
                raise TableFormatError(
                    path, number, f"expected {len(expected_header)} columns, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise TableFormatError(path, 1, "no data rows")
    return rows


def _parse_float(path, number, name, text):
    try:
        return float(text)
    except ValueError:
        raise TableFormatError(path, number, f"column '{name}' has non-numeric value {text!r}")


@dataclass(frozen=True)
class SweepRow:
    t: float
    u: float
    region: str
    entropy_gap_bits: float
    honest_accept: float
    attack_accept: float
    attack_kind: str


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]

    @classmethod
    def load(cls, path: str | Path) -> "SweepTable":
        parsed = []
        for number, row in enumerate(_read_rows(path, SWEEP_HEADER), start=1):
            region = row[2]
            if region not in REGIONS:
                raise TableFormatError(
                    path, number, f"region {region!r} not one of {list(REGIONS)}"
                )
            parsed.append(
                SweepRow(
                    t=_parse_float(path, number, "t", row[0]),
                    u=_parse_float(path, number, "u", row[1]),
                    region=region,
                    entropy_gap_bits=_parse_float(path, number, "entropy_gap_bits", row[3]),
                    honest_accept=_parse_float(path, number, "honest_accept", row[4]),
                    attack_accept=_parse_float(path, number, "attack_accept", row[5]),
                    attack_kind=row[6],
                )
            )
        return cls(rows=tuple(parsed))

    def t_values(self) -> list[float]:
        return sorted({row.t for row in self.rows})

    def u_values(self) -> list[float]:
        return sorted({row.u for row in self.rows})

    def region_at(self, t: float, u: float) -> str:
        for row in self.rows:
            if row.t == t and row.u == u:
                return row.region
        raise KeyError(f"no sweep row at (t={t}, u={u})")


@dataclass(frozen=True)
class RoundsTable:
    strategy_terms: dict
    strategy_responses: dict

    @classmethod
    def load(cls, *paths: str | Path) -> "RoundsTable":
        terms: dict[str, list[float]] = {}
        responses: dict[str, list[float]] = {}
        for path in paths:
            for number, row in enumerate(_read_rows(path, ROUNDS_HEADER), start=1):
                strategy = row[7]
                terms.setdefault(strategy, []).append(
                    _parse_float(path, number, "term", row[6])
                )
                responses.setdefault(strategy, []).append(
                    _parse_float(path, number, "response", row[5])
                )
        return cls(strategy_terms=terms, strategy_responses=responses)

    def strategies(self) -> list[str]:
        return sorted(self.strategy_terms)
