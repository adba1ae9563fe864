"""Reader for the halfgame sweep interchange format.

A sweep is a CSV file with exactly this header (schema halfgame-sweep-v1):

    bias,trials,wins,winRate,wilsonLo,wilsonHi,roundsMean,roundsMax,forfeits

plus an optional JSON sidecar next to it (same basename, .json) carrying the
run configuration and the estimated threshold.  This module re-declares the
schema instead of importing the simulator: the files are the interface.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

EXPECTED_HEADER = [
    "bias", "trials", "wins", "winRate", "wilsonLo", "wilsonHi",
    "roundsMean", "roundsMax", "forfeits",
]
SWEEP_SCHEMA = "halfgame-sweep-v1"


class SchemaError(ValueError):
    """The input file does not match the supported sweep schema version."""


@dataclass
class SweepRow:
    bias: int
    trials: int
    wins: int
    win_rate: float
    wilson_lo: float
    wilson_hi: float
    rounds_mean: float | None
    rounds_max: int | None
    forfeits: int


@dataclass
class SweepFile:
    path: str
    rows: list[SweepRow]
    meta: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        game = self.meta.get("game")
        n = self.meta.get("n")
        if game and n:
            return f"{game} n={n}"
        return os.path.basename(self.path)

    @property
    def n(self) -> int | None:
        return self.meta.get("n")

    @property
    def estimated_threshold(self) -> float | None:
        return self.meta.get("estimatedThreshold")


def read_sweep(path: str) -> SweepFile:
    """Parse one sweep CSV (and its sidecar when present)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected {SWEEP_SCHEMA}")
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"{path}: header does not match {SWEEP_SCHEMA}; "
                f"got {','.join(header)!r}"
            )
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(EXPECTED_HEADER):
                raise SchemaError(f"{path}:{lineno}: expected 9 columns")
            try:
                rows.append(
                    SweepRow(
                        bias=int(rec[0]),
                        trials=int(rec[1]),
                        wins=int(rec[2]),
                        win_rate=float(rec[3]),
                        wilson_lo=float(rec[4]),
                        wilson_hi=float(rec[5]),
                        rounds_mean=float(rec[6]) if rec[6] else None,
                        rounds_max=int(rec[7]) if rec[7] else None,
                        forfeits=int(rec[8]),
                    )
                )
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    meta = {}
    sidecar = os.path.splitext(path)[0] + ".json"
    if os.path.exists(sidecar):
        with open(sidecar, encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("schema") not in (None, SWEEP_SCHEMA):
            raise SchemaError(
                f"{sidecar}: sidecar schema {meta.get('schema')!r} "
                f"is not {SWEEP_SCHEMA}"
            )
    return SweepFile(path=path, rows=rows, meta=meta)
