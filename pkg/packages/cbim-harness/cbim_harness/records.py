# Copyright 2026 The CBIM Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Episode records and their CSV form.

One row per round. Column order:

    iteration, round, revenue, all_sold, ge, fair,
    reward_0..reward_{k-1}, cost_0..cost_{k-1}, budget_0..budget_{k-1},
    price_0..price_{l-1}, g_0_0..g_{k-1}_{l-1}, wall_time

Floats are written with `repr` so reading a row back gives the same values bit
for bit. Flags are written as 0/1.
"""

import csv
from collections.abc import Iterator
from pathlib import Path
from types import TracebackType
from typing import TextIO

from pydantic import BaseModel, ConfigDict, Field, model_validator


class RecordFormatError(ValueError):
    """A metrics CSV that does not follow the episode schema"""

    BAD_HEADER = "{}: header does not match the episode schema"
    BAD_ROW = "{}: row {} is malformed: {}"
    EMPTY = "{}: no episode rows"


class EpisodeRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    iteration: int = Field(..., ge=0)
    round_index: int = Field(..., ge=0)
    rewards: tuple[int, ...]
    costs: tuple[float, ...]
    budgets: tuple[float, ...]
    prices: tuple[float, ...]
    effective_prices: tuple[tuple[float, ...], ...]
    ge: float
    all_sold: bool
    fair: bool
    revenue: int
    wall_time: float = 0.0

    @model_validator(mode="after")
    def _check_totals(self) -> "EpisodeRecord":
        if self.revenue != sum(self.rewards):
            raise ValueError(f"revenue {self.revenue} != sum of rewards {sum(self.rewards)}")
        k = len(self.rewards)
        if len(self.costs) != k or len(self.budgets) != k or len(self.effective_prices) != k:
            raise ValueError("per-competitor columns disagree on k")
        if any(len(g) != len(self.prices) for g in self.effective_prices):
            raise ValueError("effective price vectors disagree on l")
        return self

    @property
    def competitors(self) -> int:
        return len(self.rewards)

    @property
    def seeds(self) -> int:
        return len(self.prices)


def csv_header(k: int, l: int) -> list[str]:  # noqa: E741
    return [
        "iteration",
        "round",
        "revenue",
        "all_sold",
        "ge",
        "fair",
        *(f"reward_{i}" for i in range(k)),
        *(f"cost_{i}" for i in range(k)),
        *(f"budget_{i}" for i in range(k)),
        *(f"price_{j}" for j in range(l)),
        *(f"g_{i}_{j}" for i in range(k) for j in range(l)),
        "wall_time",
    ]


def _row(record: EpisodeRecord) -> list[str]:
    return [
        str(record.iteration),
        str(record.round_index),
        str(record.revenue),
        str(int(record.all_sold)),
        repr(record.ge),
        str(int(record.fair)),
        *(str(r) for r in record.rewards),
        *(repr(c) for c in record.costs),
        *(repr(b) for b in record.budgets),
        *(repr(p) for p in record.prices),
        *(repr(g) for vector in record.effective_prices for g in vector),
        repr(record.wall_time),
    ]


class EpisodeWriter:
    """Streams records to a CSV file, header first"""

    def __init__(self, path: str | Path, k: int, l: int):  # noqa: E741
        self.path = Path(path)
        self.header = csv_header(k, l)
        self._file: TextIO | None = None
        self._writer = None
        self.rows = 0

    def __enter__(self) -> "EpisodeWriter":
        self._file = self.path.open("w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(self.header)
        return self

    def write(self, record: EpisodeRecord) -> None:
        row = _row(record)
        if len(row) != len(self.header):
            raise RecordFormatError(RecordFormatError.BAD_ROW.format(self.path, self.rows, "wrong k or l"))
        self._writer.writerow(row)
        self.rows += 1

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None


def write_records(path: str | Path, records: list[EpisodeRecord]) -> None:
    if not records:
        raise RecordFormatError(RecordFormatError.EMPTY.format(path))
    first = records[0]
    with EpisodeWriter(path, first.competitors, first.seeds) as writer:
        for record in records:
            writer.write(record)


def _dimensions(header: list[str]) -> tuple[int, int]:
    k = sum(1 for name in header if name.startswith("reward_"))
    l = sum(1 for name in header if name.startswith("price_"))  # noqa: E741
    return k, l


def _parse_row(row: dict[str, str], k: int, l: int) -> EpisodeRecord:  # noqa: E741
    return EpisodeRecord(
        iteration=int(row["iteration"]),
        round_index=int(row["round"]),
        revenue=int(row["revenue"]),
        all_sold=row["all_sold"] == "1",
        ge=float(row["ge"]),
        fair=row["fair"] == "1",
        rewards=tuple(int(row[f"reward_{i}"]) for i in range(k)),
        costs=tuple(float(row[f"cost_{i}"]) for i in range(k)),
        budgets=tuple(float(row[f"budget_{i}"]) for i in range(k)),
        prices=tuple(float(row[f"price_{j}"]) for j in range(l)),
        effective_prices=tuple(
            tuple(float(row[f"g_{i}_{j}"]) for j in range(l)) for i in range(k)
        ),
        wall_time=float(row["wall_time"]),
    )


def iter_records(path: str | Path) -> Iterator[EpisodeRecord]:
    """Read episode rows back from a metrics CSV

    Raises:
      FileNotFoundError: If the file does not exist
      RecordFormatError: If the header or a row does not fit the schema
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        k, l = _dimensions(header)  # noqa: E741
        if k == 0 or l == 0 or header != csv_header(k, l):
            raise RecordFormatError(RecordFormatError.BAD_HEADER.format(path))
        for number, row in enumerate(reader, start=1):
            try:
                yield _parse_row(row, k, l)
            except (TypeError, ValueError) as exc:
                raise RecordFormatError(RecordFormatError.BAD_ROW.format(path, number, exc)) from exc


def read_records(path: str | Path) -> list[EpisodeRecord]:
    records = list(iter_records(path))
    if not records:
        raise RecordFormatError(RecordFormatError.EMPTY.format(path))
    return records

