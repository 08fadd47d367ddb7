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
Summary metrics over a run's episode records.

An episode is fair when GE <= rho, sold out when every seed sold, and win-win
when it is sold out and (in the default `sold-and-fair` mode) also fair.
"""

from collections.abc import Sequence
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from cbim_harness.records import EpisodeRecord

SrMode = Literal["sold-only", "sold-and-fair"]


class Summary(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float
    sr_mode: SrMode
    episodes: int
    win_win: int
    sold_out: int
    fair: int
    sr: float
    ser: float
    rev_max: int | None
    rev_avg: float | None
    rop_max: int | None
    re: tuple[float, ...]
    cr: tuple[float, ...]
    rt: float


def is_win_win(record: EpisodeRecord, rho: float, sr_mode: SrMode) -> bool:
    if not record.all_sold:
        return False
    return sr_mode == "sold-only" or record.ge <= rho


def summarize(
    records: Sequence[EpisodeRecord],
    rho: float,
    sr_mode: SrMode = "sold-and-fair",
    budgets: Sequence[float] | None = None,
) -> Summary:
    """Aggregate episode records

    Fairness is re-judged against `rho`, so a run can be summarized under a
    different threshold than it was trained with. `budgets` overrides the
    per-row budget columns when computing CR_i.
    """
    if not records:
        raise ValueError("Cannot summarize an empty run")
    n = len(records)
    fair = [r for r in records if r.ge <= rho]
    wins = [r for r in records if is_win_win(r, rho, sr_mode)]
    win_revenue = [r.revenue for r in wins]
    fair_revenue = [r.revenue for r in fair]

    rewards = np.array([r.rewards for r in records], dtype=np.float64)
    costs = np.array([r.costs for r in records], dtype=np.float64)
    if budgets is None:
        spend = costs / np.array([r.budgets for r in records], dtype=np.float64)
    else:
        spend = costs / np.asarray(budgets, dtype=np.float64)

    return Summary(
        rho=rho,
        sr_mode=sr_mode,
        episodes=n,
        win_win=len(wins),
        sold_out=sum(1 for r in records if r.all_sold),
        fair=len(fair),
        sr=len(wins) / n,
        ser=len(fair) / n,
        rev_max=max(win_revenue) if wins else None,
        rev_avg=sum(win_revenue) / len(wins) if wins else None,
        rop_max=max(fair_revenue) if fair else None,
        re=tuple(float(v) for v in rewards.mean(axis=0)),
        cr=tuple(float(v) for v in spend.mean(axis=0)),
        rt=sum(r.wall_time for r in records),
    )


def _optional(value: float | None, fmt: str) -> str:
    return "n/a" if value is None else format(value, fmt)


def format_summary(summary: Summary) -> str:
    lines = [
        f"episodes: {summary.episodes}",
        f"win-win episodes: {summary.win_win} ({summary.sr_mode})",
        f"sold-out episodes: {summary.sold_out}",
        f"fair episodes: {summary.fair} (GE <= {summary.rho:g})",
        f"SR: {summary.sr * 100:.2f}%",
        f"SER: {summary.ser * 100:.2f}%",
        f"REV_max: {_optional(summary.rev_max, 'd')}",
        f"REV_avg: {_optional(summary.rev_avg, '.4f')}",
        f"ROP_max: {_optional(summary.rop_max, 'd')}",
    ]
    lines.extend(f"RE_{i}: {value:.4f}" for i, value in enumerate(summary.re))
    lines.extend(f"CR_{i}: {value * 100:.2f}%" for i, value in enumerate(summary.cr))
    lines.append(f"RT: {summary.rt:.3f}s")
    return "\n".join(lines)
