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
Experiment configuration.

Values are layered, later sources winning:

1. field defaults on `ExperimentConfig`
2. `CBIM_*` environment variables (a `.env` file is loaded first)
3. a flat `key=value` config file with `#` comments
4. CLI flags

Every source is a plain string mapping, so pydantic does the type coercion and
validation once, over the merged result.
"""

import os
from collections.abc import Mapping
from pathlib import Path
from typing import Literal

from cbim_marl.trainer import LearnerSettings
from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from cbim_harness.core.constants import (
    BUDGET_RULES,
    CHECKPOINT_SUFFIX,
    CSV_SUFFIX,
    ENV_PREFIX,
    SUMMARY_SUFFIX,
)
from cbim_harness.core.logging import get_logger

load_dotenv()

logger = get_logger(__name__)


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration"""

    UNKNOWN_KEYS = "Unknown config keys: {}"
    INVALID = "Invalid configuration:\n{}"
    MISSING_FILE = "Config file not found: {}"
    BAD_OVERRIDE = "Expected KEY=VALUE, got {!r}"
    BUDGET_FORMAT = "budgets must be a comma-separated list or one of {}, got {!r}"
    BUDGET_COUNT = "budgets lists {} values but k = {}"
    MISSING_SEED = "A master seed is required (--seed)"
    GRAPH_SOURCE = "Exactly one of dataset and synthetic_nodes must be set"
    ATTACH = "synthetic_attach ({}) must be smaller than synthetic_nodes ({})"


def parse_budgets(raw: str, k: int, l: int) -> tuple[float, ...]:
    """Expand a budget spec ("3,3", "(l+1)/2" or "l/2") into k budgets"""
    text = raw.replace(" ", "")
    if text in BUDGET_RULES:
        return (float(BUDGET_RULES[text](l)),) * k
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ValueError(ConfigError.BUDGET_FORMAT.format(sorted(BUDGET_RULES), raw)) from exc
    if len(values) == 1:
        return values * k
    if len(values) != k:
        raise ValueError(ConfigError.BUDGET_COUNT.format(len(values), k))
    return values


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # graph
    dataset: Path | None = None
    directed: bool = False
    synthetic_nodes: int | None = Field(None, ge=2)
    synthetic_attach: int = Field(2, ge=1)
    synthetic_seed: int = Field(0, ge=0)

    # market
    k: int = Field(2, ge=2)
    l: int = Field(5, ge=1)  # noqa: E741
    budgets: str = "(l+1)/2"
    rho: float = Field(0.1, gt=0.0, lt=1.0)
    omega: float = 2.0
    kappa: float = Field(0.3, gt=0.0, lt=1.0)
    t_up: int = Field(0, ge=0)
    reward_mode: Literal["exact-clt", "degree-proxy"] = "exact-clt"

    # schedule
    iterations: int = Field(50, ge=1)
    rounds: int = Field(200, ge=1)
    algorithm: Literal["mcbim", "iddpg", "random"] = "mcbim"
    seed: int | None = Field(None, ge=0)

    # learner
    gamma: float = Field(0.95, gt=0.0, le=1.0)
    tau: float = Field(0.01, gt=0.0, le=1.0)
    learning_rate: float = Field(0.01, gt=0.0)
    actor_learning_rate: float = Field(0.001, gt=0.0)
    actor_regularization: float = Field(0.001, ge=0.0)
    buffer_capacity: int = Field(10**6, ge=1)
    batch_size: int = Field(1024, ge=1)
    update_every: int = Field(40, ge=1)
    hidden: int = Field(64, ge=1)
    noise_start: float = Field(0.2, ge=0.0)
    noise_end: float = Field(0.02, ge=0.0)
    normalize_rewards: bool = True

    # output
    output: str = "run"
    sr_mode: Literal["sold-only", "sold-and-fair"] = "sold-and-fair"
    record_wall_time: bool = True

    @field_validator("omega")
    @classmethod
    def _check_omega(cls, value: float) -> float:
        if value in (0.0, 1.0):
            raise ValueError(f"omega must not be 0 or 1, got {value}")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if (self.dataset is None) == (self.synthetic_nodes is None):
            raise ValueError(ConfigError.GRAPH_SOURCE)
        if self.synthetic_nodes is not None and self.synthetic_attach >= self.synthetic_nodes:
            raise ValueError(ConfigError.ATTACH.format(self.synthetic_attach, self.synthetic_nodes))
        budgets = parse_budgets(self.budgets, self.k, self.l)
        if any(b <= 0 for b in budgets):
            raise ValueError(f"budgets must be positive, got {list(budgets)}")
        return self

    @property
    def budget_values(self) -> tuple[float, ...]:
        return parse_budgets(self.budgets, self.k, self.l)

    @property
    def episodes(self) -> int:
        return self.iterations * self.rounds

    def step_limit(self, node_count: int) -> int:
        return self.t_up or node_count

    def noise_std(self, iteration: int) -> float:
        """Exploration noise for an iteration, linear from noise_start to noise_end"""
        if self.iterations == 1:
            return self.noise_start
        fraction = iteration / (self.iterations - 1)
        return self.noise_start + (self.noise_end - self.noise_start) * fraction

    def learner_settings(self) -> LearnerSettings:
        return LearnerSettings(
            hidden=self.hidden,
            gamma=self.gamma,
            tau=self.tau,
            learning_rate=self.learning_rate,
            actor_learning_rate=self.actor_learning_rate,
            actor_regularization=self.actor_regularization,
            buffer_capacity=self.buffer_capacity,
            batch_size=self.batch_size,
            update_every=self.update_every,
            centralized=self.algorithm != "iddpg",
        )

    def output_path(self, suffix: str) -> Path:
        return Path(f"{self.output}{suffix}")

    @property
    def csv_path(self) -> Path:
        return self.output_path(CSV_SUFFIX)

    @property
    def summary_path(self) -> Path:
        return self.output_path(SUMMARY_SUFFIX)

    @property
    def checkpoint_path(self) -> Path:
        return self.output_path(CHECKPOINT_SUFFIX)


FIELDS = tuple(ExperimentConfig.model_fields)


def environment_values(environ: Mapping[str, str] | None = None) -> dict[str, str]:
    """Config values set through CBIM_<KEY> environment variables"""
    environ = os.environ if environ is None else environ
    values = {}
    for field in FIELDS:
        name = f"{ENV_PREFIX}{field.upper()}"
        if name in environ:
            values[field] = environ[name]
    return values


def file_values(path: str | Path) -> dict[str, str]:
    """Flat key=value pairs from a config file; empty values are ignored"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(ConfigError.MISSING_FILE.format(path))
    values = {key.strip().replace("-", "_"): value for key, value in dotenv_values(path).items()}
    unknown = sorted(set(values) - set(FIELDS))
    if unknown:
        raise ConfigError(ConfigError.UNKNOWN_KEYS.format(", ".join(unknown)))
    return {key: value for key, value in values.items() if value not in (None, "")}


def parse_overrides(pairs: tuple[str, ...] | list[str]) -> dict[str, str]:
    """Turn repeated `--set KEY=VALUE` flags into a mapping"""
    values = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigError(ConfigError.BAD_OVERRIDE.format(pair))
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_config(*layers: Mapping[str, object]) -> ExperimentConfig:
    merged: dict[str, object] = {}
    for layer in layers:
        merged.update({key: value for key, value in layer.items() if value is not None})
    unknown = sorted(set(merged) - set(FIELDS))
    if unknown:
        raise ConfigError(ConfigError.UNKNOWN_KEYS.format(", ".join(unknown)))
    try:
        return ExperimentConfig.model_validate(merged)
    except ValidationError as exc:
        lines = [f"  {'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()]
        raise ConfigError(ConfigError.INVALID.format("\n".join(lines))) from exc


def load_config(
    path: str | Path | None = None,
    overrides: Mapping[str, object] | None = None,
    environ: Mapping[str, str] | None = None,
) -> ExperimentConfig:
    """Merge defaults, environment, config file and CLI overrides

    Raises:
      ConfigError: If the file is missing, a key is unknown or a value is invalid
    """
    layers: list[Mapping[str, object]] = [environment_values(environ)]
    if path is not None:
        layers.append(file_values(path))
    layers.append(overrides or {})
    config = build_config(*layers)
    logger.debug("Loaded config: %s", config.model_dump(mode="json"))
    return config
