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
Binary checkpoint codec.

Layout (all little-endian):

    8 bytes   magic b"CBIMCKPT"
    uint32    format version
    uint32    competitors k
    uint32    seeds l
    uint32    hidden width
    uint8     centralized critic flag
    int64 x3  cursor: iteration, round, stored transitions
    float64   k budgets
    float64   per agent: actor, critic, target actor, target critic parameters

Version 2 networks read budget fractions; version 1 files are rejected.

The cursor is the whole random state: every draw comes from a labeled stream,
so (master seed, cursor) fixes where a resumed run would continue.
"""

import struct
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from cbim_marl.errors import CheckpointError
from cbim_marl.models import JointLayout
from cbim_marl.networks import mlp_parameter_count
from cbim_marl.trainer import LearnerSettings, MultiAgentLearner

MAGIC = b"CBIMCKPT"
FORMAT_VERSION = 2
_HEADER = struct.Struct("<8sIIIIBqqq")
_FLOAT = np.dtype("<f8")
ROLES = ("actor", "critic", "target_actor", "target_critic")


class Checkpoint(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    layout: JointLayout
    hidden: int
    centralized: bool
    cursor: tuple[int, int, int]
    budgets: np.ndarray
    agents: tuple[dict[str, np.ndarray], ...]


def _role_sizes(layout: JointLayout, hidden: int, *, centralized: bool) -> dict[str, int]:
    actor = mlp_parameter_count(layout.obs_dim, hidden, layout.seeds)
    critic = mlp_parameter_count(sum(layout.critic_dims(centralized=centralized)), hidden, 1)
    return {"actor": actor, "critic": critic, "target_actor": actor, "target_critic": critic}


def encode_checkpoint(checkpoint: Checkpoint) -> bytes:
    layout = checkpoint.layout
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        layout.competitors,
        layout.seeds,
        checkpoint.hidden,
        int(checkpoint.centralized),
        *checkpoint.cursor,
    )
    parts = [header, np.asarray(checkpoint.budgets, dtype=_FLOAT).tobytes()]
    for agent in checkpoint.agents:
        parts.extend(np.asarray(agent[role], dtype=_FLOAT).tobytes() for role in ROLES)
    return b"".join(parts)


def decode_checkpoint(data: bytes) -> Checkpoint:
    if len(data) < _HEADER.size:
        raise CheckpointError(CheckpointError.BAD_MAGIC.format(data[:8]))
    magic, version, k, l, hidden, centralized, *cursor = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(CheckpointError.BAD_MAGIC.format(magic))
    if version != FORMAT_VERSION:
        raise CheckpointError(CheckpointError.BAD_VERSION.format(version, FORMAT_VERSION))

    layout = JointLayout(competitors=k, seeds=l)
    sizes = _role_sizes(layout, hidden, centralized=bool(centralized))
    expected = k + k * sum(sizes.values())
    body = data[_HEADER.size :]
    available = len(body) // _FLOAT.itemsize
    if available < expected:
        raise CheckpointError(CheckpointError.TRUNCATED.format(expected * _FLOAT.itemsize, len(body)))
    if len(body) != expected * _FLOAT.itemsize:
        raise CheckpointError(CheckpointError.TRAILING.format(len(body) - expected * _FLOAT.itemsize))

    values = np.frombuffer(body, dtype=_FLOAT).astype(np.float64)
    budgets, offset = values[:k], k
    agents = []
    for _ in range(k):
        agent = {}
        for role in ROLES:
            agent[role] = values[offset : offset + sizes[role]]
            offset += sizes[role]
        agents.append(agent)
    return Checkpoint(
        layout=layout,
        hidden=hidden,
        centralized=bool(centralized),
        cursor=tuple(cursor),
        budgets=budgets,
        agents=tuple(agents),
    )


def write_checkpoint(path: str | Path, checkpoint: Checkpoint) -> None:
    Path(path).write_bytes(encode_checkpoint(checkpoint))


def read_checkpoint(path: str | Path) -> Checkpoint:
    """Load a checkpoint file

    Raises:
      FileNotFoundError: If the file does not exist
      CheckpointError: If the header or size is wrong
    """
    return decode_checkpoint(Path(path).read_bytes())


def snapshot(learner: MultiAgentLearner, cursor: tuple[int, int, int]) -> Checkpoint:
    return Checkpoint(
        layout=learner.layout,
        hidden=learner.settings.hidden,
        centralized=learner.settings.centralized,
        cursor=cursor,
        budgets=np.asarray(learner.budgets),
        agents=tuple(agent.flat_parameters() for agent in learner.agents),
    )


def restore(
    checkpoint: Checkpoint, settings: LearnerSettings | None = None, master_seed: int = 0
) -> MultiAgentLearner:
    """Rebuild a learner holding the checkpointed parameters.

    Network shapes come from the checkpoint; other settings (learning rate,
    buffer size, ...) come from `settings` and only matter if training resumes.
    """
    base = settings or LearnerSettings()
    settings = base.model_copy(update={"hidden": checkpoint.hidden, "centralized": checkpoint.centralized})
    learner = MultiAgentLearner(checkpoint.layout, checkpoint.budgets.tolist(), settings, master_seed)
    for agent, parameters in zip(learner.agents, checkpoint.agents, strict=True):
        agent.load_flat_parameters(parameters)
    return learner


def check_layout(checkpoint: Checkpoint, layout: JointLayout) -> None:
    if checkpoint.layout != layout:
        raise CheckpointError(CheckpointError.LAYOUT.format(checkpoint.layout, layout))


def check_budgets(checkpoint: Checkpoint, budgets: Sequence[float]) -> None:
    expected = [float(b) for b in budgets]
    if checkpoint.budgets.tolist() != expected:
        raise CheckpointError(CheckpointError.BUDGETS.format(checkpoint.budgets.tolist(), expected))
