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
Feedforward approximators for bidding agents.

The actor maps an agent's own observation [g_prev, rb_prev], in fractions of its
budget, to one bid fraction per seed through a logistic output. The
critic maps an (observation, action) pair to a scalar value. For the
centralized variant the pair is the joint observation and joint action of all
agents; for independent learners it is the agent's own slice.

All networks run in float64.
"""

import math

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

DTYPE = torch.float64
DEFAULT_HIDDEN = 64


class Actor(nn.Module):
    def __init__(self, obs_dim: int, action_dim: int, hidden: int = DEFAULT_HIDDEN):
        super().__init__()
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.l1 = nn.Linear(obs_dim, hidden, dtype=DTYPE)
        self.l2 = nn.Linear(hidden, hidden, dtype=DTYPE)
        self.l3 = nn.Linear(hidden, action_dim, dtype=DTYPE)

    def logits(self, obs: torch.Tensor) -> torch.Tensor:
        """Pre-squash outputs; `forward` is their logistic"""
        x = F.relu(self.l1(obs))
        x = F.relu(self.l2(x))
        return self.l3(x)

    def forward(self, obs: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.logits(obs))


class Critic(nn.Module):
    def __init__(self, obs_dim: int, action_dim: int, hidden: int = DEFAULT_HIDDEN):
        super().__init__()
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.l1 = nn.Linear(obs_dim + action_dim, hidden, dtype=DTYPE)
        self.l2 = nn.Linear(hidden, hidden, dtype=DTYPE)
        self.l3 = nn.Linear(hidden, 1, dtype=DTYPE)

    def forward(self, obs: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        x = torch.cat([obs, action], dim=-1)
        x = F.relu(self.l1(x))
        x = F.relu(self.l2(x))
        return self.l3(x).squeeze(-1)


def init_uniform(module: nn.Module, generator: torch.Generator) -> None:
    """Fill every linear layer with U(-1/sqrt(fan_in), 1/sqrt(fan_in)) draws"""
    with torch.no_grad():
        for layer in module.modules():
            if isinstance(layer, nn.Linear):
                bound = 1.0 / math.sqrt(layer.in_features)
                layer.weight.uniform_(-bound, bound, generator=generator)
                layer.bias.uniform_(-bound, bound, generator=generator)


def torch_generator(rng: np.random.Generator) -> torch.Generator:
    """Seed a torch generator from a labeled numpy stream"""
    generator = torch.Generator()
    generator.manual_seed(int(rng.integers(0, 2**63 - 1)))
    return generator


def get_flat(module: nn.Module) -> np.ndarray:
    return nn.utils.parameters_to_vector(module.parameters()).detach().numpy().copy()


def set_flat(module: nn.Module, flat: np.ndarray) -> None:
    vector = torch.as_tensor(np.asarray(flat, dtype=np.float64), dtype=DTYPE)
    with torch.no_grad():
        nn.utils.vector_to_parameters(vector, module.parameters())


def mlp_parameter_count(in_dim: int, hidden: int, out_dim: int) -> int:
    """Parameters of an in -> hidden -> hidden -> out network with biases"""
    return (in_dim + 1) * hidden + (hidden + 1) * hidden + (hidden + 1) * out_dim
