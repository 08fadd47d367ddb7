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
Central finite-difference gradient checks.

`grad_check` takes a function returning (value, analytic gradient) and compares
the gradient coordinate by coordinate with (f(x + h e_i) - f(x - h e_i)) / 2h.
The relative error of a coordinate is |a - n| / max(|a|, |n|, GRADIENT_FLOOR).
The floor sits well above the rounding noise of a central difference at the
default step, so only gradients that are zero for practical purposes are
compared absolutely. Coordinates where the function has a kink inside
[x - h, x + h] (the forward and backward one-sided slopes differ by more than
the tolerance, relative to the same floor) are not compared; they are counted
in the report's `kinks` and the remaining coordinates in its `trials`.
Piecewise-linear activations make such points unavoidable on random networks.

The builders below turn the learning code's losses into such functions of a
flat parameter (or input) vector.
"""

from collections.abc import Callable
from functools import partial

import numpy as np
import torch
from torch import nn

from cbim_marl.learning import actor_objective, critic_loss
from cbim_marl.models import JointLayout, TransitionBatch
from cbim_marl.networks import DTYPE, Actor, Critic, get_flat, init_uniform, set_flat
from cbim_network.rng import stream
from cbim_oracle.errors import OracleError
from cbim_oracle.models import OracleReport

GradFunction = Callable[[np.ndarray], tuple[float, np.ndarray]]

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4
GRADIENT_FLOOR = 1e-5
GRADIENT_STREAM = "oracle-gradients"


def grad_check(
    fn: GradFunction,
    params: np.ndarray,
    h: float = DEFAULT_STEP,
    tol: float = DEFAULT_TOLERANCE,
    suite: str = "gradient",
) -> OracleReport:
    if h <= 0:
        raise OracleError(OracleError.BAD_STEP.format(h))
    theta = np.array(params, dtype=np.float64)
    center, analytic = fn(theta.copy())
    analytic = np.asarray(analytic, dtype=np.float64)
    report = OracleReport(suite=suite)
    for i in range(theta.size):
        step = np.zeros_like(theta)
        step[i] = h
        plus, _ = fn(theta + step)
        minus, _ = fn(theta - step)
        numeric = (plus - minus) / (2 * h)
        forward, backward = (plus - center) / h, (center - minus) / h
        # an undetected kink adds at most tol / 2 to the relative error
        if abs(forward - backward) > tol * max(abs(numeric), GRADIENT_FLOOR):
            report.kinks += 1
            continue
        report.trials += 1
        error = abs(analytic[i] - numeric) / max(abs(analytic[i]), abs(numeric), GRADIENT_FLOOR)
        report.max_error = max(report.max_error, error)
        if error > tol:
            report.record(i, f"coordinate {i}: analytic {analytic[i]!r} vs numeric {numeric!r}", error=error)
    return report


def parameter_function(module: nn.Module, objective: Callable[[], torch.Tensor]) -> GradFunction:
    """f(theta) = objective() with the module's parameters set to theta"""

    def evaluate(theta: np.ndarray) -> tuple[float, np.ndarray]:
        set_flat(module, theta)
        module.zero_grad(set_to_none=True)
        value = objective()
        value.backward()
        grad = torch.cat([p.grad.reshape(-1) for p in module.parameters()])
        return float(value.detach()), grad.numpy().copy()

    return evaluate


def input_function(module: nn.Module, split: int | None = None) -> GradFunction:
    """f(x) = sum of module outputs; for a critic, x is [obs, action] split at `split`"""

    def evaluate(x: np.ndarray) -> tuple[float, np.ndarray]:
        inputs = torch.as_tensor(x, dtype=DTYPE).clone().requires_grad_(True)
        out = module(inputs) if split is None else module(inputs[:split], inputs[split:])
        value = out.sum()
        (grad,) = torch.autograd.grad(value, inputs)
        return float(value.detach()), grad.numpy().copy()

    return evaluate


def _random_batch(rng: np.random.Generator, layout: JointLayout, size: int) -> TransitionBatch:
    def uniform(*shape: int) -> torch.Tensor:
        return torch.as_tensor(rng.uniform(0.0, 2.0, shape), dtype=DTYPE)

    return TransitionBatch(
        joint_obs=uniform(size, layout.joint_obs_dim),
        joint_action=uniform(size, layout.joint_action_dim),
        rewards=uniform(size, layout.competitors),
        joint_next_obs=uniform(size, layout.joint_obs_dim),
        terminal=torch.as_tensor((rng.random(size) < 0.3).astype(np.float64)),
    )


def _seeded(module: nn.Module, rng: np.random.Generator) -> nn.Module:
    generator = torch.Generator()
    generator.manual_seed(int(rng.integers(0, 2**31)))
    init_uniform(module, generator)
    return module


def check_network_gradients(
    networks: int = 100,
    master_seed: int = 0,
    h: float = DEFAULT_STEP,
    tol: float = DEFAULT_TOLERANCE,
) -> list[OracleReport]:
    """Critic-loss, actor-objective and input gradients on random small networks"""
    reports = {
        name: OracleReport(suite=f"gradients: {name}")
        for name in ("critic loss", "actor objective", "actor input", "critic input")
    }
    for trial in range(networks):
        rng = stream(master_seed, GRADIENT_STREAM, trial)
        layout = JointLayout(competitors=int(rng.integers(1, 4)), seeds=int(rng.integers(1, 4)))
        hidden = int(rng.integers(2, 9))
        agent = int(rng.integers(0, layout.competitors))
        centralized = bool(rng.random() < 0.75)
        batch = _random_batch(rng, layout, 8)
        targets = torch.as_tensor(rng.uniform(0.0, 2.0, 8), dtype=DTYPE)
        critic = _seeded(Critic(*layout.critic_dims(centralized=centralized), hidden), rng)
        actor = _seeded(Actor(layout.obs_dim, layout.seeds, hidden), rng)

        checks = {
            "critic loss": (
                parameter_function(
                    critic, partial(critic_loss, agent, critic, batch, targets, layout, centralized=centralized)
                ),
                get_flat(critic),
            ),
            "actor objective": (
                parameter_function(
                    actor, partial(actor_objective, agent, actor, critic, batch, layout, centralized=centralized)
                ),
                get_flat(actor),
            ),
            "actor input": (input_function(actor), rng.uniform(0.0, 2.0, layout.obs_dim)),
            "critic input": (
                input_function(critic, split=critic.obs_dim),
                rng.uniform(0.0, 2.0, critic.obs_dim + critic.action_dim),
            ),
        }
        for name, (fn, point) in checks.items():
            # undo the perturbation left by the previous check
            set_flat(critic, checks["critic loss"][1])
            set_flat(actor, checks["actor objective"][1])
            single = grad_check(fn, point, h=h, tol=tol)
            merged = reports[name]
            merged.trials += 1
            merged.kinks += single.kinks
            merged.max_error = max(merged.max_error, single.max_error)
            for mismatch in single.mismatches:
                merged.record(
                    trial,
                    mismatch.detail,
                    layout=layout.model_dump(),
                    hidden=hidden,
                    agent=agent,
                    centralized=centralized,
                    master_seed=master_seed,
                )
    return list(reports.values())
