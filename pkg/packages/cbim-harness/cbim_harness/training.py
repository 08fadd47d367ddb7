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
Experiment drivers.

`train` runs N iterations of T rounds. Each iteration resets prices and
observations; transitions go to the learner, which updates on its own cadence.
`evaluate` replays a checkpoint with frozen parameters and no exploration.
Both stream one CSV row per round and write a summary block next to it.
"""

from pathlib import Path

import torch
from cbim_marl.checkpoint import check_budgets, check_layout, read_checkpoint, restore, snapshot, write_checkpoint
from cbim_marl.errors import NumericFailureError
from cbim_marl.policies import BiddingPolicy, RandomBidders
from cbim_marl.trainer import MultiAgentLearner
from cbim_network.graph import generate_preferential_attachment, select_seeds_by_degree
from cbim_network.models.graph import WeightedGraph
from cbim_network.parsers.edge_list import load_edge_list
from cbim_network.rng import RngLabel
from pydantic import BaseModel, ConfigDict

from cbim_harness.core.config import ConfigError, ExperimentConfig
from cbim_harness.core.logging import get_logger, run_context
from cbim_harness.environment import BiddingEnvironment
from cbim_harness.metrics import Summary, format_summary, is_win_win, summarize
from cbim_harness.records import EpisodeRecord, EpisodeWriter
from cbim_harness.rounds import run_round

logger = get_logger(__name__)


class RunResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: list[EpisodeRecord]
    summary: Summary
    csv_path: Path
    summary_path: Path
    checkpoint_path: Path | None = None
    updates: int = 0


def load_graph(config: ExperimentConfig) -> WeightedGraph:
    if config.dataset is not None:
        logger.info("Loading %s graph from %s", "directed" if config.directed else "undirected", config.dataset)
        return load_edge_list(config.dataset, directed=config.directed)
    logger.info(
        "Generating preferential-attachment graph: %d nodes, attach %d, seed %d",
        config.synthetic_nodes,
        config.synthetic_attach,
        config.synthetic_seed,
    )
    return generate_preferential_attachment(
        config.synthetic_nodes, config.synthetic_attach, seed=config.synthetic_seed
    )


def build_environment(config: ExperimentConfig, graph: WeightedGraph | None = None) -> BiddingEnvironment:
    graph = graph if graph is not None else load_graph(config)
    seeds = select_seeds_by_degree(graph, config.l)
    return BiddingEnvironment(
        graph,
        seeds,
        config.budget_values,
        kappa=config.kappa,
        omega=config.omega,
        rho=config.rho,
        t_up=config.step_limit(graph.node_count),
        reward_mode=config.reward_mode,
    )


def build_policy(config: ExperimentConfig, env: BiddingEnvironment) -> BiddingPolicy:
    if config.algorithm == "random":
        return RandomBidders(env.budgets.tolist(), env.seeds.size)
    return MultiAgentLearner(env.layout, env.budgets.tolist(), config.learner_settings(), config.seed)


def _master_seed(config: ExperimentConfig) -> int:
    if config.seed is None:
        raise ConfigError(ConfigError.MISSING_SEED)
    return config.seed


def _play(
    config: ExperimentConfig,
    env: BiddingEnvironment,
    policy: BiddingPolicy,
    *,
    learn: bool,
) -> tuple[list[EpisodeRecord], RngLabel]:
    seed = _master_seed(config)
    records: list[EpisodeRecord] = []
    wins = 0
    label = RngLabel(master_seed=seed)
    with EpisodeWriter(config.csv_path, env.layout.competitors, env.layout.seeds) as writer:
        for iteration in range(config.iterations):
            env.reset()
            noise = config.noise_std(iteration) if learn else 0.0
            revenue = 0
            for t in range(config.rounds):
                label = RngLabel(master_seed=seed, iteration=iteration, round_index=t)
                record, transition = run_round(
                    env,
                    policy,
                    label,
                    noise_std=noise,
                    terminal=t == config.rounds - 1,
                    normalize_rewards=config.normalize_rewards,
                    record_wall_time=config.record_wall_time,
                )
                writer.write(record)
                records.append(record)
                revenue += record.revenue
                wins += is_win_win(record, config.rho, config.sr_mode)
                if learn:
                    try:
                        policy.observe(transition, label)
                    except NumericFailureError as exc:
                        logger.error(
                            "Aborting at iteration %d round %d: agent %d %s parameter %r is not finite",
                            iteration,
                            t,
                            exc.agent,
                            exc.role,
                            exc.parameter,
                        )
                        raise
            logger.info(
                "Iteration %d/%d: mean revenue %.2f, SR so far %.2f%%, noise %.3f",
                iteration + 1,
                config.iterations,
                revenue / config.rounds,
                100 * wins / len(records),
                noise,
            )
    return records, label


def _finish(config: ExperimentConfig, records: list[EpisodeRecord]) -> Summary:
    summary = summarize(records, config.rho, config.sr_mode)
    text = format_summary(summary)
    config.summary_path.write_text(text + "\n", encoding="utf-8")
    logger.info("Summary for %s:\n%s", config.output, text)
    return summary


def train(config: ExperimentConfig) -> RunResult:
    """Run the full training schedule and write CSV, summary and checkpoint"""
    seed = _master_seed(config)
    torch.use_deterministic_algorithms(True)
    with run_context(config.algorithm, seed):
        env = build_environment(config)
        policy = build_policy(config, env)
        logger.info(
            "Training: %d nodes, %d arcs, k=%d, l=%d, budgets=%s, N=%d, T=%d",
            env.graph.node_count,
            env.graph.edge_count,
            env.layout.competitors,
            env.layout.seeds,
            env.budgets.tolist(),
            config.iterations,
            config.rounds,
        )
        records, last = _play(config, env, policy, learn=True)
        summary = _finish(config, records)

        checkpoint_path = None
        updates = 0
        if isinstance(policy, MultiAgentLearner):
            checkpoint_path = config.checkpoint_path
            write_checkpoint(checkpoint_path, snapshot(policy, last.as_tuple()))
            updates = policy.updates
            logger.info("Wrote checkpoint %s after %d updates", checkpoint_path, updates)
    return RunResult(
        records=records,
        summary=summary,
        csv_path=config.csv_path,
        summary_path=config.summary_path,
        checkpoint_path=checkpoint_path,
        updates=updates,
    )


def evaluate(config: ExperimentConfig, checkpoint_path: str | Path) -> RunResult:
    """Replay a trained checkpoint with frozen parameters and zero noise"""
    seed = _master_seed(config)
    torch.use_deterministic_algorithms(True)
    checkpoint = read_checkpoint(checkpoint_path)
    with run_context("evaluate", seed):
        env = build_environment(config)
        check_layout(checkpoint, env.layout)
        check_budgets(checkpoint, env.budgets.tolist())
        learner = restore(checkpoint, config.learner_settings(), seed)
        logger.info(
            "Evaluating %s on %d nodes, N=%d, T=%d",
            checkpoint_path,
            env.graph.node_count,
            config.iterations,
            config.rounds,
        )
        records, _ = _play(config, env, learner, learn=False)
        summary = _finish(config, records)
    return RunResult(
        records=records,
        summary=summary,
        csv_path=config.csv_path,
        summary_path=config.summary_path,
    )
