"""Generation-synchronous simulation of story transmission.

The flow: every agent writes a generation-0 story from the initialization
prompt, then at each later generation every agent receives its neighbors'
previous-generation stories inside the transformation prompt and answers
with a new story.  A whole generation completes before the next starts.
Sequence networks run as a transmission chain instead: one position per
generation, each hearing only its predecessor.

Experiments repeat a simulation over consecutive seeds and aggregate the
per-seed metric series into mean/std summaries.
"""

from __future__ import annotations

import random
import shutil
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import analytics, results
from .agents import (
    AgentSpec,
    PromptSet,
    Story,
    assemble_initialization,
    assemble_transformation,
    assign_personalities,
    story_index,
)
from .backend import BackendSpec, GenerationContext, GenerationParams
from .errors import CultureSimError, InvalidPopulation
from .layout import export_layout, spring_layout
from .prompts import valid_name
from .topology import NetworkKind, Schedule, Topology, build_topology, neighbors

#: called as progress(seed_index, generation) after each finished generation
ProgressCallback = Callable[[int, int], None]


@dataclass(frozen=True)
class StoryRecord:
    """A story plus the raw backend response it was cut from."""

    story: Story
    raw_response: str


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to reproduce an experiment.

    ``personalities`` is either one text for the whole population or a
    tuple with one text per agent ('' disables the personality block).
    For sequence networks the chain length is ``n_agents`` and
    ``n_generations`` is ignored: the chain *is* the generation axis.
    """

    name: str
    n_agents: int
    network_kind: NetworkKind
    prompts: PromptSet
    backend: BackendSpec
    n_generations: int = 10
    n_seeds: int = 1
    n_cliques: int | None = None
    personalities: str | tuple[str, ...] = ""
    params: GenerationParams = field(default_factory=GenerationParams)
    parallelism: int = 4
    rng_seed: int = 0
    shuffle_neighbor_stories: bool = False
    keyword_count: int = 10
    embeddings_path: str | None = None

    def __post_init__(self) -> None:
        # accept the plain string forms ("circle", ["p1", "p2"]) that JSON
        # payloads and interactive use naturally produce
        if not isinstance(self.network_kind, NetworkKind):
            object.__setattr__(self, "network_kind", NetworkKind(self.network_kind))
        if isinstance(self.personalities, list):
            object.__setattr__(self, "personalities", tuple(self.personalities))

    def validate(self) -> None:
        """Raise a :class:`CultureSimError` subclass or ``ValueError`` on
        the first inconsistency."""
        if not self.name or not valid_name(self.name):
            raise ValueError(
                f"run name {self.name!r} must be a safe folder name "
                "(letters, digits, '.', '_', '-')"
            )
        if self.n_generations < 1:
            raise InvalidPopulation("n_generations must be positive")
        if self.n_seeds < 1:
            raise InvalidPopulation("n_seeds must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be positive")
        if self.keyword_count < 1:
            raise ValueError("keyword_count must be positive")
        self.topology()  # validates population/cliques
        assign_personalities(self.personalities, self.n_agents)

    def topology(self) -> Topology:
        return build_topology(self.network_kind, self.n_agents, self.n_cliques)

    def grid(self) -> tuple[int, int]:
        """Effective ``(n_generations, n_agents)`` of the story grid."""
        if self.network_kind is NetworkKind.SEQUENCE:
            return (self.n_agents, 1)
        return (self.n_generations, self.n_agents)

    def seeds(self) -> list[int]:
        """The seed ladder: ``rng_seed + i`` for each repetition ``i``."""
        return [self.rng_seed + i for i in range(self.n_seeds)]

    def to_json(self) -> dict[str, Any]:
        if isinstance(self.personalities, str):
            personalities: dict[str, Any] = {
                "mode": "uniform",
                "text": self.personalities,
            }
        else:
            personalities = {
                "mode": "per_agent",
                "texts": list(self.personalities),
            }
        grid_generations, grid_agents = self.grid()
        return {
            "name": self.name,
            "n_agents": self.n_agents,
            "n_generations": self.n_generations,
            "n_seeds": self.n_seeds,
            "network": {
                "kind": self.network_kind.value,
                "n_cliques": self.n_cliques,
            },
            "prompts": {
                "name": self.prompts.name,
                "initialization": self.prompts.initialization,
                "transformation": self.prompts.transformation,
            },
            "personalities": personalities,
            "backend": self.backend.to_json(),
            "params": {
                "max_tokens": self.params.max_tokens,
                "temperature": self.params.temperature,
                "timeout": self.params.timeout,
                "retries": self.params.retries,
            },
            "parallelism": self.parallelism,
            "rng_seed": self.rng_seed,
            "shuffle_neighbor_stories": self.shuffle_neighbor_stories,
            "keyword_count": self.keyword_count,
            "embeddings_path": self.embeddings_path,
            "grid": {
                "n_generations": grid_generations,
                "n_agents": grid_agents,
            },
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> "SimulationConfig":
        """Inverse of :meth:`to_json`; tolerant of omitted optional keys."""
        network = payload.get("network", {})
        network_kind = network.get("kind", payload.get("network_kind", "fully_connected"))
        n_cliques = network.get("n_cliques", payload.get("n_cliques"))
        prompts = payload["prompts"]
        raw_personalities = payload.get("personalities", "")
        personalities: str | tuple[str, ...]
        if isinstance(raw_personalities, str):
            personalities = raw_personalities
        elif isinstance(raw_personalities, dict):
            if raw_personalities.get("mode") == "per_agent":
                personalities = tuple(raw_personalities["texts"])
            else:
                personalities = raw_personalities.get("text", "")
        else:
            personalities = tuple(raw_personalities)
        params = payload.get("params", {})
        return cls(
            name=payload["name"],
            n_agents=payload["n_agents"],
            n_generations=payload.get("n_generations", 10),
            n_seeds=payload.get("n_seeds", 1),
            network_kind=NetworkKind(network_kind),
            n_cliques=n_cliques,
            prompts=PromptSet(
                name=prompts.get("name", "custom"),
                initialization=prompts["initialization"],
                transformation=prompts["transformation"],
            ),
            personalities=personalities,
            backend=BackendSpec.from_json(payload["backend"]),
            params=GenerationParams(
                max_tokens=params.get("max_tokens", 1024),
                temperature=params.get("temperature", 1.0),
                timeout=params.get("timeout", 120.0),
                retries=params.get("retries", 2),
            ),
            parallelism=payload.get("parallelism", 4),
            rng_seed=payload.get("rng_seed", 0),
            shuffle_neighbor_stories=payload.get(
                "shuffle_neighbor_stories", False
            ),
            keyword_count=payload.get("keyword_count", 10),
            embeddings_path=payload.get("embeddings_path"),
        )


@dataclass
class SeedRun:
    """All stories of one simulation (one seed), ordered by story index."""

    seed_index: int
    seed: int
    records: list[StoryRecord]

    @property
    def stories(self) -> list[Story]:
        return [r.story for r in self.records]

    def texts(self) -> list[str]:
        return [r.story.text for r in self.records]


def _annotate(exc: CultureSimError, generation: int, agent_id: int) -> CultureSimError:
    """Same error type, message prefixed with the failing grid position."""
    return type(exc)(f"generation {generation}, agent {agent_id}: {exc}")


def run_generation(
    generation: int,
    topology: Topology,
    agents: Sequence[AgentSpec],
    prompts: PromptSet,
    backend: Any,
    params: GenerationParams,
    prior: Sequence[Story] | None = None,
    *,
    seed: int = 0,
    parallelism: int = 4,
    shuffle_neighbor_stories: bool = False,
) -> list[StoryRecord]:
    """Produce one synchronous generation, ordered by agent id.

    ``prior`` must be the complete previous generation (one story per
    agent) for ``generation >= 1`` and absent for generation 0.  Neighbor
    stories enter the prompt in ascending agent-id order unless
    ``shuffle_neighbor_stories`` asks for a seeded shuffle.
    """
    n = topology.n_agents
    if len(agents) != n:
        raise ValueError(f"{len(agents)} agent specs for {n} agents")
    if generation == 0:
        if prior is not None:
            raise ValueError("generation 0 takes no prior stories")
    elif prior is None or len(prior) != n:
        raise ValueError("a complete prior generation is required")

    def produce(agent_id: int) -> StoryRecord:
        agent = agents[agent_id]
        if generation == 0:
            prompt = assemble_initialization(agent, prompts)
        else:
            assert prior is not None
            received = [prior[j] for j in neighbors(topology, agent_id)]
            if shuffle_neighbor_stories and len(received) > 1:
                random.Random(f"{seed}:{generation}:{agent_id}").shuffle(received)
            prompt = assemble_transformation(agent, prompts, received)
        context = GenerationContext(
            agent_id=agent_id, generation=generation, seed=seed
        )
        try:
            answer = backend.generate(prompt, params, context)
        except CultureSimError as exc:
            raise _annotate(exc, generation, agent_id) from exc
        story = Story(
            agent_id=agent_id,
            generation=generation,
            seed=seed,
            text=answer.text,
            story_index=story_index(agent_id, generation, n),
        )
        return StoryRecord(story=story, raw_response=answer.raw)

    if (
        topology.schedule is Schedule.SEQUENTIAL_CHAIN
        or parallelism <= 1
        or n == 1
    ):
        return [produce(a) for a in range(n)]
    with ThreadPoolExecutor(max_workers=min(parallelism, n)) as pool:
        return list(pool.map(produce, range(n)))


def _run_chain(
    config: SimulationConfig,
    backend: Any,
    seed: int,
    records: list[StoryRecord],
    flush: Callable[[list[StoryRecord], int], None],
) -> None:
    """Transmission chain: position k becomes generation k of one agent."""
    specs = assign_personalities(config.personalities, config.n_agents)
    for step in range(config.n_agents):
        agent = AgentSpec(agent_id=0, personality=specs[step].personality)
        if step == 0:
            prompt = assemble_initialization(agent, config.prompts)
        else:
            prompt = assemble_transformation(
                agent, config.prompts, [records[-1].story]
            )
        context = GenerationContext(agent_id=0, generation=step, seed=seed)
        try:
            answer = backend.generate(prompt, config.params, context)
        except CultureSimError as exc:
            raise _annotate(exc, step, 0) from exc
        story = Story(
            agent_id=0,
            generation=step,
            seed=seed,
            text=answer.text,
            story_index=step,
        )
        records.append(StoryRecord(story=story, raw_response=answer.raw))
        flush(records, step)


def run_simulation(
    config: SimulationConfig,
    seed_index: int = 0,
    out_dir: str | Path | None = None,
    progress: ProgressCallback | None = None,
) -> SeedRun:
    """Run one seed of ``config``.

    When ``out_dir`` is given, ``stories.json`` and ``status.json`` are
    rewritten after every completed generation, so a crash loses at most
    the generation in flight.  Backend errors abort the run (a partial
    generation would poison every later one) and arrive annotated with
    the failing generation and agent.
    """
    config.validate()
    seed = config.rng_seed + seed_index
    backend = config.backend.build(parallelism=config.parallelism)
    n_generations, _ = config.grid()
    out = Path(out_dir) if out_dir is not None else None

    def flush(records: list[StoryRecord], generation: int) -> None:
        if out is not None:
            results.write_stories(out, records)
            results.write_status(
                out,
                {
                    "status": "running",
                    "seed_index": seed_index,
                    "seed": seed,
                    "completed_generations": generation + 1,
                    "n_generations": n_generations,
                },
            )
        if progress is not None:
            progress(seed_index, generation)

    records: list[StoryRecord] = []
    try:
        if config.network_kind is NetworkKind.SEQUENCE:
            _run_chain(config, backend, seed, records, flush)
        else:
            topology = config.topology()
            specs = assign_personalities(config.personalities, config.n_agents)
            prior: list[Story] | None = None
            for generation in range(config.n_generations):
                batch = run_generation(
                    generation,
                    topology,
                    specs,
                    config.prompts,
                    backend,
                    config.params,
                    prior,
                    seed=seed,
                    parallelism=config.parallelism,
                    shuffle_neighbor_stories=config.shuffle_neighbor_stories,
                )
                records.extend(batch)
                prior = [r.story for r in batch]
                flush(records, generation)
    except Exception as exc:
        if out is not None:
            results.write_status(
                out,
                {
                    "status": "failed",
                    "seed_index": seed_index,
                    "seed": seed,
                    "completed_generations": len(records) // config.grid()[1],
                    "n_generations": n_generations,
                    "error": str(exc),
                },
            )
        raise

    if out is not None:
        results.write_stories(out, records)
        results.write_status(
            out,
            {
                "status": "done",
                "seed_index": seed_index,
                "seed": seed,
                "completed_generations": n_generations,
                "n_generations": n_generations,
            },
        )
    return SeedRun(seed_index=seed_index, seed=seed, records=records)


def _analyze_texts(
    texts: Sequence[str],
    n_agents: int,
    layout_seed: int,
    keyword_count: int,
    embeddings: dict[str, np.ndarray] | None,
    directory: Path,
) -> dict[str, list[float | None]]:
    """Compute and persist every per-seed artifact; return the metric table."""
    space = analytics.fit_vector_space(texts)
    matrix = analytics.similarity_matrix(space, texts)
    results.write_matrix_csv(directory / results.MATRIX_FILE, matrix)

    table = analytics.metric_table(
        texts, n_agents, matrix, embeddings=embeddings
    )
    results.write_json(directory / results.METRICS_FILE, table)

    per_story = [
        analytics.extract_keywords(text, k=keyword_count) for text in texts
    ]
    n_generations = len(texts) // n_agents
    words_per_generation = [
        sorted(
            {
                word
                for s in range(g * n_agents, (g + 1) * n_agents)
                for word, _ in per_story[s]
            }
        )
        for g in range(n_generations)
    ]
    chains = analytics.word_chains(words_per_generation)
    results.write_json(
        directory / results.KEYWORDS_FILE,
        {
            "per_story": [
                {
                    "story_index": i,
                    "keywords": [[w, c] for w, c in per_story[i]],
                }
                for i in range(len(texts))
            ],
            "word_chains": {
                word: {
                    "generations": list(chain.generations),
                    "links": [list(link) for link in chain.links],
                }
                for word, chain in chains.items()
            },
        },
    )

    graph = spring_layout(matrix, seed=layout_seed)
    results.write_json(directory / results.LAYOUT_FILE, export_layout(graph))
    return table


def _summarize(
    config: SimulationConfig,
    tables: dict[int, dict[str, list[float | None]]],
    failures: dict[int, str],
) -> dict[str, Any]:
    metric_names = sorted({name for table in tables.values() for name in table})
    grid_generations, grid_agents = config.grid()
    return {
        "name": config.name,
        "n_seeds": config.n_seeds,
        "seeds_completed": sorted(tables),
        "seeds_failed": {str(i): reason for i, reason in sorted(failures.items())},
        "grid": {"n_generations": grid_generations, "n_agents": grid_agents},
        "metrics": {
            name: analytics.aggregate_series(
                [tables[i].get(name, []) for i in sorted(tables)]
            )
            for name in metric_names
        },
    }


@dataclass
class ExperimentResult:
    """Outcome of a multi-seed experiment."""

    config: SimulationConfig
    out_dir: Path
    seed_runs: dict[int, SeedRun]
    failures: dict[int, str]
    summary: dict[str, Any]


def _clear_outputs(out: Path) -> None:
    """Drop artifacts of a previous run so stale seeds cannot leak in."""
    for index in results.seed_indices(out):
        shutil.rmtree(results.seed_dir(out, index))
    for name in (results.SUMMARY_FILE, results.RUN_META_FILE):
        try:
            (out / name).unlink()
        except FileNotFoundError:
            pass


def run_experiment(
    config: SimulationConfig,
    out_dir: str | Path,
    progress: ProgressCallback | None = None,
) -> ExperimentResult:
    """Run every seed of ``config`` into ``out_dir`` and aggregate.

    A failing seed is recorded (console output and ``status.json``) while
    the remaining seeds still run; the summary then aggregates completed
    seeds only and lists the failures.
    """
    config.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _clear_outputs(out)
    results.write_json(out / results.CONFIG_FILE, config.to_json())

    embeddings = (
        analytics.load_embeddings(config.embeddings_path)
        if config.embeddings_path
        else None
    )
    started = time.time()
    seed_runs: dict[int, SeedRun] = {}
    tables: dict[int, dict[str, list[float | None]]] = {}
    failures: dict[int, str] = {}
    _, grid_agents = config.grid()
    for seed_index in range(config.n_seeds):
        directory = results.seed_dir(out, seed_index)
        try:
            run = run_simulation(
                config, seed_index, out_dir=directory, progress=progress
            )
        except Exception as exc:  # noqa: BLE001 - seed isolation is the contract
            failures[seed_index] = str(exc)
            continue
        tables[seed_index] = _analyze_texts(
            run.texts(),
            grid_agents,
            layout_seed=run.seed,
            keyword_count=config.keyword_count,
            embeddings=embeddings,
            directory=directory,
        )
        seed_runs[seed_index] = run

    summary = _summarize(config, tables, failures)
    results.write_json(out / results.SUMMARY_FILE, summary)
    finished = time.time()
    results.write_json(
        out / results.RUN_META_FILE,
        {
            "started_at": started,
            "finished_at": finished,
            "duration_seconds": finished - started,
        },
    )
    return ExperimentResult(
        config=config,
        out_dir=out,
        seed_runs=seed_runs,
        failures=failures,
        summary=summary,
    )


def analyze_results(
    results_dir: str | Path, embeddings_path: str | Path | None = None
) -> dict[str, Any]:
    """Recompute every analytics artifact of an existing results folder.

    Reads ``config.json`` and the stored stories, then rewrites matrices,
    metric series, keywords, layouts and the summary.  On unchanged
    stories the rewritten files are byte-identical to the originals.
    Returns the fresh summary.
    """
    out = Path(results_dir)
    config = SimulationConfig.from_json(results.read_json(out / results.CONFIG_FILE))
    path = embeddings_path or config.embeddings_path
    embeddings = analytics.load_embeddings(path) if path else None

    _, grid_agents = config.grid()
    tables: dict[int, dict[str, list[float | None]]] = {}
    failures: dict[int, str] = {}
    for seed_index in results.seed_indices(out):
        directory = results.seed_dir(out, seed_index)
        status = results.read_status(directory)
        if status.get("status") != "done":
            failures[seed_index] = status.get(
                "error", f"seed {seed_index} did not finish"
            )
            continue
        texts = [row["text"] for row in results.read_stories(directory)]
        tables[seed_index] = _analyze_texts(
            texts,
            grid_agents,
            layout_seed=config.rng_seed + seed_index,
            keyword_count=config.keyword_count,
            embeddings=embeddings,
            directory=directory,
        )
    summary = _summarize(config, tables, failures)
    results.write_json(out / results.SUMMARY_FILE, summary)
    return summary
