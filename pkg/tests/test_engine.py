import json
import re
from pathlib import Path

import pytest

from culturesim import (
    BackendSpec,
    BackendUnreachable,
    GeneratedText,
    GenerationParams,
    NetworkKind,
    PromptSet,
    SimulationConfig,
    analyze_results,
    assign_personalities,
    build_topology,
    run_experiment,
    run_generation,
    run_simulation,
)
from culturesim import results
from culturesim.errors import InvalidPopulation, LengthMismatch

PROMPTS = PromptSet(
    name="t", initialization="Tell me a story", transformation="Retell the story."
)
PARAMS = GenerationParams(max_tokens=64)


class RecordingBackend:
    """Echoes a per-agent marker and keeps every prompt it saw."""

    def __init__(self):
        self.calls = []

    def generate(self, prompt, params, context):
        self.calls.append((context.agent_id, context.generation, prompt))
        text = f"story from agent {context.agent_id}"
        return GeneratedText(text=text, raw=text)


def test_run_generation_zero_uses_initialization():
    topo = build_topology("circle", 3)
    agents = assign_personalities("", 3)
    backend = RecordingBackend()
    records = run_generation(0, topo, agents, PROMPTS, backend, PARAMS)
    assert [r.story.agent_id for r in records] == [0, 1, 2]
    assert [r.story.story_index for r in records] == [0, 1, 2]
    for _, _, prompt in backend.calls:
        assert prompt == "Tell me a story"


def test_run_generation_passes_neighbor_stories_ascending():
    topo = build_topology("circle", 3)
    agents = assign_personalities("", 3)
    backend = RecordingBackend()
    prior = [r.story for r in run_generation(0, topo, agents, PROMPTS, backend, PARAMS)]
    backend.calls.clear()
    run_generation(1, topo, agents, PROMPTS, backend, PARAMS, prior, parallelism=1)
    prompts = {agent: prompt for agent, _, prompt in backend.calls}
    # agent 0 hears agents 1 and 2, in ascending id order
    assert prompts[0] == (
        "Retell the story.\n\n"
        "Story 1:\nstory from agent 1\n\n"
        "Story 2:\nstory from agent 2"
    )
    assert "Story 1:\nstory from agent 0" in prompts[1]
    assert "Story 1:\nstory from agent 0" in prompts[2]


def test_run_generation_parallel_keeps_agent_order():
    topo = build_topology("fully_connected", 8)
    agents = assign_personalities("", 8)
    backend = RecordingBackend()
    records = run_generation(
        0, topo, agents, PROMPTS, backend, PARAMS, parallelism=8
    )
    assert [r.story.agent_id for r in records] == list(range(8))


def test_run_generation_prior_validation():
    topo = build_topology("circle", 3)
    agents = assign_personalities("", 3)
    backend = RecordingBackend()
    with pytest.raises(ValueError):
        run_generation(1, topo, agents, PROMPTS, backend, PARAMS, prior=None)
    records = run_generation(0, topo, agents, PROMPTS, backend, PARAMS)
    with pytest.raises(ValueError):
        run_generation(
            1, topo, agents, PROMPTS, backend, PARAMS,
            prior=[r.story for r in records[:2]],
        )
    with pytest.raises(ValueError):
        run_generation(
            0, topo, agents, PROMPTS, backend, PARAMS,
            prior=[r.story for r in records],
        )


def test_shuffle_neighbor_stories_is_seeded():
    topo = build_topology("fully_connected", 6)
    agents = assign_personalities("", 6)
    backend = RecordingBackend()
    prior = [r.story for r in run_generation(0, topo, agents, PROMPTS, backend, PARAMS)]

    def prompts_for(seed):
        recorder = RecordingBackend()
        run_generation(
            1, topo, agents, PROMPTS, recorder, PARAMS, prior,
            seed=seed, parallelism=1, shuffle_neighbor_stories=True,
        )
        return [p for _, _, p in recorder.calls]

    first = prompts_for(0)
    assert prompts_for(0) == first  # same seed, same order
    story_sets = [set(re.findall(r"story from agent \d", p)) for p in first]
    assert story_sets[0] == {f"story from agent {a}" for a in (1, 2, 3, 4, 5)}
    assert prompts_for(1) != first  # some agent sees a different order


def test_echo_chain_via_sequence(mock_config):
    config = mock_config(
        name="chain",
        n_agents=5,
        network_kind=NetworkKind.SEQUENCE,
        backend=BackendSpec(kind="mock", rule="echo_first"),
    )
    run = run_simulation(config, seed_index=0)
    stories = run.stories
    assert [s.agent_id for s in stories] == [0] * 5
    assert [s.generation for s in stories] == [0, 1, 2, 3, 4]
    assert [s.story_index for s in stories] == [0, 1, 2, 3, 4]
    assert len({s.text for s in stories}) == 1  # the chain is a fixed point


def test_sequence_personalities_follow_positions(mock_config):
    base = mock_config(
        name="chain",
        n_agents=3,
        network_kind=NetworkKind.SEQUENCE,
        backend=BackendSpec(kind="mock", rule="templated"),
    )
    plain = run_simulation(base, seed_index=0).texts()
    flavored = run_simulation(
        mock_config(
            name="chain",
            n_agents=3,
            network_kind=NetworkKind.SEQUENCE,
            backend=BackendSpec(kind="mock", rule="templated"),
            personalities=("", "Be odd.", ""),
        ),
        seed_index=0,
    ).texts()
    assert plain[0] == flavored[0]  # same prompt at position 0
    assert plain[1] != flavored[1]  # personality entered the prompt
    # position 2 differs too: it retells a different story
    assert plain[2] != flavored[2]


def test_run_simulation_writes_progress_files(tmp_path, mock_config):
    config = mock_config(n_seeds=1)
    out = tmp_path / "seed_0"
    run = run_simulation(config, seed_index=0, out_dir=out)
    status = results.read_status(out)
    assert status["status"] == "done"
    assert status["completed_generations"] == 3
    rows = results.read_stories(out)
    assert len(rows) == len(run.records) == 12
    assert [row["story_index"] for row in rows] == list(range(12))


class _ExplodingBackend:
    def __init__(self, explode_at):
        self.explode_at = explode_at

    def generate(self, prompt, params, context):
        if (context.generation, context.agent_id) == self.explode_at:
            raise BackendUnreachable("boom")
        text = f"g{context.generation}a{context.agent_id}"
        return GeneratedText(text=text, raw=text)


def test_backend_error_is_annotated_with_grid_position():
    topo = build_topology("fully_connected", 3)
    agents = assign_personalities("", 3)
    prior = [
        r.story
        for r in run_generation(
            0, topo, agents, PROMPTS, _ExplodingBackend((9, 9)), PARAMS
        )
    ]
    with pytest.raises(BackendUnreachable, match=r"generation 1, agent 2: boom"):
        run_generation(
            1, topo, agents, PROMPTS, _ExplodingBackend((1, 2)), PARAMS, prior,
            parallelism=1,
        )


def test_failed_seed_recorded_and_others_continue(tmp_path, mock_config):
    config = mock_config(
        n_seeds=2,
        backend=BackendSpec(kind="http_completion", url="http://127.0.0.1:9/v1"),
        params=GenerationParams(max_tokens=8, timeout=0.2, retries=0),
    )
    result = run_experiment(config, tmp_path / "out")
    assert sorted(result.failures) == [0, 1]
    assert result.seed_runs == {}
    summary = result.summary
    assert summary["seeds_completed"] == []
    assert set(summary["seeds_failed"]) == {"0", "1"}
    assert "generation 0, agent" in summary["seeds_failed"]["0"]
    status = results.read_status(tmp_path / "out" / "seed_0")
    assert status["status"] == "failed"
    assert "generation 0" in status["error"]


def test_run_experiment_layout_and_summary(tmp_path, mock_config):
    config = mock_config(n_seeds=2)
    out = tmp_path / "exp"
    result = run_experiment(config, out)
    assert sorted(result.seed_runs) == [0, 1]
    for seed_index in (0, 1):
        seed_path = out / f"seed_{seed_index}"
        for name in (
            "stories.json",
            "similarity_matrix.csv",
            "metrics.json",
            "keywords.json",
            "layout.json",
            "status.json",
        ):
            assert (seed_path / name).is_file(), name
    summary = results.read_json(out / "summary_metrics.json")
    assert summary["grid"] == {"n_generations": 3, "n_agents": 4}
    series = summary["metrics"]["within_generation_similarity"]
    assert len(series["mean"]) == len(series["std"]) == 3
    config_json = results.read_json(out / "config.json")
    assert config_json["name"] == "testrun"
    meta = results.read_json(out / "run_meta.json")
    assert meta["finished_at"] >= meta["started_at"]


def test_progress_callback_order(tmp_path, mock_config):
    config = mock_config(n_seeds=2, n_generations=2)
    seen = []
    run_experiment(config, tmp_path / "out", progress=lambda s, g: seen.append((s, g)))
    assert seen == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_identical_seeds_collapse_std_with_echo(tmp_path, mock_config):
    config = mock_config(
        n_seeds=3,
        backend=BackendSpec(kind="mock", rule="echo_first"),
    )
    result = run_experiment(config, tmp_path / "out")
    for series in result.summary["metrics"].values():
        for value in series["std"]:
            assert value is None or value == 0.0


def test_rerun_clears_stale_seed_dirs(tmp_path, mock_config):
    out = tmp_path / "out"
    run_experiment(mock_config(n_seeds=2), out)
    assert (out / "seed_1").is_dir()
    run_experiment(mock_config(n_seeds=1), out)
    assert not (out / "seed_1").exists()
    assert (out / "seed_0").is_dir()


def test_analyze_results_reproduces_artifacts_byte_for_byte(tmp_path, mock_config):
    out = tmp_path / "out"
    run_experiment(mock_config(n_seeds=2), out)
    tracked = [
        "summary_metrics.json",
        "seed_0/similarity_matrix.csv",
        "seed_0/metrics.json",
        "seed_0/keywords.json",
        "seed_0/layout.json",
        "seed_1/metrics.json",
    ]
    before = {name: (out / name).read_bytes() for name in tracked}
    for name in tracked:
        if name != "summary_metrics.json":
            (out / name).unlink()
    analyze_results(out)
    after = {name: (out / name).read_bytes() for name in tracked}
    assert before == after


def test_config_json_round_trip(mock_config):
    config = mock_config(
        personalities=("a", "b", "c", "d"),
        n_cliques=2,
        network_kind=NetworkKind.CAVEMAN,
        n_agents=8,
        embeddings_path="/tmp/none.txt",
    )
    payload = config.to_json()
    assert payload["grid"] == {"n_generations": 3, "n_agents": 8}
    rebuilt = SimulationConfig.from_json(json.loads(json.dumps(payload)))
    assert rebuilt == config


def test_config_validation_errors(mock_config):
    with pytest.raises(ValueError):
        mock_config(name="../escape").validate()
    with pytest.raises(InvalidPopulation):
        mock_config(
            network_kind=NetworkKind.CAVEMAN, n_agents=10, n_cliques=3
        ).validate()
    with pytest.raises(LengthMismatch):
        mock_config(personalities=("a",)).validate()
    with pytest.raises(InvalidPopulation):
        mock_config(n_seeds=0).validate()


def test_sequence_grid_ignores_generations(mock_config):
    config = mock_config(
        network_kind=NetworkKind.SEQUENCE, n_agents=7, n_generations=99
    )
    assert config.grid() == (7, 1)
    assert config.seeds() == [0]
    assert mock_config(rng_seed=5, n_seeds=3).seeds() == [5, 6, 7]
