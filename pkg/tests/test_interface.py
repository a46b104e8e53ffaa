import json
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from culturesim.cli import main
from culturesim.service import create_app

# ----------------------------------------------------------------- CLI: run


def run_cli(*argv):
    return main(list(argv))


def test_cli_run_mock_experiment(tmp_path, capsys):
    out = tmp_path / "exp"
    code = run_cli(
        "run",
        "--agents", "4",
        "--generations", "3",
        "--seeds", "2",
        "--backend", "mock:templated",
        "--out", str(out),
    )
    assert code == 0
    assert (out / "summary_metrics.json").is_file()
    assert (out / "seed_1" / "similarity_matrix.csv").is_file()
    captured = capsys.readouterr()
    assert str(out / "summary_metrics.json") in captured.out
    config = json.loads((out / "config.json").read_text())
    assert config["name"] == "exp"  # defaults to the folder name
    assert config["prompts"]["initialization"] == "Tell me a story"


def test_cli_rejects_unknown_flag(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--agents", "4", "--bogus", "1",
                "--backend", "mock:echo", "--out", str(tmp_path / "x"))
    assert err.value.code == 2


def test_cli_rejects_indivisible_caveman(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli(
            "run", "--agents", "10", "--network", "caveman", "--cliques", "3",
            "--backend", "mock:echo", "--out", str(tmp_path / "x"),
        )
    assert err.value.code == 2


def test_cli_rejects_unknown_network(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--network", "pentagon",
                "--backend", "mock:echo", "--out", str(tmp_path / "x"))
    assert err.value.code == 2


def test_cli_rejects_unknown_prompt_name(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--init", "NoSuchPrompt",
                "--backend", "mock:echo", "--out", str(tmp_path / "x"))
    assert err.value.code == 2


def test_cli_rejects_bad_backend(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli("run", "--backend", "telepathy:hmm", "--out", str(tmp_path / "x"))
    assert err.value.code == 2


def test_cli_runtime_failure_exits_1(tmp_path, capsys):
    code = run_cli(
        "run",
        "--agents", "3", "--generations", "2",
        "--backend", "http:http://127.0.0.1:9/v1",
        "--timeout", "0.2", "--retries", "0",
        "--out", str(tmp_path / "x"),
    )
    assert code == 1
    assert "failed" in capsys.readouterr().err


def test_cli_personality_registry_and_custom_prompts(tmp_path):
    prompts_dir = tmp_path / "prompts"
    prompts_dir.mkdir()
    (prompts_dir / "MyOpener.txt").write_text("Start a legend", encoding="utf-8")
    roster = tmp_path / "personalities.json"
    roster.write_text(json.dumps(["Creative", "stay factual", ""]), encoding="utf-8")
    out = tmp_path / "exp"
    code = run_cli(
        "run",
        "--agents", "3", "--generations", "2",
        "--network", "circle",
        "--init", "MyOpener",
        "--personalities", str(roster),
        "--prompts-dir", str(prompts_dir),
        "--backend", "mock:templated",
        "--out", str(out),
    )
    assert code == 0
    config = json.loads((out / "config.json").read_text())
    assert config["prompts"]["initialization"] == "Start a legend"
    texts = config["personalities"]["texts"]
    assert texts[0].startswith("For what follows, pretend")  # registry name expanded
    assert texts[1] == "stay factual"
    assert texts[2] == ""


def test_cli_uniform_personality_by_name(tmp_path):
    out = tmp_path / "exp"
    assert run_cli(
        "run", "--agents", "3", "--generations", "2", "--network", "circle",
        "--personality", "NotCreative",
        "--backend", "mock:templated", "--out", str(out),
    ) == 0
    config = json.loads((out / "config.json").read_text())
    assert config["personalities"]["mode"] == "uniform"
    assert "not a very creative" in config["personalities"]["text"]


def test_cli_personality_flags_are_exclusive(tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli(
            "run", "--personality", "Creative", "--personalities", "x.json",
            "--backend", "mock:echo", "--out", str(tmp_path / "x"),
        )
    assert err.value.code == 2


# ------------------------------------------------------------- CLI: analyze


def test_cli_analyze_empty_dir_exits_1(tmp_path, capsys):
    assert run_cli("analyze", str(tmp_path / "nothing")) == 1
    assert "error" in capsys.readouterr().err


def test_cli_analyze_round_trip(tmp_path):
    out = tmp_path / "exp"
    run_cli("run", "--agents", "3", "--generations", "2",
            "--backend", "mock:templated", "--out", str(out))
    before = (out / "seed_0" / "metrics.json").read_bytes()
    (out / "seed_0" / "metrics.json").unlink()
    assert run_cli("analyze", str(out)) == 0
    assert (out / "seed_0" / "metrics.json").read_bytes() == before


# ------------------------------------------------------------------ service


@pytest.fixture
def client(tmp_path):
    app = create_app(results_root=tmp_path / "results")
    with TestClient(app) as test_client:
        yield test_client


def config_payload(name="svc", **overrides):
    payload = {
        "name": name,
        "n_agents": 4,
        "n_generations": 3,
        "n_seeds": 2,
        "network": {"kind": "fully_connected"},
        "prompts": {
            "name": "t",
            "initialization": "Tell me a story",
            "transformation": "Retell what you heard.",
        },
        "backend": {"kind": "mock", "rule": "templated"},
        "rng_seed": 0,
    }
    payload.update(overrides)
    return payload


def wait_done(client, job_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = client.get(f"/simulations/{job_id}/status").json()
        if status["state"] in ("done", "failed"):
            return status
        time.sleep(0.02)
    raise AssertionError("job never finished")


def test_job_lifecycle(client):
    created = client.post("/simulations", json=config_payload())
    assert created.status_code == 201
    job_id = created.json()["id"]

    status = client.get(f"/simulations/{job_id}/status").json()
    assert status["state"] == "pending"

    # results are refused before the run completes
    assert client.get(f"/simulations/{job_id}/metrics").status_code == 409

    started = client.post(f"/simulations/{job_id}/run")
    assert started.status_code == 202
    assert client.post(f"/simulations/{job_id}/run").status_code == 409

    final = wait_done(client, job_id)
    assert final["state"] == "done"
    assert final["generation"] == 2  # last finished generation of the last seed

    metrics = client.get(f"/simulations/{job_id}/metrics").json()
    assert metrics["seeds_completed"] == [0, 1]
    assert "within_generation_similarity" in metrics["metrics"]

    matrix = client.get(f"/simulations/{job_id}/seeds/0/matrix").json()
    assert matrix["n_stories"] == 12
    assert matrix["n_agents"] == 4 and matrix["n_generations"] == 3
    assert len(matrix["values"]) == 12
    assert matrix["values"][0][0] == 1.0

    stories = client.get(f"/simulations/{job_id}/seeds/0/stories").json()
    assert [row["story_index"] for row in stories] == list(range(12))

    keywords = client.get(f"/simulations/{job_id}/seeds/1/keywords").json()
    assert "per_story" in keywords and "word_chains" in keywords

    layout = client.get(f"/simulations/{job_id}/seeds/1/layout").json()
    assert layout["n_nodes"] == 12

    assert client.get(f"/simulations/{job_id}/seeds/7/matrix").status_code == 404


def test_unknown_job_is_404(client):
    assert client.get("/simulations/nope/status").status_code == 404
    assert client.post("/simulations/nope/run").status_code == 404


def test_invalid_configs_are_400(client):
    bad = config_payload(network={"kind": "caveman", "n_cliques": 3}, n_agents=10)
    response = client.post("/simulations", json=bad)
    assert response.status_code == 400
    assert "cliques" in response.json()["detail"]

    assert client.post("/simulations", json={"name": "x"}).status_code == 400
    assert (
        client.post("/simulations", json=config_payload(name="../escape")).status_code
        == 400
    )


def test_failed_job_state(client):
    payload = config_payload(
        name="doomed",
        backend={"kind": "http_completion", "url": "http://127.0.0.1:9/v1"},
        params={"timeout": 0.2, "retries": 0, "max_tokens": 8, "temperature": 1.0},
        n_seeds=1,
    )
    job_id = client.post("/simulations", json=payload).json()["id"]
    client.post(f"/simulations/{job_id}/run")
    final = wait_done(client, job_id)
    assert final["state"] == "failed"
    assert "unreachable" in final["error"]
    assert client.get(f"/simulations/{job_id}/metrics").status_code == 409


def test_topology_preview(client):
    preview = client.get(
        "/topology/preview", params={"kind": "caveman", "agents": 10, "cliques": 2}
    )
    assert preview.status_code == 200
    payload = preview.json()
    assert payload["n_agents"] == 10
    assert len(payload["edges"]) == 20

    bad = client.get(
        "/topology/preview", params={"kind": "caveman", "agents": 10, "cliques": 3}
    )
    assert bad.status_code == 400

    unknown = client.get("/topology/preview", params={"kind": "blob", "agents": 5})
    assert unknown.status_code == 400


def test_prompt_registry_endpoints(client):
    listing = client.get("/prompts").json()
    by_name = {entry["name"]: entry for entry in listing}
    assert by_name["TellMeAStory"]["role"] == "initialization"
    assert by_name["CombineTwo"]["role"] == "transformation"

    created = client.post("/prompts", json={"name": "Haiku", "text": "Write a haiku"})
    assert created.status_code == 201
    refreshed = {e["name"]: e for e in client.get("/prompts").json()}
    assert refreshed["Haiku"]["text"] == "Write a haiku"
    assert refreshed["Haiku"]["role"] == "any"

    assert client.post("/prompts", json={"name": "../bad", "text": "x"}).status_code == 400
    assert client.post("/prompts", json={"name": "NoText"}).status_code == 400


def test_personality_registry_endpoints(client):
    names = {entry["name"] for entry in client.get("/personalities").json()}
    assert {"Creative", "NotCreative"} <= names
    assert client.post(
        "/personalities", json={"name": "Pirate", "text": "Talk like a pirate."}
    ).status_code == 201
    names = {entry["name"] for entry in client.get("/personalities").json()}
    assert "Pirate" in names


def test_custom_prompt_usable_in_simulation(client):
    client.post("/prompts", json={"name": "Opener", "text": "Begin a fable"})
    payload = config_payload(
        name="withcustom",
        n_seeds=1,
        prompts={
            "name": "Opener+custom",
            "initialization": "Begin a fable",
            "transformation": "Retell the fable.",
        },
    )
    job_id = client.post("/simulations", json=payload).json()["id"]
    client.post(f"/simulations/{job_id}/run")
    assert wait_done(client, job_id)["state"] == "done"


def test_static_console_mount(tmp_path):
    static = tmp_path / "static"
    static.mkdir()
    (static / "index.html").write_text("<html><body>console</body></html>")
    app = create_app(results_root=tmp_path / "results", static_dir=static)
    with TestClient(app) as client:
        page = client.get("/")
        assert page.status_code == 200
        assert "console" in page.text
        # API routes keep precedence over the static mount
        assert client.get("/prompts").status_code == 200


# ------------------------------------------- CLI and service produce the same


def _folder_snapshot(root: Path) -> dict[str, bytes]:
    snapshot = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.name != "run_meta.json":
            snapshot[str(path.relative_to(root))] = path.read_bytes()
    return snapshot


def test_cli_and_service_write_identical_folders(tmp_path):
    cli_out = tmp_path / "cli" / "ident"
    assert run_cli(
        "run", "--name", "ident",
        "--agents", "4", "--generations", "3", "--seeds", "2",
        "--backend", "mock:templated", "--rng-seed", "7",
        "--out", str(cli_out),
    ) == 0

    config = json.loads((cli_out / "config.json").read_text(encoding="utf-8"))
    app = create_app(results_root=tmp_path / "svc")
    with TestClient(app) as client:
        job_id = client.post("/simulations", json=config).json()["id"]
        client.post(f"/simulations/{job_id}/run")
        assert wait_done(client, job_id)["state"] == "done"

    assert _folder_snapshot(cli_out) == _folder_snapshot(tmp_path / "svc" / "ident")
