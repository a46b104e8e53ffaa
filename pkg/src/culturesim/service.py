"""HTTP service backing the web console.

Jobs run on a small worker pool (one at a time by default) while the
endpoints stay responsive; clients poll ``/simulations/{id}/status`` for
(seed, generation) progress.  Job states only move forward:
pending -> running -> done | failed.
"""

from __future__ import annotations

import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import prompts as prompt_lib
from . import results
from .engine import SimulationConfig, run_experiment
from .errors import CultureSimError
from .topology import build_topology

_TRANSITIONS = {
    "pending": {"running"},
    "running": {"done", "failed"},
    "done": set(),
    "failed": set(),
}


@dataclass
class JobRecord:
    """One submitted experiment and its progress."""

    id: str
    config: SimulationConfig
    results_path: Path
    state: str = "pending"
    seed_index: int | None = None
    generation: int | None = None
    error: str | None = None
    created_at: float = field(default_factory=time.time)
    finished_at: float | None = None

    def status(self) -> dict[str, Any]:
        n_generations, _ = self.config.grid()
        return {
            "id": self.id,
            "name": self.config.name,
            "state": self.state,
            "seed_index": self.seed_index,
            "generation": self.generation,
            "n_seeds": self.config.n_seeds,
            "n_generations": n_generations,
            "error": self.error,
            "results_path": str(self.results_path),
        }


class JobStore:
    """Thread-safe registry of job records with forward-only states."""

    def __init__(self) -> None:
        self._jobs: dict[str, JobRecord] = {}
        self._lock = threading.Lock()

    def create(self, config: SimulationConfig, results_path: Path) -> JobRecord:
        with self._lock:
            job_id = uuid.uuid4().hex[:12]
            while job_id in self._jobs:
                job_id = uuid.uuid4().hex[:12]
            record = JobRecord(id=job_id, config=config, results_path=results_path)
            self._jobs[job_id] = record
            return record

    def get(self, job_id: str) -> JobRecord:
        with self._lock:
            try:
                return self._jobs[job_id]
            except KeyError:
                raise HTTPException(404, f"unknown job {job_id!r}") from None

    def all(self) -> list[JobRecord]:
        with self._lock:
            return sorted(self._jobs.values(), key=lambda j: j.created_at)

    def transition(self, job_id: str, state: str, error: str | None = None) -> None:
        with self._lock:
            record = self._jobs[job_id]
            if state not in _TRANSITIONS[record.state]:
                raise HTTPException(
                    409, f"job {job_id} is {record.state}, cannot become {state}"
                )
            record.state = state
            if error is not None:
                record.error = error
            if state in ("done", "failed"):
                record.finished_at = time.time()

    def progress(self, job_id: str, seed_index: int, generation: int) -> None:
        with self._lock:
            record = self._jobs[job_id]
            record.seed_index = seed_index
            record.generation = generation


def create_app(
    results_root: str | Path = "results",
    prompts_dir: str | Path | None = None,
    personalities_dir: str | Path | None = None,
    max_concurrent_jobs: int = 1,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the application.

    ``results_root`` is where experiment folders land (one per run name).
    Custom prompts/personalities posted through the API are stored as
    ``.txt`` files under the given directories (defaults live inside the
    results root).
    """
    root = Path(results_root)
    prompts_path = Path(prompts_dir) if prompts_dir else root / "prompts"
    personalities_path = (
        Path(personalities_dir) if personalities_dir else root / "personalities"
    )
    store = JobStore()
    executor = ThreadPoolExecutor(max_workers=max(1, max_concurrent_jobs))

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="culturesim", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    # one prompt namespace: custom texts are usable in either role
    prompt_registry = prompt_lib.TextRegistry(
        {**prompt_lib.INITIALIZATION_PROMPTS, **prompt_lib.TRANSFORMATION_PROMPTS},
        prompts_path,
    )
    personality_registry = prompt_lib.personality_registry(personalities_path)

    def _execute(job_id: str) -> None:
        record = store.get(job_id)
        try:
            result = run_experiment(
                record.config,
                record.results_path,
                progress=lambda s, g: store.progress(job_id, s, g),
            )
        except Exception as exc:  # noqa: BLE001 - job boundary
            store.transition(job_id, "failed", error=str(exc))
            return
        if result.seed_runs:
            store.transition(job_id, "done")
        else:
            store.transition(
                job_id,
                "failed",
                error="; ".join(
                    f"seed {i}: {reason}" for i, reason in sorted(result.failures.items())
                ),
            )

    # ------------------------------------------------------------ simulations

    @app.post("/simulations", status_code=201)
    def create_simulation(payload: dict[str, Any] = Body(...)) -> dict[str, Any]:
        try:
            config = SimulationConfig.from_json(payload)
            config.validate()
        except (CultureSimError, ValueError, TypeError) as exc:
            raise HTTPException(400, str(exc)) from exc
        except KeyError as exc:
            raise HTTPException(400, f"missing config key {exc}") from exc
        record = store.create(config, root / config.name)
        return {
            "id": record.id,
            "name": config.name,
            "results_path": str(record.results_path),
        }

    @app.post("/simulations/{job_id}/run", status_code=202)
    def start_simulation(job_id: str) -> dict[str, Any]:
        record = store.get(job_id)
        store.transition(job_id, "running")
        executor.submit(_execute, job_id)
        return {"id": record.id, "state": "running"}

    @app.get("/simulations")
    def list_simulations() -> list[dict[str, Any]]:
        return [record.status() for record in store.all()]

    @app.get("/simulations/{job_id}/status")
    def job_status(job_id: str) -> dict[str, Any]:
        return store.get(job_id).status()

    @app.get("/simulations/{job_id}/config")
    def job_config(job_id: str) -> dict[str, Any]:
        return store.get(job_id).config.to_json()

    def _done_job(job_id: str) -> JobRecord:
        record = store.get(job_id)
        if record.state != "done":
            raise HTTPException(
                409, f"job {job_id} is {record.state}; results need state 'done'"
            )
        return record

    @app.get("/simulations/{job_id}/metrics")
    def job_metrics(job_id: str) -> dict[str, Any]:
        record = _done_job(job_id)
        return results.read_json(record.results_path / results.SUMMARY_FILE)

    def _seed_file(job_id: str, seed_index: int, filename: str) -> Path:
        record = _done_job(job_id)
        path = results.seed_dir(record.results_path, seed_index) / filename
        if not path.is_file():
            raise HTTPException(404, f"seed {seed_index} has no {filename}")
        return path

    @app.get("/simulations/{job_id}/seeds/{seed_index}/matrix")
    def seed_matrix(job_id: str, seed_index: int) -> dict[str, Any]:
        record = _done_job(job_id)
        path = _seed_file(job_id, seed_index, results.MATRIX_FILE)
        matrix = results.read_matrix_csv(path)
        n_generations, n_agents = record.config.grid()
        return {
            "n_stories": len(matrix),
            "n_agents": n_agents,
            "n_generations": n_generations,
            "values": [[float(v) for v in row] for row in matrix],
        }

    @app.get("/simulations/{job_id}/seeds/{seed_index}/stories")
    def seed_stories(job_id: str, seed_index: int) -> list[dict[str, Any]]:
        path = _seed_file(job_id, seed_index, results.STORIES_FILE)
        return sorted(results.read_json(path), key=lambda row: row["story_index"])

    @app.get("/simulations/{job_id}/seeds/{seed_index}/keywords")
    def seed_keywords(job_id: str, seed_index: int) -> dict[str, Any]:
        return results.read_json(_seed_file(job_id, seed_index, results.KEYWORDS_FILE))

    @app.get("/simulations/{job_id}/seeds/{seed_index}/layout")
    def seed_layout(job_id: str, seed_index: int) -> dict[str, Any]:
        return results.read_json(_seed_file(job_id, seed_index, results.LAYOUT_FILE))

    # --------------------------------------------------------------- topology

    @app.get("/topology/preview")
    def topology_preview(
        kind: str, agents: int, cliques: int | None = None
    ) -> dict[str, Any]:
        try:
            return build_topology(kind, agents, cliques).to_json()
        except (CultureSimError, ValueError) as exc:
            raise HTTPException(400, str(exc)) from exc

    # ------------------------------------------------------------- registries

    def _registry_listing(
        registry: prompt_lib.TextRegistry, roles: dict[str, str]
    ) -> list[dict[str, str]]:
        return [
            {
                "name": name,
                "text": registry.get(name),
                "role": roles.get(name, "any"),
            }
            for name in registry.names()
        ]

    @app.get("/prompts")
    def list_prompts() -> list[dict[str, str]]:
        roles = {name: "initialization" for name in prompt_lib.INITIALIZATION_PROMPTS}
        roles.update(
            {name: "transformation" for name in prompt_lib.TRANSFORMATION_PROMPTS}
        )
        return _registry_listing(prompt_registry, roles)

    @app.post("/prompts", status_code=201)
    def add_prompt(payload: dict[str, Any] = Body(...)) -> dict[str, str]:
        try:
            prompt_registry.add(str(payload["name"]), str(payload["text"]))
        except KeyError as exc:
            raise HTTPException(400, f"missing key {exc}") from exc
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        return {"name": payload["name"]}

    @app.get("/personalities")
    def list_personalities() -> list[dict[str, str]]:
        return [
            {"name": name, "text": personality_registry.get(name)}
            for name in personality_registry.names()
        ]

    @app.post("/personalities", status_code=201)
    def add_personality(payload: dict[str, Any] = Body(...)) -> dict[str, str]:
        try:
            personality_registry.add(str(payload["name"]), str(payload["text"]))
        except KeyError as exc:
            raise HTTPException(400, f"missing key {exc}") from exc
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        return {"name": payload["name"]}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app
