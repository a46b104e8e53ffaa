"""Directional checks that need a live text-generation endpoint.

These reproduce population-level trends that only show up with a real
language model behind the backend; deterministic mocks cannot (and must
not) satisfy them.  They are opt-in: set ``CULTURESIM_LIVE_BACKEND`` to a
backend argument such as ``chat:http://host:port/v1/chat/completions``.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from culturesim import (
    INITIALIZATION_PROMPTS,
    TRANSFORMATION_PROMPTS,
    NetworkKind,
    PromptSet,
    SimulationConfig,
    parse_backend_arg,
    run_experiment,
)

N_AGENTS = 5
N_GENERATIONS = 4


def _config(name, transform, kind, out_of, **overrides):
    return SimulationConfig(
        name=name,
        n_agents=N_AGENTS,
        n_generations=N_GENERATIONS,
        n_seeds=1,
        network_kind=kind,
        prompts=PromptSet(
            name=transform,
            initialization=INITIALIZATION_PROMPTS["TellMeAStory"],
            transformation=TRANSFORMATION_PROMPTS[transform],
        ),
        backend=parse_backend_arg(out_of),
        **overrides,
    )


def _series(out_dir: Path, metric: str) -> list[float | None]:
    import json

    summary = json.loads((out_dir / "summary_metrics.json").read_text())
    return summary["metrics"][metric]["mean"]


def run_directional_battery(backend_arg: str, out_root: Path) -> dict[str, bool]:
    """Run the three directional experiments and report pass/fail flags.

    1. With the combine-two transformation, within-generation similarity
       increases over the run, and a fully connected population ends more
       homogeneous than a circle.
    2. Repeating received stories keeps successive similarity above a
       population told to maximize difference (from generation 2 on).
    3. Maximizing difference drives similarity to the first generation
       down (non-increasing from the first transformed generation to the
       last).
    """
    out_root = Path(out_root)
    outcomes: dict[str, bool] = {}

    fc = _config("live_combine_fc", "CombineTwo", NetworkKind.FULLY_CONNECTED, backend_arg)
    circle = _config("live_combine_circle", "CombineTwo", NetworkKind.CIRCLE, backend_arg)
    run_experiment(fc, out_root / fc.name)
    run_experiment(circle, out_root / circle.name)
    fc_within = _series(out_root / fc.name, "within_generation_similarity")
    circle_within = _series(out_root / circle.name, "within_generation_similarity")
    outcomes["combine_two_homogenizes"] = fc_within[-1] > fc_within[0]
    outcomes["fully_connected_above_circle"] = fc_within[-1] > circle_within[-1]

    repeat = _config("live_repeat", "Repeat", NetworkKind.FULLY_CONNECTED, backend_arg)
    maxdiff = _config(
        "live_maxdiff", "MaximizeDifference", NetworkKind.FULLY_CONNECTED, backend_arg
    )
    run_experiment(repeat, out_root / repeat.name)
    run_experiment(maxdiff, out_root / maxdiff.name)
    repeat_succ = _series(out_root / repeat.name, "successive_similarity")
    maxdiff_succ = _series(out_root / maxdiff.name, "successive_similarity")
    outcomes["repeat_above_maxdiff_successive"] = all(
        r > m
        for r, m in zip(repeat_succ[2:], maxdiff_succ[2:])
        if r is not None and m is not None
    )

    maxdiff_first = _series(out_root / maxdiff.name, "first_generation_similarity")
    tail = [v for v in maxdiff_first[1:] if v is not None]
    outcomes["maxdiff_first_generation_non_increasing"] = tail[-1] <= tail[0] + 1e-9
    return outcomes
