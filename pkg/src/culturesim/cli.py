"""Command-line interface.

Three subcommands: ``run`` executes a multi-seed experiment into a
results folder, ``analyze`` recomputes the analytics of an existing
folder, and ``serve`` starts the HTTP service that the web console talks
to.  Invalid arguments exit with status 2 (argparse convention); runtime
failures exit with status 1 and a message on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import prompts as prompt_lib
from .agents import PromptSet
from .backend import parse_backend_arg
from .engine import SimulationConfig, analyze_results, run_experiment
from .errors import CultureSimError
from .results import SUMMARY_FILE
from .topology import NetworkKind


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="culturesim",
        description="Simulate cultural evolution of stories in agent populations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a multi-seed experiment")
    run.add_argument("--name", help="experiment name (defaults to the output folder name)")
    run.add_argument("--agents", type=int, default=10, help="population size / chain length")
    run.add_argument("--generations", type=int, default=10,
                     help="number of generations (ignored for sequence networks)")
    run.add_argument("--seeds", type=int, default=1, help="number of repetitions")
    run.add_argument("--network", default="fully_connected",
                     choices=[k.value for k in NetworkKind])
    run.add_argument("--cliques", type=int, default=None,
                     help="clique count (caveman networks only)")
    run.add_argument("--init", default=prompt_lib.DEFAULT_INITIALIZATION,
                     help="initialization prompt: registry name or file path")
    run.add_argument("--transform", default=prompt_lib.DEFAULT_TRANSFORMATION,
                     help="transformation prompt: registry name or file path")
    run.add_argument("--personality", default=None,
                     help="uniform personality: registry name or file path")
    run.add_argument("--personalities", default=None, metavar="FILE",
                     help="JSON array with one personality per agent "
                          "(registry names are resolved, other text is literal)")
    run.add_argument("--backend", required=True,
                     help="mock:RULE[:K], http:URL (raw completion) or chat:URL")
    run.add_argument("--parallelism", type=int, default=4,
                     help="max concurrent backend requests per generation")
    run.add_argument("--max-tokens", type=int, default=1024)
    run.add_argument("--temperature", type=float, default=1.0)
    run.add_argument("--timeout", type=float, default=120.0,
                     help="per-request timeout in seconds")
    run.add_argument("--retries", type=int, default=2,
                     help="extra attempts after a transport failure")
    run.add_argument("--rng-seed", type=int, default=0,
                     help="base seed; repetition i uses rng_seed + i")
    run.add_argument("--shuffle-neighbors", action="store_true",
                     help="shuffle neighbor stories in the prompt (seeded) "
                          "instead of ascending agent-id order")
    run.add_argument("--embeddings", default=None, metavar="FILE",
                     help="word-embedding file; enables the creativity metric")
    run.add_argument("--keywords", type=int, default=10,
                     help="keywords extracted per story")
    run.add_argument("--prompts-dir", default=None,
                     help="directory of custom prompt .txt files")
    run.add_argument("--personalities-dir", default=None,
                     help="directory of custom personality .txt files")
    run.add_argument("--out", required=True, help="results folder to create")

    analyze = sub.add_parser("analyze", help="recompute analytics of a results folder")
    analyze.add_argument("results_dir", help="folder produced by 'culturesim run'")
    analyze.add_argument("--embeddings", default=None, metavar="FILE",
                         help="word-embedding file; enables the creativity metric")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--results-root", default="results",
                       help="folder that experiment results are written under")
    serve.add_argument("--prompts-dir", default=None)
    serve.add_argument("--personalities-dir", default=None)
    serve.add_argument("--jobs", type=int, default=1,
                       help="max simultaneously running experiments")
    serve.add_argument("--static-dir", default=None,
                       help="directory with the built web console, served at /")
    return parser


def _load_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> SimulationConfig:
    init_registry = prompt_lib.initialization_registry(args.prompts_dir)
    transform_registry = prompt_lib.transformation_registry(args.prompts_dir)
    personality_registry = prompt_lib.personality_registry(args.personalities_dir)

    try:
        initialization = init_registry.resolve(args.init)
        transformation = transform_registry.resolve(args.transform)
        personalities: str | tuple[str, ...] = ""
        if args.personality is not None and args.personalities is not None:
            parser.error("--personality and --personalities are mutually exclusive")
        if args.personality is not None:
            personalities = personality_registry.resolve(args.personality)
        elif args.personalities is not None:
            entries = json.loads(Path(args.personalities).read_text(encoding="utf-8"))
            if not isinstance(entries, list) or not all(isinstance(e, str) for e in entries):
                raise ValueError(f"{args.personalities} must hold a JSON array of strings")
            personalities = tuple(
                personality_registry.get(e) if e in personality_registry else e
                for e in entries
            )
        backend = parse_backend_arg(args.backend)
    except (KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        parser.error(str(exc))

    out = Path(args.out)
    name = args.name or out.name
    config = SimulationConfig(
        name=name,
        n_agents=args.agents,
        n_generations=args.generations,
        n_seeds=args.seeds,
        network_kind=NetworkKind(args.network),
        n_cliques=args.cliques,
        prompts=PromptSet(
            name=f"{args.init}+{args.transform}",
            initialization=initialization,
            transformation=transformation,
        ),
        personalities=personalities,
        backend=backend,
        params=_params_from_args(args),
        parallelism=args.parallelism,
        rng_seed=args.rng_seed,
        shuffle_neighbor_stories=args.shuffle_neighbors,
        keyword_count=args.keywords,
        embeddings_path=args.embeddings,
    )
    try:
        config.validate()
    except (CultureSimError, ValueError) as exc:
        parser.error(str(exc))
    return config


def _params_from_args(args: argparse.Namespace):
    from .backend import GenerationParams

    return GenerationParams(
        max_tokens=args.max_tokens,
        temperature=args.temperature,
        timeout=args.timeout,
        retries=args.retries,
    )


def _cmd_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = _load_config(args, parser)
    n_generations, _ = config.grid()

    def progress(seed_index: int, generation: int) -> None:
        print(
            f"[seed {seed_index}] generation {generation + 1}/{n_generations}",
            file=sys.stderr,
        )

    result = run_experiment(config, args.out, progress=progress)
    print(Path(args.out) / SUMMARY_FILE)
    if result.failures:
        for seed_index, reason in sorted(result.failures.items()):
            print(f"seed {seed_index} failed: {reason}", file=sys.stderr)
        return 1
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    analyze_results(args.results_dir, embeddings_path=args.embeddings)
    print(Path(args.results_dir) / SUMMARY_FILE)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        results_root=args.results_root,
        prompts_dir=args.prompts_dir,
        personalities_dir=args.personalities_dir,
        max_concurrent_jobs=args.jobs,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, parser)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_serve(args)
    except (CultureSimError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
