"""Drive the HTTP service end to end: preview a topology, submit a job,
poll it, and pull every artifact back over the wire.

Starts `culturesim serve` as a subprocess on a free port, so this is the
same path the web console uses — no in-process shortcuts.

Run with:  python3 demos/05_service_client.py
"""

import socket
import subprocess
import sys
import tempfile
import time

import requests


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def wait_for(base, timeout=15.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            requests.get(f"{base}/simulations", timeout=1)
            return
        except requests.ConnectionError:
            time.sleep(0.1)
    raise RuntimeError("service did not come up")


def main():
    port = free_port()
    base = f"http://127.0.0.1:{port}"
    with tempfile.TemporaryDirectory() as results_root:
        server = subprocess.Popen(
            [sys.executable, "-m", "culturesim.cli", "serve",
             "--port", str(port), "--results-root", results_root],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        try:
            wait_for(base)
            print(f"service up at {base}")

            preview = requests.get(
                f"{base}/topology/preview",
                params={"kind": "caveman", "agents": 10, "cliques": 2},
            ).json()
            print(f"\ntopology preview: {preview['n_agents']} nodes, "
                  f"{len(preview['edges'])} edges")

            config = {
                "name": "service-demo",
                "n_agents": 6,
                "n_generations": 4,
                "n_seeds": 2,
                "network": {"kind": "circle"},
                "prompts": {
                    "name": "demo",
                    "initialization": "Tell me a story",
                    "transformation": "Retell one of the stories you heard.",
                },
                "backend": {"kind": "mock", "rule": "templated"},
                "rng_seed": 3,
            }
            job = requests.post(f"{base}/simulations", json=config).json()
            state = requests.get(
                f"{base}/simulations/{job['id']}/status"
            ).json()["state"]
            print(f"\ncreated job {job['id']} in state {state!r}")

            requests.post(f"{base}/simulations/{job['id']}/run")
            while True:
                status = requests.get(
                    f"{base}/simulations/{job['id']}/status"
                ).json()
                print(f"  state={status['state']} seed={status['seed_index']} "
                      f"generation={status['generation']}")
                if status["state"] in ("done", "failed"):
                    break
                time.sleep(0.2)
            assert status["state"] == "done", status

            metrics = requests.get(
                f"{base}/simulations/{job['id']}/metrics"
            ).json()
            within = metrics["metrics"]["within_generation_similarity"]["mean"]
            print(f"\nwithin-generation similarity means: "
                  f"{[round(v, 3) for v in within]}")

            matrix = requests.get(
                f"{base}/simulations/{job['id']}/seeds/0/matrix"
            ).json()
            print(f"seed 0 matrix: {matrix['n_stories']}×{matrix['n_stories']} "
                  f"({matrix['n_agents']} agents × {matrix['n_generations']} "
                  f"generations)")

            stories = requests.get(
                f"{base}/simulations/{job['id']}/seeds/0/stories"
            ).json()
            print(f"seed 0 stories: {len(stories)}; "
                  f"last one starts {stories[-1]['text'][:40]!r}")

            layout = requests.get(
                f"{base}/simulations/{job['id']}/seeds/0/layout"
            ).json()
            print(f"layout: {layout['n_nodes']} nodes, "
                  f"{len(layout['edges'])} edges above the similarity threshold")

            requests.post(
                f"{base}/prompts",
                json={"name": "Pirate", "role": "transformation",
                      "text": "Retell the story as a pirate would."},
            )
            names = [p["name"] for p in requests.get(f"{base}/prompts").json()]
            print(f"\nprompt registry now holds: {names}")
        finally:
            server.terminate()
            server.wait(timeout=10)
    print("\nservice stopped, temporary results cleaned up")


if __name__ == "__main__":
    main()
