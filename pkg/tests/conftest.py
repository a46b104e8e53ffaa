import sys
from pathlib import Path

import pytest

# make the sibling oracle module importable regardless of invocation dir
sys.path.insert(0, str(Path(__file__).parent))

from culturesim import BackendSpec, NetworkKind, PromptSet, SimulationConfig


@pytest.fixture
def mock_config():
    """Factory for small deterministic experiment configs."""

    def build(**overrides):
        defaults = dict(
            name="testrun",
            n_agents=4,
            n_generations=3,
            n_seeds=1,
            network_kind=NetworkKind.FULLY_CONNECTED,
            prompts=PromptSet(
                name="test",
                initialization="Tell me a story",
                transformation="Retell what you heard as one story.",
            ),
            backend=BackendSpec(kind="mock", rule="templated"),
            parallelism=2,
        )
        defaults.update(overrides)
        return SimulationConfig(**defaults)

    return build
