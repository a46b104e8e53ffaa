"""Agent identities, story records and prompt assembly.

A personality, when present, sits at the very top of every prompt the
agent receives.  Transformation prompts carry the neighbors' stories from
the previous generation as numbered ``Story k:`` blocks, in the order the
caller supplies them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatch, NoNeighborStories


@dataclass(frozen=True)
class AgentSpec:
    """One agent: its id and an optional personality text ('' = none)."""

    agent_id: int
    personality: str = ""


@dataclass(frozen=True)
class PromptSet:
    """The pair of prompts driving a run.

    ``initialization`` seeds generation 0; ``transformation`` rewrites the
    neighbors' stories at every later generation.
    """

    name: str
    initialization: str
    transformation: str

    def __post_init__(self) -> None:
        if not self.initialization:
            raise ValueError("initialization prompt must be non-empty")
        if not self.transformation:
            raise ValueError("transformation prompt must be non-empty")


@dataclass(frozen=True)
class Story:
    """One produced story, located on the (agent, generation) grid."""

    agent_id: int
    generation: int
    seed: int
    text: str
    story_index: int


def story_index(agent_id: int, generation: int, n_agents: int) -> int:
    """Flat position of a story: ``agent_id + n_agents * generation``.

    Stories are numbered generation by generation, so index 3 is agent 3
    of generation 0 and index 13 is agent 3 of generation 1 when ten
    agents are simulated.
    """
    return agent_id + n_agents * generation


def story_position(index: int, n_agents: int) -> tuple[int, int]:
    """Inverse of :func:`story_index`: ``(generation, agent_id)``."""
    return divmod(index, n_agents)


def assign_personalities(
    personalities: str | Sequence[str], n_agents: int
) -> list[AgentSpec]:
    """Build the agent roster from a uniform or per-agent personality.

    A single string applies to the whole population; a sequence must
    provide exactly one entry per agent.

    Raises:
        LengthMismatch: if a sequence is given whose length differs from
            ``n_agents``.
    """
    if isinstance(personalities, str):
        texts = [personalities] * n_agents
    else:
        texts = list(personalities)
        if len(texts) != n_agents:
            raise LengthMismatch(
                f"{len(texts)} personalities for {n_agents} agents"
            )
    return [AgentSpec(i, text) for i, text in enumerate(texts)]


def assemble_initialization(agent: AgentSpec, prompts: PromptSet) -> str:
    """Generation-0 prompt: optional personality block, then the opener."""
    if agent.personality:
        return f"{agent.personality}\n\n{prompts.initialization}"
    return prompts.initialization


def assemble_transformation(
    agent: AgentSpec, prompts: PromptSet, neighbor_stories: Sequence[Story]
) -> str:
    """Prompt for generation >= 1.

    Layout, top to bottom, blocks separated by blank lines: personality
    (if any), the transformation instruction, then one ``Story k:`` block
    per neighbor story, numbered from 1 in the order given.

    Raises:
        NoNeighborStories: if no stories are supplied; on the supported
            networks every agent has at least one neighbor, so this marks
            a scheduling bug rather than a user error.
    """
    if not neighbor_stories:
        raise NoNeighborStories(
            f"agent {agent.agent_id} received no neighbor stories"
        )
    parts: list[str] = []
    if agent.personality:
        parts.append(agent.personality)
    parts.append(prompts.transformation)
    for k, story in enumerate(neighbor_stories, start=1):
        parts.append(f"Story {k}:\n{story.text}")
    return "\n\n".join(parts)
