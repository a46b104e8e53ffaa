import pytest

from culturesim import (
    AgentSpec,
    LengthMismatch,
    NoNeighborStories,
    PromptSet,
    Story,
    assemble_initialization,
    assemble_transformation,
    assign_personalities,
    story_index,
    story_position,
)

PROMPTS = PromptSet(
    name="t", initialization="Tell me a story", transformation="Retell the story."
)


def _story(agent_id, generation, text, n_agents=3):
    return Story(
        agent_id=agent_id,
        generation=generation,
        seed=0,
        text=text,
        story_index=story_index(agent_id, generation, n_agents),
    )


def test_story_index_layout():
    assert story_index(3, 0, 10) == 3
    assert story_index(3, 1, 10) == 13
    assert story_position(3, 10) == (0, 3)
    assert story_position(13, 10) == (1, 3)


def test_story_index_bijection():
    for n_agents in (1, 2, 7):
        for generation in range(5):
            for agent in range(n_agents):
                idx = story_index(agent, generation, n_agents)
                assert story_position(idx, n_agents) == (generation, agent)


def test_initialization_without_personality():
    agent = AgentSpec(0)
    assert assemble_initialization(agent, PROMPTS) == "Tell me a story"


def test_initialization_with_personality():
    agent = AgentSpec(0, personality="You are a pirate.")
    assert (
        assemble_initialization(agent, PROMPTS)
        == "You are a pirate.\n\nTell me a story"
    )


def test_transformation_numbers_stories_in_given_order():
    agent = AgentSpec(1)
    stories = [_story(0, 0, "First tale."), _story(2, 0, "Second tale.")]
    assert assemble_transformation(agent, PROMPTS, stories) == (
        "Retell the story.\n\nStory 1:\nFirst tale.\n\nStory 2:\nSecond tale."
    )


def test_transformation_personality_on_top():
    agent = AgentSpec(1, personality="Be brief.")
    stories = [_story(0, 0, "A tale.")]
    assert assemble_transformation(agent, PROMPTS, stories) == (
        "Be brief.\n\nRetell the story.\n\nStory 1:\nA tale."
    )


def test_transformation_requires_stories():
    with pytest.raises(NoNeighborStories):
        assemble_transformation(AgentSpec(0), PROMPTS, [])


def test_prompt_set_rejects_empty_parts():
    with pytest.raises(ValueError):
        PromptSet(name="x", initialization="", transformation="y")
    with pytest.raises(ValueError):
        PromptSet(name="x", initialization="y", transformation="")


def test_uniform_personality_assignment():
    roster = assign_personalities("Be wise.", 3)
    assert [a.agent_id for a in roster] == [0, 1, 2]
    assert all(a.personality == "Be wise." for a in roster)


def test_per_agent_personalities():
    roster = assign_personalities(["a", "b"], 2)
    assert [a.personality for a in roster] == ["a", "b"]
    with pytest.raises(LengthMismatch):
        assign_personalities(["a", "b"], 3)


def test_empty_personality_means_no_block():
    roster = assign_personalities("", 2)
    assert assemble_initialization(roster[0], PROMPTS) == PROMPTS.initialization
