"""culturesim: cultural evolution of stories in networked agent populations.

Populations of text-generating agents sit on a social network and retell
each other's stories generation after generation.  This package builds
the networks, assembles the prompts, talks to the generation backends
(live HTTP endpoints or deterministic mocks), persists reproducible
results folders, and measures how the story corpus homogenizes over time.
"""

from .agents import (
    AgentSpec,
    PromptSet,
    Story,
    assemble_initialization,
    assemble_transformation,
    assign_personalities,
    story_index,
    story_position,
)
from .analytics import (
    VectorSpace,
    WordChain,
    aggregate_series,
    creativity,
    extract_keywords,
    first_generation_similarity,
    fit_vector_space,
    load_embeddings,
    load_sentiment_lexicon,
    load_stopwords,
    metric_table,
    sentiment,
    similarity_matrix,
    successive_similarity,
    tokenize,
    vectorize,
    within_generation_similarity,
    word_chains,
)
from .backend import (
    BackendSpec,
    GeneratedText,
    GenerationContext,
    GenerationParams,
    HttpChatBackend,
    HttpCompletionBackend,
    MockBackend,
    parse_backend_arg,
)
from .engine import (
    ExperimentResult,
    SeedRun,
    SimulationConfig,
    StoryRecord,
    analyze_results,
    run_experiment,
    run_generation,
    run_simulation,
)
from .errors import (
    AgentOutOfRange,
    BackendUnreachable,
    CultureSimError,
    EmptyCorpus,
    EmptyGeneration,
    GenerationOutOfRange,
    InvalidPopulation,
    LengthMismatch,
    MalformedResponse,
    MissingEmbeddings,
    NoNeighborStories,
)
from .layout import EDGE_THRESHOLD, LayoutGraph, export_layout, spring_layout
from .prompts import (
    INITIALIZATION_PROMPTS,
    PERSONALITIES,
    TRANSFORMATION_PROMPTS,
    TextRegistry,
)
from .topology import (
    NetworkKind,
    Schedule,
    Topology,
    build_topology,
    neighbors,
)

__version__ = "0.1.0"

__all__ = [
    "AgentSpec",
    "AgentOutOfRange",
    "BackendSpec",
    "BackendUnreachable",
    "CultureSimError",
    "EDGE_THRESHOLD",
    "EmptyCorpus",
    "EmptyGeneration",
    "ExperimentResult",
    "GeneratedText",
    "GenerationContext",
    "GenerationOutOfRange",
    "GenerationParams",
    "HttpChatBackend",
    "HttpCompletionBackend",
    "INITIALIZATION_PROMPTS",
    "InvalidPopulation",
    "LayoutGraph",
    "LengthMismatch",
    "MalformedResponse",
    "MissingEmbeddings",
    "MockBackend",
    "NetworkKind",
    "NoNeighborStories",
    "PERSONALITIES",
    "PromptSet",
    "Schedule",
    "SeedRun",
    "SimulationConfig",
    "Story",
    "StoryRecord",
    "TextRegistry",
    "Topology",
    "TRANSFORMATION_PROMPTS",
    "VectorSpace",
    "WordChain",
    "aggregate_series",
    "analyze_results",
    "assemble_initialization",
    "assemble_transformation",
    "assign_personalities",
    "build_topology",
    "creativity",
    "export_layout",
    "extract_keywords",
    "first_generation_similarity",
    "fit_vector_space",
    "load_embeddings",
    "load_sentiment_lexicon",
    "load_stopwords",
    "metric_table",
    "neighbors",
    "parse_backend_arg",
    "run_experiment",
    "run_generation",
    "run_simulation",
    "sentiment",
    "similarity_matrix",
    "spring_layout",
    "story_index",
    "story_position",
    "successive_similarity",
    "tokenize",
    "vectorize",
    "within_generation_similarity",
    "word_chains",
]
