"""Exception hierarchy shared across the package."""


class CultureSimError(Exception):
    """Base class for every error raised by this package."""


class InvalidPopulation(CultureSimError):
    """Population size or clique count incompatible with the requested network."""


class AgentOutOfRange(CultureSimError):
    """Agent id outside ``[0, n_agents)``."""


class LengthMismatch(CultureSimError):
    """Per-agent personality list does not match the population size."""


class NoNeighborStories(CultureSimError):
    """A transformation prompt was requested without any neighbor stories."""


class BackendUnreachable(CultureSimError):
    """The text-generation endpoint could not be reached after retries."""


class MalformedResponse(CultureSimError):
    """The endpoint answered, but the response carried no usable text field."""


class EmptyGeneration(CultureSimError):
    """The endpoint returned empty text; empty stories would corrupt the corpus."""


class EmptyCorpus(CultureSimError):
    """A vector space was requested over an empty corpus."""


class GenerationOutOfRange(CultureSimError):
    """Generation index outside the simulated range."""


class MissingEmbeddings(CultureSimError):
    """The creativity measure needs word embeddings and none were provided."""
