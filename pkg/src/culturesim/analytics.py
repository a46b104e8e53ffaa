"""Corpus analytics: TF-IDF similarity, homogenization metrics, keywords,
word chains, creativity and sentiment.

Everything here is deterministic and pure: the same corpus always yields
the same vectors, matrices and scores, which is what makes whole result
folders byte-reproducible.

Tokenization is shared by every measure: lowercase the text and keep
maximal runs of two or more word characters (letters, digits,
underscore), so single-character tokens and punctuation disappear.
"""

from __future__ import annotations

import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import EmptyCorpus, GenerationOutOfRange, MissingEmbeddings

_TOKEN_RE = re.compile(r"\w\w+")


def tokenize(text: str) -> list[str]:
    """Lowercased tokens of two or more word characters, in text order."""
    return _TOKEN_RE.findall(text.lower())


# ---------------------------------------------------------------------------
# bundled data files


def _bundled(name: str) -> str:
    return (
        resources.files("culturesim").joinpath("data").joinpath(name)
        .read_text(encoding="utf-8")
    )


@lru_cache(maxsize=None)
def _bundled_stopwords() -> frozenset[str]:
    return frozenset(_bundled("stopwords.txt").split())


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set; the bundled English list unless a file is given."""
    if path is None:
        return _bundled_stopwords()
    return frozenset(Path(path).read_text(encoding="utf-8").split())


def _parse_lexicon(text: str) -> dict[str, tuple[float, float]]:
    lexicon: dict[str, tuple[float, float]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, polarity, subjectivity = line.split()
        lexicon[word] = (float(polarity), float(subjectivity))
    return lexicon


@lru_cache(maxsize=None)
def _bundled_lexicon() -> dict[str, tuple[float, float]]:
    return _parse_lexicon(_bundled("sentiment_lexicon.txt"))


def load_sentiment_lexicon(
    path: str | Path | None = None,
) -> dict[str, tuple[float, float]]:
    """Word -> (polarity, subjectivity) map.

    Lines hold ``word polarity subjectivity``; ``#`` starts a comment.
    Polarity lives in [-1, 1], subjectivity in [0, 1].
    """
    if path is None:
        return _bundled_lexicon()
    return _parse_lexicon(Path(path).read_text(encoding="utf-8"))


def load_embeddings(path: str | Path) -> dict[str, np.ndarray]:
    """Word vectors from a text file of ``word v1 v2 ... vd`` lines.

    All vectors must share one dimension and be non-zero.  A small
    bundled vocabulary ships as ``culturesim/data/mini_embeddings.txt``
    for tests and demos.
    """
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, *values = line.split()
        vec = np.array([float(v) for v in values])
        if dim is None:
            dim = vec.size
        if vec.size != dim or vec.size == 0:
            raise ValueError(f"embedding for {word!r} has {vec.size} dims, expected {dim}")
        if not np.linalg.norm(vec) > 0:
            raise ValueError(f"embedding for {word!r} is a zero vector")
        vectors[word.lower()] = vec
    if not vectors:
        raise ValueError(f"no embeddings found in {path}")
    return vectors


def bundled_embeddings_path() -> Path:
    """Filesystem path of the bundled demo embedding file."""
    return Path(str(resources.files("culturesim").joinpath("data").joinpath("mini_embeddings.txt")))


# ---------------------------------------------------------------------------
# TF-IDF vector space and similarity


@dataclass(frozen=True, eq=False)
class VectorSpace:
    """A TF-IDF space fitted on one corpus.

    ``terms`` is the sorted vocabulary; ``idf[i]`` is the smoothed inverse
    document frequency ``ln((1 + n_docs) / (1 + df)) + 1`` of term ``i``.
    """

    terms: tuple[str, ...]
    index: dict[str, int]
    idf: np.ndarray
    document_frequency: tuple[int, ...]
    n_documents: int


def fit_vector_space(corpus: Sequence[str]) -> VectorSpace:
    """Fit vocabulary and idf weights on ``corpus``.

    Raises:
        EmptyCorpus: if the corpus holds no documents at all.  Documents
            without tokens are allowed and simply become zero vectors.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot fit a vector space on zero documents")
    document_frequency: Counter[str] = Counter()
    for text in corpus:
        document_frequency.update(set(tokenize(text)))
    terms = tuple(sorted(document_frequency))
    n_docs = len(corpus)
    df = np.array([document_frequency[t] for t in terms], dtype=float)
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0 if terms else np.zeros(0)
    return VectorSpace(
        terms=terms,
        index={t: i for i, t in enumerate(terms)},
        idf=idf,
        document_frequency=tuple(int(d) for d in df),
        n_documents=n_docs,
    )


def vectorize(space: VectorSpace, text: str) -> np.ndarray:
    """L2-normalized TF-IDF vector of ``text`` in ``space``.

    Out-of-vocabulary tokens are ignored; a text with no in-vocabulary
    tokens maps to the zero vector.
    """
    vector = np.zeros(len(space.terms))
    counts = Counter(t for t in tokenize(text) if t in space.index)
    for term, count in counts.items():
        i = space.index[term]
        vector[i] = count * space.idf[i]
    norm = np.linalg.norm(vector)
    if norm > 0:
        vector /= norm
    return vector


def similarity_matrix(space: VectorSpace, texts: Sequence[str]) -> np.ndarray:
    """Pairwise cosine similarity of ``texts`` under ``space``.

    The result is symmetric with entries in [0, 1] (TF-IDF weights are
    non-negative), and has 1.0 on the diagonal except for texts that map
    to the zero vector, whose rows are all zero.
    """
    n = len(texts)
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    for r, text in enumerate(texts):
        counts = Counter(t for t in tokenize(text) if t in space.index)
        for term, count in counts.items():
            c = space.index[term]
            rows.append(r)
            cols.append(c)
            data.append(count * space.idf[c])
    weights = sparse.csr_matrix(
        (data, (rows, cols)), shape=(n, len(space.terms))
    )
    norms = np.sqrt(np.asarray(weights.multiply(weights).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    normalized = sparse.diags(scale) @ weights
    matrix = (normalized @ normalized.T).toarray()
    matrix = np.clip((matrix + matrix.T) / 2.0, 0.0, 1.0)
    for i in range(n):
        matrix[i, i] = 1.0 if norms[i] > 0 else 0.0
    return matrix


# ---------------------------------------------------------------------------
# homogenization metrics on a story-similarity matrix
#
# Stories are laid out generation-major: row a + n_agents * g is agent a's
# story of generation g, matching their story_index.


def _n_generations(matrix: np.ndarray, n_agents: int) -> int:
    n = len(matrix)
    if n_agents < 1:
        raise ValueError("n_agents must be positive")
    if n % n_agents:
        raise ValueError(f"{n} stories do not tile into generations of {n_agents}")
    return n // n_agents


def _check_generation(generation: int, n_generations: int) -> None:
    if not 0 <= generation < n_generations:
        raise GenerationOutOfRange(
            f"generation {generation} outside [0, {n_generations})"
        )


def within_generation_similarity(
    matrix: np.ndarray, n_agents: int, generation: int
) -> float | None:
    """Mean similarity over unordered agent pairs of one generation.

    Undefined (``None``) for single-agent populations, where a generation
    holds no pair of distinct stories.
    """
    matrix = np.asarray(matrix, dtype=float)
    _check_generation(generation, _n_generations(matrix, n_agents))
    if n_agents < 2:
        return None
    base = generation * n_agents
    block = matrix[base : base + n_agents, base : base + n_agents]
    iu = np.triu_indices(n_agents, k=1)
    return float(block[iu].mean())


def successive_similarity(
    matrix: np.ndarray, n_agents: int, generation: int
) -> float:
    """Mean similarity between generation ``g`` and generation ``g - 1``,
    over all agent pairs (including an agent with itself)."""
    matrix = np.asarray(matrix, dtype=float)
    _check_generation(generation, _n_generations(matrix, n_agents))
    if generation == 0:
        raise GenerationOutOfRange("generation 0 has no previous generation")
    lo, hi = (generation - 1) * n_agents, generation * n_agents
    block = matrix[hi : hi + n_agents, lo:hi]
    return float(block.mean())


def first_generation_similarity(
    matrix: np.ndarray, n_agents: int, generation: int
) -> float | None:
    """Mean similarity between generation ``g`` and generation 0.

    At ``g = 0`` the self-pairs are excluded, which makes the value equal
    to the within-generation similarity there (and undefined for a single
    agent).
    """
    matrix = np.asarray(matrix, dtype=float)
    _check_generation(generation, _n_generations(matrix, n_agents))
    base = generation * n_agents
    block = matrix[base : base + n_agents, 0:n_agents]
    if generation == 0:
        if n_agents < 2:
            return None
        off = block[~np.eye(n_agents, dtype=bool)]
        return float(off.mean())
    return float(block.mean())


# ---------------------------------------------------------------------------
# keywords and word chains


def extract_keywords(
    text: str, k: int = 10, stopwords: Iterable[str] | None = None
) -> list[tuple[str, int]]:
    """Top ``k`` non-stopword tokens of ``text`` with their counts.

    Tokens containing underscores are dropped (keywords are meant to be
    readable words).  Ranking is by count descending, ties broken
    alphabetically.
    """
    if k < 1:
        raise ValueError("k must be positive")
    stop = _bundled_stopwords() if stopwords is None else frozenset(stopwords)
    counts = Counter(
        t for t in tokenize(text) if t not in stop and t.isalnum()
    )
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


@dataclass(frozen=True)
class WordChain:
    """Where one keyword lives on the generation axis.

    ``generations`` lists every generation whose keyword set contains the
    word; ``links`` joins consecutive generations, so an unbroken chain of
    links is a motif that survived without interruption.
    """

    word: str
    generations: tuple[int, ...]
    links: tuple[tuple[int, int], ...]


def word_chains(
    words_per_generation: Sequence[Iterable[str]],
) -> dict[str, WordChain]:
    """Chain structure of keywords across generations.

    ``words_per_generation[g]`` is the collection of keywords attributed
    to generation ``g`` (typically the union over its stories).
    """
    membership: dict[str, set[int]] = defaultdict(set)
    for g, words in enumerate(words_per_generation):
        for word in words:
            membership[word].add(g)
    chains: dict[str, WordChain] = {}
    for word in sorted(membership):
        gens = tuple(sorted(membership[word]))
        links = tuple(
            (g, g + 1) for g in gens if g + 1 in membership[word]
        )
        chains[word] = WordChain(word=word, generations=gens, links=links)
    return chains


# ---------------------------------------------------------------------------
# creativity and sentiment


def creativity(
    text: str,
    embeddings: Mapping[str, np.ndarray],
    stopwords: Iterable[str] | None = None,
) -> float | None:
    """Mean pairwise cosine distance between the distinct words of ``text``.

    Words are deduplicated, stopwords removed, and only words present in
    ``embeddings`` participate.  Higher values mean the story roams over
    semantically distant vocabulary.  ``None`` when fewer than two words
    match the embedding vocabulary.
    """
    if not embeddings:
        raise MissingEmbeddings("creativity needs a non-empty embedding vocabulary")
    stop = _bundled_stopwords() if stopwords is None else frozenset(stopwords)
    words = sorted(
        {t for t in tokenize(text) if t not in stop and t in embeddings}
    )
    if len(words) < 2:
        return None
    vectors = [np.asarray(embeddings[w], dtype=float) for w in words]
    norms = [float(np.linalg.norm(v)) for v in vectors]
    distances: list[float] = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            cos = float(vectors[i] @ vectors[j]) / (norms[i] * norms[j])
            distances.append(1.0 - cos)
    return float(np.mean(distances))


def sentiment(
    text: str, lexicon: Mapping[str, tuple[float, float]] | None = None
) -> tuple[float, float]:
    """(polarity, subjectivity) of ``text``.

    Both values are means over lexicon-matched token *occurrences*, so a
    repeated word counts every time.  A text with no matches scores
    exactly ``(0.0, 0.0)``.
    """
    lex = _bundled_lexicon() if lexicon is None else lexicon
    matched = [lex[t] for t in tokenize(text) if t in lex]
    if not matched:
        return (0.0, 0.0)
    polarity = math.fsum(m[0] for m in matched) / len(matched)
    subjectivity = math.fsum(m[1] for m in matched) / len(matched)
    return (polarity, subjectivity)


# ---------------------------------------------------------------------------
# per-generation metric series and multi-seed aggregation

SIMILARITY_METRICS = (
    "within_generation_similarity",
    "successive_similarity",
    "first_generation_similarity",
)


def metric_table(
    texts: Sequence[str],
    n_agents: int,
    matrix: np.ndarray | None = None,
    *,
    lexicon: Mapping[str, tuple[float, float]] | None = None,
    stopwords: Iterable[str] | None = None,
    embeddings: Mapping[str, np.ndarray] | None = None,
) -> dict[str, list[float | None]]:
    """Per-generation series of every reported metric for one seed.

    ``texts`` must be ordered by story index.  The similarity matrix is
    computed on the fly when not supplied.  The creativity series is only
    included when ``embeddings`` are given.
    """
    if matrix is None:
        matrix = similarity_matrix(fit_vector_space(texts), texts)
    n_generations = _n_generations(np.asarray(matrix), n_agents)
    if n_generations * n_agents != len(texts):
        raise ValueError("matrix size does not match the number of texts")

    table: dict[str, list[float | None]] = {
        "within_generation_similarity": [
            within_generation_similarity(matrix, n_agents, g)
            for g in range(n_generations)
        ],
        "successive_similarity": [None]
        + [
            successive_similarity(matrix, n_agents, g)
            for g in range(1, n_generations)
        ],
        "first_generation_similarity": [
            first_generation_similarity(matrix, n_agents, g)
            for g in range(n_generations)
        ],
    }

    by_generation = [
        texts[g * n_agents : (g + 1) * n_agents] for g in range(n_generations)
    ]
    scores = [[sentiment(t, lexicon) for t in gen] for gen in by_generation]
    table["positivity"] = [
        float(np.mean([s[0] for s in gen])) for gen in scores
    ]
    table["subjectivity"] = [
        float(np.mean([s[1] for s in gen])) for gen in scores
    ]

    if embeddings is not None:
        series: list[float | None] = []
        for gen in by_generation:
            vals = [
                c
                for t in gen
                if (c := creativity(t, embeddings, stopwords)) is not None
            ]
            series.append(float(np.mean(vals)) if vals else None)
        table["creativity"] = series
    return table


def aggregate_series(
    series_by_seed: Sequence[Sequence[float | None]],
) -> dict[str, list[float | None]]:
    """Mean and population std per generation across seeds.

    Missing values (``None``) are skipped; a generation with no value in
    any seed aggregates to ``None``.  A single seed yields its own series
    as the mean with a std of 0.
    """
    if not series_by_seed:
        return {"mean": [], "std": []}
    length = max(len(s) for s in series_by_seed)
    means: list[float | None] = []
    stds: list[float | None] = []
    for g in range(length):
        values = [
            s[g] for s in series_by_seed if g < len(s) and s[g] is not None
        ]
        if values:
            means.append(float(np.mean(values)))
            stds.append(float(np.std(values)))
        else:
            means.append(None)
            stds.append(None)
    return {"mean": means, "std": stds}
