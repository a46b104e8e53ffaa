"""Every analytics primitive on a tiny hand-written corpus.

Nothing here touches a backend: the analytics layer only ever sees plain
strings, so you can point it at any collection of texts ordered by
story index (generation-major, agent-minor).

Run with:  python3 demos/04_analytics_tour.py
"""

import numpy as np

from culturesim import (
    creativity,
    extract_keywords,
    first_generation_similarity,
    fit_vector_space,
    load_embeddings,
    sentiment,
    similarity_matrix,
    successive_similarity,
    tokenize,
    within_generation_similarity,
    word_chains,
)
from culturesim.analytics import bundled_embeddings_path

# two agents, three generations: a drifting two-person folk tale
TEXTS = [
    "The brave knight rode through the dark forest at night.",      # g0, agent 0
    "A happy child sang a bright song by the river.",               # g0, agent 1
    "The knight heard a bright song in the dark forest.",           # g1, agent 0
    "The child met a brave knight by the river at night.",          # g1, agent 1
    "A knight and a child sang in the forest by the river.",        # g2, agent 0
    "The knight and the child sang a bright song together.",        # g2, agent 1
]
N_AGENTS = 2


def main():
    print("tokens of the first text:")
    print(f"  {tokenize(TEXTS[0])}")

    print("\nTF-IDF space fitted on all six stories:")
    space = fit_vector_space(TEXTS)
    print(f"  vocabulary size {len(space.terms)}, e.g. {list(space.terms)[:8]}")

    matrix = similarity_matrix(space, TEXTS)
    print("\npairwise cosine similarity (rows = story index):")
    for row in matrix:
        print("  " + " ".join(f"{v:.2f}" for v in row))

    print("\nhomogenization metrics per generation:")
    for g in range(3):
        within = within_generation_similarity(matrix, N_AGENTS, g)
        first = first_generation_similarity(matrix, N_AGENTS, g)
        successive = (
            successive_similarity(matrix, N_AGENTS, g) if g > 0 else None
        )
        print(f"  g{g}: within={within:.3f}  first={first:.3f}  "
              f"successive={successive if successive is None else f'{successive:.3f}'}")
    print("  (by the end the agents resemble each other more than they "
          "resemble the\n   opening stories: the pair converged on something "
          "new)")

    print("\nkeywords of the last story:")
    print(f"  {extract_keywords(TEXTS[-1], k=5)}")

    per_generation = [
        sorted({w for s in range(g * N_AGENTS, (g + 1) * N_AGENTS)
                for w, _ in extract_keywords(TEXTS[s])})
        for g in range(3)
    ]
    chains = word_chains(per_generation)
    survivors = [w for w, chain in chains.items() if len(chain.generations) == 3]
    print(f"\nwords present in every generation: {survivors}")

    print("\nsentiment (polarity, subjectivity) per story:")
    for i, text in enumerate(TEXTS):
        print(f"  story {i}: {sentiment(text)}")

    embeddings = load_embeddings(bundled_embeddings_path())
    print(f"\ncreativity with the bundled {len(embeddings)}-word demo embeddings")
    print("(mean pairwise cosine distance between a story's distinct words —")
    print(" higher means the story roams more of the embedding space):")
    for i, text in enumerate(TEXTS):
        score = creativity(text, embeddings)
        print(f"  story {i}: {score if score is None else f'{score:.3f}'}")

    identical = {"sun": np.array([1.0, 0.0]), "day": np.array([2.0, 0.0])}
    print(f"\nsanity check — colinear words score {creativity('sun day', identical)}")


if __name__ == "__main__":
    main()
