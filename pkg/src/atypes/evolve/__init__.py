"""Evolutionary search for A-types."""

from .fitness import (
    CandidateSolution,
    FitnessConfig,
    delay_profile,
    evaluate_candidate,
    fitness,
    normalized_hamming,
)
from .operators import (
    CrossoverError,
    boundaries,
    crossover,
    exchange_subgraphs,
    mutate,
    radial_subgraph,
)
from .search import ALGORITHMS, SearchConfig, SearchResult, search, search_rng, training_rng
from .selection import SelectionConfig, draw_index, select_parent, select_victim, selection_weights

__all__ = [
    "ALGORITHMS",
    "CandidateSolution",
    "CrossoverError",
    "FitnessConfig",
    "SearchConfig",
    "SearchResult",
    "SelectionConfig",
    "boundaries",
    "crossover",
    "delay_profile",
    "draw_index",
    "evaluate_candidate",
    "exchange_subgraphs",
    "fitness",
    "mutate",
    "normalized_hamming",
    "radial_subgraph",
    "search",
    "search_rng",
    "select_parent",
    "select_victim",
    "selection_weights",
    "training_rng",
]
