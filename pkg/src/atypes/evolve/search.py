"""Blind, mutation-only, genetic and headless-chicken searches."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..graph import AType, GenConfig, random_atype
from ..tasks import ConceptFunction, TrainingSet, training_set, verify_exact
from .fitness import CandidateSolution, FitnessConfig, evaluate_candidate
from .operators import CrossoverError, crossover, mutate
from .selection import SelectionConfig, draw_index

__all__ = ["ALGORITHMS", "SearchConfig", "SearchResult", "search", "training_rng", "search_rng"]

log = logging.getLogger(__name__)

ALGORITHMS = ("blind", "mutation_only", "genetic", "headless_chicken")
CROSSOVER_RETRIES = 10


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str
    concept: ConceptFunction
    gen_config: GenConfig
    max_attempts: int
    seed: int = 0
    population_size: int = 100
    crossovers_per_gen: int = 1
    mutations_per_gen: int = 1
    fitness_config: FitnessConfig | None = None
    selection_config: SelectionConfig = field(default_factory=SelectionConfig)
    subgraph_cap: float = 0.8

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.algorithm in ("genetic", "headless_chicken") and self.population_size < 2:
            raise ValueError("population_size must be >= 2 for crossover searches")
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.crossovers_per_gen < 0 or self.mutations_per_gen < 0:
            raise ValueError("operator counts must be >= 0")
        if self.algorithm != "blind" and self.crossovers_per_gen + self.mutations_per_gen == 0:
            raise ValueError("a generation must apply at least one operator")
        if not 0 < self.subgraph_cap <= 1:
            raise ValueError("subgraph_cap must lie in (0, 1]")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.fitness_config is None:
            object.__setattr__(self, "fitness_config", FitnessConfig(max(1, self.gen_config.size_hi)))


@dataclass
class SearchResult:
    solved: bool
    attempts: int
    solution: AType | None
    best_fitness: float
    wall_time: float
    best: CandidateSolution | None = None
    children: int = 0
    mutants: int = 0


class _Search:
    def __init__(self, cfg: SearchConfig, training: TrainingSet, rng: np.random.Generator):
        self.cfg = cfg
        self.training = training
        self.rng = rng
        self.attempts = 0
        self.children = 0
        self.mutants = 0
        self.solution: AType | None = None
        # best_fitness of each population member, kept in step with the list
        self.scores: list[float] = []

    @property
    def exhausted(self) -> bool:
        return self.solution is not None or self.attempts >= self.cfg.max_attempts

    def construct(self, graph) -> CandidateSolution:
        """Evaluate a freshly built graph, counting it as one attempt."""
        cand = evaluate_candidate(graph, self.training, self.cfg.fitness_config, self.rng)
        self.attempts += 1
        if cand.best_fitness == 0.0:
            self.check_exact(cand)
        return cand

    def check_exact(self, cand: CandidateSolution) -> None:
        cand.exactness_checked = True
        for delay in cand.zero_delays():
            atype = AType(cand.graph, delay)
            if verify_exact(atype, self.cfg.concept, self.rng):
                cand.best_delay = delay
                self.solution = atype
                return
        log.debug("fitness-0 candidate of size %d failed the exactness check", cand.size)

    def random_graph(self, gen: GenConfig | None = None):
        return random_atype(gen or self.cfg.gen_config, self.rng)

    def fittest(self, population: list[CandidateSolution]) -> CandidateSolution:
        scores = np.array([c.best_fitness for c in population])
        ties = np.flatnonzero(scores == scores.min())
        return population[int(ties[self.rng.integers(len(ties))])]

    # -- algorithms -------------------------------------------------------

    def blind(self) -> CandidateSolution | None:
        best: CandidateSolution | None = None
        n_best = 0
        while not self.exhausted:
            cand = self.construct(self.random_graph())
            if self.solution is not None:
                return cand
            # reservoir tie-breaking keeps the returned best uniform over ties
            if best is None or cand.best_fitness < best.best_fitness:
                best, n_best = cand, 1
            elif cand.best_fitness == best.best_fitness:
                n_best += 1
                if self.rng.integers(n_best) == 0:
                    best = cand
        return best

    def insert(self, population: list[CandidateSolution], cand: CandidateSolution) -> None:
        population.append(cand)
        self.scores.append(cand.best_fitness)
        victim = draw_index(self.scores, self.cfg.selection_config.kappa, +1.0, self.rng)
        del population[victim]
        del self.scores[victim]

    def parent(self, population: list[CandidateSolution]):
        return population[draw_index(self.scores, self.cfg.selection_config.kappa, -1.0, self.rng)].graph

    def make_child(self, population: list[CandidateSolution]) -> CandidateSolution:
        cfg = self.cfg
        mother = self.parent(population)
        father = self.parent(population)
        if cfg.algorithm == "headless_chicken":
            # one parent, chosen uniformly, is swapped for a random graph of its size
            if self.rng.integers(2) == 0:
                mother = self.random_graph(cfg.gen_config.with_size(mother.size))
            else:
                father = self.random_graph(cfg.gen_config.with_size(father.size))
        for _ in range(CROSSOVER_RETRIES):
            try:
                child = crossover(mother, father, self.rng, cfg.subgraph_cap)
                break
            except CrossoverError:
                continue
        else:
            child = mutate(mother, self.rng, cfg.gen_config.p_delay)
        self.children += 1
        return self.construct(child)

    def make_mutant(self, population: list[CandidateSolution]) -> CandidateSolution:
        parent = population[int(self.rng.integers(len(population)))].graph
        self.mutants += 1
        return self.construct(mutate(parent, self.rng, self.cfg.gen_config.p_delay))

    def evolve(self) -> CandidateSolution | None:
        cfg = self.cfg
        crossovers = 0 if cfg.algorithm == "mutation_only" else cfg.crossovers_per_gen
        population: list[CandidateSolution] = []
        for _ in range(cfg.population_size):
            cand = self.construct(self.random_graph())
            population.append(cand)
            self.scores.append(cand.best_fitness)
            if self.exhausted:
                return cand if self.solution is not None else self.fittest(population)
        while True:
            for _ in range(crossovers):
                cand = self.make_child(population)
                self.insert(population, cand)
                if self.exhausted:
                    return cand if self.solution is not None else self.fittest(population)
            for _ in range(cfg.mutations_per_gen):
                cand = self.make_mutant(population)
                self.insert(population, cand)
                if self.exhausted:
                    return cand if self.solution is not None else self.fittest(population)


def training_rng(seed: int) -> np.random.Generator:
    """Stream that draws the training set for ``seed``; shared by every algorithm."""
    return np.random.default_rng([seed, 0])


def search_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 1])


def search(
    cfg: SearchConfig,
    training: TrainingSet | None = None,
    rng: np.random.Generator | None = None,
) -> SearchResult:
    """Run one search until an exact solution is found or attempts run out.

    Every constructed graph, initial population included, counts as an
    attempt.  A candidate whose training fitness reaches 0 is checked for
    exactness straight away; inexact ones stay in the population.

    Without explicit ``training``/``rng`` both are derived from ``cfg.seed``
    through separate streams, so runs with equal seeds see equal training
    sets whatever the algorithm.
    """
    cfg.gen_config.check()
    if training is None:
        training = training_set(cfg.concept, training_rng(cfg.seed))
    if rng is None:
        rng = search_rng(cfg.seed)
    start = time.perf_counter()
    state = _Search(cfg, training, rng)
    best = state.blind() if cfg.algorithm == "blind" else state.evolve()
    return SearchResult(
        solved=state.solution is not None,
        attempts=state.attempts,
        solution=state.solution,
        best_fitness=best.best_fitness if best is not None else 1.0,
        wall_time=time.perf_counter() - start,
        best=best,
        children=state.children,
        mutants=state.mutants,
    )
