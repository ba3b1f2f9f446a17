import dataclasses

import numpy as np
import pytest

from atypes.evolve import SearchConfig, search, search_rng, training_rng
from atypes.graph import GenConfig
from atypes.tasks import carry, identity, training_set, verify_exact


def _cfg(algorithm, **kw):
    base = dict(
        algorithm=algorithm,
        concept=identity(1),
        gen_config=GenConfig(3, 4, 1, 1),
        max_attempts=20_000,
        seed=3,
        population_size=20,
    )
    base.update(kw)
    return SearchConfig(**base)


@pytest.mark.parametrize("algorithm", ["blind", "mutation_only", "genetic", "headless_chicken"])
def test_solves_one_identity(algorithm):
    res = search(_cfg(algorithm))
    assert res.solved
    assert 1 <= res.attempts <= 20_000
    assert verify_exact(res.solution, identity(1), np.random.default_rng(0))


def test_search_is_deterministic():
    a = search(_cfg("genetic", concept=identity(2), gen_config=GenConfig(6, 8, 2, 2), seed=9))
    b = search(_cfg("genetic", concept=identity(2), gen_config=GenConfig(6, 8, 2, 2), seed=9))
    assert (a.solved, a.attempts, a.best_fitness) == (b.solved, b.attempts, b.best_fitness)


def test_attempt_cap_equal_to_population():
    cfg = _cfg("genetic", concept=carry(3), gen_config=GenConfig(7, 9, 1, 3), max_attempts=20, seed=1)
    res = search(cfg)
    assert res.attempts == 20 or res.solved
    if not res.solved:
        assert res.children == 0 and res.mutants == 0


def test_attempt_accounting():
    cfg = _cfg("genetic", concept=carry(3), gen_config=GenConfig(7, 9, 1, 3), max_attempts=300, seed=2)
    res = search(cfg)
    if not res.solved:
        assert res.attempts == 300
        assert res.attempts == cfg.population_size + res.children + res.mutants
        assert 0 < res.best_fitness <= 1


def test_zero_crossovers_degenerates_to_mutation_only():
    kw = dict(concept=identity(2), gen_config=GenConfig(6, 8, 2, 2), max_attempts=3000)
    for seed in range(3):
        a = search(_cfg("genetic", crossovers_per_gen=0, seed=seed, **kw))
        b = search(_cfg("mutation_only", seed=seed, **kw))
        assert (a.solved, a.attempts, a.best_fitness) == (b.solved, b.attempts, b.best_fitness)
        if a.solved:
            assert a.solution == b.solution


def test_training_stream_shared_across_algorithms():
    a = training_set(identity(8), training_rng(42))
    b = training_set(identity(8), training_rng(42))
    assert np.array_equal(a.inputs, b.inputs)
    assert search_rng(42).random() != training_rng(42).random()


def test_config_errors():
    with pytest.raises(ValueError):
        _cfg("annealing")
    with pytest.raises(ValueError):
        _cfg("genetic", population_size=1)
    with pytest.raises(ValueError):
        _cfg("genetic", crossovers_per_gen=0, mutations_per_gen=0)
    with pytest.raises(ValueError):
        _cfg("genetic", subgraph_cap=0.0)
    with pytest.raises(ValueError):
        _cfg("blind", max_attempts=0)


def test_default_penalty_bound_is_size_hi():
    cfg = _cfg("blind")
    assert cfg.fitness_config.penalty_bound == 4
    assert dataclasses.replace(cfg, seed=4).fitness_config.penalty_bound == 4
