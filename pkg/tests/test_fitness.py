import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atypes import figures
from atypes.evolve.fitness import (
    FitnessConfig,
    delay_profile,
    evaluate_candidate,
    fitness,
    normalized_hamming,
    pack_lanes,
)
from atypes.graph import GenConfig, build_graph, random_atype
from atypes.tasks import carry, identity, multiplexer, training_set

from oracle import ref_fitness


def test_penalty_formula():
    cfg = FitnessConfig(10, 0.5)
    assert cfg.penalise(0.2, 10) == 0.2
    assert cfg.penalise(0.2, 11) == pytest.approx(0.2)  # 0.2 * 0.5 * 2
    assert cfg.penalise(0.2, 13) == pytest.approx(0.4)
    assert cfg.penalise(0.3, 30) == 1.0
    assert cfg.penalise(0.0, 500) == 0.0


def test_config_errors():
    with pytest.raises(ValueError):
        FitnessConfig(0)
    with pytest.raises(ValueError):
        FitnessConfig(5, 0.0)


def test_hamming():
    assert normalized_hamming([[1, 0], [0, 0]], [[1, 1], [1, 0]]) == 0.5
    with pytest.raises(ValueError):
        normalized_hamming([[1]], [[1, 0]])


def test_constant_zero_network_scores_half(rng):
    # output is nand(x, nand(x,x)) = 1 always -> wrong on half the identity bits
    g = build_graph(["INPUT", "NAND", "NAND"], [[], [0, 0], [1, 1]], [0], [2])
    ts = training_set(identity(1), rng)
    const = build_graph(["INPUT", "NAND", "NAND", "NAND"], [[], [0, 0], [1, 0], [2, 2]], [0], [3])
    # 2 = nand(not x, x) = 1, 3 = not 1 = 0
    assert fitness(const, 2, ts, FitnessConfig(10)) == 0.5
    assert fitness(g, 2, ts, FitnessConfig(10)) == 0.0


def test_golden_profiles_hit_zero(rng):
    for atype, concept in [
        (figures.identity(2), identity(2)),
        (figures.multiplexer3(), multiplexer(3)),
        (figures.carry3(), carry(3)),
    ]:
        ts = training_set(concept, rng)
        cfg = FitnessConfig(atype.size)
        prof = delay_profile(atype.graph, 0, atype.size, ts, cfg)
        assert prof[atype.delay] == 0.0


def test_pack_lanes_round_trip(rng):
    arr = rng.integers(0, 2, size=(130, 3, 2), dtype=np.uint8)
    packed = pack_lanes(arr)
    assert packed.shape == (3, 2, 3) and packed.dtype == np.uint64
    for e in (0, 63, 64, 129):
        w, b = divmod(e, 64)
        bits = (packed[:, :, w] >> np.uint64(b)) & np.uint64(1)
        assert np.array_equal(bits.astype(np.uint8), arr[e])


@pytest.mark.parametrize(
    "concept, cfg",
    [
        (identity(4), GenConfig(12, 16, 4, 4)),
        (identity(7), GenConfig(21, 28, 7, 7)),
        (carry(3), GenConfig(7, 9, 1, 3)),
        (multiplexer(3), GenConfig(13, 17, 5, 1)),
    ],
)
def test_packed_profile_matches_both_routes(concept, cfg):
    rng = np.random.default_rng(11)
    ts = training_set(concept, rng)
    fc = FitnessConfig(cfg.size_lo + 1)
    examples = [(e.input.tolist(), e.expected.tolist()) for e in ts.examples]
    for _ in range(25):
        g = random_atype(cfg, rng)
        prof = delay_profile(g, 0, g.size, ts, fc)
        for d in (0, 1, g.size // 2, g.size):
            assert prof[d] == pytest.approx(fitness(g, d, ts, fc), abs=1e-12)
        for d in (0, g.size):
            want = ref_fitness(g, d, examples, fc.penalty_bound, fc.pressure_gradient)
            assert prof[d] == pytest.approx(want, abs=1e-12)


def test_evaluate_candidate_takes_smallest_best_delay(rng):
    ts = training_set(identity(1), rng)
    cand = evaluate_candidate(figures.identity(1).graph, ts, FitnessConfig(3), rng)
    assert cand.best_fitness == 0.0
    assert cand.best_delay == 2
    assert cand.zero_delays() == [2, 3]
    assert cand.per_delay_fitness[2] == 0.0
    assert cand.atype().delay == 2


@given(st.integers(0, 2**32 - 1))
def test_fitness_bounds_and_penalty_monotone(seed):
    rng = np.random.default_rng(seed)
    ts = training_set(identity(2), rng)
    g = random_atype(GenConfig(5, 14, 2, 2, 0.3), rng)
    lo, hi = 0, g.size
    base = delay_profile(g, lo, hi, ts, FitnessConfig(1000))
    assert ((base >= 0) & (base <= 1)).all()
    prev = None
    for bound in range(g.size + 1, 0, -1):  # shrinking bound = growing excess
        prof = delay_profile(g, lo, hi, ts, FitnessConfig(bound))
        assert ((prof >= 0) & (prof <= 1)).all()
        if bound == g.size + 1 or bound == g.size:
            assert np.array_equal(prof, base)
        if prev is not None and bound < g.size:
            assert (prof >= prev - 1e-15).all()
        prev = prof
