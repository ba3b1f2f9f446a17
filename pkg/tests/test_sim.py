import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atypes import figures
from atypes.graph import AType, GenConfig, build_graph, random_atype
from atypes.sim import (
    as_sequence,
    draw_probes,
    estimate_delay_range,
    is_clampable,
    matching_delays,
    run,
    run_clamped,
    simulate,
    simulate_batch,
    wiring,
)

from conftest import graphs
from oracle import ref_first_difference, ref_run, ref_simulate

I, N, D = "INPUT", "NAND", "DELAY"


def test_staggered_nand_sequence():
    out = run(figures.staggered_nand(), [[1, 1], [0, 1], [1, 0]], 3)
    assert out.tolist() == [[1], [1], [0]]


def test_xor_sequence():
    out = run(figures.xor_gate(), [[1, 1], [1, 0], [0, 0]], 3)
    assert out.tolist() == [[0], [1], [0]]


def test_zero_out_len():
    assert run(figures.and_gate(), [[1, 1]], 0).shape == (0, 1)
    assert run_clamped(figures.and_gate(), [1, 1], 0).shape == (0, 1)


def test_and_gate_clamped():
    a = figures.and_gate()
    assert run_clamped(a, [1, 1], 5).ravel().tolist() == [1] * 5
    assert run_clamped(a, [0, 0], 5).ravel().tolist() == [0] * 5
    for x in ([0, 0], [0, 1], [1, 0], [1, 1]):
        assert is_clampable(a, x, 1000)


def test_oscillator_is_not_clampable():
    # 1 and 2 form a nand 2-cycle driven by nothing but each other
    g = build_graph([I, N, N, N], [[], [2, 2], [1, 1], [1, 0]], [0], [3])
    a = AType(g, 0)
    assert not is_clampable(a, [1], 50)
    assert is_clampable(a, [1], 1)


def test_clampable_needs_positive_horizon():
    with pytest.raises(ValueError):
        is_clampable(figures.and_gate(), [1, 1], 0)


def test_dimension_errors():
    with pytest.raises(ValueError):
        run(figures.and_gate(), [[1, 1, 1]], 3)
    with pytest.raises(ValueError):
        run(figures.and_gate(), np.zeros((0, 2)), 3)
    with pytest.raises(ValueError):
        as_sequence([[2, 0]])


def test_shunting_holds_last_vector():
    a = figures.identity(1)
    assert run(a, [[0], [1]], 6).ravel().tolist() == [0, 1, 1, 1, 1, 1]


def test_delay_range_of_one_identity():
    g = figures.identity(1).graph
    for seed in range(20):
        assert estimate_delay_range(g, np.random.default_rng(seed)) == (0, 3)


def test_constant_output_gives_zero_minimum():
    # output fed by a nand loop never sees the input
    g = build_graph([I, N, N, N], [[], [0, 0], [2, 2], [2, 2]], [0], [3])
    assert estimate_delay_range(g, np.random.default_rng(0)) == (0, 4)


def test_probes_first_vectors_differ(rng):
    for _ in range(300):
        p = draw_probes(rng, 5, 1)
        assert p.shape == (2, 5, 1) and p[0, 0, 0] != p[1, 0, 0]


def test_delay_range_against_oracle(rng):
    cfg = GenConfig(5, 14, 2, 2)
    for _ in range(300):
        g = random_atype(cfg, rng)
        state = rng.bit_generator.state
        lo, hi = estimate_delay_range(g, rng)
        # replay the same draw for the oracle
        rng2 = np.random.default_rng()
        rng2.bit_generator.state = state
        probes = draw_probes(rng2, 2 * g.size + 16, g.input_dim)
        q = ref_first_difference(g, probes[0].tolist(), probes[1].tolist())
        assert hi == g.size
        assert lo == min(max(0, q - 4), g.size)


def test_random_networks_match_oracle():
    rng = np.random.default_rng(7)
    cfg = GenConfig(5, 15, 2, 2)
    for _ in range(1000):
        g = random_atype(cfg, rng)
        xs = rng.integers(0, 2, size=(int(rng.integers(1, 8)), 2), dtype=np.uint8)
        delay = int(rng.integers(0, 6))
        got = run(AType(g, delay), xs, 6).tolist()
        assert [list(v) for v in ref_run(g, delay, xs.tolist(), 6)] == got


def test_batch_matches_single(rng):
    for _ in range(100):
        g = random_atype(GenConfig(5, 12, 2, 1), rng)
        xs = rng.integers(0, 2, size=(5, 4, 2), dtype=np.uint8)
        batch = simulate_batch(g, xs, 9)
        for e in range(5):
            assert np.array_equal(batch[e], simulate(g, xs[e], 9)[0])


def test_composability_and_coherence_thousand_networks():
    rng = np.random.default_rng(31)
    cfg = GenConfig(5, 20, 2, 2, 0.3)
    for _ in range(1000):
        g = random_atype(cfg, rng)
        xs = rng.integers(0, 2, size=(30, 2), dtype=np.uint8)
        t1 = int(rng.integers(0, 15))
        full, end = simulate(g, xs, 30)
        first, mid = simulate(g, xs, t1)
        rest, end2 = simulate(g, xs[t1:], 30 - t1, state=mid)
        assert np.array_equal(np.vstack([first, rest]), full)
        assert np.array_equal(end, end2)
        x = xs[0]
        delay = int(rng.integers(0, 5))
        assert np.array_equal(run_clamped(AType(g, delay), x, 20), run(AType(g, delay), [x], 20))


def test_locality_of_unreachable_nodes(rng):
    # a junk node nobody reads may hold any state without changing outputs
    cfg = GenConfig(5, 14, 2, 2)
    for _ in range(200):
        g = random_atype(cfg, rng)
        junk = g.size
        kinds = list(g.kinds) + [g.kinds[g.internal_nodes[0]]]
        sources = [list(s) for s in g.sources] + [[0, 0] if kinds[-1].value == N else [0]]
        # renumber so outputs stay last is not needed; order lists carry ids
        g2 = build_graph(kinds, sources, g.input_order, g.output_order)
        xs = rng.integers(0, 2, size=(10, 2), dtype=np.uint8)
        base, _ = simulate(g2, xs, 12)
        st0 = np.zeros(g2.size, np.uint8)
        st0[junk] = 1
        for j, node in enumerate(g2.input_order):
            st0[node] = xs[0, j]
        flipped, _ = simulate(g2, xs, 12, state=st0)
        assert np.array_equal(base, flipped)


def test_matching_delays_against_run(rng):
    cfg = GenConfig(3, 9, 1, 1, 0.3)
    for _ in range(1500):
        g = random_atype(cfg, rng)
        xs = rng.integers(0, 2, size=(int(rng.integers(1, 7)), 1), dtype=np.uint8)
        want = [d for d in range(g.size + 1) if np.array_equal(run(AType(g, d), xs, len(xs)), xs)]
        assert matching_delays(g, xs, xs, 0, g.size) == want


def test_matching_delays_golden():
    x = np.random.default_rng(3).integers(0, 2, size=(500, 2), dtype=np.uint8)
    a = figures.xor_gate()
    assert a.delay in matching_delays(a.graph, x, x[:, :1] ^ x[:, 1:], 0, a.size)
    with pytest.raises(ValueError):
        matching_delays(a.graph, x, x[:, :1], 3, 2)


@given(graphs(max_dim=2, max_extra=8), st.integers(0, 2**32 - 1), st.integers(0, 6), st.integers(0, 8))
def test_run_matches_oracle_property(g, seed, delay, out_len):
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, 2, size=(int(rng.integers(1, 6)), g.input_dim), dtype=np.uint8)
    got = run(AType(g, delay), xs, out_len)
    assert got.shape == (out_len, g.output_dim)
    assert [list(v) for v in ref_run(g, delay, xs.tolist(), out_len)] == got.tolist()


@given(graphs(max_dim=2, max_extra=6), st.integers(0, 2**32 - 1))
def test_determinism(g, seed):
    xs = np.random.default_rng(seed).integers(0, 2, size=(8, g.input_dim), dtype=np.uint8)
    assert np.array_equal(simulate(g, xs, 10)[0], simulate(g, xs, 10)[0])
    assert estimate_delay_range(g, np.random.default_rng(seed)) == estimate_delay_range(g, np.random.default_rng(seed))


def test_wiring_is_cached():
    g = figures.and_gate().graph
    assert wiring(g) is wiring(g)
