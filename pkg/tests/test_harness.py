import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from atypes import harness
from atypes.harness import (
    AlgoPlan,
    Experiment,
    TaskPlan,
    TrialRecord,
    claim_search,
    gen_config_for,
    parse_experiment,
    read_csv,
    records_to_csv,
    run_experiment,
    run_trial,
    summarize,
    t_confidence,
    trial_seed,
    write_csv,
)

from oracle import ref_t_half_width

CONFIG = """
[experiment]
seed = 5
trials = 2
max_attempts = 4000

[task.identity]
n = 1-2

[algo.genetic]
population_size = 20

[algo.no_crossover]
algorithm = genetic
crossovers_per_gen = 0
population_size = 20
"""


def _window(cfg):
    return (cfg.size_lo, cfg.size_hi, cfg.input_dim, cfg.output_dim)


def test_gen_config_for():
    assert _window(gen_config_for("identity", 3)) == (9, 12, 3, 3)
    assert _window(gen_config_for("carry", 4)) == (9, 11, 1, 4)
    assert _window(gen_config_for("multiplexer", 3)) == (13, 17, 5, 1)
    with pytest.raises(ValueError):
        gen_config_for("multiplexer", 6)
    with pytest.raises(ValueError):
        gen_config_for("parity", 2)


def test_parse_experiment():
    exp = parse_experiment(CONFIG)
    assert exp.seed == 5 and exp.trials == 2 and exp.max_attempts == 4000
    assert exp.tasks == (TaskPlan("identity", (1, 2)),)
    assert exp.algorithms[1] == AlgoPlan("no_crossover", "genetic", 20, 0, 1)


@pytest.mark.parametrize(
    "text",
    [
        "[task.identity]\nn = 1\n",
        "[algo.genetic]\n",
        CONFIG + "\n[bogus]\nx = 1\n",
        CONFIG.replace("trials = 2", "trials = 2\ncolour = red"),
        CONFIG.replace("n = 1-2", "n = 3-1"),
        CONFIG.replace("[algo.genetic]", "[algo.annealing]"),
        CONFIG.replace("trials = 2", "trials = two"),
        "not an ini file",
    ],
)
def test_parse_experiment_errors(text):
    with pytest.raises(ValueError):
        parse_experiment(text)


def test_trial_seed_is_stable_and_distinct():
    seeds = {trial_seed(0, t, n, k) for t in ("identity", "carry") for n in (1, 2) for k in range(10)}
    assert len(seeds) == 40
    assert trial_seed(0, "identity", 3, 7) == trial_seed(0, "identity", 3, 7)
    assert 0 <= trial_seed(1, "carry", 4, 0) < 2**63


def test_experiment_csv_is_deterministic_and_paired():
    exp = parse_experiment(CONFIG)
    a = records_to_csv(run_experiment(exp, workers=1))
    b = records_to_csv(run_experiment(exp, workers=2))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == ",".join(harness.CSV_HEADER)
    assert len(lines) == 1 + 2 * 2 * 2
    recs = run_experiment(exp, workers=1)
    by_cell = {}
    for r in recs:
        by_cell.setdefault((r.n, r.trial), set()).add(r.seed)
        assert r.wall_ms is None
    assert all(len(s) == 1 for s in by_cell.values())


def test_crossover_free_genetic_matches_mutation_only():
    a, _ = run_trial("identity", 2, AlgoPlan("x", "genetic", 20, 0, 1), 77, 3000)
    b, _ = run_trial("identity", 2, AlgoPlan("x", "mutation_only", 20, 1, 1), 77, 3000)
    assert a == b


def test_bad_trial_configuration_is_recorded():
    rec, result = run_trial("multiplexer", 9, AlgoPlan("g", "genetic"), 1, 10)
    assert result is None and not rec.solved and rec.attempts == 0 and rec.note


def test_csv_round_trip(tmp_path):
    recs = [
        TrialRecord("identity", 3, "genetic", 0, 12, 400, True, 10, 2),
        TrialRecord("carry", 4, "blind", 1, 13, 1000, False, wall_ms=55),
    ]
    write_csv(recs, tmp_path / "r.csv")
    assert read_csv(tmp_path / "r.csv") == recs
    (tmp_path / "bad.csv").write_text("a,b\n")
    with pytest.raises(ValueError):
        read_csv(tmp_path / "bad.csv")


def test_t_confidence_values():
    assert t_confidence([1, 2, 3]) == pytest.approx((2.0, 1.6859), abs=1e-4)
    assert t_confidence([4, 4, 4]) == (4.0, 0.0)
    assert t_confidence([1, 5], 0.0) == (3.0, 0.0)
    with pytest.raises(ValueError):
        t_confidence([1])
    with pytest.raises(ValueError):
        t_confidence([1, 2], 1.0)


@given(st.lists(st.floats(0, 1e6), min_size=2, max_size=40), st.sampled_from([0.5, 0.9, 0.95, 0.99]))
def test_t_confidence_matches_oracle(xs, level):
    mean, hw = t_confidence(xs, level)
    rmean, rhw = ref_t_half_width(xs, level)
    assert mean == pytest.approx(rmean, rel=1e-9, abs=1e-9)
    assert hw == pytest.approx(rhw, rel=1e-6, abs=1e-6)


def test_summarize_groups():
    recs = [
        TrialRecord("identity", 3, "genetic", k, k, a, True, 10, 2) for k, a in enumerate((1, 2, 3))
    ] + [TrialRecord("identity", 3, "blind", 0, 0, 50, False)]
    stats = summarize(recs)
    assert [s.algorithm for s in stats] == ["blind", "genetic"]
    assert stats[0].half_width is None and stats[0].line().endswith(",50.0,")
    assert stats[1].mean == 2.0 and stats[1].solved == 3


def test_claim_search_small():
    s = claim_search("odd_delay_identity", 0, np.random.default_rng(0))
    assert (s.attempts, s.solutions, s.rate) == (0, 0, 0.0)
    s = claim_search("odd_delay_identity", 3000, np.random.default_rng(0))
    assert s.odd_delay == 0
    assert s.solutions == s.even_delay > 0
    for ex in s.examples:
        assert ex.delay % 2 == 0
    with pytest.raises(ValueError):
        claim_search("parity", 1, np.random.default_rng(0))


def test_worker_count(monkeypatch):
    monkeypatch.setenv("ATYPE_THREADS", "1")
    assert harness.worker_count(10) == 1
    monkeypatch.setenv("ATYPE_THREADS", "zero")
    with pytest.raises(ValueError):
        harness.worker_count(10)
    monkeypatch.delenv("ATYPE_THREADS")
    assert harness.worker_count(1) == 1


def test_experiment_validation():
    with pytest.raises(ValueError):
        Experiment((), (AlgoPlan("g", "genetic"),))
    with pytest.raises(ValueError):
        Experiment((TaskPlan("identity", (1,)),), (AlgoPlan("g", "genetic"),), trials=0)
