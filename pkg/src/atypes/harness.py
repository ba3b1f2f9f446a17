"""Batch experiments, blind-search claim checks, CSV records and t-intervals.

Every trial seed is derived from ``(master seed, task, n, trial)`` only, so
all algorithms at the same cell see the same training set and adding an
algorithm never perturbs the others.
"""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats

from .evolve import ALGORITHMS, FitnessConfig, SearchConfig, SelectionConfig, search
from .graph import AType, GenConfig, GenerationError, random_atype
from .sim import matching_delays
from .tasks import EXACT_SEQUENCE_LENGTH, make_concept

__all__ = [
    "CSV_HEADER",
    "TaskPlan",
    "AlgoPlan",
    "Experiment",
    "TrialRecord",
    "ClaimSummary",
    "gen_config_for",
    "trial_seed",
    "run_trial",
    "run_experiment",
    "write_csv",
    "records_to_csv",
    "read_csv",
    "load_experiment",
    "parse_experiment",
    "claim_search",
    "t_confidence",
    "summarize",
    "worker_count",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("task", "n", "algorithm", "trial", "seed", "attempts", "solved", "solution_size", "solution_delay", "wall_ms")

# smallest sizes found by chaining copies of the 2-multiplexer
MUX_LOWER_BOUND = {2: 7, 3: 13, 4: 18, 5: 24}


def gen_config_for(task: str, n: int, p_delay: float = 0.2) -> GenConfig:
    """Initial-population size window for the benchmark tasks."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if task == "identity":
        return GenConfig(3 * n, 4 * n, n, n, p_delay)
    if task == "multiplexer":
        if n not in MUX_LOWER_BOUND:
            raise ValueError(f"no size table for {n}-multiplexer; give size_lo/size_hi explicitly")
        lo = MUX_LOWER_BOUND[n]
        concept = make_concept(task, n)
        return GenConfig(lo, lo + 4, concept.input_dim, 1, p_delay)
    if task == "carry":
        return GenConfig(3 + 2 * (n - 1), 3 + 2 * n, 1, n, p_delay)
    raise ValueError(f"unknown task {task!r}")


# -- experiment description ------------------------------------------------


@dataclass(frozen=True)
class TaskPlan:
    task: str
    ns: tuple[int, ...]
    size_lo: int | None = None
    size_hi: int | None = None
    max_attempts: int | None = None


@dataclass(frozen=True)
class AlgoPlan:
    """A named algorithm variant; ``name`` is what the CSV shows."""

    name: str
    algorithm: str
    population_size: int = 100
    crossovers_per_gen: int = 1
    mutations_per_gen: int = 1
    max_attempts: int | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class Experiment:
    tasks: tuple[TaskPlan, ...]
    algorithms: tuple[AlgoPlan, ...]
    trials: int = 1
    max_attempts: int = 100_000
    seed: int = 0
    p_delay: float = 0.2
    kappa: float = 8.0
    pressure_gradient: float = 0.5
    subgraph_cap: float = 0.8
    timing: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.tasks or not self.algorithms:
            raise ValueError("an experiment needs at least one task and one algorithm")


@dataclass(frozen=True)
class TrialRecord:
    task: str
    n: int
    algorithm: str
    trial: int
    seed: int
    attempts: int
    solved: bool
    solution_size: int | None = None
    solution_delay: int | None = None
    wall_ms: int | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.solved and (self.solution_size is None or self.solution_size < 1):
            raise ValueError("a solved trial needs a solution size")

    @property
    def key(self) -> tuple:
        return (self.task, self.n, self.algorithm, self.trial)

    def row(self) -> list[str]:
        def opt(v):
            return "" if v is None else str(v)

        return [
            self.task,
            str(self.n),
            self.algorithm,
            str(self.trial),
            str(self.seed),
            str(self.attempts),
            "1" if self.solved else "0",
            opt(self.solution_size),
            opt(self.solution_delay),
            opt(self.wall_ms),
        ]


def trial_seed(master: int, task: str, n: int, trial: int) -> int:
    """Counter-style child seed for one (task, n, trial) cell."""
    ss = np.random.SeedSequence([master, zlib.crc32(task.encode()), n, trial])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


# -- running ---------------------------------------------------------------


@dataclass(frozen=True)
class _Cell:
    task: str
    n: int
    algo: AlgoPlan
    trial: int
    seed: int
    max_attempts: int
    size_lo: int | None
    size_hi: int | None
    p_delay: float
    kappa: float
    pressure_gradient: float
    subgraph_cap: float
    timing: bool


def run_trial(
    task: str,
    n: int,
    algo: AlgoPlan,
    seed: int,
    max_attempts: int,
    *,
    trial: int = 0,
    size_lo: int | None = None,
    size_hi: int | None = None,
    p_delay: float = 0.2,
    kappa: float = 8.0,
    pressure_gradient: float = 0.5,
    subgraph_cap: float = 0.8,
    timing: bool = False,
):
    """Run one search and return ``(record, result)``; ``result`` is None on a bad configuration."""
    try:
        concept = make_concept(task, n)
        if size_lo is not None or size_hi is not None:
            base = gen_config_for(task, n, p_delay) if (size_lo is None or size_hi is None) else None
            gen = GenConfig(
                size_lo if size_lo is not None else base.size_lo,
                size_hi if size_hi is not None else base.size_hi,
                concept.input_dim,
                concept.output_dim,
                p_delay,
            )
        else:
            gen = gen_config_for(task, n, p_delay)
        gen.check()
        cfg = SearchConfig(
            algorithm=algo.algorithm,
            concept=concept,
            gen_config=gen,
            max_attempts=max_attempts,
            seed=seed,
            population_size=algo.population_size,
            crossovers_per_gen=algo.crossovers_per_gen,
            mutations_per_gen=algo.mutations_per_gen,
            fitness_config=FitnessConfig(gen.size_hi, pressure_gradient),
            selection_config=SelectionConfig(kappa),
            subgraph_cap=subgraph_cap,
        )
    except (ValueError, GenerationError) as exc:
        log.warning("%s n=%d %s trial %d: %s", task, n, algo.name, trial, exc)
        return TrialRecord(task, n, algo.name, trial, seed, 0, False, note=str(exc)), None
    result = search(cfg)
    sol = result.solution
    record = TrialRecord(
        task,
        n,
        algo.name,
        trial,
        seed,
        result.attempts,
        result.solved,
        sol.size if sol is not None else None,
        sol.delay if sol is not None else None,
        round(result.wall_time * 1000) if timing else None,
    )
    return record, result


def _run_cell(cell: _Cell) -> TrialRecord:
    record, _ = run_trial(
        cell.task,
        cell.n,
        cell.algo,
        cell.seed,
        cell.max_attempts,
        trial=cell.trial,
        size_lo=cell.size_lo,
        size_hi=cell.size_hi,
        p_delay=cell.p_delay,
        kappa=cell.kappa,
        pressure_gradient=cell.pressure_gradient,
        subgraph_cap=cell.subgraph_cap,
        timing=cell.timing,
    )
    return record


def _cells(exp: Experiment) -> list[_Cell]:
    out = []
    for plan in exp.tasks:
        for n in plan.ns:
            for algo in exp.algorithms:
                cap = algo.max_attempts or plan.max_attempts or exp.max_attempts
                for trial in range(exp.trials):
                    out.append(
                        _Cell(
                            plan.task,
                            n,
                            algo,
                            trial,
                            trial_seed(exp.seed, plan.task, n, trial),
                            cap,
                            plan.size_lo,
                            plan.size_hi,
                            exp.p_delay,
                            exp.kappa,
                            exp.pressure_gradient,
                            exp.subgraph_cap,
                            exp.timing,
                        )
                    )
    return out


def worker_count(jobs: int) -> int:
    """Worker processes for ``jobs`` trials: CPU count, capped by ``ATYPE_THREADS``."""
    workers = os.cpu_count() or 1
    env = os.environ.get("ATYPE_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"ATYPE_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise ValueError("ATYPE_THREADS must be >= 1")
        workers = min(workers, cap)
    return max(1, min(workers, jobs))


def run_experiment(
    exp: Experiment,
    sink: Callable[[TrialRecord], None] | None = None,
    workers: int | None = None,
) -> list[TrialRecord]:
    """Run every (task, n, algorithm, trial) cell and return records sorted by that key.

    ``sink`` sees each record as it completes, in completion order.
    """
    cells = _cells(exp)
    workers = worker_count(len(cells)) if workers is None else max(1, workers)
    records: list[TrialRecord] = []
    if workers == 1:
        for cell in cells:
            rec = _run_cell(cell)
            records.append(rec)
            if sink is not None:
                sink(rec)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, cell) for cell in cells]
            for fut in as_completed(futures):
                rec = fut.result()
                records.append(rec)
                if sink is not None:
                    sink(rec)
    records.sort(key=lambda r: r.key)
    return records


# -- CSV -------------------------------------------------------------------


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def write_csv(records: Iterable[TrialRecord], path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(records_to_csv(records))


def read_csv(path) -> list[TrialRecord]:
    def opt(v: str):
        return int(v) if v != "" else None

    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
            try:
                out.append(
                    TrialRecord(
                        row[0],
                        int(row[1]),
                        row[2],
                        int(row[3]),
                        int(row[4]),
                        int(row[5]),
                        row[6] == "1",
                        opt(row[7]),
                        opt(row[8]),
                        opt(row[9]),
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


# -- config files ------------------------------------------------------------

_EXPERIMENT_KEYS = {
    "seed": int,
    "trials": int,
    "max_attempts": int,
    "p_delay": float,
    "kappa": float,
    "pressure_gradient": float,
    "subgraph_cap": float,
    "timing": "bool",
}
_TASK_KEYS = {"n": "ints", "size_lo": int, "size_hi": int, "max_attempts": int}
_ALGO_KEYS = {
    "algorithm": str,
    "population_size": int,
    "crossovers_per_gen": int,
    "mutations_per_gen": int,
    "max_attempts": int,
}


def _parse_ints(text: str) -> tuple[int, ...]:
    """``"1, 2, 5-7"`` -> ``(1, 2, 5, 6, 7)``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return tuple(out)


def _convert(section: str, key: str, raw: str, table: dict):
    if key not in table:
        raise ValueError(f"[{section}]: unknown key {key!r}; allowed: {', '.join(sorted(table))}")
    kind = table[key]
    try:
        if kind == "ints":
            return _parse_ints(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return kind(raw.strip())
    except ValueError as exc:
        raise ValueError(f"[{section}] {key}: {exc}") from None


def parse_experiment(text: str) -> Experiment:
    """Parse an experiment description.

    Sections: ``[experiment]`` for shared settings, one ``[task.<name>]`` per
    task (``n`` takes a list such as ``1, 2, 4-6``) and one ``[algo.<name>]``
    per algorithm variant (``algorithm`` defaults to the section name).
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="\x00unused")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValueError(str(exc)) from None

    settings: dict = {}
    tasks: list[TaskPlan] = []
    algos: list[AlgoPlan] = []
    for section in parser.sections():
        items = dict(parser.items(section))
        if section == "experiment":
            settings = {k: _convert(section, k, v, _EXPERIMENT_KEYS) for k, v in items.items()}
        elif section.startswith("task."):
            name = section[5:]
            vals = {k: _convert(section, k, v, _TASK_KEYS) for k, v in items.items()}
            if "n" not in vals:
                raise ValueError(f"[{section}]: missing key 'n'")
            tasks.append(TaskPlan(name, vals.pop("n"), **vals))
        elif section.startswith("algo."):
            name = section[5:]
            vals = {k: _convert(section, k, v, _ALGO_KEYS) for k, v in items.items()}
            vals.setdefault("algorithm", name)
            algos.append(AlgoPlan(name, **vals))
        else:
            raise ValueError(f"unknown section [{section}]")
    if not tasks:
        raise ValueError("no [task.<name>] section")
    if not algos:
        raise ValueError("no [algo.<name>] section")
    return Experiment(tuple(tasks), tuple(algos), **settings)


def load_experiment(path) -> Experiment:
    with open(path, encoding="utf-8") as fh:
        return parse_experiment(fh.read())


# -- blind-search claims -------------------------------------------------------

CLAIMS = {
    # which: (size window, input dim, termwise target)
    "odd_delay_identity": ((3, 20), 1, lambda x: x),
    "xor_without_delays": ((8, 40), 2, lambda x: x[:, :1] ^ x[:, 1:2]),
}


@dataclass
class ClaimSummary:
    which: str
    attempts: int = 0
    solutions: int = 0
    even_delay: int = 0
    odd_delay: int = 0
    examples: list[AType] = field(default_factory=list, repr=False)

    @property
    def rate(self) -> float:
        return self.solutions / self.attempts if self.attempts else 0.0

    @property
    def even_rate(self) -> float:
        return self.even_delay / self.attempts if self.attempts else 0.0

    def line(self) -> str:
        return (
            f"which={self.which} attempts={self.attempts} solutions={self.solutions} "
            f"even_delay={self.even_delay} odd_delay={self.odd_delay} rate={self.rate:.6f}"
        )


def claim_search(
    which: str,
    attempts: int,
    rng: np.random.Generator,
    *,
    sequence_length: int = EXACT_SEQUENCE_LENGTH,
    keep_examples: int = 5,
) -> ClaimSummary:
    """Blind search over random A-types without delay nodes.

    Each graph gets its own random input sequence and counts as a solution
    when some delay in ``[0, size]`` maps that sequence termwise onto the
    target.  A solution is tallied as odd if any of its working delays is
    odd, else as even.  A network without delay nodes holds at most
    ``2**size`` states, so no larger delay can reproduce a random sequence.
    """
    if which not in CLAIMS:
        raise ValueError(f"unknown claim {which!r}; expected one of {sorted(CLAIMS)}")
    if attempts < 0:
        raise ValueError("attempts must be >= 0")
    (lo, hi), dim, target = CLAIMS[which]
    cfg = GenConfig(lo, hi, dim, 1, p_delay=0.0)
    summary = ClaimSummary(which)
    n_bytes = -(-sequence_length * dim // 8)
    for _ in range(attempts):
        graph = random_atype(cfg, rng)
        bits = np.unpackbits(np.frombuffer(rng.bytes(n_bytes), np.uint8))[: sequence_length * dim]
        xs = bits.reshape(sequence_length, dim)
        delays = matching_delays(graph, xs, target(xs), 0, graph.size)
        summary.attempts += 1
        if not delays:
            continue
        summary.solutions += 1
        if any(d % 2 for d in delays):
            summary.odd_delay += 1
        else:
            summary.even_delay += 1
        if len(summary.examples) < keep_examples:
            summary.examples.append(AType(graph, delays[0]))
    return summary


# -- statistics ----------------------------------------------------------------


def t_confidence(samples: Sequence[float], level: float = 0.90) -> tuple[float, float]:
    """Mean and half-width of the two-sided Student-t interval at ``level``."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    if not 0.0 <= level < 1.0:
        raise ValueError("level must lie in [0, 1)")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if level == 0.0 or sd == 0.0:
        return mean, 0.0
    q = float(stats.t.ppf(0.5 + level / 2, df=x.size - 1))
    return mean, q * sd / math.sqrt(x.size)


@dataclass(frozen=True)
class GroupStats:
    task: str
    n: int
    algorithm: str
    trials: int
    solved: int
    mean: float
    half_width: float | None

    def line(self) -> str:
        hw = "" if self.half_width is None else f"{self.half_width:.1f}"
        return f"{self.task},{self.n},{self.algorithm},{self.trials},{self.solved},{self.mean:.1f},{hw}"


def summarize(records: Iterable[TrialRecord], level: float = 0.90) -> list[GroupStats]:
    """Per (task, n, algorithm) mean attempts with a t-interval half-width.

    Unsolved trials enter with their attempt count at the cap, which makes
    the mean a lower bound.  Groups of one trial get no half-width.
    """
    groups: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.task, rec.n, rec.algorithm), []).append(rec)
    out = []
    for key in sorted(groups):
        recs = groups[key]
        attempts = [r.attempts for r in recs]
        if len(attempts) >= 2:
            mean, hw = t_confidence(attempts, level)
        else:
            mean, hw = float(attempts[0]), None
        out.append(GroupStats(*key, len(recs), sum(r.solved for r in recs), mean, hw))
    return out


STATS_HEADER = "task,n,algorithm,trials,solved,mean_attempts,half_width"
