"""Size-penalised Hamming fitness and candidate evaluation over delay ranges."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..graph import AType, ATypeGraph
from ..sim import estimate_delay_range, run, wiring
from ..tasks import TrainingSet

__all__ = [
    "FitnessConfig",
    "CandidateSolution",
    "normalized_hamming",
    "fitness",
    "delay_profile",
    "evaluate_candidate",
]


@dataclass(frozen=True)
class FitnessConfig:
    penalty_bound: int
    pressure_gradient: float = 0.5

    def __post_init__(self) -> None:
        if self.penalty_bound < 1:
            raise ValueError("penalty_bound must be >= 1")
        if not self.pressure_gradient > 0:
            raise ValueError("pressure_gradient must be > 0")

    def penalise(self, d, size: int):
        """Apply the oversize penalty to raw distance(s) ``d``."""
        u = self.penalty_bound
        if size <= u:
            return d
        return np.minimum(1.0, d * self.pressure_gradient * (size - u + 1))


def normalized_hamming(a, b) -> float:
    a = np.asarray(a, np.uint8)
    b = np.asarray(b, np.uint8)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.count_nonzero(a != b)) / a.size


_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_TWO = np.uint64(2)
_FOUR = np.uint64(4)
_TOP = np.uint64(56)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> _TWO) & _M2)
    x = (x + (x >> _FOUR)) & _M4
    return (x * _H01) >> _TOP


@njit(cache=True)
def _packed_mismatch(kind, src_a, src_b, in_nodes, out_nodes, xs, ys, mask, d_lo, d_hi):
    # examples ride in the bits of uint64 words: xs (rows, n_in, W), ys (length, n_out, W);
    # counts[d - d_lo] = differing output bits when reading from moment d
    n_rows, n_in, n_words = xs.shape
    length, n_out = ys.shape[0], ys.shape[1]
    size = kind.shape[0]
    state = np.zeros((size, n_words), np.uint64)
    nxt = np.zeros((size, n_words), np.uint64)
    counts = np.zeros(d_hi - d_lo + 1, np.int64)
    for j in range(n_in):
        for w in range(n_words):
            state[in_nodes[j], w] = xs[0, j, w]
    last_t = d_hi + length - 1
    for t in range(last_t + 1):
        lo = max(d_lo, t - length + 1)
        hi = min(d_hi, t)
        for d in range(lo, hi + 1):
            i = t - d
            c = 0
            for k in range(n_out):
                node = out_nodes[k]
                for w in range(n_words):
                    c += _popcount((state[node, w] ^ ys[i, k, w]) & mask[w])
            counts[d - d_lo] += c
        if t == last_t:
            break
        for v in range(size):
            kd = kind[v]
            if kd == 1:
                a = src_a[v]
                b = src_b[v]
                for w in range(n_words):
                    nxt[v, w] = ~(state[a, w] & state[b, w])
            elif kd == 2:
                a = src_a[v]
                for w in range(n_words):
                    nxt[v, w] = state[a, w]
        row = t + 1 if t + 1 < n_rows else n_rows - 1
        for j in range(n_in):
            for w in range(n_words):
                nxt[in_nodes[j], w] = xs[row, j, w]
        state, nxt = nxt, state
    return counts


def pack_lanes(arr: np.ndarray) -> np.ndarray:
    """``(examples, length, dim)`` bits -> ``(length, dim, words)`` uint64, example e in bit e % 64 of word e // 64."""
    arr = np.asarray(arr, np.uint8)
    n_ex, length, dim = arr.shape
    n_words = -(-n_ex // 64)
    padded = np.zeros((n_words * 64, length, dim), np.uint64)
    padded[:n_ex] = arr
    shifts = np.arange(64, dtype=np.uint64).reshape(1, 64, 1, 1)
    words = np.bitwise_or.reduce(padded.reshape(n_words, 64, length, dim) << shifts, axis=1)
    return np.ascontiguousarray(words.transpose(1, 2, 0))


def _lane_mask(n_ex: int) -> np.ndarray:
    n_words = -(-n_ex // 64)
    mask = np.full(n_words, np.iinfo(np.uint64).max, np.uint64)
    if n_ex % 64:
        mask[-1] = np.uint64((1 << (n_ex % 64)) - 1)
    return mask


def _packed(training: TrainingSet):
    cached = training.__dict__.get("_packed")
    if cached is None:
        cached = (pack_lanes(training.inputs), pack_lanes(training.targets), _lane_mask(len(training)))
        training.__dict__["_packed"] = cached
    return cached


def delay_profile(
    graph: ATypeGraph, delay_lo: int, delay_hi: int, training: TrainingSet, cfg: FitnessConfig
) -> np.ndarray:
    """Fitness for every delay in ``[delay_lo, delay_hi]``.

    A single simulation covers the whole range, since the delay only shifts
    the window from which outputs are read, and all training examples run
    side by side as bit lanes.
    """
    xs, ys, mask = _packed(training)
    w = wiring(graph)
    counts = _packed_mismatch(w.kind, w.src_a, w.src_b, w.inputs, w.outputs, xs, ys, mask, delay_lo, delay_hi)
    # every example has the same number of bits, so the mean of per-example
    # normalised distances equals the pooled ratio
    d = counts / training.targets.size
    return cfg.penalise(d, graph.size)


def fitness(graph: ATypeGraph, delay: int, training: TrainingSet, cfg: FitnessConfig) -> float:
    """Mean normalised Hamming distance over the training set, size-penalised.

    Lower is fitter; 0 means every training example is reproduced.
    """
    atype = AType(graph, delay)
    dists = [
        normalized_hamming(run(atype, ex.input, len(ex.expected)), ex.expected) for ex in training.examples
    ]
    return float(cfg.penalise(float(np.mean(dists)), graph.size))


@dataclass
class CandidateSolution:
    """A graph together with fitness at every delay in its estimated range."""

    graph: ATypeGraph
    delay_range: tuple[int, int]
    fitness_by_delay: np.ndarray
    best_fitness: float
    best_delay: int
    exactness_checked: bool = field(default=False, compare=False)

    @property
    def size(self) -> int:
        return self.graph.size

    @property
    def per_delay_fitness(self) -> dict[int, float]:
        lo = self.delay_range[0]
        return {lo + i: float(f) for i, f in enumerate(self.fitness_by_delay)}

    def zero_delays(self) -> list[int]:
        lo = self.delay_range[0]
        return [lo + int(i) for i in np.flatnonzero(self.fitness_by_delay == 0.0)]

    def atype(self, delay: int | None = None) -> AType:
        return AType(self.graph, self.best_delay if delay is None else delay)


def evaluate_candidate(
    graph: ATypeGraph, training: TrainingSet, cfg: FitnessConfig, rng: np.random.Generator
) -> CandidateSolution:
    lo, hi = estimate_delay_range(graph, rng)
    prof = delay_profile(graph, lo, hi, training, cfg)
    best = int(np.argmin(prof))
    return CandidateSolution(graph, (lo, hi), prof, float(prof[best]), lo + best)
