"""Synchronous simulation of A-types.

All nodes update together once per moment.  Non-input nodes start at 0;
input nodes take their states from the input sequence and hold the last
vector once the sequence is used up.

Sequences are ``uint8`` arrays of shape ``(length, dim)``, earliest moment
first.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .graph import AType, ATypeGraph, NodeKind, Wiring

__all__ = [
    "as_sequence",
    "Wiring",
    "wiring",
    "simulate",
    "run",
    "run_clamped",
    "is_clampable",
    "estimate_delay_range",
    "probe_length",
    "draw_probes",
    "matching_delays",
]

def as_sequence(seq, dim: int | None = None) -> np.ndarray:
    """Coerce nested lists / 1-D vectors into a ``(length, dim)`` uint8 array."""
    arr = np.asarray(seq, dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if dim is None or arr.size == dim else arr.reshape(-1, dim)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D sequence, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"dimension mismatch: vectors have {arr.shape[1]} components, expected {dim}")
    if arr.size and arr.max() > 1:
        raise ValueError("sequence entries must be 0 or 1")
    return arr


def wiring(graph: ATypeGraph) -> Wiring:
    cached = graph.__dict__.get("_wiring")
    if cached is not None:
        return cached
    srcs = graph.sources
    nand, delay = NodeKind.NAND, NodeKind.DELAY
    w = Wiring(
        np.array([1 if k is nand else 2 if k is delay else 0 for k in graph.kinds], np.int8),
        np.array([s[0] if s else 0 for s in srcs], np.int64),
        np.array([s[-1] if s else 0 for s in srcs], np.int64),
        np.array(graph.input_order, np.int64),
        np.array(graph.output_order, np.int64),
    )
    graph.__dict__["_wiring"] = w
    return w


@njit(cache=True)
def _advance(kind, src_a, src_b, in_nodes, out_nodes, xs, n_moments, state, out):
    # out[t] receives the output vector at moment t; state ends at moment n_moments
    n_in = in_nodes.shape[0]
    n_out = out_nodes.shape[0]
    size = kind.shape[0]
    last = xs.shape[0] - 1
    nxt = np.empty_like(state)
    for j in range(n_in):
        state[in_nodes[j]] = xs[0, j]
    for t in range(n_moments):
        for k in range(n_out):
            out[t, k] = state[out_nodes[k]]
        for i in range(size):
            kd = kind[i]
            if kd == 1:
                nxt[i] = 1 - (state[src_a[i]] & state[src_b[i]])
            elif kd == 2:
                nxt[i] = state[src_a[i]]
        row = t + 1 if t < last else last
        for j in range(n_in):
            nxt[in_nodes[j]] = xs[row, j]
        for i in range(size):
            state[i] = nxt[i]


@njit(cache=True)
def _simulate_batch(kind, src_a, src_b, in_nodes, out_nodes, xs, n_moments):
    n_ex, n_rows, n_in = xs.shape
    n_out = out_nodes.shape[0]
    size = kind.shape[0]
    out = np.empty((n_ex, n_moments, n_out), np.uint8)
    state = np.empty(size, np.uint8)
    nxt = np.empty(size, np.uint8)
    last = n_rows - 1
    for e in range(n_ex):
        state[:] = 0
        for j in range(n_in):
            state[in_nodes[j]] = xs[e, 0, j]
        for t in range(n_moments):
            for k in range(n_out):
                out[e, t, k] = state[out_nodes[k]]
            for i in range(size):
                kd = kind[i]
                if kd == 1:
                    nxt[i] = 1 - (state[src_a[i]] & state[src_b[i]])
                elif kd == 2:
                    nxt[i] = state[src_a[i]]
            row = t + 1 if t < last else last
            for j in range(n_in):
                nxt[in_nodes[j]] = xs[e, row, j]
            state, nxt = nxt, state
    return out


def simulate(
    graph: ATypeGraph,
    inputs,
    n_moments: int,
    state: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Run ``n_moments`` moments and return ``(outputs, final_state)``.

    ``outputs[t]`` is the output vector at moment ``t``; ``final_state`` is
    the full node state at moment ``n_moments``.  Passing that state back in
    together with the remaining inputs continues the same trajectory.
    """
    w = wiring(graph)
    xs = as_sequence(inputs, graph.input_dim)
    if xs.shape[0] == 0:
        raise ValueError("input sequence must be non-empty")
    if n_moments < 0:
        raise ValueError("n_moments must be >= 0")
    st = np.zeros(graph.size, np.uint8) if state is None else np.array(state, dtype=np.uint8)
    if st.shape != (graph.size,):
        raise ValueError(f"state must have shape ({graph.size},)")
    out = np.empty((n_moments, graph.output_dim), np.uint8)
    _advance(w.kind, w.src_a, w.src_b, w.inputs, w.outputs, xs, n_moments, st, out)
    return out, st


def simulate_batch(graph: ATypeGraph, xs: np.ndarray, n_moments: int) -> np.ndarray:
    """Simulate equal-length input sequences ``xs[e]`` from the zero state.

    Returns an array of shape ``(examples, n_moments, output_dim)``.
    """
    w = wiring(graph)
    return _simulate_batch(w.kind, w.src_a, w.src_b, w.inputs, w.outputs, xs, n_moments)


def run(atype: AType, inputs, out_len: int) -> np.ndarray:
    """Outputs at moments ``delay .. delay + out_len - 1``."""
    if out_len < 0:
        raise ValueError("out_len must be >= 0")
    xs = as_sequence(inputs, atype.graph.input_dim)
    if out_len == 0:
        if xs.shape[0] == 0:
            raise ValueError("input sequence must be non-empty")
        return np.zeros((0, atype.graph.output_dim), np.uint8)
    out, _ = simulate(atype.graph, xs, atype.delay + out_len)
    return out[atype.delay :]


def run_clamped(atype: AType, x, horizon: int) -> np.ndarray:
    vec = np.asarray(x, dtype=np.uint8).reshape(1, -1)
    return run(atype, vec, horizon)


def is_clampable(atype: AType, x, horizon: int) -> bool:
    """True when the clamped output is constant over ``horizon`` moments from the delay."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    out = run_clamped(atype, x, horizon)
    return bool((out == out[0]).all())


def probe_length(graph: ATypeGraph) -> int:
    return 2 * graph.size + 16


@njit(cache=True)
def _probes_from_uniforms(u, length, dim):
    probes = np.empty((2, length, dim), np.uint8)
    k = 0
    same = True
    for e in range(2):
        for t in range(length):
            for j in range(dim):
                probes[e, t, j] = 1 if u[k] < 0.5 else 0
                k += 1
    for j in range(dim):
        if probes[0, 0, j] != probes[1, 0, j]:
            same = False
    if same:
        j = int(u[k] * dim)
        probes[1, 0, j] ^= 1
    return probes


@njit(cache=True)
def _first_difference(kind, src_a, src_b, in_nodes, out_nodes, u, n_moments):
    # both probes advance in lockstep so the scan stops at the first mismatch
    probes = _probes_from_uniforms(u, n_moments, in_nodes.shape[0])
    size = kind.shape[0]
    s0 = np.zeros(size, np.uint8)
    s1 = np.zeros(size, np.uint8)
    n0 = np.zeros(size, np.uint8)
    n1 = np.zeros(size, np.uint8)
    for j in range(in_nodes.shape[0]):
        s0[in_nodes[j]] = probes[0, 0, j]
        s1[in_nodes[j]] = probes[1, 0, j]
    for t in range(n_moments):
        for k in range(out_nodes.shape[0]):
            if s0[out_nodes[k]] != s1[out_nodes[k]]:
                return t
        for i in range(size):
            kd = kind[i]
            if kd == 1:
                n0[i] = 1 - (s0[src_a[i]] & s0[src_b[i]])
                n1[i] = 1 - (s1[src_a[i]] & s1[src_b[i]])
            elif kd == 2:
                n0[i] = s0[src_a[i]]
                n1[i] = s1[src_a[i]]
        row = t + 1 if t + 1 < n_moments else n_moments - 1
        for j in range(in_nodes.shape[0]):
            n0[in_nodes[j]] = probes[0, row, j]
            n1[in_nodes[j]] = probes[1, row, j]
        s0, n0 = n0, s0
        s1, n1 = n1, s1
    return -1


def draw_probes(rng: np.random.Generator, length: int, dim: int) -> np.ndarray:
    """Two random input sequences of ``length`` vectors whose first vectors differ."""
    return _probes_from_uniforms(rng.random(2 * length * dim + 1), length, dim)


def estimate_delay_range(graph: ATypeGraph, rng: np.random.Generator) -> tuple[int, int]:
    """Heuristic delay interval for a graph.

    Two independent random input sequences are fed to the graph with zero
    delay.  The first moment ``q`` at which the outputs differ, less the
    input and output dimensions, estimates the minimum delay; the maximum is
    the node count.
    """
    size = graph.size
    length = 2 * size + 16
    w = wiring(graph)
    u = rng.random(2 * length * graph.input_dim + 1)
    q = _first_difference(w.kind, w.src_a, w.src_b, w.inputs, w.outputs, u, length)
    lo = max(0, q - (graph.input_dim + graph.output_dim))
    return min(lo, size), size


@njit(cache=True)
def _matching_delays(kind, src_a, src_b, in_nodes, out_nodes, xs, expected, d_lo, d_hi):
    # alive[d] stays 1 while outputs from moment d onward reproduce expected;
    # the run stops as soon as every delay has failed
    size = kind.shape[0]
    n_in = in_nodes.shape[0]
    n_out = out_nodes.shape[0]
    n_rows = xs.shape[0]
    length = expected.shape[0]
    n_d = d_hi - d_lo + 1
    alive = np.ones(n_d, np.uint8)
    n_alive = n_d
    state = np.zeros(size, np.uint8)
    nxt = np.empty(size, np.uint8)
    for j in range(n_in):
        state[in_nodes[j]] = xs[0, j]
    for t in range(d_hi + length):
        first = t - length + 1
        lo = d_lo if d_lo > first else first
        hi = d_hi if d_hi < t else t
        for d in range(lo, hi + 1):
            if alive[d - d_lo]:
                i = t - d
                for k in range(n_out):
                    if state[out_nodes[k]] != expected[i, k]:
                        alive[d - d_lo] = 0
                        n_alive -= 1
                        break
        if n_alive == 0:
            break
        for i in range(size):
            kd = kind[i]
            if kd == 1:
                nxt[i] = 1 - (state[src_a[i]] & state[src_b[i]])
            elif kd == 2:
                nxt[i] = state[src_a[i]]
        row = t + 1 if t + 1 < n_rows else n_rows - 1
        for j in range(n_in):
            nxt[in_nodes[j]] = xs[row, j]
        state, nxt = nxt, state
    return alive


def matching_delays(graph: ATypeGraph, inputs, expected, delay_lo: int, delay_hi: int) -> list[int]:
    """Delays ``d`` in ``[delay_lo, delay_hi]`` for which ``run`` reproduces ``expected`` exactly.

    One simulation covers the whole range and stops once every delay has
    produced a mismatch.
    """
    if delay_lo < 0 or delay_hi < delay_lo:
        raise ValueError("need 0 <= delay_lo <= delay_hi")
    xs = as_sequence(inputs, graph.input_dim)
    if xs.shape[0] == 0:
        raise ValueError("input sequence must be non-empty")
    ys = as_sequence(expected, graph.output_dim)
    w = wiring(graph)
    alive = _matching_delays(w.kind, w.src_a, w.src_b, w.inputs, w.outputs, xs, ys, delay_lo, delay_hi)
    return [delay_lo + int(i) for i in np.flatnonzero(alive)]
