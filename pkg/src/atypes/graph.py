"""A-type graph data model, validity rules and random generation.

An A-type graph is a directed multigraph whose nodes are input, nand or delay
nodes.  Node ids are dense integers ``0..size-1``; arrows are kept as an
ordered multiset of ``(source, target)`` pairs so that parallel arrows and
loops are representable.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

__all__ = [
    "NodeKind",
    "ATypeGraph",
    "AType",
    "Violation",
    "GenConfig",
    "GenerationError",
    "validate",
    "random_atype",
    "build_graph",
    "Wiring",
]


class NodeKind(enum.Enum):
    INPUT = "INPUT"
    NAND = "NAND"
    DELAY = "DELAY"

    @property
    def required_indegree(self) -> int:
        return _REQUIRED_INDEGREE[self]


_REQUIRED_INDEGREE = {NodeKind.INPUT: 0, NodeKind.NAND: 2, NodeKind.DELAY: 1}


class GenerationError(ValueError):
    """Raised when a generator configuration cannot produce a valid graph."""


@dataclass(frozen=True)
class Violation:
    """One broken graph invariant.

    ``node`` or ``arrow`` (an index into ``graph.arrows``) identifies the
    offending element when there is one.
    """

    code: str
    message: str
    node: int | None = None
    arrow: int | None = None

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ATypeGraph:
    kinds: tuple[NodeKind, ...]
    arrows: tuple[tuple[int, int], ...]
    input_order: tuple[int, ...]
    output_order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kinds", tuple(NodeKind(k) for k in self.kinds))
        object.__setattr__(self, "arrows", tuple((int(s), int(t)) for s, t in self.arrows))
        object.__setattr__(self, "input_order", tuple(int(i) for i in self.input_order))
        object.__setattr__(self, "output_order", tuple(int(i) for i in self.output_order))

    @classmethod
    def _trusted(cls, kinds: tuple, arrows: tuple, input_order: tuple, output_order: tuple) -> "ATypeGraph":
        # skips coercion; callers pass NodeKind members and plain int tuples
        self = object.__new__(cls)
        set_ = object.__setattr__
        set_(self, "kinds", kinds)
        set_(self, "arrows", arrows)
        set_(self, "input_order", input_order)
        set_(self, "output_order", output_order)
        return self

    @property
    def size(self) -> int:
        return len(self.kinds)

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def input_dim(self) -> int:
        return len(self.input_order)

    @property
    def output_dim(self) -> int:
        return len(self.output_order)

    @cached_property
    def sources(self) -> tuple[tuple[int, ...], ...]:
        """Incoming sources of every node, in arrow order."""
        incoming: list[list[int]] = [[] for _ in self.kinds]
        for s, t in self.arrows:
            if 0 <= t < len(incoming):
                incoming[t].append(s)
        return tuple(tuple(x) for x in incoming)

    @cached_property
    def outdegrees(self) -> tuple[int, ...]:
        out = [0] * self.size
        for s, _ in self.arrows:
            if 0 <= s < self.size:
                out[s] += 1
        return tuple(out)

    @cached_property
    def _output_set(self) -> frozenset[int]:
        return frozenset(self.output_order)

    def is_output(self, node: int) -> bool:
        return node in self._output_set

    @cached_property
    def internal_nodes(self) -> tuple[int, ...]:
        """Nodes that are neither inputs nor outputs."""
        outs = self._output_set
        return tuple(
            i for i, k in enumerate(self.kinds) if k is not NodeKind.INPUT and i not in outs
        )

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        """Undirected adjacency, loops excluded."""
        adj: list[set[int]] = [set() for _ in self.kinds]
        for s, t in self.arrows:
            if s != t:
                adj[s].add(t)
                adj[t].add(s)
        return tuple(frozenset(a) for a in adj)

    def count_kind(self, kind: NodeKind) -> int:
        return sum(1 for k in self.kinds if k is kind)


class Wiring(NamedTuple):
    """Array form of a graph consumed by the compiled simulation kernels.

    ``kind`` codes are 0 input, 1 nand, 2 delay; delay nodes read ``src_a``.
    """

    kind: np.ndarray
    src_a: np.ndarray
    src_b: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray


@dataclass(frozen=True)
class AType:
    graph: ATypeGraph
    delay: int

    def __post_init__(self) -> None:
        if self.delay < 0:
            raise ValueError(f"delay must be non-negative, got {self.delay}")
        object.__setattr__(self, "delay", int(self.delay))

    @property
    def size(self) -> int:
        return self.graph.size


def build_graph(
    kinds: Sequence[NodeKind | str],
    sources: Sequence[Sequence[int]],
    input_order: Sequence[int],
    output_order: Sequence[int],
) -> ATypeGraph:
    """Build a graph from per-node source lists (arrows grouped by target)."""
    kinds_t = tuple(k if k.__class__ is NodeKind else NodeKind(k) for k in kinds)
    srcs_t = tuple(tuple(int(s) for s in srcs) for srcs in sources)
    arrows = tuple((s, t) for t, srcs in enumerate(srcs_t) for s in srcs)
    g = ATypeGraph._trusted(
        kinds_t, arrows, tuple(int(i) for i in input_order), tuple(int(i) for i in output_order)
    )
    if len(srcs_t) == len(kinds_t):
        g.__dict__["sources"] = srcs_t
    return g


def assemble(kinds: tuple, sources: list, input_order: tuple, output_order: tuple) -> ATypeGraph:
    """Fast :func:`build_graph` for internal callers that already hold
    NodeKind members and plain int lists."""
    srcs_t = tuple([tuple(s) for s in sources])
    arrows = tuple([(s, t) for t, srcs in enumerate(srcs_t) for s in srcs])
    g = ATypeGraph._trusted(tuple(kinds), arrows, tuple(input_order), tuple(output_order))
    g.__dict__["sources"] = srcs_t
    return g


def validate(graph: ATypeGraph) -> list[Violation]:
    """Return every violated A-type graph invariant; empty means valid."""
    violations: list[Violation] = []
    size = graph.size
    ok_id = range(size).__contains__

    indeg = [0] * size
    outdeg = [0] * size
    for idx, (s, t) in enumerate(graph.arrows):
        if not (ok_id(s) and ok_id(t)):
            violations.append(
                Violation("dangling-arrow", f"arrow {idx} ({s} -> {t}) references a missing node", arrow=idx)
            )
            continue
        indeg[t] += 1
        outdeg[s] += 1

    if not graph.input_order:
        violations.append(Violation("no-inputs", "input order is empty"))
    if not graph.output_order:
        violations.append(Violation("no-outputs", "output order is empty"))
    for label, order in (("input", graph.input_order), ("output", graph.output_order)):
        for node, count in Counter(order).items():
            if not ok_id(node):
                violations.append(Violation("dangling-order", f"{label} order names missing node {node}", node=node))
            elif count > 1:
                violations.append(Violation("duplicate-order", f"node {node} listed {count} times in {label} order", node=node))
    for node in sorted(set(graph.input_order) & set(graph.output_order)):
        violations.append(Violation("input-output-overlap", f"node {node} is both an input and an output", node=node))

    inputs = set(graph.input_order)
    outputs = set(graph.output_order)
    for node, kind in enumerate(graph.kinds):
        d = indeg[node]
        if d > 2:
            violations.append(Violation("indegree", f"node {node} has indegree {d} > 2", node=node))
        elif d != kind.required_indegree:
            violations.append(
                Violation(
                    "indegree",
                    f"{kind.value} node {node} has indegree {d}, expected {kind.required_indegree}",
                    node=node,
                )
            )
        if kind is NodeKind.INPUT and node not in inputs:
            violations.append(Violation("unordered-input", f"INPUT node {node} missing from input order", node=node))
        if node in inputs and kind is not NodeKind.INPUT:
            violations.append(Violation("input-kind", f"input-order node {node} has kind {kind.value}", node=node))
        if node in outputs and kind is NodeKind.INPUT:
            violations.append(Violation("output-kind", f"output node {node} has kind INPUT", node=node))
        if node in outputs and outdeg[node] != 0:
            violations.append(
                Violation("output-outdegree", f"output node {node} has outdegree {outdeg[node]}", node=node)
            )

    for idx, (s, t) in enumerate(graph.arrows):
        if ok_id(s) and ok_id(t) and graph.kinds[s] is NodeKind.INPUT and t in outputs:
            violations.append(
                Violation("input-to-output", f"arrow {idx} runs from input {s} to output {t}", arrow=idx)
            )
    return violations


@dataclass(frozen=True)
class GenConfig:
    """Parameters for :func:`random_atype`."""

    size_lo: int
    size_hi: int
    input_dim: int
    output_dim: int
    p_delay: float = 0.2

    def problems(self) -> list[str]:
        out = []
        if self.input_dim < 1 or self.output_dim < 1:
            out.append("input and output dimensions must be >= 1")
        if self.size_lo > self.size_hi:
            out.append(f"size_lo {self.size_lo} > size_hi {self.size_hi}")
        minimum = self.input_dim + self.output_dim + 1
        if self.size_lo < minimum:
            out.append(f"size_lo {self.size_lo} < {minimum} (inputs + outputs + one internal node)")
        if not 0.0 <= self.p_delay <= 1.0:
            out.append(f"p_delay {self.p_delay} outside [0, 1]")
        return out

    def check(self) -> None:
        problems = self.problems()
        if problems:
            raise GenerationError("; ".join(problems))

    def with_size(self, size: int) -> "GenConfig":
        return GenConfig(size, size, self.input_dim, self.output_dim, self.p_delay)


def random_atype(cfg: GenConfig, rng: np.random.Generator) -> ATypeGraph:
    """Draw a random valid A-type graph.

    Node layout is inputs, then internal nodes, then outputs.  Each non-input
    node is a delay node with probability ``cfg.p_delay``; its sources are
    drawn uniformly (with replacement) from the nodes allowed to feed it:
    inputs and internal nodes for an internal target, internal nodes only for
    an output.
    """
    cfg.check()
    n, p = cfg.input_dim, cfg.output_dim
    size = cfg.size_lo + int(rng.random() * (cfg.size_hi - cfg.size_lo + 1))
    n_internal = size - n - p
    kind, src_a, src_b = _draw_wiring(rng.random(3 * (size - n)), n, n_internal, p, cfg.p_delay)

    kinds = tuple([_KINDS[k] for k in kind.tolist()])
    a_list, b_list = src_a.tolist(), src_b.tolist()
    sources = tuple(
        [() if k == 0 else (a,) if k == 2 else (a, b) for k, a, b in zip(kind.tolist(), a_list, b_list)]
    )
    arrows = tuple([(s, t) for t, srcs in enumerate(sources) for s in srcs])
    g = ATypeGraph._trusted(kinds, arrows, tuple(range(n)), tuple(range(n + n_internal, size)))
    g.__dict__["sources"] = sources
    g.__dict__["_wiring"] = Wiring(kind, src_a, src_b, np.arange(n), np.arange(n + n_internal, size))
    return g


@njit(cache=True)
def _draw_wiring(u, n_inputs, n_internal, n_outputs, p_delay):
    # u holds three uniforms per non-input node: kind, first source, second source
    size = n_inputs + n_internal + n_outputs
    m = size - n_inputs
    kind = np.zeros(size, np.int8)
    src_a = np.zeros(size, np.int64)
    src_b = np.zeros(size, np.int64)
    for i in range(m):
        node = n_inputs + i
        if i < n_internal:
            base, span = 0, n_inputs + n_internal
        else:
            base, span = n_inputs, n_internal
        a = base + int(u[m + i] * span)
        if u[i] < p_delay:
            kind[node] = 2
            src_a[node] = a
            src_b[node] = a
        else:
            kind[node] = 1
            src_a[node] = a
            src_b[node] = base + int(u[2 * m + i] * span)
    return kind, src_a, src_b


_INPUT, _NAND, _DELAY = NodeKind.INPUT, NodeKind.NAND, NodeKind.DELAY
_KINDS = (_INPUT, _NAND, _DELAY)
