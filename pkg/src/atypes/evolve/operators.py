"""Mutation and radial-subgraph crossover on A-type graphs.

Both operators work on a per-node list of sources (arrows grouped by
target) and rebuild an immutable :class:`~atypes.graph.ATypeGraph` at the
end.  Every repair draws replacement sources only from nodes that are
allowed to feed the target: outputs never act as sources, and outputs may
not be fed by inputs.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from ..graph import ATypeGraph, NodeKind, assemble

__all__ = [
    "CrossoverError",
    "radial_subgraph",
    "boundaries",
    "mutate",
    "remove_node",
    "rewire_arrow",
    "add_node",
    "crossover",
    "exchange_subgraphs",
]


class CrossoverError(RuntimeError):
    """Raised when a crossover attempt cannot be repaired into a valid child."""


def _pick(seq, rng: np.random.Generator):
    return seq[int(rng.random() * len(seq))]


def _allowed_sources(kinds, outputs: set[int], target: int, exclude: Iterable[int] = ()) -> list[int]:
    skip = set(exclude)
    if target in outputs:
        return [
            i for i, k in enumerate(kinds) if k is not NodeKind.INPUT and i not in outputs and i not in skip
        ]
    return [i for i in range(len(kinds)) if i not in outputs and i not in skip]


def radial_subgraph(graph: ATypeGraph, center: int, size: int, rng: np.random.Generator) -> frozenset[int]:
    """Grow a connected set of internal nodes outward from ``center``.

    Each round collects the internal nodes adjacent (either direction) to the
    current set and transfers them in random order until the set reaches
    ``size`` nodes; growth stops early once no neighbours remain.
    """
    internal = set(graph.internal_nodes)
    if center not in internal:
        raise ValueError(f"centre {center} is not an internal node")
    if size < 1:
        raise ValueError("size must be >= 1")
    chosen = {center}
    while len(chosen) < size:
        ring = sorted({v for u in chosen for v in graph.neighbours[u] if v in internal} - chosen)
        if not ring:
            break
        for idx in rng.permutation(len(ring)):
            chosen.add(ring[idx])
            if len(chosen) == size:
                break
    return frozenset(chosen)


def boundaries(graph: ATypeGraph, subset: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    """``(proximal, distal)`` boundaries of ``subset``.

    Proximal: members adjacent to a non-member.  Distal: non-members
    adjacent to a member.
    """
    members = frozenset(subset)
    distal: set[int] = set()
    proximal: set[int] = set()
    for v in members:
        outside = graph.neighbours[v] - members
        if outside:
            proximal.add(v)
            distal |= outside
    return frozenset(proximal), frozenset(distal)


def _rebuild(kinds, sources, graph: ATypeGraph) -> ATypeGraph:
    return assemble(kinds, sources, graph.input_order, graph.output_order)


def remove_node(graph: ATypeGraph, rng: np.random.Generator) -> ATypeGraph | None:
    """Delete a random internal node and re-source the arrows it fed."""
    internal = graph.internal_nodes
    if len(internal) < 2:
        return None
    victim = _pick(internal, rng)
    remap = {old: old - (old > victim) for old in range(graph.size) if old != victim}
    kinds = [k for i, k in enumerate(graph.kinds) if i != victim]
    outputs = {remap[o] for o in graph.output_order}
    sources = [[remap[s] if s != victim else None for s in srcs] for i, srcs in enumerate(graph.sources) if i != victim]
    for target, srcs in enumerate(sources):
        if None in srcs:
            allowed = _allowed_sources(kinds, outputs, target)
            sources[target] = [s if s is not None else _pick(allowed, rng) for s in srcs]
    return assemble(
        kinds,
        sources,
        [remap[i] for i in graph.input_order],
        [remap[o] for o in graph.output_order],
    )


def rewire_arrow(graph: ATypeGraph, rng: np.random.Generator) -> ATypeGraph | None:
    """Replace one random arrow by a new arrow into the same target."""
    slots = [(t, j) for t, srcs in enumerate(graph.sources) for j in range(len(srcs))]
    if not slots:
        return None
    target, j = _pick(slots, rng)
    sources = [list(s) for s in graph.sources]
    outputs = set(graph.output_order)
    old = sources[target][j]
    allowed = _allowed_sources(graph.kinds, outputs, target, exclude=[old]) or [old]
    sources[target][j] = _pick(allowed, rng)
    return _rebuild(graph.kinds, sources, graph)


def add_node(graph: ATypeGraph, rng: np.random.Generator, p_delay: float = 0.2) -> ATypeGraph | None:
    """Insert a new internal node and route one existing arrow out of it."""
    new = graph.size
    kind = NodeKind.DELAY if rng.random() < p_delay else NodeKind.NAND
    kinds = list(graph.kinds) + [kind]
    outputs = set(graph.output_order)
    sources = [list(s) for s in graph.sources]
    allowed = _allowed_sources(kinds, outputs, new)
    sources.append([_pick(allowed, rng) for _ in range(kind.required_indegree)])
    spare = [
        i
        for i, k in enumerate(graph.kinds)
        if k is not NodeKind.INPUT and len(graph.sources[i]) < k.required_indegree
    ]
    if spare:
        sources[_pick(spare, rng)].append(new)
    else:
        slots = [(t, j) for t, srcs in enumerate(graph.sources) for j in range(len(srcs))]
        if not slots:
            return None
        target, j = _pick(slots, rng)
        sources[target][j] = new
    return _rebuild(kinds, sources, graph)


_MOVES = (remove_node, rewire_arrow, add_node)


def mutate(parent: ATypeGraph, rng: np.random.Generator, p_delay: float = 0.2) -> ATypeGraph:
    """Shrink, rewire or grow ``parent`` by one step, chosen uniformly.

    An impossible move (e.g. removing the only internal node) falls through
    to the remaining moves in random order.
    """
    for idx in rng.permutation(len(_MOVES)):
        move = _MOVES[idx]
        child = move(parent, rng, p_delay) if move is add_node else move(parent, rng)
        if child is not None:
            return child
    return parent


def exchange_subgraphs(
    mother: ATypeGraph,
    father: ATypeGraph,
    acceptor: Iterable[int],
    donor: Iterable[int],
    rng: np.random.Generator,
) -> ATypeGraph:
    """Replace ``acceptor`` in ``mother`` by a copy of ``donor`` from ``father``.

    Arrows lost at the seam are re-created: donor nodes take new sources from
    the acceptor's distal boundary, the remaining mother nodes take new
    sources from the donor's proximal boundary.
    """
    acceptor = frozenset(acceptor)
    donor_nodes = sorted(donor)
    donor_set = frozenset(donor_nodes)
    if not acceptor.isdisjoint(mother.input_order) or not acceptor.isdisjoint(mother.output_order):
        raise ValueError("acceptor must contain internal nodes only")
    if not donor_set.isdisjoint(father.input_order) or not donor_set.isdisjoint(father.output_order):
        raise ValueError("donor must contain internal nodes only")

    keep = [v for v in range(mother.size) if v not in acceptor]
    m_map = {old: new for new, old in enumerate(keep)}
    d_map = {old: len(keep) + i for i, old in enumerate(donor_nodes)}

    _, distal = boundaries(mother, acceptor)
    proximal, _ = boundaries(father, donor_set)
    seam_in = [m_map[v] for v in sorted(distal) if not mother.is_output(v)]
    seam_out = [d_map[v] for v in sorted(proximal)]

    kinds = [mother.kinds[v] for v in keep] + [father.kinds[v] for v in donor_nodes]
    sources: list[list[int | None]] = [
        [m_map.get(s) for s in mother.sources[v]] for v in keep
    ] + [[d_map.get(s) for s in father.sources[v]] for v in donor_nodes]

    n_keep = len(keep)
    for target, srcs in enumerate(sources):
        if None not in srcs:
            continue
        pool = seam_in if target >= n_keep else seam_out
        if not pool:
            side = "distal boundary of the acceptor" if target >= n_keep else "proximal boundary of the donor"
            raise CrossoverError(f"empty {side}; cannot repair node {target}")
        sources[target] = [s if s is not None else _pick(pool, rng) for s in srcs]

    return assemble(
        kinds,
        sources,
        [m_map[i] for i in mother.input_order],
        [m_map[o] for o in mother.output_order],
    )


def _random_radial(graph: ATypeGraph, cap: float, rng: np.random.Generator) -> frozenset[int]:
    internal = graph.internal_nodes
    if not internal:
        raise CrossoverError("parent has no internal nodes")
    center = _pick(internal, rng)
    upper = max(1, math.ceil(cap * len(internal)))
    size = int(rng.integers(1, upper + 1))
    return radial_subgraph(graph, center, size, rng)


def crossover(
    mother: ATypeGraph,
    father: ATypeGraph,
    rng: np.random.Generator,
    subgraph_cap: float = 0.8,
) -> ATypeGraph:
    """One child from two parents by exchanging radial subgraphs.

    Acceptor and donor sizes are drawn independently, each uniform on
    ``[1, ceil(subgraph_cap * internal nodes of that parent)]``.  Raises
    :class:`CrossoverError` when the seam cannot be repaired; callers retry.
    """
    if mother.input_dim != father.input_dim or mother.output_dim != father.output_dim:
        raise ValueError("parents must share input and output dimensions")
    acceptor = _random_radial(mother, subgraph_cap, rng)
    donor = _random_radial(father, subgraph_cap, rng)
    return exchange_subgraphs(mother, father, acceptor, donor, rng)
